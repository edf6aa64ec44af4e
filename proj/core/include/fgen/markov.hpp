#ifndef FGEN_MARKOV_HPP
#define FGEN_MARKOV_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgen/cancellation.hpp"
#include "fgen/errors.hpp"
#include "fgen/rng.hpp"
#include "fgen/words.hpp"

namespace fgen {

/// Probabilistic word source: a deterministic transition system over the
/// symmetrized alphabet with per-state emission probabilities and an initial
/// state law. Absent transitions have probability 0; stored transitions must
/// have positive probability, and the support must consist of reduced words
/// (no a a^-1 factor is ever emitted).
class MarkovianAutomaton {
 public:
  static constexpr std::int32_t no_state = -1;
  static constexpr double kStochasticTolerance = 1e-12;

  MarkovianAutomaton(int rank, std::vector<std::string> state_names)
      : rank_(rank),
        names_(std::move(state_names)),
        initial_(names_.size(), 0.0),
        target_(names_.size() * std::size_t(2 * rank), no_state),
        prob_(names_.size() * std::size_t(2 * rank), 0.0) {}

  int rank() const noexcept { return rank_; }
  std::size_t num_states() const noexcept { return names_.size(); }
  const std::string& state_name(std::size_t q) const { return names_[q]; }
  const std::vector<std::string>& state_names() const noexcept { return names_; }

  double initial(std::size_t q) const { return initial_[q]; }
  void set_initial(std::size_t q, double p) { initial_[q] = p; }

  std::int32_t target(std::size_t q, Letter x) const { return target_[slot(q, x)]; }
  double prob(std::size_t q, Letter x) const { return prob_[slot(q, x)]; }

  void set_transition(std::size_t from, Letter x, std::size_t to, double p) {
    target_[slot(from, x)] = std::int32_t(to);
    prob_[slot(from, x)] = p;
  }

  /// Probability the automaton assigns to a reduced word: gamma_0(u).
  double word_probability(const Word& u) const;

  /// Per-state inverse-CDF tables; built by the factories/parsers, must be
  /// rebuilt after manual mutation before sampling.
  void rebuild_tables();
  bool tables_ready() const noexcept { return !cum_.empty(); }

  std::size_t draw_initial(Rng& rng) const;
  Letter draw_letter(std::size_t state, Rng& rng) const;

 private:
  std::size_t slot(std::size_t q, Letter x) const { return q * std::size_t(2 * rank_) + x; }

  int rank_;
  std::vector<std::string> names_;
  std::vector<double> initial_;
  std::vector<std::int32_t> target_;
  std::vector<double> prob_;
  std::vector<double> cum_;       // per state, cumulative over letters
  std::vector<double> init_cum_;  // cumulative over states
};

struct ValidationIssue {
  std::string location;  // state/letter coordinates or JSON path
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const noexcept { return issues.empty(); }
  std::string str() const;
};

ValidationReport validate(const MarkovianAutomaton& a);

/// Letter-state automaton of the uniform distribution on reduced words:
/// states are letters, every non-inverse letter is emitted with probability
/// 1/(2r-1), and the initial law is uniform 1/(2r).
MarkovianAutomaton uniform_automaton(int rank);

/// Structural detection of the uniform automaton (up to state naming).
bool is_uniform_automaton(const MarkovianAutomaton& a);

enum class Psl2Variant { geodesic, quasigeodesic };

/// Word sources related to PSL(2, Z) = <a, b | a^2, b^3>.
/// geodesic: words over {a, b, b^-1} avoiding a^2, b^2, (b^-1)^2, b b^-1,
/// b^-1 b. quasigeodesic: words over {a, b} avoiding a^2 and b^3.
/// branch_prob is the probability of the one free binary choice
/// (b vs b^-1 after a, resp. a vs b after one b); initial law is uniform
/// over states unless given.
MarkovianAutomaton psl2_automaton(Psl2Variant variant, double branch_prob = 0.5,
                                  std::optional<std::vector<double>> initial = std::nullopt);

/// Named presets: "uniform:<r>", "psl2:geodesic", "psl2:quasigeodesic".
MarkovianAutomaton automaton_preset(std::string_view name);

/// The local automaton: states remember the last emitted letter, so the
/// transition matrix and its entrywise powers are well-defined.
struct LocalAutomaton {
  MarkovianAutomaton automaton;
  /// Per local state: (source state in the original automaton, incoming
  /// letter). Initial states with no incoming transition get letter_none.
  static constexpr Letter letter_none = 0xff;
  std::vector<std::pair<std::int32_t, Letter>> origin;
};

LocalAutomaton localize(const MarkovianAutomaton& a);

struct SpectralSummary {
  double alpha2 = 0.0;  // coincidence probability: spectral radius of M_[2]
  double alpha3 = 0.0;  // spectral radius of M_[3]
  bool irreducible = false;
  bool ergodic = false;
  int period = 0;  // 0 when not irreducible
  std::vector<std::string> local_state_names;
  /// Stationary vector of the local chain; present iff ergodic.
  std::optional<std::vector<double>> stationary;
  /// s = sum_a gamma_0(a) gamma~(a^-1) over letters; present iff ergodic.
  std::optional<double> degeneracy;
  /// lim R_n(C) = 1 - s; present iff ergodic.
  std::optional<double> cyclically_reduced_density;
};

SpectralSummary spectral_summary(const MarkovianAutomaton& a);

struct PrefixHeavyEstimate {
  double C = 0.0;
  double alpha = 0.0;
};

struct PrefixHeavyParams {
  /// Method (a): elementary-cycle scan of the local automaton.
  PrefixHeavyEstimate cycles;
  double max_cycle_prob = 0.0;   // delta
  std::size_t max_cycle_len = 0; // ell
  /// Method (b): (C, alpha_[2]^{1/2}) from the Perron vector of M_[2];
  /// present iff the automaton is irreducible.
  std::optional<PrefixHeavyEstimate> spectral;
};

/// Both prefix-heaviness parameter estimates. Throws std::invalid_argument if
/// the automaton has a probability-1 cycle, ResourceLimitError if the
/// elementary-cycle count exceeds the cap.
PrefixHeavyParams prefix_heavy_params(const MarkovianAutomaton& a,
                                      std::size_t cycle_cap = 100'000);

/// Method (b) alone: (sqrt of the Perron-vector spread of M_[2], alpha_[2]^{1/2}).
/// Stays available when the cycle scan is infeasible; empty for non-irreducible
/// automata.
std::optional<PrefixHeavyEstimate> spectral_prefix_heavy(const MarkovianAutomaton& a);

/// Draws a reduced word of length n (initial state by gamma_0, then n steps).
Word sample_reduced(const MarkovianAutomaton& a, std::size_t n, Rng& rng);

/// Rejection-samples until the word is cyclically reduced; the distribution
/// is R_n conditioned on C. Throws std::runtime_error when max_attempts is
/// exhausted (signals a near-degenerate source).
Word sample_cyclically_reduced(const MarkovianAutomaton& a, std::size_t n, Rng& rng,
                               std::size_t max_attempts = 100'000);

/// Tuple size at alpha-density d: ceil(alpha^{-d n}), snapped to the nearest
/// integer when within 1e-9 relative error. Throws ResourceLimitError above cap.
std::uint64_t density_to_size(double alpha, double d, std::size_t n,
                              std::uint64_t cap = 1'000'000'000);

struct ThresholdPredictions {
  // In alpha_[2]-density units.
  double ctp = 1.0 / 8;
  double malnormal = 1.0 / 32;
  double degenerate = 1.0 / 2;
  std::vector<std::pair<Lambda, double>> cprime;  // lambda -> lambda/2
  // Sharper alpha-density thresholds, available for the uniform automaton.
  std::optional<double> uniform_ctp;        // 1/4
  std::optional<double> uniform_malnormal;  // 1/16
};

ThresholdPredictions threshold_predictions(const MarkovianAutomaton& a,
                                           const std::vector<Lambda>& lambdas);

/// JSON: {"rank": r, "states": [...], "initial": {...}, "transitions":
/// [{"from": ..., "letter": "a", "to": ..., "prob": "1/3"}, ...]}.
/// Probabilities may be numbers, decimal strings, or exact rationals "p/q".
MarkovianAutomaton automaton_from_json(const std::string& text);
std::string automaton_to_json(const MarkovianAutomaton& a);

}  // namespace fgen

#endif
