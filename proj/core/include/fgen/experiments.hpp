#ifndef FGEN_EXPERIMENTS_HPP
#define FGEN_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgen/cancellation.hpp"
#include "fgen/markov.hpp"
#include "fgen/presentations.hpp"
#include "fgen/rng.hpp"
#include "fgen/stallings.hpp"
#include "fgen/tuples.hpp"

namespace fgen {

/// Tuple size as a function of the word length n.
struct SizeSpec {
  enum class Mode { density, fixed, polynomial };
  Mode mode = Mode::fixed;
  double density = 0.0;      // size = ceil(alpha^{-d n})
  std::uint64_t fixed = 1;   // size = k
  double exponent = 0.0;     // size = ceil(n^c)

  static SizeSpec of_density(double d) { return {Mode::density, d, 0, 0.0}; }
  static SizeSpec of_fixed(std::uint64_t k) { return {Mode::fixed, 0.0, k, 0.0}; }
  static SizeSpec of_polynomial(double c) { return {Mode::polynomial, 0.0, 0, c}; }

  std::string mode_str() const;
  std::string param_str() const;
};

/// Bound rules for n-dependent property parameters.
struct BoundRule {
  enum class Kind { constant, linear, log };
  Kind kind = Kind::constant;
  double value = 0.0;

  std::size_t eval(std::size_t n) const;
  std::string str() const;
};

struct PropertySpec {
  enum class Kind {
    ctp,
    cprime,
    lcp_below,
    collision,
    malnormal_cert,
    malnormal,
    degenerate_class,
  };
  enum class Expect { automatic, trivial, z2 };

  Kind kind = Kind::ctp;
  std::optional<Lambda> lambda;                      // cprime
  BoundRule bound{BoundRule::Kind::constant, 0.0};   // lcp_below / collision
  std::uint64_t malnormal_budget = 4'000'000;        // vertex pairs, exact path
  Expect expect = Expect::automatic;                 // degenerate_class

  std::string name() const;
  std::string param_str() const;
};

enum class LengthMode { exact, at_most };
enum class WordMode { reduced, cyclically_reduced };

struct ExperimentConfig {
  std::string automaton_id;  // preset name or file path, echoed into the CSV
  MarkovianAutomaton automaton = uniform_automaton(2);
  std::vector<std::size_t> n_values;
  std::vector<SizeSpec> sizes;
  LengthMode length_mode = LengthMode::exact;
  WordMode word_mode = WordMode::reduced;
  std::vector<PropertySpec> properties;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t size_cap = 2'000'000;
  std::uint64_t trial_timeout_ms = 0;  // 0 disables the per-trial timeout

  std::size_t cell_count() const {
    return n_values.size() * sizes.size() * properties.size();
  }
};

struct CellResult {
  std::size_t n = 0;
  SizeSpec size;
  PropertySpec property;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double frequency = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t wall_ms = 0;
  std::string error;  // nonempty when the cell could not be evaluated
};

struct ExperimentReport {
  std::string automaton_id;
  LengthMode length_mode = LengthMode::exact;
  WordMode word_mode = WordMode::reduced;
  std::uint64_t master_seed = 0;
  std::vector<CellResult> cells;

  /// CSV with header automaton,n,size_mode,size_param,length_mode,word_mode,
  /// property,property_param,trials,successes,frequency,ci_low,ci_high,
  /// master_seed,wall_ms. Errored cells are omitted (listed in errors()).
  std::string to_csv() const;
  std::vector<std::string> errors() const;
};

/// Runs the full (n, size, property) grid with `trials` independent tuples
/// per cell. Deterministic for a given master seed regardless of the worker
/// count: trial substreams are derived by a splitmix-style finalizer from
/// (master seed, cell index, trial index).
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t workers = 1);

/// 95% Wilson score interval.
struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials);

/// Length law of the uniform distribution on words of length at most n:
/// P(len) = |R_len| / |R_{<=n}|, len >= 1 (the empty word is excluded).
std::size_t at_most_length(int rank, std::size_t n, Rng& rng);

/// The alpha used by density sizing: exactly 1/(2r-1) for the uniform
/// automaton, alpha_[2] from the spectral summary otherwise.
double density_alpha(const MarkovianAutomaton& a);

/// Cell indexing and per-trial sampling, exposed so tests can replay trials.
std::size_t cell_index(const ExperimentConfig& cfg, std::size_t n_idx, std::size_t size_idx,
                       std::size_t prop_idx);
std::uint64_t resolve_size(const ExperimentConfig& cfg, double alpha, std::size_t n,
                           const SizeSpec& size);
WordTuple sample_trial_tuple(const ExperimentConfig& cfg, std::size_t n, std::uint64_t size,
                             Rng& rng);
bool evaluate_property(const PropertySpec& prop, const WordTuple& h,
                       const ExperimentConfig& cfg, std::size_t n);

struct TransitionEstimate {
  bool crossed = false;
  double crossing = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
};

/// Linear interpolation of the density where the frequency of `property_name`
/// crosses 1/2, over the density-mode cells with word length n.
TransitionEstimate estimate_transition(const ExperimentReport& report,
                                       const std::string& property_name, std::size_t n);

/// Config JSON; automaton is a preset name or {"file": "path.json"}.
ExperimentConfig config_from_json(const std::string& text);

}  // namespace fgen

#endif
