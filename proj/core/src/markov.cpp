#include "fgen/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include <nlohmann/json.hpp>

namespace fgen {

double MarkovianAutomaton::word_probability(const Word& u) const {
  std::vector<double> cur(initial_);
  for (Letter x : u.letters()) {
    std::vector<double> next(num_states(), 0.0);
    bool any = false;
    for (std::size_t q = 0; q < num_states(); ++q) {
      if (cur[q] == 0.0) continue;
      const auto t = target(q, x);
      if (t == no_state) continue;
      next[std::size_t(t)] += cur[q] * prob(q, x);
      any = true;
    }
    if (!any) return 0.0;
    cur = std::move(next);
  }
  double total = 0.0;
  for (double p : cur) total += p;
  return total;
}

void MarkovianAutomaton::rebuild_tables() {
  const std::size_t m = std::size_t(2 * rank_);
  cum_.assign(num_states() * m, 0.0);
  for (std::size_t q = 0; q < num_states(); ++q) {
    double run = 0.0;
    for (std::size_t x = 0; x < m; ++x) {
      run += prob_[q * m + x];
      cum_[q * m + x] = run;
    }
  }
  init_cum_.assign(num_states(), 0.0);
  double run = 0.0;
  for (std::size_t q = 0; q < num_states(); ++q) {
    run += initial_[q];
    init_cum_[q] = run;
  }
}

std::size_t MarkovianAutomaton::draw_initial(Rng& rng) const {
  const double u = uniform_unit(rng) * init_cum_.back();
  const auto it = std::upper_bound(init_cum_.begin(), init_cum_.end(), u);
  return std::size_t(it - init_cum_.begin());
}

Letter MarkovianAutomaton::draw_letter(std::size_t state, Rng& rng) const {
  const std::size_t m = std::size_t(2 * rank_);
  const double* cum = cum_.data() + state * m;
  const double u = uniform_unit(rng) * cum[m - 1];
  std::size_t x = 0;
  while (x + 1 < m && cum[x] <= u) ++x;
  return Letter(x);
}

std::string ValidationReport::str() const {
  if (issues.empty()) return "valid\n";
  std::string out;
  for (const auto& issue : issues) out += issue.location + ": " + issue.message + "\n";
  return out;
}

ValidationReport validate(const MarkovianAutomaton& a) {
  ValidationReport report;
  auto add = [&](std::string where, std::string what) {
    report.issues.push_back({std::move(where), std::move(what)});
  };

  if (a.num_states() == 0) {
    add("states", "automaton has no states");
    return report;
  }

  double init_sum = 0.0;
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    const double p = a.initial(q);
    if (p < 0.0 || p > 1.0)
      add("state " + a.state_name(q), "initial probability " + std::to_string(p) +
                                          " outside [0, 1]");
    init_sum += p;
  }
  if (std::abs(init_sum - 1.0) > MarkovianAutomaton::kStochasticTolerance)
    add("initial", "initial probabilities sum to " + std::to_string(init_sum));

  for (std::size_t q = 0; q < a.num_states(); ++q) {
    double row = 0.0;
    for (Letter x = 0; x < Letter(2 * a.rank()); ++x) {
      const auto t = a.target(q, x);
      const double p = a.prob(q, x);
      const std::string where =
          "state " + a.state_name(q) + ", letter " + Alphabet(a.rank()).letter_to_char(x);
      if (t == MarkovianAutomaton::no_state) {
        if (p != 0.0) add(where, "probability on an undefined transition");
        continue;
      }
      if (std::size_t(t) >= a.num_states()) {
        add(where, "target state out of range");
        continue;
      }
      if (p <= 0.0 || p > 1.0) {
        add(where, "stored transition must have probability in (0, 1], got " +
                       std::to_string(p));
      }
      row += p;
      // Reduced support: the target state must not emit the inverse letter.
      if (a.target(std::size_t(t), inverse_letter(x)) != MarkovianAutomaton::no_state)
        add(where, "reduced-support violation: target " + a.state_name(std::size_t(t)) +
                       " emits the inverse letter");
    }
    if (std::abs(row - 1.0) > MarkovianAutomaton::kStochasticTolerance)
      add("state " + a.state_name(q),
          "transition probabilities sum to " + std::to_string(row));
  }
  return report;
}

MarkovianAutomaton uniform_automaton(int rank) {
  Alphabet alphabet(rank);
  std::vector<std::string> names;
  for (Letter x = 0; x < Letter(2 * rank); ++x)
    names.emplace_back(1, alphabet.letter_to_char(x));
  MarkovianAutomaton a(rank, std::move(names));
  const double p = 1.0 / double(2 * rank - 1);
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    a.set_initial(q, 1.0 / double(2 * rank));
    for (Letter x = 0; x < Letter(2 * rank); ++x) {
      if (x == inverse_letter(Letter(q))) continue;
      a.set_transition(q, x, x, p);
    }
  }
  a.rebuild_tables();
  return a;
}

bool is_uniform_automaton(const MarkovianAutomaton& a) {
  const std::size_t m = std::size_t(2 * a.rank());
  if (a.num_states() != m) return false;
  constexpr double tol = MarkovianAutomaton::kStochasticTolerance;
  // Identify each state with the unique letter labeling its incoming edges.
  std::vector<int> letter_of(m, -1);
  for (std::size_t q = 0; q < m; ++q)
    for (Letter x = 0; x < Letter(m); ++x) {
      const auto t = a.target(q, x);
      if (t == MarkovianAutomaton::no_state) continue;
      if (letter_of[std::size_t(t)] >= 0 && letter_of[std::size_t(t)] != int(x)) return false;
      letter_of[std::size_t(t)] = int(x);
    }
  std::vector<char> used(m, 0);
  for (std::size_t q = 0; q < m; ++q) {
    if (letter_of[q] < 0 || used[std::size_t(letter_of[q])]) return false;
    used[std::size_t(letter_of[q])] = 1;
  }
  const double p = 1.0 / double(m - 1);
  for (std::size_t q = 0; q < m; ++q) {
    if (std::abs(a.initial(q) - 1.0 / double(m)) > tol) return false;
    for (Letter x = 0; x < Letter(m); ++x) {
      const auto t = a.target(q, x);
      if (x == inverse_letter(Letter(letter_of[q]))) {
        if (t != MarkovianAutomaton::no_state) return false;
        continue;
      }
      if (t == MarkovianAutomaton::no_state) return false;
      if (letter_of[std::size_t(t)] != int(x)) return false;
      if (std::abs(a.prob(q, x) - p) > tol) return false;
    }
  }
  return true;
}

MarkovianAutomaton psl2_automaton(Psl2Variant variant, double branch_prob,
                                  std::optional<std::vector<double>> initial) {
  if (!(branch_prob > 0.0 && branch_prob < 1.0))
    throw std::invalid_argument("branch probability must lie in (0, 1)");
  const Alphabet alphabet(2);
  const Letter la = alphabet.letter_from_char('a');
  const Letter lb = alphabet.letter_from_char('b');
  const Letter lB = alphabet.letter_from_char('B');

  std::vector<std::string> names = variant == Psl2Variant::geodesic
                                       ? std::vector<std::string>{"a", "b", "B"}
                                       : std::vector<std::string>{"a", "b1", "b2"};
  MarkovianAutomaton a(2, std::move(names));
  if (variant == Psl2Variant::geodesic) {
    a.set_transition(0, lb, 1, branch_prob);
    a.set_transition(0, lB, 2, 1.0 - branch_prob);
    a.set_transition(1, la, 0, 1.0);
    a.set_transition(2, la, 0, 1.0);
  } else {
    a.set_transition(0, lb, 1, 1.0);
    a.set_transition(1, la, 0, branch_prob);
    a.set_transition(1, lb, 2, 1.0 - branch_prob);
    a.set_transition(2, la, 0, 1.0);
  }
  std::vector<double> init = initial.value_or(std::vector<double>(3, 1.0 / 3));
  if (init.size() != 3) throw std::invalid_argument("psl2 initial vector must have 3 entries");
  double sum = 0.0;
  for (double p : init) sum += p;
  if (std::abs(sum - 1.0) > MarkovianAutomaton::kStochasticTolerance)
    throw std::invalid_argument("psl2 initial vector must be stochastic");
  for (std::size_t q = 0; q < 3; ++q) a.set_initial(q, init[q]);
  a.rebuild_tables();
  return a;
}

MarkovianAutomaton automaton_preset(std::string_view name) {
  if (name.rfind("uniform:", 0) == 0) {
    const auto rank_text = name.substr(8);
    int r = 0;
    for (char c : rank_text) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad preset rank in " + std::string(name));
      r = r * 10 + (c - '0');
    }
    return uniform_automaton(r);
  }
  if (name == "psl2:geodesic") return psl2_automaton(Psl2Variant::geodesic);
  if (name == "psl2:quasigeodesic") return psl2_automaton(Psl2Variant::quasigeodesic);
  throw std::invalid_argument("unknown automaton preset '" + std::string(name) +
                              "' (try uniform:<r>, psl2:geodesic, psl2:quasigeodesic)");
}

LocalAutomaton localize(const MarkovianAutomaton& a) {
  const std::size_t m = std::size_t(2 * a.rank());
  // Incoming letters per state.
  std::vector<std::vector<Letter>> incoming(a.num_states());
  for (std::size_t q = 0; q < a.num_states(); ++q)
    for (Letter x = 0; x < Letter(m); ++x) {
      const auto t = a.target(q, x);
      if (t == MarkovianAutomaton::no_state) continue;
      auto& in = incoming[std::size_t(t)];
      if (std::find(in.begin(), in.end(), x) == in.end()) in.push_back(x);
    }
  for (auto& in : incoming) std::sort(in.begin(), in.end());

  std::vector<std::pair<std::int32_t, Letter>> origin;
  std::vector<std::vector<std::int32_t>> local_index(a.num_states(),
                                                     std::vector<std::int32_t>(m, -1));
  std::vector<std::int32_t> orphan_index(a.num_states(), -1);
  std::vector<std::string> names;
  Alphabet alphabet(a.rank());
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    for (Letter x : incoming[q]) {
      local_index[q][x] = std::int32_t(origin.size());
      origin.emplace_back(std::int32_t(q), x);
      names.push_back(a.state_name(q) + "," + alphabet.letter_to_char(x));
    }
    if (incoming[q].empty() && a.initial(q) > 0.0) {
      // Initial state that no transition enters; keep it so no initial mass
      // is lost. It is transient in the local chain.
      orphan_index[q] = std::int32_t(origin.size());
      origin.emplace_back(std::int32_t(q), LocalAutomaton::letter_none);
      names.push_back(a.state_name(q) + ",-");
    }
  }

  MarkovianAutomaton local(a.rank(), std::move(names));
  for (std::size_t i = 0; i < origin.size(); ++i) {
    const auto q = std::size_t(origin[i].first);
    for (Letter b = 0; b < Letter(m); ++b) {
      const auto t = a.target(q, b);
      if (t == MarkovianAutomaton::no_state) continue;
      local.set_transition(i, b, std::size_t(local_index[std::size_t(t)][b]), a.prob(q, b));
    }
  }
  // Initial weight goes to (q, least incoming letter of q).
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (a.initial(q) == 0.0) continue;
    const std::int32_t i =
        incoming[q].empty() ? orphan_index[q] : local_index[q][incoming[q].front()];
    local.set_initial(std::size_t(i), a.initial(q));
  }
  local.rebuild_tables();

  LocalAutomaton result{std::move(local), {}};
  result.origin = std::move(origin);
  return result;
}

namespace {

struct PowerResult {
  double radius = 0.0;
  std::vector<double> vec;
};

/// Power iteration on the aperiodicity shift (M + I)/2 of a nonnegative
/// matrix; the radius of M is recovered as 2 rho' - 1 and the vector
/// converges to the Perron vector when M is irreducible.
PowerResult shifted_power_iteration(const std::vector<double>& mat, std::size_t n, bool left,
                                    double tol = 1e-12, std::size_t cap = 1'000'000) {
  if (n == 0) throw std::invalid_argument("power iteration on an empty matrix");
  std::vector<double> v(n, 1.0 / double(n)), w(n);
  double lambda = 0.0;
  for (std::size_t it = 0; it < cap; ++it) {
    if (left) {
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0.0) continue;
        const double* row = mat.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) w[j] += v[i] * row[j];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = mat.data() + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
        w[i] = acc;
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 * (w[i] + v[i]);
      norm += w[i];
    }
    if (norm == 0.0) return {0.0, std::vector<double>(n, 0.0)};
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= norm;
      delta = std::max(delta, std::abs(w[i] - v[i]));
    }
    v.swap(w);
    const double prev = lambda;
    lambda = norm;
    if (it > 0 && std::abs(lambda - prev) <= tol * std::max(1.0, lambda) && delta <= 1e3 * tol)
      return {2.0 * lambda - 1.0, std::move(v)};
  }
  throw std::runtime_error("power iteration did not converge within cap (residual " +
                           std::to_string(std::abs(2.0 * lambda - 1.0)) + ")");
}

std::vector<std::vector<std::int32_t>> adjacency(const MarkovianAutomaton& a) {
  std::vector<std::vector<std::int32_t>> adj(a.num_states());
  for (std::size_t q = 0; q < a.num_states(); ++q)
    for (Letter x = 0; x < Letter(2 * a.rank()); ++x) {
      const auto t = a.target(q, x);
      if (t != MarkovianAutomaton::no_state) adj[q].push_back(t);
    }
  return adj;
}

bool strongly_connected(const std::vector<std::vector<std::int32_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<std::int32_t>> radj(n);
  for (std::size_t u = 0; u < n; ++u)
    for (auto v : adj[u]) radj[std::size_t(v)].push_back(std::int32_t(u));
  auto covers = [&](const std::vector<std::vector<std::int32_t>>& g) {
    std::vector<char> seen(n, 0);
    std::queue<std::int32_t> q;
    seen[0] = 1;
    q.push(0);
    std::size_t reached = 1;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : g[std::size_t(u)])
        if (!seen[std::size_t(v)]) {
          seen[std::size_t(v)] = 1;
          ++reached;
          q.push(v);
        }
    }
    return reached == n;
  };
  return covers(adj) && covers(radj);
}

int graph_period(const std::vector<std::vector<std::int32_t>>& adj) {
  // gcd of (level[u] + 1 - level[v]) over all edges, levels from a BFS.
  const std::size_t n = adj.size();
  std::vector<std::int64_t> level(n, -1);
  std::queue<std::int32_t> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto v : adj[std::size_t(u)])
      if (level[std::size_t(v)] < 0) {
        level[std::size_t(v)] = level[std::size_t(u)] + 1;
        q.push(v);
      }
  }
  std::int64_t g = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (auto v : adj[u]) g = std::gcd(g, level[u] + 1 - level[std::size_t(v)]);
  return int(g < 0 ? -g : g);
}

std::vector<double> local_matrix(const MarkovianAutomaton& local, int power) {
  const std::size_t n = local.num_states();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (Letter x = 0; x < Letter(2 * local.rank()); ++x) {
      const auto t = local.target(i, x);
      if (t == MarkovianAutomaton::no_state) continue;
      m[i * n + std::size_t(t)] = std::pow(local.prob(i, x), power);
    }
  return m;
}

}  // namespace

SpectralSummary spectral_summary(const MarkovianAutomaton& a) {
  auto report = validate(a);
  if (!report.ok())
    throw std::invalid_argument("spectral summary of an invalid automaton:\n" + report.str());

  LocalAutomaton local = localize(a);
  const std::size_t n = local.automaton.num_states();

  SpectralSummary s;
  for (std::size_t i = 0; i < n; ++i)
    s.local_state_names.push_back(local.automaton.state_name(i));

  s.alpha2 = shifted_power_iteration(local_matrix(local.automaton, 2), n, false).radius;
  s.alpha3 = shifted_power_iteration(local_matrix(local.automaton, 3), n, false).radius;

  const auto adj = adjacency(a);
  s.irreducible = strongly_connected(adj);
  s.period = s.irreducible ? graph_period(adj) : 0;
  s.ergodic = s.irreducible && s.period == 1;

  if (s.ergodic) {
    auto stat = shifted_power_iteration(local_matrix(local.automaton, 1), n, true);
    s.stationary = stat.vec;
    // First-letter law of the automaton...
    std::vector<double> first_letter(std::size_t(2 * a.rank()), 0.0);
    for (std::size_t q = 0; q < a.num_states(); ++q)
      for (Letter x = 0; x < Letter(2 * a.rank()); ++x)
        if (a.target(q, x) != MarkovianAutomaton::no_state)
          first_letter[x] += a.initial(q) * a.prob(q, x);
    // ...paired with the stationary letter marginal of the local chain.
    std::vector<double> stationary_letter(std::size_t(2 * a.rank()), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (local.origin[i].second != LocalAutomaton::letter_none)
        stationary_letter[local.origin[i].second] += stat.vec[i];
    double degeneracy = 0.0;
    for (Letter x = 0; x < Letter(2 * a.rank()); ++x)
      degeneracy += first_letter[x] * stationary_letter[inverse_letter(x)];
    s.degeneracy = degeneracy;
    s.cyclically_reduced_density = 1.0 - degeneracy;
  }
  return s;
}

namespace {

/// Johnson-style enumeration of elementary cycles; calls visit(product, len)
/// per cycle. Throws when more than cycle_cap cycles (or far more work than
/// that) would be needed.
class CycleScan {
 public:
  CycleScan(const MarkovianAutomaton& a, std::size_t cycle_cap)
      : n_(a.num_states()), cap_(cycle_cap) {
    adj_.resize(n_);
    for (std::size_t q = 0; q < n_; ++q)
      for (Letter x = 0; x < Letter(2 * a.rank()); ++x) {
        const auto t = a.target(q, x);
        if (t != MarkovianAutomaton::no_state) adj_[q].emplace_back(t, a.prob(q, x));
      }
  }

  template <class Visit>
  void run(Visit&& visit) {
    blocked_.assign(n_, 0);
    block_list_.assign(n_, {});
    for (start_ = 0; start_ < n_; ++start_) {
      std::fill(blocked_.begin(), blocked_.end(), 0);
      for (auto& b : block_list_) b.clear();
      dfs(start_, 1.0, 0, visit);
    }
  }

 private:
  template <class Visit>
  bool dfs(std::size_t v, double product, std::size_t depth, Visit&& visit) {
    bool found = false;
    blocked_[v] = 1;
    if (++steps_ > 200 * cap_)
      throw ResourceLimitError("elementary-cycle scan exceeded its work budget");
    for (const auto& [t, p] : adj_[v]) {
      const auto u = std::size_t(t);
      if (u < start_) continue;  // cycles through smaller roots already found
      if (u == start_) {
        if (++cycles_ > cap_)
          throw ResourceLimitError("elementary-cycle count exceeds cap of " +
                                   std::to_string(cap_));
        visit(product * p, depth + 1);
        found = true;
      } else if (!blocked_[u]) {
        if (dfs(u, product * p, depth + 1, visit)) found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (const auto& [t, p] : adj_[v]) {
        const auto u = std::size_t(t);
        if (u < start_) continue;
        auto& bl = block_list_[u];
        if (std::find(bl.begin(), bl.end(), v) == bl.end()) bl.push_back(v);
      }
    }
    return found;
  }

  void unblock(std::size_t v) {
    blocked_[v] = 0;
    auto pending = std::move(block_list_[v]);
    block_list_[v].clear();
    for (auto w : pending)
      if (blocked_[w]) unblock(w);
  }

  std::size_t n_, cap_, start_ = 0;
  std::uint64_t cycles_ = 0, steps_ = 0;
  std::vector<std::vector<std::pair<std::int32_t, double>>> adj_;
  std::vector<char> blocked_;
  std::vector<std::vector<std::size_t>> block_list_;
};

}  // namespace

std::optional<PrefixHeavyEstimate> spectral_prefix_heavy(const MarkovianAutomaton& a) {
  if (!strongly_connected(adjacency(a))) return std::nullopt;
  LocalAutomaton local = localize(a);
  const std::size_t n = local.automaton.num_states();
  auto perron = shifted_power_iteration(local_matrix(local.automaton, 2), n, false);
  double lo = perron.vec[0], hi = perron.vec[0];
  for (double v : perron.vec) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  PrefixHeavyEstimate spectral;
  spectral.alpha = std::sqrt(perron.radius);
  spectral.C = lo > 0.0 ? std::sqrt(hi / lo) : std::numeric_limits<double>::infinity();
  return spectral;
}

PrefixHeavyParams prefix_heavy_params(const MarkovianAutomaton& a, std::size_t cycle_cap) {
  auto report = validate(a);
  if (!report.ok())
    throw std::invalid_argument("prefix-heavy parameters of an invalid automaton:\n" +
                                report.str());
  LocalAutomaton local = localize(a);
  const std::size_t n = local.automaton.num_states();

  double delta = 0.0;
  std::size_t ell = 0;
  CycleScan scan(local.automaton, cycle_cap);
  scan.run([&](double product, std::size_t len) {
    delta = std::max(delta, product);
    ell = std::max(ell, len);
  });
  if (delta >= 1.0 - 1e-12)
    throw std::invalid_argument("automaton has a probability-1 cycle");
  if (ell == 0) throw std::logic_error("stochastic automaton must contain a cycle");

  PrefixHeavyParams params;
  params.max_cycle_prob = delta;
  params.max_cycle_len = ell;
  params.cycles.alpha = std::pow(delta, 1.0 / double(ell));
  params.cycles.C = std::pow(delta, -double(n) / double(ell));
  params.spectral = spectral_prefix_heavy(a);
  return params;
}

Word sample_reduced(const MarkovianAutomaton& a, std::size_t n, Rng& rng) {
  if (!a.tables_ready())
    throw std::logic_error("sampling requires rebuild_tables() after construction");
  std::vector<Letter> letters;
  letters.reserve(n);
  std::size_t q = a.draw_initial(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const Letter x = a.draw_letter(q, rng);
    letters.push_back(x);
    q = std::size_t(a.target(q, x));
  }
  return Word(Word::unchecked, a.rank(), std::move(letters));
}

Word sample_cyclically_reduced(const MarkovianAutomaton& a, std::size_t n, Rng& rng,
                               std::size_t max_attempts) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Word w = sample_reduced(a, n, rng);
    if (is_cyclically_reduced(w)) return w;
  }
  throw std::runtime_error("cyclically reduced rejection sampling exhausted " +
                           std::to_string(max_attempts) +
                           " attempts; the source is (near-)degenerate");
}

std::uint64_t density_to_size(double alpha, double d, std::size_t n, std::uint64_t cap) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("density must lie in (0, 1)");
  const double x = std::exp(-d * double(n) * std::log(alpha));
  if (x > double(cap))
    throw ResourceLimitError("tuple size alpha^{-dn} = " + std::to_string(x) +
                             " exceeds cap " + std::to_string(cap));
  const double snapped = std::round(x);
  if (std::abs(x - snapped) <= 1e-9 * std::max(1.0, x)) return std::uint64_t(snapped);
  return std::uint64_t(std::ceil(x));
}

ThresholdPredictions threshold_predictions(const MarkovianAutomaton& a,
                                           const std::vector<Lambda>& lambdas) {
  ThresholdPredictions t;
  for (const auto& lambda : lambdas)
    t.cprime.emplace_back(lambda, 0.5 * double(lambda.p) / double(lambda.q));
  if (is_uniform_automaton(a)) {
    t.uniform_ctp = 0.25;
    t.uniform_malnormal = 1.0 / 16;
  }
  return t;
}

namespace {

double parse_probability(const nlohmann::json& j, const std::string& path) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument(path + ": probability " + std::to_string(v) +
                                  " outside [0, 1]");
    return v;
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      const auto slash = s.find('/');
      if (slash != std::string::npos) {
        const double num = std::stod(s.substr(0, slash));
        const double den = std::stod(s.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("zero denominator");
        return num / den;
      }
      return std::stod(s);
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ": cannot parse probability '" + s + "'");
    }
  }
  throw std::invalid_argument(path + ": probability must be a number or string");
}

}  // namespace

MarkovianAutomaton automaton_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("automaton JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("/: automaton JSON must be an object");
  if (!j.contains("rank") || !j["rank"].is_number_integer())
    throw std::invalid_argument("/rank: missing or not an integer");
  const int rank = j["rank"].get<int>();
  if (rank < 1 || rank > 26) throw std::invalid_argument("/rank: must be in [1, 26]");
  if (!j.contains("states") || !j["states"].is_array() || j["states"].empty())
    throw std::invalid_argument("/states: missing or empty");

  std::vector<std::string> names;
  for (std::size_t i = 0; i < j["states"].size(); ++i) {
    const auto& s = j["states"][i];
    if (!s.is_string())
      throw std::invalid_argument("/states/" + std::to_string(i) + ": must be a string");
    names.push_back(s.get<std::string>());
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t k = i + 1; k < names.size(); ++k)
      if (names[i] == names[k])
        throw std::invalid_argument("/states/" + std::to_string(k) + ": duplicate state name '" +
                                    names[k] + "'");

  auto index_of = [&](const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw std::invalid_argument(path + ": unknown state '" + name + "'");
  };

  MarkovianAutomaton a(rank, names);
  if (j.contains("initial")) {
    if (!j["initial"].is_object())
      throw std::invalid_argument("/initial: must be an object of state -> probability");
    for (const auto& [key, value] : j["initial"].items())
      a.set_initial(index_of(key, "/initial/" + key), parse_probability(value, "/initial/" + key));
  }
  if (!j.contains("transitions") || !j["transitions"].is_array())
    throw std::invalid_argument("/transitions: missing or not an array");
  Alphabet alphabet(rank);
  for (std::size_t i = 0; i < j["transitions"].size(); ++i) {
    const std::string path = "/transitions/" + std::to_string(i);
    const auto& t = j["transitions"][i];
    if (!t.is_object() || !t.contains("from") || !t.contains("letter") || !t.contains("to") ||
        !t.contains("prob"))
      throw std::invalid_argument(path + ": needs from, letter, to, prob");
    const auto from = index_of(t["from"].get<std::string>(), path + "/from");
    const auto to = index_of(t["to"].get<std::string>(), path + "/to");
    const std::string ls = t["letter"].get<std::string>();
    if (ls.size() != 1) throw std::invalid_argument(path + "/letter: must be one character");
    Letter x;
    try {
      x = alphabet.letter_from_char(ls[0]);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + "/letter: " + e.what());
    }
    if (a.target(from, x) != MarkovianAutomaton::no_state)
      throw std::invalid_argument(path + ": duplicate transition (" +
                                  t["from"].get<std::string>() + ", " + ls + ")");
    const double p = parse_probability(t["prob"], path + "/prob");
    if (p == 0.0)
      throw std::invalid_argument(path + "/prob: stored transitions must have positive probability");
    a.set_transition(from, x, to, p);
  }
  a.rebuild_tables();
  return a;
}

std::string automaton_to_json(const MarkovianAutomaton& a) {
  nlohmann::ordered_json j;
  j["rank"] = a.rank();
  j["states"] = a.state_names();
  nlohmann::ordered_json initial = nlohmann::ordered_json::object();
  for (std::size_t q = 0; q < a.num_states(); ++q)
    if (a.initial(q) > 0.0) initial[a.state_name(q)] = a.initial(q);
  j["initial"] = std::move(initial);
  auto transitions = nlohmann::ordered_json::array();
  Alphabet alphabet(a.rank());
  for (std::size_t q = 0; q < a.num_states(); ++q)
    for (Letter x = 0; x < Letter(2 * a.rank()); ++x) {
      const auto t = a.target(q, x);
      if (t == MarkovianAutomaton::no_state) continue;
      transitions.push_back({{"from", a.state_name(q)},
                             {"letter", std::string(1, alphabet.letter_to_char(x))},
                             {"to", a.state_name(std::size_t(t))},
                             {"prob", a.prob(q, x)}});
    }
  j["transitions"] = std::move(transitions);
  return j.dump(2) + "\n";
}

}  // namespace fgen
