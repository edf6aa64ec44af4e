#include "fgen/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace fgen {

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string SizeSpec::mode_str() const {
  switch (mode) {
    case Mode::density: return "density";
    case Mode::fixed: return "fixed";
    case Mode::polynomial: return "polynomial";
  }
  return "?";
}

std::string SizeSpec::param_str() const {
  switch (mode) {
    case Mode::density: return fmt9(density);
    case Mode::fixed: return std::to_string(fixed);
    case Mode::polynomial: return fmt9(exponent);
  }
  return "?";
}

std::size_t BoundRule::eval(std::size_t n) const {
  switch (kind) {
    case Kind::constant: return std::size_t(value);
    case Kind::linear: return std::size_t(std::ceil(value * double(n)));
    case Kind::log: return std::size_t(std::ceil(value * std::log(double(n))));
  }
  return 0;
}

std::string BoundRule::str() const {
  switch (kind) {
    case Kind::constant: return fmt9(value);
    case Kind::linear: return "linear:" + fmt9(value);
    case Kind::log: return "log:" + fmt9(value);
  }
  return "?";
}

std::string PropertySpec::name() const {
  switch (kind) {
    case Kind::ctp: return "ctp";
    case Kind::cprime: return "cprime";
    case Kind::lcp_below: return "lcp_below";
    case Kind::collision: return "collision";
    case Kind::malnormal_cert: return "malnormal_cert";
    case Kind::malnormal: return "malnormal";
    case Kind::degenerate_class: return "degenerate_class";
  }
  return "?";
}

std::string PropertySpec::param_str() const {
  switch (kind) {
    case Kind::cprime: return lambda ? lambda->str() : "";
    case Kind::lcp_below:
    case Kind::collision: return bound.str();
    case Kind::degenerate_class:
      return expect == Expect::automatic ? "auto" : (expect == Expect::trivial ? "trivial" : "z2");
    default: return "";
  }
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  const double nt = double(trials), ns = double(successes);
  const double phat = ns / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (phat + z2 / (2 * nt)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4 * nt * nt)) / denom;
  WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  // At the boundaries center == half exactly; do not let rounding push the
  // interval off the observed frequency.
  if (successes == 0) ci.low = 0.0;
  if (successes == trials) ci.high = 1.0;
  return ci;
}

std::size_t at_most_length(int rank, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("at-most length law needs n >= 1");
  // P(len = n - j) is proportional to q^j with q = 1/(2r-1), j in [0, n).
  const double q = 1.0 / double(2 * rank - 1);
  double total = 0.0, power = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    total += power;
    power *= q;
  }
  const double target = uniform_unit(rng) * total;
  double cum = 0.0;
  power = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    cum += power;
    if (target < cum) return n - j;
    power *= q;
  }
  return 1;
}

double density_alpha(const MarkovianAutomaton& a) {
  if (is_uniform_automaton(a)) return 1.0 / double(2 * a.rank() - 1);
  return spectral_summary(a).alpha2;
}

std::size_t cell_index(const ExperimentConfig& cfg, std::size_t n_idx, std::size_t size_idx,
                       std::size_t prop_idx) {
  return (n_idx * cfg.sizes.size() + size_idx) * cfg.properties.size() + prop_idx;
}

std::uint64_t resolve_size(const ExperimentConfig& cfg, double alpha, std::size_t n,
                           const SizeSpec& size) {
  switch (size.mode) {
    case SizeSpec::Mode::density:
      return density_to_size(alpha, size.density, n, cfg.size_cap);
    case SizeSpec::Mode::fixed:
      if (size.fixed > cfg.size_cap)
        throw ResourceLimitError("fixed tuple size exceeds the size cap");
      return size.fixed;
    case SizeSpec::Mode::polynomial: {
      const double v = std::pow(double(n), size.exponent);
      if (v > double(cfg.size_cap))
        throw ResourceLimitError("polynomial tuple size exceeds the size cap");
      return std::uint64_t(std::ceil(v));
    }
  }
  throw std::logic_error("unreachable size mode");
}

WordTuple sample_trial_tuple(const ExperimentConfig& cfg, std::size_t n, std::uint64_t size,
                             Rng& rng) {
  std::vector<Word> words;
  words.reserve(size);
  const bool at_most = cfg.length_mode == LengthMode::at_most;
  for (std::uint64_t i = 0; i < size; ++i) {
    const std::size_t len = at_most ? at_most_length(cfg.automaton.rank(), n, rng) : n;
    words.push_back(cfg.word_mode == WordMode::reduced
                        ? sample_reduced(cfg.automaton, len, rng)
                        : sample_cyclically_reduced(cfg.automaton, len, rng));
  }
  return WordTuple{cfg.automaton.rank(), std::move(words)};
}

bool evaluate_property(const PropertySpec& prop, const WordTuple& h,
                       const ExperimentConfig& cfg, std::size_t n) {
  switch (prop.kind) {
    case PropertySpec::Kind::ctp:
      return has_central_tree_property(h);
    case PropertySpec::Kind::cprime:
      if (cfg.word_mode != WordMode::cyclically_reduced)
        throw std::invalid_argument("cprime requires cyclically_reduced word mode");
      return satisfies_cprime(h, prop.lambda.value_or(Lambda(1, 6)));
    case PropertySpec::Kind::lcp_below:
      return lcp_below(h, prop.bound.eval(n));
    case PropertySpec::Kind::collision:
      return collision_statistic(h, prop.bound.eval(n)).exists;
    case PropertySpec::Kind::malnormal_cert:
      return malnormality_certificate(h) == Certificate::certified;
    case PropertySpec::Kind::malnormal: {
      if (malnormality_certificate(h) == Certificate::certified) return true;
      return is_malnormal(stallings_graph(h), prop.malnormal_budget);
    }
    case PropertySpec::Kind::degenerate_class: {
      const auto sets = degenerate_letter_sets(cfg.automaton);
      PropertySpec::Expect want = prop.expect;
      if (want == PropertySpec::Expect::automatic)
        want = (sets.has_inverse_pair && n % 2 == 0) ? PropertySpec::Expect::z2
                                                     : PropertySpec::Expect::trivial;
      const auto got = degenerate_class_check(h, sets);
      return want == PropertySpec::Expect::z2 ? got == DegenerateClass::consistent_z2
                                              : got == DegenerateClass::consistent_trivial;
    }
  }
  throw std::logic_error("unreachable property kind");
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t workers) {
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (cfg.n_values.empty() || cfg.sizes.empty() || cfg.properties.empty())
    throw std::invalid_argument("experiment grid is empty");
  if (cfg.length_mode == LengthMode::at_most && !is_uniform_automaton(cfg.automaton))
    throw std::invalid_argument("at_most length mode is defined for the uniform preset only");
  if (cfg.length_mode == LengthMode::at_most && cfg.word_mode == WordMode::cyclically_reduced)
    throw std::invalid_argument(
        "at_most length mode is defined for reduced words only (the cyclically "
        "reduced length law would need |C_len| weights)");
  {
    auto report = validate(cfg.automaton);
    if (!report.ok())
      throw std::invalid_argument("experiment automaton is invalid:\n" + report.str());
  }

  const double alpha = density_alpha(cfg.automaton);
  const std::size_t cells = cfg.cell_count();

  // Per-cell resolved sizes; sizing errors poison the cell, not the run.
  std::vector<std::uint64_t> cell_size(cells, 0);
  std::vector<std::string> cell_error(cells);
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni)
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si)
      for (std::size_t pi = 0; pi < cfg.properties.size(); ++pi) {
        const std::size_t c = cell_index(cfg, ni, si, pi);
        try {
          cell_size[c] = resolve_size(cfg, alpha, cfg.n_values[ni], cfg.sizes[si]);
        } catch (const std::exception& e) {
          cell_error[c] = e.what();
        }
      }

  // Outcome per (cell, trial): 1 success, 0 failure, 2 error.
  std::vector<std::uint8_t> outcome(cells * cfg.trials, 0);
  std::vector<std::string> trial_error(cells);  // first error message per cell
  std::unique_ptr<std::atomic<std::uint64_t>[]> cell_nanos(
      new std::atomic<std::uint64_t>[cells]());
  std::mutex error_mutex;

  std::atomic<std::size_t> next_task{0};
  const std::size_t tasks = cells * cfg.trials;
  auto worker = [&]() {
    while (true) {
      const std::size_t task = next_task.fetch_add(1);
      if (task >= tasks) return;
      const std::size_t c = task / cfg.trials;
      const std::size_t trial = task % cfg.trials;
      if (!cell_error[c].empty()) continue;
      const std::size_t pi = c % cfg.properties.size();
      const std::size_t ni = c / (cfg.properties.size() * cfg.sizes.size());
      const std::size_t n = cfg.n_values[ni];
      const auto start = std::chrono::steady_clock::now();
      try {
        Rng rng(substream_seed(cfg.master_seed, c, trial));
        WordTuple h = sample_trial_tuple(cfg, n, cell_size[c], rng);
        const bool ok = evaluate_property(cfg.properties[pi], h, cfg, n);
        outcome[task] = ok ? 1 : 0;
      } catch (const std::exception& e) {
        outcome[task] = 2;
        std::lock_guard<std::mutex> lock(error_mutex);
        if (trial_error[c].empty()) trial_error[c] = e.what();
      }
      const auto stop = std::chrono::steady_clock::now();
      const auto nanos =
          std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
      if (cfg.trial_timeout_ms > 0 &&
          std::uint64_t(nanos) > cfg.trial_timeout_ms * 1'000'000ull) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (trial_error[c].empty())
          trial_error[c] = "trial exceeded timeout of " +
                           std::to_string(cfg.trial_timeout_ms) + " ms";
        outcome[task] = 2;
      }
      cell_nanos[c].fetch_add(std::uint64_t(nanos), std::memory_order_relaxed);
    }
  };

  const std::size_t nworkers = std::max<std::size_t>(1, workers);
  if (nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (std::size_t w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExperimentReport report;
  report.automaton_id = cfg.automaton_id;
  report.length_mode = cfg.length_mode;
  report.word_mode = cfg.word_mode;
  report.master_seed = cfg.master_seed;
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni)
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si)
      for (std::size_t pi = 0; pi < cfg.properties.size(); ++pi) {
        const std::size_t c = cell_index(cfg, ni, si, pi);
        CellResult cell;
        cell.n = cfg.n_values[ni];
        cell.size = cfg.sizes[si];
        cell.property = cfg.properties[pi];
        cell.error = cell_error[c];
        if (cell.error.empty()) {
          std::size_t successes = 0;
          bool errored = false;
          for (std::size_t t = 0; t < cfg.trials; ++t) {
            const auto o = outcome[c * cfg.trials + t];
            if (o == 2) errored = true;
            if (o == 1) ++successes;
          }
          if (errored) {
            cell.error = trial_error[c];
          } else {
            cell.trials = cfg.trials;
            cell.successes = successes;
            cell.frequency = double(successes) / double(cfg.trials);
            const auto ci = wilson_interval(successes, cfg.trials);
            cell.ci_low = ci.low;
            cell.ci_high = ci.high;
            cell.wall_ms = cell_nanos[c].load() / 1'000'000;
          }
        }
        report.cells.push_back(std::move(cell));
      }
  return report;
}

std::string ExperimentReport::to_csv() const {
  std::string out =
      "automaton,n,size_mode,size_param,length_mode,word_mode,property,property_param,"
      "trials,successes,frequency,ci_low,ci_high,master_seed,wall_ms\n";
  for (const auto& cell : cells) {
    if (!cell.error.empty()) continue;
    out += automaton_id + ',' + std::to_string(cell.n) + ',' + cell.size.mode_str() + ',' +
           cell.size.param_str() + ',' +
           (length_mode == LengthMode::exact ? "exact" : "at_most") + ',' +
           (word_mode == WordMode::reduced ? "reduced" : "cyclically_reduced") + ',' +
           cell.property.name() + ',' + cell.property.param_str() + ',' +
           std::to_string(cell.trials) + ',' + std::to_string(cell.successes) + ',' +
           fmt9(cell.frequency) + ',' + fmt9(cell.ci_low) + ',' + fmt9(cell.ci_high) + ',' +
           std::to_string(master_seed) + ',' + std::to_string(cell.wall_ms) + '\n';
  }
  return out;
}

std::vector<std::string> ExperimentReport::errors() const {
  std::vector<std::string> out;
  for (const auto& cell : cells)
    if (!cell.error.empty())
      out.push_back("cell (n=" + std::to_string(cell.n) + ", " + cell.size.mode_str() + '=' +
                    cell.size.param_str() + ", " + cell.property.name() + "): " + cell.error);
  return out;
}

TransitionEstimate estimate_transition(const ExperimentReport& report,
                                       const std::string& property_name, std::size_t n) {
  std::vector<std::pair<double, double>> points;  // (density, frequency)
  for (const auto& cell : report.cells) {
    if (!cell.error.empty() || cell.n != n) continue;
    if (cell.size.mode != SizeSpec::Mode::density) continue;
    if (cell.property.name() != property_name) continue;
    points.emplace_back(cell.size.density, cell.frequency);
  }
  std::sort(points.begin(), points.end());
  TransitionEstimate est;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto [d0, f0] = points[i];
    const auto [d1, f1] = points[i + 1];
    if ((f0 - 0.5) * (f1 - 0.5) <= 0.0 && f0 != f1) {
      est.crossed = true;
      est.bracket_low = d0;
      est.bracket_high = d1;
      est.crossing = d0 + (0.5 - f0) * (d1 - d0) / (f1 - f0);
      return est;
    }
  }
  return est;
}

namespace {

BoundRule bound_from_json(const nlohmann::json& j, const std::string& path) {
  if (j.is_number()) return {BoundRule::Kind::constant, j.get<double>()};
  if (j.is_object()) {
    if (j.contains("const")) return {BoundRule::Kind::constant, j["const"].get<double>()};
    if (j.contains("linear")) return {BoundRule::Kind::linear, j["linear"].get<double>()};
    if (j.contains("log")) return {BoundRule::Kind::log, j["log"].get<double>()};
  }
  throw std::invalid_argument(path + ": expected a number or {const|linear|log: value}");
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config JSON: ") + e.what());
  }
  ExperimentConfig cfg;

  if (!j.contains("automaton")) throw std::invalid_argument("/automaton: missing");
  if (j["automaton"].is_string()) {
    cfg.automaton_id = j["automaton"].get<std::string>();
    cfg.automaton = automaton_preset(cfg.automaton_id);
  } else if (j["automaton"].is_object() && j["automaton"].contains("file")) {
    cfg.automaton_id = j["automaton"]["file"].get<std::string>();
    std::ifstream in(cfg.automaton_id);
    if (!in) throw std::invalid_argument("/automaton/file: cannot open " + cfg.automaton_id);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg.automaton = automaton_from_json(ss.str());
  } else {
    throw std::invalid_argument("/automaton: expected a preset name or {\"file\": path}");
  }

  if (!j.contains("n")) throw std::invalid_argument("/n: missing");
  if (j["n"].is_number_integer()) {
    cfg.n_values.push_back(j["n"].get<std::size_t>());
  } else if (j["n"].is_array()) {
    for (const auto& v : j["n"]) cfg.n_values.push_back(v.get<std::size_t>());
  } else {
    throw std::invalid_argument("/n: expected an integer or an array");
  }

  if (!j.contains("sizes") || !j["sizes"].is_array() || j["sizes"].empty())
    throw std::invalid_argument("/sizes: missing or empty array");
  for (std::size_t i = 0; i < j["sizes"].size(); ++i) {
    const auto& s = j["sizes"][i];
    const std::string path = "/sizes/" + std::to_string(i);
    if (!s.is_object()) throw std::invalid_argument(path + ": expected an object");
    if (s.contains("density")) cfg.sizes.push_back(SizeSpec::of_density(s["density"].get<double>()));
    else if (s.contains("fixed")) cfg.sizes.push_back(SizeSpec::of_fixed(s["fixed"].get<std::uint64_t>()));
    else if (s.contains("polynomial"))
      cfg.sizes.push_back(SizeSpec::of_polynomial(s["polynomial"].get<double>()));
    else throw std::invalid_argument(path + ": expected density, fixed or polynomial");
    if (cfg.sizes.back().mode == SizeSpec::Mode::density) {
      const double d = cfg.sizes.back().density;
      if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument(path + ": density must lie in (0, 1)");
    }
  }

  const std::string length_mode = j.value("length_mode", std::string("exact"));
  if (length_mode == "exact") cfg.length_mode = LengthMode::exact;
  else if (length_mode == "at_most") cfg.length_mode = LengthMode::at_most;
  else throw std::invalid_argument("/length_mode: expected exact or at_most");

  const std::string word_mode = j.value("word_mode", std::string("reduced"));
  if (word_mode == "reduced") cfg.word_mode = WordMode::reduced;
  else if (word_mode == "cyclically_reduced") cfg.word_mode = WordMode::cyclically_reduced;
  else throw std::invalid_argument("/word_mode: expected reduced or cyclically_reduced");

  if (!j.contains("properties") || !j["properties"].is_array() || j["properties"].empty())
    throw std::invalid_argument("/properties: missing or empty array");
  for (std::size_t i = 0; i < j["properties"].size(); ++i) {
    const auto& p = j["properties"][i];
    const std::string path = "/properties/" + std::to_string(i);
    if (!p.is_object() || !p.contains("name"))
      throw std::invalid_argument(path + ": expected an object with a name");
    const std::string name = p["name"].get<std::string>();
    PropertySpec spec;
    if (name == "ctp") {
      spec.kind = PropertySpec::Kind::ctp;
    } else if (name == "cprime") {
      spec.kind = PropertySpec::Kind::cprime;
      spec.lambda = Lambda::parse(p.value("lambda", std::string("1/6")));
    } else if (name == "lcp_below") {
      spec.kind = PropertySpec::Kind::lcp_below;
      if (!p.contains("bound")) throw std::invalid_argument(path + ": lcp_below needs a bound");
      spec.bound = bound_from_json(p["bound"], path + "/bound");
    } else if (name == "collision") {
      spec.kind = PropertySpec::Kind::collision;
      if (!p.contains("ell")) throw std::invalid_argument(path + ": collision needs ell");
      spec.bound = bound_from_json(p["ell"], path + "/ell");
    } else if (name == "malnormal_cert") {
      spec.kind = PropertySpec::Kind::malnormal_cert;
    } else if (name == "malnormal") {
      spec.kind = PropertySpec::Kind::malnormal;
      spec.malnormal_budget = p.value("budget", spec.malnormal_budget);
    } else if (name == "degenerate_class") {
      spec.kind = PropertySpec::Kind::degenerate_class;
      const std::string expect = p.value("expect", std::string("auto"));
      if (expect == "auto") spec.expect = PropertySpec::Expect::automatic;
      else if (expect == "trivial") spec.expect = PropertySpec::Expect::trivial;
      else if (expect == "z2") spec.expect = PropertySpec::Expect::z2;
      else throw std::invalid_argument(path + "/expect: expected auto, trivial or z2");
    } else {
      throw std::invalid_argument(path + "/name: unknown property '" + name + "'");
    }
    cfg.properties.push_back(spec);
  }

  cfg.trials = j.value("trials", std::size_t(1));
  if (cfg.trials == 0) throw std::invalid_argument("/trials: must be >= 1");
  cfg.master_seed = j.value("master_seed", std::uint64_t(0));
  cfg.size_cap = j.value("size_cap", cfg.size_cap);
  cfg.trial_timeout_ms = j.value("trial_timeout_ms", std::uint64_t(0));
  return cfg;
}

}  // namespace fgen
