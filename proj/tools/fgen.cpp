// fgen: free-group word arithmetic, Stallings graphs, small cancellation,
// Markovian word sources and Monte Carlo sweeps from the command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fgen/cancellation.hpp>
#include <fgen/experiments.hpp>
#include <fgen/markov.hpp>
#include <fgen/presentations.hpp>
#include <fgen/stallings.hpp>
#include <fgen/tuples.hpp>
#include <fgen/words.hpp>

namespace {

// Exit codes are a documented contract:
//   0 success / property holds, 10 property fails, 2 usage error,
//   3 invalid input, 4 resource cap exceeded.
constexpr int kExitHolds = 0;
constexpr int kExitFails = 10;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitResourceCap = 4;

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

int infer_rank(std::string_view text, int override_rank) {
  if (override_rank > 0) return override_rank;
  int r = 1;
  for (char c : text) {
    if (c >= 'a' && c <= 'z') r = std::max(r, c - 'a' + 1);
    if (c >= 'A' && c <= 'Z') r = std::max(r, c - 'A' + 1);
  }
  return r;
}

fgen::MarkovianAutomaton load_automaton(const std::string& ref) {
  if (ref.rfind("uniform:", 0) == 0 || ref.rfind("psl2:", 0) == 0)
    return fgen::automaton_preset(ref);
  return fgen::automaton_from_json(read_file(ref));
}

std::uint64_t effective_seed(const CLI::Option* seed_opt, std::uint64_t seed_value) {
  if (seed_opt->count() > 0) return seed_value;
  std::random_device rd;
  const std::uint64_t seed = (std::uint64_t(rd()) << 32) ^ rd();
  std::cerr << "seed: " << seed << " (chosen from entropy; pass --seed to reproduce)\n";
  return seed;
}

std::string slot_str(const fgen::RotationIndex& slot) {
  return "word " + std::to_string(slot.word + 1) + (slot.inverse ? "^-1" : "") +
         " rotated by " + std::to_string(slot.rotation);
}

int run_words(const std::string& action, const std::string& text, int rank_arg, int n) {
  using namespace fgen;
  if (action == "count") {
    std::cout << count_reduced(rank_arg > 0 ? rank_arg : 2, n).str() << "\n";
    return kExitHolds;
  }
  Alphabet a(infer_rank(text, rank_arg));
  Word w = Word::parse(a, text);
  if (action == "reduce") {
    std::cout << to_string(w) << "\n";
  } else {  // cyclic-reduce
    auto cr = cyclic_reduce(w);
    std::cout << to_string(cr.core) << " " << to_string(cr.conjugator) << "\n";
  }
  return kExitHolds;
}

int run_automaton(const std::string& action, const std::string& ref, bool json,
                  const std::vector<std::string>& lambda_args) {
  using namespace fgen;
  auto a = load_automaton(ref);
  auto report = validate(a);
  if (action == "validate") {
    if (json) {
      nlohmann::ordered_json j;
      j["valid"] = report.ok();
      auto issues = nlohmann::ordered_json::array();
      for (const auto& issue : report.issues)
        issues.push_back({{"location", issue.location}, {"message", issue.message}});
      j["issues"] = std::move(issues);
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << report.str();
    }
    return report.ok() ? kExitHolds : kExitInvalidInput;
  }

  // analyze
  if (!report.ok()) {
    std::cerr << "invalid automaton:\n" << report.str();
    return kExitInvalidInput;
  }
  std::vector<Lambda> lambdas;
  for (const auto& l : lambda_args) lambdas.push_back(Lambda::parse(l));
  if (lambdas.empty()) lambdas.push_back(Lambda(1, 6));

  auto s = spectral_summary(a);
  auto thresholds = threshold_predictions(a, lambdas);
  std::optional<PrefixHeavyParams> params;
  std::optional<PrefixHeavyEstimate> spectral_only;
  std::string params_error;
  try {
    params = prefix_heavy_params(a);
  } catch (const std::exception& e) {
    params_error = e.what();
    // The spectral method stays available when the cycle scan is infeasible.
    spectral_only = spectral_prefix_heavy(a);
  }
  const auto spectral_estimate = params ? params->spectral : spectral_only;

  if (json) {
    nlohmann::ordered_json j;
    j["automaton"] = ref;
    j["irreducible"] = s.irreducible;
    j["ergodic"] = s.ergodic;
    j["period"] = s.period;
    j["alpha2"] = s.alpha2;
    j["alpha3"] = s.alpha3;
    if (s.stationary) {
      nlohmann::ordered_json stat = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < s.stationary->size(); ++i)
        stat[s.local_state_names[i]] = (*s.stationary)[i];
      j["stationary"] = std::move(stat);
      j["degeneracy"] = *s.degeneracy;
      j["cyclically_reduced_density"] = *s.cyclically_reduced_density;
    }
    if (params) {
      j["prefix_heavy"]["cycles"] = {{"C", params->cycles.C},
                                     {"alpha", params->cycles.alpha},
                                     {"max_cycle_prob", params->max_cycle_prob},
                                     {"max_cycle_len", params->max_cycle_len}};
    } else {
      j["prefix_heavy"]["error"] = params_error;
    }
    if (spectral_estimate)
      j["prefix_heavy"]["spectral"] = {{"C", spectral_estimate->C},
                                       {"alpha", spectral_estimate->alpha}};
    auto th = nlohmann::ordered_json::object();
    th["ctp"] = thresholds.ctp;
    th["malnormal"] = thresholds.malnormal;
    th["degenerate"] = thresholds.degenerate;
    for (const auto& [lambda, d] : thresholds.cprime) th["cprime(" + lambda.str() + ")"] = d;
    j["thresholds_alpha2_density"] = std::move(th);
    if (thresholds.uniform_ctp) {
      j["thresholds_alpha_density"] = {{"ctp", *thresholds.uniform_ctp},
                                       {"malnormal", *thresholds.uniform_malnormal}};
    }
    std::cout << j.dump(2) << "\n";
    return kExitHolds;
  }

  std::cout << "automaton: " << ref << "\n";
  std::cout << "states: " << a.num_states() << " (local: " << s.local_state_names.size()
            << ")\n";
  std::cout << "irreducible: " << (s.irreducible ? "yes" : "no") << "\n";
  std::cout << "ergodic: " << (s.ergodic ? "yes" : "no");
  if (s.irreducible) std::cout << " (period " << s.period << ")";
  std::cout << "\n";
  std::cout << "alpha_2: " << fmt9(s.alpha2) << "\n";
  std::cout << "alpha_3: " << fmt9(s.alpha3) << "\n";
  if (s.stationary) {
    std::cout << "stationary (local):";
    for (std::size_t i = 0; i < s.stationary->size(); ++i)
      std::cout << " " << s.local_state_names[i] << "=" << fmt9((*s.stationary)[i]);
    std::cout << "\n";
    std::cout << "degeneracy: " << fmt9(*s.degeneracy) << "\n";
    std::cout << "cyclically-reduced density: " << fmt9(*s.cyclically_reduced_density) << "\n";
  } else {
    std::cout << "stationary (local): n/a (not ergodic)\n";
  }
  if (params) {
    std::cout << "prefix-heavy (cycles): C=" << fmt9(params->cycles.C)
              << " alpha=" << fmt9(params->cycles.alpha)
              << " (max cycle prob " << fmt9(params->max_cycle_prob) << ", max cycle len "
              << params->max_cycle_len << ")\n";
  } else {
    std::cout << "prefix-heavy (cycles): unavailable (" << params_error << ")\n";
  }
  if (spectral_estimate)
    std::cout << "prefix-heavy (spectral): C=" << fmt9(spectral_estimate->C)
              << " alpha=" << fmt9(spectral_estimate->alpha) << "\n";
  std::cout << "thresholds (alpha2-density): ctp=" << fmt9(thresholds.ctp)
            << " malnormal=" << fmt9(thresholds.malnormal)
            << " degenerate=" << fmt9(thresholds.degenerate);
  for (const auto& [lambda, d] : thresholds.cprime)
    std::cout << " cprime(" << lambda.str() << ")=" << fmt9(d);
  std::cout << "\n";
  if (thresholds.uniform_ctp)
    std::cout << "thresholds (alpha-density, uniform): ctp=" << fmt9(*thresholds.uniform_ctp)
              << " malnormal=" << fmt9(*thresholds.uniform_malnormal) << "\n";
  return kExitHolds;
}

int run_check(const std::string& property, const std::string& tuple_path, int rank_flag,
              const std::string& lambda_text, std::uint64_t budget, bool json) {
  using namespace fgen;
  const std::string text = read_file(tuple_path);
  std::optional<int> rank;
  if (rank_flag > 0) rank = rank_flag;
  WordTuple h = parse_tuple_text(text, rank);

  nlohmann::ordered_json j;
  j["property"] = property;
  int exit_code = kExitHolds;
  std::string human;

  if (property == "ctp") {
    auto s = stats(h);
    const bool holds = 2 * s.lcp < s.min_len;
    human = "Lcp=" + std::to_string(s.lcp) + " Min=" + std::to_string(s.min_len) +
            " Nbr=" + std::to_string(s.nbr) + " -> " +
            (holds ? "central tree property holds" : "central tree property fails");
    j["lcp"] = s.lcp;
    j["min"] = s.min_len;
    j["nbr"] = s.nbr;
    j["holds"] = holds;
    exit_code = holds ? kExitHolds : kExitFails;
  } else if (property == "cprime") {
    for (const auto& w : h.words)
      if (!is_cyclically_reduced(w))
        throw std::invalid_argument("cprime requires cyclically reduced words; '" +
                                    to_string(w) + "' is not");
    Lambda lambda = Lambda::parse(lambda_text);
    auto violation = cprime_violation(h, lambda);
    j["lambda"] = lambda.str();
    j["holds"] = !violation.has_value();
    if (violation) {
      const auto& v = *violation;
      human = "C'(" + lambda.str() + ") fails: piece of length " + std::to_string(v.piece) +
              " on " + slot_str(v.slot) + " (|w|=" + std::to_string(v.word_length) +
              "), shared with " + slot_str(v.partner);
      j["witness"] = {{"piece", v.piece},
                      {"word", v.slot.word},
                      {"inverse", v.slot.inverse},
                      {"rotation", v.slot.rotation},
                      {"partner_word", v.partner.word},
                      {"partner_inverse", v.partner.inverse},
                      {"partner_rotation", v.partner.rotation}};
      exit_code = kExitFails;
    } else {
      human = "C'(" + lambda.str() + ") holds";
    }
  } else if (property == "malnormal-cert") {
    auto cert = malnormality_certificate(h);
    auto s = stats(h);
    const auto lrf = longest_repeated_factor(h);
    const bool holds = cert == Certificate::certified;
    human = std::string(holds ? "certified malnormal" : "inconclusive") +
            " (Lcp=" + std::to_string(s.lcp) + " Min=" + std::to_string(s.min_len) +
            " longest repeated factor=" + std::to_string(lrf) + ")";
    j["certified"] = holds;
    j["lcp"] = s.lcp;
    j["min"] = s.min_len;
    j["longest_repeated_factor"] = lrf;
    exit_code = holds ? kExitHolds : kExitFails;
  } else if (property == "malnormal-exact") {
    auto g = stallings_graph(h);
    const bool holds = is_malnormal(g, budget);
    human = std::string(holds ? "malnormal" : "not malnormal") +
            " (graph: " + std::to_string(g.vertex_count()) + " vertices, " +
            std::to_string(g.edge_count()) + " edges)";
    j["malnormal"] = holds;
    j["vertices"] = g.vertex_count();
    j["edges"] = g.edge_count();
    exit_code = holds ? kExitHolds : kExitFails;
  } else if (property == "abelianization") {
    auto ab = abelianization(h);
    human = ab.str();
    j["abelianization"] = ab.str();
    j["free_rank"] = ab.free_rank;
    auto factors = nlohmann::ordered_json::array();
    for (const auto& d : ab.invariant_factors) factors.push_back(d.str());
    j["invariant_factors"] = std::move(factors);
    exit_code = kExitHolds;
  } else {
    throw CLI::ValidationError("--property",
                               "unknown property '" + property + "'");
  }

  if (json) std::cout << j.dump(2) << "\n";
  else std::cout << human << "\n";
  return exit_code;
}

int run_sample(const std::string& ref, std::size_t n, std::size_t count, bool cyclic,
               std::uint64_t seed) {
  using namespace fgen;
  auto a = load_automaton(ref);
  auto report = validate(a);
  if (!report.ok()) {
    std::cerr << "invalid automaton:\n" << report.str();
    return kExitInvalidInput;
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    Word w = cyclic ? sample_cyclically_reduced(a, n, rng) : sample_reduced(a, n, rng);
    std::cout << to_string(w) << "\n";
  }
  return kExitHolds;
}

int run_sweep(const std::string& config_path, const std::string& out_path,
              std::size_t workers, const CLI::Option* seed_opt, std::uint64_t seed) {
  using namespace fgen;
  auto cfg = config_from_json(read_file(config_path));
  if (seed_opt->count() > 0) cfg.master_seed = seed;
  std::cerr << "sweep: " << cfg.cell_count() << " cells x " << cfg.trials
            << " trials, master seed " << cfg.master_seed << ", " << workers << " worker(s)\n";
  auto report = run_experiment(cfg, workers);
  write_file(out_path, report.to_csv());
  for (const auto& err : report.errors()) std::cerr << "warning: " << err << "\n";
  std::cerr << "wrote " << out_path << "\n";
  return kExitHolds;
}

int run_stallings(const std::string& input, int rank_flag, const std::string& out_json,
                  const std::string& out_dot, bool json) {
  using namespace fgen;
  std::optional<int> rank_override;
  if (rank_flag > 0) rank_override = rank_flag;
  WordTuple h = parse_tuple_text(read_file(input), rank_override);
  auto g = stallings_graph(h);
  if (!out_json.empty()) write_file(out_json, graph_to_json(g));
  if (!out_dot.empty()) write_file(out_dot, graph_to_dot(g));
  if (json) {
    std::cout << graph_to_json(g);
  } else {
    std::cout << "vertices=" << g.vertex_count() << " edges=" << g.edge_count()
              << " rank=" << rank(g) << "\n";
  }
  return kExitHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free-group subgroups, presentations and random word sources"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  // Global options (--seed, --json) may appear after the subcommand too.
  

  bool json = false;
  app.add_flag("--json", json, "machine-readable output where supported");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "random seed (entropy when absent)");

  // words
  auto* words = app.add_subcommand("words", "reduced-word arithmetic");
  words->fallthrough();
  std::string words_action, words_text;
  int words_rank = 0, count_n = 0;
  words->add_option("action", words_action, "reduce | cyclic-reduce | count")->required();
  words->add_option("word", words_text, "word in letter syntax (a..z, A..Z, 1 = empty)");
  words->add_option("-r,--rank", words_rank, "alphabet rank (default 2 for count, inferred otherwise)");
  words->add_option("-n,--length", count_n, "word length (for count)");

  // automaton
  auto* automaton = app.add_subcommand("automaton", "validate or analyze a word source");
  automaton->fallthrough();
  std::string automaton_action, automaton_ref;
  std::vector<std::string> lambda_args;
  automaton->add_option("action", automaton_action, "validate | analyze")->required();
  automaton->add_option("--file,--preset,-a", automaton_ref,
                        "automaton JSON file or preset (uniform:<r>, psl2:geodesic, "
                        "psl2:quasigeodesic)")
      ->required();
  automaton->add_option("--lambda", lambda_args, "lambda values for cprime thresholds");

  // check
  auto* check = app.add_subcommand("check", "evaluate a property of a tuple file");
  check->fallthrough();
  std::string check_property, check_file, check_lambda = "1/6";
  int check_rank = 0;
  std::uint64_t check_budget = fgen::kDefaultVertexPairCap;
  check->add_option("--property", check_property,
                    "ctp | cprime | malnormal-cert | malnormal-exact | abelianization")
      ->required();
  check->add_option("file", check_file, "tuple file (one word per line)")->required();
  check->add_option("--lambda", check_lambda, "lambda for cprime (default 1/6)");
  check->add_option("--rank", check_rank, "ambient alphabet rank (inferred when absent)");
  check->add_option("--budget", check_budget, "vertex-pair cap for malnormal-exact");

  // sample
  auto* sample = app.add_subcommand("sample", "draw random words from an automaton");
  sample->fallthrough();
  std::string sample_ref = "uniform:2";
  std::size_t sample_n = 0, sample_count = 1;
  bool sample_cyclic = false;
  sample->add_option("--automaton,-a", sample_ref, "preset or automaton JSON file");
  sample->add_option("--n", sample_n, "word length")->required();
  sample->add_option("--count", sample_count, "number of words");
  sample->add_flag("--cyclic", sample_cyclic, "condition on cyclically reduced words");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo experiment grid");
  sweep->fallthrough();
  std::string sweep_config, sweep_out;
  std::size_t sweep_workers = 1;
  sweep->add_option("--config", sweep_config, "experiment config JSON")->required();
  sweep->add_option("--out", sweep_out, "output CSV path")->required();
  sweep->add_option("--workers", sweep_workers, "worker threads");

  // stallings
  auto* stallings = app.add_subcommand("stallings", "fold a tuple into its subgroup graph");
  stallings->fallthrough();
  std::string stallings_input, stallings_out, stallings_dot;
  int stallings_rank = 0;
  stallings->add_option("--input", stallings_input, "tuple file")->required();
  stallings->add_option("--out", stallings_out, "write graph JSON here");
  stallings->add_option("--dot", stallings_dot, "write DOT here");
  stallings->add_option("--rank", stallings_rank, "ambient alphabet rank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (words->parsed()) {
      if (words_action != "reduce" && words_action != "cyclic-reduce" &&
          words_action != "count") {
        std::cerr << "words: unknown action '" << words_action << "'\n";
        return kExitUsage;
      }
      if (words_action != "count" && words->count("word") == 0) {
        std::cerr << "words " << words_action << ": missing word argument\n";
        return kExitUsage;
      }
      return run_words(words_action, words_text, words_rank, count_n);
    }
    if (automaton->parsed()) {
      if (automaton_action != "validate" && automaton_action != "analyze") {
        std::cerr << "automaton: unknown action '" << automaton_action << "'\n";
        return kExitUsage;
      }
      return run_automaton(automaton_action, automaton_ref, json, lambda_args);
    }
    if (check->parsed())
      return run_check(check_property, check_file, check_rank, check_lambda, check_budget,
                       json);
    if (sample->parsed())
      return run_sample(sample_ref, sample_n, sample_count, sample_cyclic,
                        effective_seed(seed_opt, seed));
    if (sweep->parsed()) return run_sweep(sweep_config, sweep_out, sweep_workers, seed_opt, seed);
    if (stallings->parsed())
      return run_stallings(stallings_input, stallings_rank, stallings_out, stallings_dot,
                           json);
  } catch (const fgen::ResourceLimitError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitUsage;
}
