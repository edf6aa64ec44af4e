#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fgen/experiments.hpp>

using namespace fgen;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.automaton_id = "uniform:2";
  cfg.automaton = uniform_automaton(2);
  cfg.n_values = {12, 15};
  cfg.sizes = {SizeSpec::of_density(0.1), SizeSpec::of_fixed(3)};
  cfg.properties = {PropertySpec{},  // ctp
                    PropertySpec{PropertySpec::Kind::lcp_below, std::nullopt,
                                 BoundRule{BoundRule::Kind::constant, 6.0}}};
  cfg.trials = 25;
  cfg.master_seed = 424242;
  return cfg;
}

std::string strip_wall_ms(const std::string& csv) {
  std::string out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string::npos) eol = csv.size();
    std::string_view line(csv.data() + pos, eol - pos);
    const auto comma = line.rfind(',');
    out.append(line.substr(0, comma));
    out.push_back('\n');
    pos = eol + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("wilson interval") {
  auto ci = wilson_interval(0, 100);
  CHECK(ci.low == 0.0);
  CHECK(ci.high > 0.0);
  CHECK(ci.high < 0.06);
  auto ci2 = wilson_interval(100, 100);
  CHECK(ci2.high == 1.0);
  CHECK(ci2.low > 0.94);
  auto ci3 = wilson_interval(50, 100);
  CHECK(ci3.low < 0.5);
  CHECK(ci3.high > 0.5);
  // The interval always contains the raw frequency.
  for (std::size_t s : {0u, 1u, 13u, 99u, 100u}) {
    auto c = wilson_interval(s, 100);
    const double f = double(s) / 100.0;
    CHECK(c.low <= f + 1e-15);
    CHECK(c.high >= f - 1e-15);
  }
}

TEST_CASE("at-most length law matches |R_len| / |R_<=n| (chi-square)") {
  Rng rng(13001);
  const std::size_t n = 3;
  std::array<std::size_t, 4> counts{};  // lengths 1..3
  const std::size_t draws = 100'000;
  for (std::size_t i = 0; i < draws; ++i) ++counts[at_most_length(2, n, rng)];
  CHECK(counts[0] == 0);
  // Expected: 36/52, 12/52, 4/52 for lengths 3, 2, 1.
  const double expected[4] = {0, 4.0 / 52, 12.0 / 52, 36.0 / 52};
  double chi2 = 0.0;
  for (std::size_t len = 1; len <= 3; ++len) {
    const double e = expected[len] * double(draws);
    chi2 += (double(counts[len]) - e) * (double(counts[len]) - e) / e;
  }
  CHECK(chi2 < 13.8155);  // 0.999 quantile, 2 degrees of freedom

  Rng rng2(13002);
  for (int i = 0; i < 50; ++i) CHECK(at_most_length(2, 1, rng2) == 1);
}

TEST_CASE("density alpha uses the exact uniform value") {
  CHECK(density_alpha(uniform_automaton(2)) == 1.0 / 3);
  CHECK(density_alpha(uniform_automaton(3)) == 1.0 / 5);
  const double a2 = density_alpha(psl2_automaton(Psl2Variant::quasigeodesic));
  CHECK(a2 > 0.0);
  CHECK(a2 < 1.0);
}

TEST_CASE("experiment runs are deterministic and worker-count independent") {
  auto cfg = small_config();
  auto csv1 = run_experiment(cfg, 1).to_csv();
  auto csv1b = run_experiment(cfg, 1).to_csv();
  auto csv8 = run_experiment(cfg, 8).to_csv();
  CHECK(strip_wall_ms(csv1) == strip_wall_ms(csv1b));
  CHECK(strip_wall_ms(csv1) == strip_wall_ms(csv8));
  CHECK(csv1.substr(0, csv1.find('\n')) ==
        "automaton,n,size_mode,size_param,length_mode,word_mode,property,property_param,"
        "trials,successes,frequency,ci_low,ci_high,master_seed,wall_ms");

  auto other_seed = cfg;
  other_seed.master_seed = 7;
  CHECK(strip_wall_ms(run_experiment(other_seed, 1).to_csv()) != strip_wall_ms(csv1));
}

TEST_CASE("property evaluations match direct library calls on replayed trials") {
  auto cfg = small_config();
  auto report = run_experiment(cfg, 4);
  const double alpha = density_alpha(cfg.automaton);
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni)
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si)
      for (std::size_t pi = 0; pi < cfg.properties.size(); ++pi) {
        const std::size_t c = cell_index(cfg, ni, si, pi);
        const auto& cell = report.cells[c];
        REQUIRE(cell.error.empty());
        const std::uint64_t size = resolve_size(cfg, alpha, cfg.n_values[ni], cfg.sizes[si]);
        std::size_t successes = 0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
          Rng rng(substream_seed(cfg.master_seed, c, t));
          WordTuple h = sample_trial_tuple(cfg, cfg.n_values[ni], size, rng);
          // Direct library calls, bypassing evaluate_property for ctp/lcp.
          bool direct = pi == 0 ? has_central_tree_property(h) : lcp_below(h, 6);
          if (direct) ++successes;
        }
        CHECK(successes == cell.successes);
      }
}

TEST_CASE("cprime on reduced word mode is a per-cell error, not a crash") {
  auto cfg = small_config();
  PropertySpec cp;
  cp.kind = PropertySpec::Kind::cprime;
  cp.lambda = Lambda(1, 6);
  cfg.properties = {cp};
  auto report = run_experiment(cfg, 2);
  for (const auto& cell : report.cells) CHECK_FALSE(cell.error.empty());
  CHECK(report.to_csv().find("cprime") == std::string::npos);
  CHECK_FALSE(report.errors().empty());
}

TEST_CASE("size cap violations are reported per cell") {
  auto cfg = small_config();
  cfg.size_cap = 4;
  cfg.sizes = {SizeSpec::of_density(0.9), SizeSpec::of_fixed(3)};
  auto report = run_experiment(cfg, 1);
  bool some_error = false, some_fine = false;
  for (const auto& cell : report.cells) {
    if (cell.error.empty()) some_fine = true;
    else some_error = true;
  }
  CHECK(some_error);
  CHECK(some_fine);
}

TEST_CASE("estimate_transition interpolates the half crossing") {
  ExperimentReport report;
  report.automaton_id = "uniform:2";
  auto mk = [&](double d, double f) {
    CellResult cell;
    cell.n = 20;
    cell.size = SizeSpec::of_density(d);
    cell.property = PropertySpec{};  // ctp
    cell.trials = 10;
    cell.frequency = f;
    report.cells.push_back(cell);
  };
  mk(0.1, 1.0);
  mk(0.2, 0.9);
  mk(0.3, 0.3);
  mk(0.4, 0.0);
  auto est = estimate_transition(report, "ctp", 20);
  REQUIRE(est.crossed);
  CHECK(est.bracket_low == 0.2);
  CHECK(est.bracket_high == 0.3);
  CHECK(est.crossing == doctest::Approx(0.2 + 0.1 * (0.4 / 0.6)));

  // Constant-true property: no crossing.
  ExperimentReport flat;
  flat.cells = report.cells;
  for (auto& cell : flat.cells) cell.frequency = 1.0;
  CHECK_FALSE(estimate_transition(flat, "ctp", 20).crossed);
}

TEST_CASE("config JSON parsing") {
  const std::string text = R"({
    "automaton": "uniform:2",
    "n": [25],
    "sizes": [{"density": 0.15}, {"density": 0.35}],
    "length_mode": "exact",
    "word_mode": "reduced",
    "properties": [{"name": "ctp"}, {"name": "lcp_below", "bound": 7},
                   {"name": "cprime", "lambda": "1/3"},
                   {"name": "collision", "ell": {"linear": 0.5}},
                   {"name": "degenerate_class", "expect": "z2"}],
    "trials": 50,
    "master_seed": 99,
    "size_cap": 100000
  })";
  auto cfg = config_from_json(text);
  CHECK(cfg.automaton_id == "uniform:2");
  CHECK(cfg.n_values == std::vector<std::size_t>{25});
  CHECK(cfg.sizes.size() == 2);
  CHECK(cfg.properties.size() == 5);
  CHECK(cfg.properties[2].lambda->str() == "1/3");
  CHECK(cfg.properties[3].bound.kind == BoundRule::Kind::linear);
  CHECK(cfg.trials == 50);
  CHECK(cfg.master_seed == 99);
  CHECK(cfg.size_cap == 100000);

  CHECK_THROWS_AS(config_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"automaton": "uniform:2", "n": 5, "sizes": [],
                                      "properties": [{"name": "ctp"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"automaton": "uniform:2", "n": 5,
                                      "sizes": [{"density": 0.2}],
                                      "properties": [{"name": "nope"}]})"),
                  std::invalid_argument);
}

TEST_CASE("at_most length mode rejects non-uniform automata") {
  ExperimentConfig cfg;
  cfg.automaton_id = "psl2:quasigeodesic";
  cfg.automaton = psl2_automaton(Psl2Variant::quasigeodesic);
  cfg.n_values = {10};
  cfg.sizes = {SizeSpec::of_fixed(2)};
  cfg.properties = {PropertySpec{}};
  cfg.length_mode = LengthMode::at_most;
  cfg.trials = 2;
  CHECK_THROWS_AS(run_experiment(cfg, 1), std::invalid_argument);
}

TEST_CASE("ctp frequency decreases with density (smoke, 3-sigma slack)") {
  ExperimentConfig cfg;
  cfg.automaton_id = "uniform:2";
  cfg.automaton = uniform_automaton(2);
  cfg.n_values = {20};
  cfg.sizes = {SizeSpec::of_density(0.10), SizeSpec::of_density(0.45)};
  cfg.properties = {PropertySpec{}};
  cfg.trials = 40;
  cfg.master_seed = 5150;
  cfg.size_cap = 1'000'000;
  auto report = run_experiment(cfg, 2);
  REQUIRE(report.cells.size() == 2);
  const double f_low = report.cells[0].frequency;
  const double f_high = report.cells[1].frequency;
  const double sigma = 3.0 * std::sqrt(0.25 / double(cfg.trials));
  CHECK(f_low + sigma >= f_high);
  CHECK(f_low > 0.8);   // far below the transition
  CHECK(f_high < 0.2);  // far above the transition
}
