#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mibbo/benchmarks.hpp"
#include "mibbo/cma_params.hpp"
#include "mibbo/cmaes.hpp"
#include "mibbo/config.hpp"
#include "mibbo/csv.hpp"
#include "mibbo/harness.hpp"
#include "mibbo/matrix.hpp"
#include "mibbo/rng.hpp"

using namespace mibbo;

namespace {

std::map<std::string, std::string> minimal_map() {
  return {{"algorithm", "cma-es-margin"},
          {"benchmark", "sphere-int"},
          {"n", "20"}};
}

ExperimentConfig quick_config(const std::string& algorithm,
                              const std::string& benchmark, int n,
                              long budget) {
  ExperimentConfig config;
  config.algorithm = algorithm_from_name(algorithm);
  config.benchmark = benchmark;
  config.n = n;
  config.budget_evals = budget;
  config.trials = 3;
  return config;
}

void check_records_equal(const TrialRecord& a, const TrialRecord& b) {
  CHECK(a.seed == b.seed);
  CHECK(a.success == b.success);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.best_f == b.best_f);
  CHECK(a.termination == b.termination);
}

}  // namespace

TEST_CASE("parse_config_text handles comments, blanks, and errors") {
  const std::string text =
      "# experiment\n"
      "algorithm = cma-es-margin\n"
      "\n"
      "n = 20   # dimension\n"
      "benchmark=sphere-int\n";
  const auto kv = parse_config_text(text);
  REQUIRE(kv.size() == 3);
  CHECK(kv.at("algorithm") == "cma-es-margin");
  CHECK(kv.at("n") == "20");
  CHECK(kv.at("benchmark") == "sphere-int");

  CHECK(parse_config_text("").empty());
  CHECK(parse_config_text("# only\n\n  \n").empty());

  CHECK_THROWS_WITH_AS(parse_config_text("novalue\n"),
                       "config line 1: expected 'key = value'",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("a = 1\n= 3\n"),
                       "config line 2: empty key", std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("a = 1\nb =\n"),
                       "config line 2: empty value for key 'b'",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("a = 1\n\na = 2\n"),
                       "config line 3: duplicate key 'a'",
                       std::invalid_argument);
  // A comment can swallow the value.
  CHECK_THROWS_AS((void)parse_config_text("a = # gone\n"),
                  std::invalid_argument);
}

TEST_CASE("load_config_file reads through the filesystem") {
  const auto path = std::filesystem::temp_directory_path() /
                    "mibbo_config_test.cfg";
  write_text_file(path, "algorithm = cma-es-im\nbenchmark = sphere-int\nn = 8\n");
  const auto kv = load_config_file(path);
  CHECK(kv.at("algorithm") == "cma-es-im");
  std::filesystem::remove(path);
  CHECK_THROWS_AS((void)load_config_file(path), std::runtime_error);
}

TEST_CASE("config_from_map applies defaults and validation") {
  SUBCASE("minimal margin config") {
    const ExperimentConfig config = config_from_map(minimal_map());
    CHECK(config.algorithm == Algorithm::cma_es_margin);
    CHECK(config.benchmark == "sphere-int");
    CHECK(config.n == 20);
    CHECK(config.trials == 100);
    CHECK(config.master_seed == 1);
    CHECK(config.threads == 1);
    CHECK(!config.alpha.has_value());
    CHECK(!config.budget_evals.has_value());
    CHECK(resolved_budget(config) == 1000000L);
    // Default margin: 1 / (n * lambda) with lambda from the size table.
    CHECK(resolved_alpha(config) ==
          doctest::Approx(1.0 / (20.0 * default_params(20).lambda))
              .epsilon(1e-15));
  }

  SUBCASE("full key set round-trips") {
    std::map<std::string, std::string> kv{
        {"algorithm", "mo-cma-es-margin"}, {"benchmark", "dsint"},
        {"n", "8"},          {"trials", "7"},
        {"seed", "42"},      {"alpha", "0.01"},
        {"lambda", "12"},    {"mo_iterations", "50"},
        {"integer_low", "-3"}, {"integer_high", "5"},
        {"threads", "2"},    {"out", "results"}};
    const ExperimentConfig config = config_from_map(kv);
    CHECK(config.trials == 7);
    CHECK(config.master_seed == 42);
    CHECK(config.alpha == 0.01);
    CHECK(config.lambda == 12);
    CHECK(resolved_mo_lambda(config) == 12);
    CHECK(config.mo_iterations == 50);
    REQUIRE(config.integer_range.has_value());
    CHECK(config.integer_range->first == -3);
    CHECK(config.integer_range->second == 5);
    CHECK(config.threads == 2);
    CHECK(config.out_dir == std::filesystem::path("results"));
    CHECK(resolved_alpha(config) == 0.01);
  }

  SUBCASE("box intervals parse as low,high pairs") {
    std::map<std::string, std::string> kv{{"algorithm", "cma-es-im-box"},
                                          {"benchmark", "sphere-int"},
                                          {"n", "8"},
                                          {"box_continuous", "-4,4"}};
    const ExperimentConfig config = config_from_map(kv);
    REQUIRE(config.box_continuous.has_value());
    CHECK(config.box_continuous->first == -4.0);
    CHECK(config.box_continuous->second == 4.0);

    kv["box_continuous"] = "4";
    CHECK_THROWS_AS((void)config_from_map(kv), std::invalid_argument);
    kv["box_continuous"] = "5,1";
    CHECK_THROWS_AS((void)config_from_map(kv), std::invalid_argument);
  }

  SUBCASE("rejections") {
    auto with = [](std::map<std::string, std::string> kv,
                   const std::string& key, const std::string& value) {
      kv[key] = value;
      return kv;
    };
    CHECK_THROWS_AS((void)config_from_map(with(minimal_map(), "mystery", "1")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)config_from_map(with(minimal_map(), "n", "abc")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)config_from_map(with(minimal_map(), "n", "21")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)config_from_map(with(minimal_map(), "trials", "0")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)config_from_map(with(minimal_map(), "threads", "0")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)config_from_map(with(minimal_map(), "alpha", "0.5")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)config_from_map(with(minimal_map(), "alpha", "-0.1")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)config_from_map(with(minimal_map(), "budget_evals", "-1")),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)config_from_map(with(minimal_map(), "integer_low", "-3")),
        std::invalid_argument);
    // alpha is a margin knob, lambda a multi-objective one.
    auto im = minimal_map();
    im["algorithm"] = "cma-es-im";
    CHECK_THROWS_AS((void)config_from_map(with(im, "alpha", "0.1")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)config_from_map(with(minimal_map(), "lambda", "8")),
                    std::invalid_argument);
    // Arity mismatches.
    auto mo = minimal_map();
    mo["algorithm"] = "mo-cma-es";
    CHECK_THROWS_AS((void)config_from_map(mo), std::invalid_argument);
    auto single = minimal_map();
    single["benchmark"] = "dslotz";
    CHECK_THROWS_AS((void)config_from_map(single), std::invalid_argument);
    // Required keys.
    CHECK_THROWS_AS((void)config_from_map({{"benchmark", "sphere-int"},
                                           {"n", "8"}}),
                    std::invalid_argument);
  }

  SUBCASE("alpha = 0 is allowed and disables the margin") {
    auto kv = minimal_map();
    kv["alpha"] = "0";
    const ExperimentConfig config = config_from_map(kv);
    CHECK(resolved_alpha(config) == 0.0);
  }
}

TEST_CASE("algorithm names round-trip") {
  for (const char* name : {"cma-es-margin", "cma-es-im", "cma-es-im-box",
                           "mo-cma-es", "mo-cma-es-margin"}) {
    CHECK(algorithm_name(algorithm_from_name(name)) == std::string(name));
  }
  CHECK_THROWS_AS((void)algorithm_from_name("annealing"),
                  std::invalid_argument);
  CHECK(is_multi_objective(Algorithm::mo_cma_es));
  CHECK(!is_multi_objective(Algorithm::cma_es_im));
  CHECK(uses_margin(Algorithm::cma_es_margin));
  CHECK(uses_margin(Algorithm::mo_cma_es_margin));
  CHECK(!uses_margin(Algorithm::cma_es_im_box));
}

TEST_CASE("csv_number renders shortest round-trip forms") {
  CHECK(csv_number(42) == "42");
  CHECK(csv_number(0) == "0");
  CHECK(csv_number(-3) == "-3");
  CHECK(csv_number(0.5) == "0.5");
  CHECK(csv_number(0.1) == "0.1");
  CHECK(csv_number(2.5) == "2.5");
  CHECK(csv_number(static_cast<unsigned long long>(1) << 63) ==
        "9223372036854775808");
  for (double v : {1.0 / 3.0, 6022.1408, 1e-300, 12345.6789, 0.004166666666666667}) {
    const std::string s = csv_number(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("CsvTable quotes per RFC 4180 and round-trips through parse_csv") {
  CHECK_THROWS_AS(CsvTable(std::vector<std::string>{}), std::invalid_argument);

  CsvTable table({"name", "note"});
  table.add_row({"plain", "with,comma"});
  table.add_row({"quote\"inside", "line\nbreak"});
  table.add_row({"", "crlf\r\ntail"});
  CHECK_THROWS_AS(table.add_row({"only-one"}), std::invalid_argument);

  const std::string text = table.render();
  CHECK(text.find("\"with,comma\"") != std::string::npos);
  CHECK(text.find("\"quote\"\"inside\"") != std::string::npos);

  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"name", "note"});
  CHECK(rows[1] == std::vector<std::string>{"plain", "with,comma"});
  CHECK(rows[2] == std::vector<std::string>{"quote\"inside", "line\nbreak"});
  CHECK(rows[3] == std::vector<std::string>{"", "crlf\r\ntail"});
}

TEST_CASE("parse_csv handles endings and errors") {
  CHECK(parse_csv("").empty());
  const auto crlf = parse_csv("a,b\r\n1,2\r\n");
  REQUIRE(crlf.size() == 2);
  CHECK(crlf[1] == std::vector<std::string>{"1", "2"});
  // Last line without a newline still counts.
  const auto bare = parse_csv("a,b\n1,2");
  REQUIRE(bare.size() == 2);
  CHECK(bare[1] == std::vector<std::string>{"1", "2"});
  const auto empties = parse_csv(",x\n");
  REQUIRE(empties.size() == 1);
  CHECK(empties[0] == std::vector<std::string>{"", "x"});
  CHECK_THROWS_AS((void)parse_csv("\"open\n"), std::invalid_argument);
}

TEST_CASE("aggregate summarizes successful trials") {
  auto record = [](bool success, long evals) {
    TrialRecord r;
    r.success = success;
    r.evaluations = evals;
    return r;
  };

  std::vector<TrialRecord> records{record(true, 3), record(false, 999),
                                   record(true, 1), record(true, 2)};
  Summary summary = aggregate(records);
  CHECK(summary.trials == 4);
  CHECK(summary.successes == 3);
  REQUIRE(summary.median_evals.has_value());
  CHECK(*summary.median_evals == 2.0);

  std::vector<TrialRecord> four{record(true, 1), record(true, 2),
                                record(true, 3), record(true, 4)};
  summary = aggregate(four);
  REQUIRE(summary.iqr.has_value());
  CHECK(*summary.iqr == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(*summary.median_evals == doctest::Approx(2.5).epsilon(1e-15));

  std::vector<TrialRecord> failed{record(false, 10)};
  summary = aggregate(failed);
  CHECK(summary.successes == 0);
  CHECK(!summary.median_evals.has_value());
  CHECK(!summary.iqr.has_value());

  CHECK_THROWS_AS((void)aggregate({}), std::invalid_argument);
}

TEST_CASE("run_trial is deterministic and separates seeds") {
  ExperimentConfig config = quick_config("cma-es-margin", "sphere-int", 6,
                                         20000);
  const TrialRecord a = run_trial(config, 12345);
  const TrialRecord b = run_trial(config, 12345);
  check_records_equal(a, b);
  const TrialRecord c = run_trial(config, 54321);
  CHECK((a.best_f != c.best_f || a.evaluations != c.evaluations));
}

TEST_CASE("zero budget terminates before any evaluation") {
  ExperimentConfig config = quick_config("cma-es-im", "sphere-int", 6, 0);
  const TrialRecord record = run_trial(config, 9, true);
  CHECK(record.termination == Termination::budget_exhausted);
  CHECK(record.evaluations == 0);
  CHECK(!record.success);
  CHECK(record.history.empty());
}

TEST_CASE("margin runs solve sphere-int at n = 20 inside the expected window") {
  ExperimentConfig config = quick_config("cma-es-margin", "sphere-int", 20,
                                         1000000);
  config.trials = 3;
  const auto records = run_trials(config);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrialRecord& record = records[i];
    CHECK(record.seed == derive_seed(config.master_seed, i));
    CHECK(record.success);
    CHECK(record.termination == Termination::success);
    CHECK(record.evaluations >= 2000);
    CHECK(record.evaluations <= 6500);
    CHECK(record.best_f < 1e-10);
  }
}

TEST_CASE("run_trials output does not depend on the thread count") {
  ExperimentConfig config = quick_config("cma-es-im", "sphere-onemax", 6,
                                         5000);
  config.trials = 6;
  config.threads = 1;
  const auto serial = run_trials(config);
  config.threads = 3;
  const auto threaded = run_trials(config);
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    check_records_equal(serial[i], threaded[i]);

  // Byte-identical CSV renders as a consequence.
  CHECK(trials_table(config, serial).render() ==
        trials_table(config, threaded).render());
}

TEST_CASE("margin trial with alpha 0 replays as a plain CMA-ES loop") {
  ExperimentConfig config = quick_config("cma-es-margin", "sphere-onemax", 6,
                                         10000);
  config.alpha = 0.0;
  const std::uint64_t seed = 31337;
  const TrialRecord record = run_trial(config, seed, true);

  BenchmarkSpec bench = make_benchmark("sphere-onemax", 6);
  const CmaParams params = default_params(6, 0.0);
  RngStream rng(seed);
  CmaState state = make_initial_state(draw_initial_mean(bench, rng),
                                      bench.init.sigma0);
  double best_f = std::numeric_limits<double>::infinity();
  long evals = 0;
  std::optional<Termination> stop;
  while (true) {
    const SpdFactors factors = factorize_spd(state.C);
    stop = termination_check(state, factors, best_f, evals, 10000,
                             params.lambda);
    if (stop) break;
    const auto population = sample_population(state, params, factors, rng);
    std::vector<double> fitness;
    for (const Candidate& cand : population) {
      const std::vector<double> encoded = bench.space.encode(
          std::span<const double>(cand.v.data(),
                                  static_cast<std::size_t>(cand.v.size())));
      fitness.push_back(bench.objective(encoded));
    }
    evals += params.lambda;
    const std::vector<int> order = rank_by_fitness(fitness);
    best_f = std::min(best_f,
                      fitness[static_cast<std::size_t>(order.front())]);
    state = update_step(state, params, population, order, factors);
  }

  CHECK(record.termination == *stop);
  CHECK(record.evaluations == evals);
  CHECK(record.best_f == best_f);
  REQUIRE(!record.history.empty());
  const IterationSample& last = record.history.back();
  CHECK(last.iteration == state.t);
  CHECK(last.evaluations == evals);
  CHECK(last.sigma == doctest::Approx(state.sigma).epsilon(1e-12));
  for (int j = 0; j < 6; ++j) {
    CHECK(last.mean[static_cast<std::size_t>(j)] ==
          doctest::Approx(state.m(j)).epsilon(1e-12));
    CHECK(last.stddev[static_cast<std::size_t>(j)] ==
          doctest::Approx(state.sigma * std::sqrt(state.C(j, j)))
              .epsilon(1e-12));
  }
}

TEST_CASE("trials_table renders the documented schema") {
  ExperimentConfig config = quick_config("cma-es-im", "sphere-onemax", 6,
                                         3000);
  config.trials = 2;
  const auto records = run_trials(config);
  const CsvTable table = trials_table(config, records);
  CHECK(table.header() ==
        std::vector<std::string>{"function", "N", "algorithm", "alpha", "seed",
                                 "success", "evaluations", "best_f",
                                 "termination"});
  REQUIRE(table.rows().size() == 2);
  const auto& row = table.rows()[0];
  CHECK(row[0] == "sphere-onemax");
  CHECK(row[1] == "6");
  CHECK(row[2] == "cma-es-im");
  CHECK(row[3] == "0");  // non-margin algorithms log alpha 0
  CHECK(row[4] == csv_number(static_cast<unsigned long long>(records[0].seed)));
  CHECK((row[5] == "true" || row[5] == "false"));
  CHECK(row[6] == csv_number(records[0].evaluations));
  CHECK(row[7] == csv_number(records[0].best_f));
  CHECK(row[8] == termination_name(records[0].termination));

  ExperimentConfig margin = quick_config("cma-es-margin", "sphere-onemax", 6,
                                         3000);
  margin.trials = 1;
  const auto margin_records = run_trials(margin);
  const CsvTable margin_table = trials_table(margin, margin_records);
  CHECK(margin_table.rows()[0][3] == csv_number(resolved_alpha(margin)));
}

TEST_CASE("summary_table uses '-' when nothing succeeded") {
  ExperimentConfig config = quick_config("cma-es-im", "sphere-onemax", 6, 200);
  config.trials = 2;
  const auto records = run_trials(config);
  const Summary summary = aggregate(records);
  const CsvTable table = summary_table(config, summary);
  CHECK(table.header() ==
        std::vector<std::string>{"function", "N", "algorithm", "alpha",
                                 "trials", "successes", "median_evals", "iqr"});
  REQUIRE(table.rows().size() == 1);
  if (summary.successes == 0) {
    CHECK(table.rows()[0][6] == "-");
    CHECK(table.rows()[0][7] == "-");
  } else {
    CHECK(table.rows()[0][6] == csv_number(*summary.median_evals));
  }
}

TEST_CASE("trace_table lays out mean and stddev columns per dimension") {
  ExperimentConfig config = quick_config("cma-es-margin", "sphere-int", 4,
                                         500);
  const TrialRecord record = run_trial(config, 7, true);
  REQUIRE(!record.history.empty());
  const CsvTable table = trace_table(record, 4);
  std::vector<std::string> want{"iteration", "evaluations", "sigma", "best_f"};
  for (int j = 1; j <= 4; ++j) want.push_back("m_" + std::to_string(j));
  for (int j = 1; j <= 4; ++j) want.push_back("sd_" + std::to_string(j));
  CHECK(table.header() == want);
  REQUIRE(table.rows().size() == record.history.size());
  const auto& row = table.rows()[0];
  const IterationSample& sample = record.history[0];
  CHECK(row[0] == csv_number(sample.iteration));
  CHECK(row[2] == csv_number(sample.sigma));
  CHECK(row[4] == csv_number(sample.mean[0]));
  CHECK(row[8] == csv_number(sample.stddev[0]));

  // The rendered text re-parses into the same cells.
  const auto parsed = parse_csv(table.render());
  REQUIRE(parsed.size() == table.rows().size() + 1);
  CHECK(parsed[0] == table.header());
  CHECK(parsed[1] == table.rows()[0]);
}

TEST_CASE("multi-objective trials record history and final population") {
  ExperimentConfig config;
  config.algorithm = Algorithm::mo_cma_es;
  config.benchmark = "dslotz";
  config.n = 6;
  config.lambda = 4;
  config.mo_iterations = 5;
  config.trials = 1;
  validate_config(config);

  const TrialRecord record = run_trial(config, 77);
  CHECK(record.evaluations == 4 * 6);  // lambda * (iterations + 1)
  CHECK(!record.success);
  CHECK(record.termination == Termination::budget_exhausted);
  REQUIRE(record.mo_history.size() == 6);
  CHECK(record.mo_history.front().iteration == 0);
  CHECK(record.mo_history.back().iteration == 5);
  REQUIRE(record.final_population.size() == 4);
  CHECK(record.best_f == record.mo_history.back().hypervolume);
  // dslotz has binary dims, so the margin statistics are finite.
  CHECK(std::isfinite(record.mo_history.back().p_med_min));

  const CsvTable trace = mo_trace_table(record);
  CHECK(trace.header() ==
        std::vector<std::string>{"iteration", "hypervolume", "p_med_min",
                                 "p_med_median"});
  CHECK(trace.rows().size() == 6);

  const CsvTable finals = mo_final_table(record, 6);
  std::vector<std::string> want{"individual", "f1", "f2"};
  for (int j = 1; j <= 6; ++j) want.push_back("v_" + std::to_string(j));
  CHECK(finals.header() == want);
  CHECK(finals.rows().size() == 4);
  CHECK(finals.rows()[0][1] == csv_number(record.final_population[0].f[0]));

  // Deterministic rerun, identical history.
  const TrialRecord again = run_trial(config, 77);
  REQUIRE(again.mo_history.size() == record.mo_history.size());
  for (std::size_t i = 0; i < record.mo_history.size(); ++i) {
    CHECK(again.mo_history[i].hypervolume ==
          record.mo_history[i].hypervolume);
    CHECK(again.mo_history[i].p_med_min == record.mo_history[i].p_med_min);
  }
}

TEST_CASE("sweep_exponent_grid spans 48 cells without the origin") {
  const auto grid = sweep_exponent_grid();
  CHECK(grid.size() == 48);
  for (const auto& [m, n] : grid) {
    CHECK(!(m == 0.0 && n == 0.0));
    CHECK(m >= 0.0);
    CHECK(m <= 3.0);
    CHECK(n >= 0.0);
    CHECK(n <= 3.0);
  }
  // All distinct.
  auto sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());

  ExperimentConfig bad = quick_config("cma-es-im", "sphere-int", 6, 100);
  CHECK_THROWS_AS((void)alpha_sweep(bad), std::invalid_argument);
}
