#include "mibbo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mibbo/cma_params.hpp"
#include "mibbo/im.hpp"
#include "mibbo/margin.hpp"
#include "mibbo/matrix.hpp"
#include "mibbo/stats.hpp"

namespace mibbo {
namespace {

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("config key '" + key +
                                "': not a number: " + value);
  return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("config key '" + key +
                                "': not an integer: " + value);
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("config key '" + key +
                                "': not an unsigned integer: " + value);
  return out;
}

std::pair<double, double> parse_interval(const std::string& key,
                                         const std::string& value) {
  const std::size_t comma = value.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("config key '" + key +
                                "': expected 'low,high'");
  double lo = parse_double(key, std::string(value.substr(0, comma)));
  double hi = parse_double(key, std::string(value.substr(comma + 1)));
  if (!(lo <= hi))
    throw std::invalid_argument("config key '" + key +
                                "': low must not exceed high");
  return {lo, hi};
}

BenchmarkSpec build_benchmark(const ExperimentConfig& config) {
  BenchmarkOptions options;
  options.integer_range = config.integer_range;
  return make_benchmark(config.benchmark, config.n, options);
}

BoxConstraint build_box(const ExperimentConfig& config,
                        const MixedIntegerSpace& space) {
  BoxConstraint box;
  box.bounds.resize(static_cast<std::size_t>(space.size()));
  for (int j = 0; j < space.size(); ++j) {
    const Dimension& dim = space.dim(j);
    auto& bound = box.bounds[static_cast<std::size_t>(j)];
    if (dim.is_continuous()) {
      bound = config.box_continuous;  // unbounded unless configured
    } else if (dim.is_binary()) {
      bound = config.box_binary.value_or(std::pair{-1.0, 1.0});
    } else {
      bound = config.box_integer.value_or(
          std::pair{dim.values.front(), dim.values.back()});
    }
  }
  return box;
}

double evaluate_candidate(const BenchmarkSpec& bench,
                          const MixedIntegerSpace& space,
                          const Eigen::VectorXd& point) {
  const std::vector<double> encoded = space.encode(std::span<const double>(
      point.data(), static_cast<std::size_t>(point.size())));
  return bench.objective(encoded);
}

void record_iteration(TrialRecord& record, const CmaState& state, long evals,
                      double best_f) {
  IterationSample sample;
  sample.iteration = state.t;
  sample.evaluations = evals;
  sample.sigma = state.sigma;
  sample.best_f = best_f;
  const int n = state.n();
  sample.mean.resize(static_cast<std::size_t>(n));
  sample.stddev.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    sample.mean[static_cast<std::size_t>(j)] = state.m(j);
    sample.stddev[static_cast<std::size_t>(j)] =
        state.sigma * std::sqrt(std::max(0.0, state.C(j, j)));
  }
  record.history.push_back(std::move(sample));
}

TrialRecord run_single_objective_trial(const ExperimentConfig& config,
                                       std::uint64_t seed,
                                       bool record_history) {
  const BenchmarkSpec bench = build_benchmark(config);
  const MixedIntegerSpace& space = bench.space;
  const int n = config.n;
  const bool margin_algo = config.algorithm == Algorithm::cma_es_margin;
  const bool box_algo = config.algorithm == Algorithm::cma_es_im_box;

  const CmaParams params = config.alpha.has_value()
                               ? default_params(n, *config.alpha)
                               : default_params(n);
  const double alpha = margin_algo ? resolved_alpha(config) : 0.0;
  const long budget = resolved_budget(config);

  RngStream rng(seed);
  CmaState state = make_initial_state(draw_initial_mean(bench, rng),
                                      bench.init.sigma0);
  const Eigen::VectorXd s = default_granularity(space);
  const BoxConstraint box =
      box_algo ? build_box(config, space) : BoxConstraint{};
  std::optional<Eigen::VectorXd> prev_best;

  TrialRecord record;
  record.seed = seed;
  double best_f = std::numeric_limits<double>::infinity();
  long evals = 0;

  while (true) {
    try {
      const SpdFactors factors = factorize_spd(state.C);
      if (const auto reason = termination_check(state, factors, best_f, evals,
                                                budget, params.lambda)) {
        record.termination = *reason;
        break;
      }

      std::vector<Candidate> population =
          sample_population(state, params, factors, rng);
      if (!margin_algo) {
        const std::vector<int> J = mutation_index_set(state, s, rng);
        const int lambda_int =
            mutation_count(static_cast<int>(J.size()), params.lambda, n);
        const std::vector<Eigen::VectorXd> mutations = integer_mutation(
            state, J, lambda_int, params.lambda, s, prev_best, rng);
        for (int i = 0; i < params.lambda; ++i)
          population[static_cast<std::size_t>(i)].x +=
              s.cwiseProduct(mutations[static_cast<std::size_t>(i)]);
      }

      std::vector<double> fitness(static_cast<std::size_t>(params.lambda));
      for (int i = 0; i < params.lambda; ++i) {
        const Candidate& cand = population[static_cast<std::size_t>(i)];
        double value;
        if (margin_algo) {
          value = evaluate_candidate(bench, space, cand.v);
        } else if (box_algo) {
          auto [feasible, penalty] = box_penalty(cand.x, box);
          value = evaluate_candidate(bench, space, feasible) + penalty;
        } else {
          value = evaluate_candidate(bench, space, cand.x);
        }
        fitness[static_cast<std::size_t>(i)] = value;
      }
      evals += params.lambda;
      const std::vector<int> order = rank_by_fitness(fitness);
      best_f = std::min(best_f,
                        fitness[static_cast<std::size_t>(order.front())]);

      if (margin_algo) {
        state = update_step(state, params, population, order, factors);
        margin_correction(state, space, alpha);
      } else {
        const Eigen::VectorXd mask = csa_mask(state, params, s);
        state = update_step(state, params, population, order, factors,
                            std::span<const double>(
                                mask.data(), static_cast<std::size_t>(n)));
        prev_best = population[static_cast<std::size_t>(order.front())].x;
      }
    } catch (const definiteness_error&) {
      record.termination = Termination::numerical_error;
      break;
    }
    if (record_history) record_iteration(record, state, evals, best_f);
  }

  record.evaluations = evals;
  record.best_f = best_f;
  record.success = record.termination == Termination::success;
  return record;
}

MoIterationSample mo_sample(long iteration,
                            const std::vector<MoIndividual>& population,
                            const MixedIntegerSpace& space,
                            const std::array<double, 2>& ref) {
  MoIterationSample sample;
  sample.iteration = iteration;
  sample.hypervolume = population_hypervolume(population, ref);
  if (space.n_binary() == 0) {
    sample.p_med_min = std::numeric_limits<double>::quiet_NaN();
    sample.p_med_median = sample.p_med_min;
    return sample;
  }
  std::vector<double> p_meds;
  p_meds.reserve(population.size());
  for (const MoIndividual& ind : population)
    p_meds.push_back(median_margin_probability(ind, space));
  sample.p_med_min = *std::min_element(p_meds.begin(), p_meds.end());
  sample.p_med_median = percentile(std::move(p_meds), 0.5);
  return sample;
}

TrialRecord run_multi_objective_trial(const ExperimentConfig& config,
                                      std::uint64_t seed) {
  const BenchmarkSpec bench = build_benchmark(config);
  const MixedIntegerSpace& space = bench.space;
  const int lambda = resolved_mo_lambda(config);
  const double alpha = config.algorithm == Algorithm::mo_cma_es_margin
                           ? resolved_alpha(config)
                           : 0.0;
  const MoParams params = default_mo_params(config.n, lambda, alpha);

  RngStream rng(seed);
  const MoObjective objective = bench.objective2;
  std::vector<MoIndividual> population;
  population.reserve(static_cast<std::size_t>(lambda));
  for (int i = 0; i < lambda; ++i)
    population.push_back(make_mo_individual(draw_initial_point(bench, rng),
                                            bench.init.sigma0, params, space,
                                            objective));

  TrialRecord record;
  record.seed = seed;
  record.mo_history.push_back(
      mo_sample(0, population, space, params.reference_point));
  long iterations = 0;
  record.termination = Termination::budget_exhausted;
  for (int iter = 1; iter <= config.mo_iterations; ++iter) {
    try {
      mo_step(population, params, space, objective, rng);
    } catch (const definiteness_error&) {
      record.termination = Termination::numerical_error;
      break;
    }
    iterations = iter;
    record.mo_history.push_back(
        mo_sample(iter, population, space, params.reference_point));
  }
  // Physical count: the initial population plus one offspring per parent per
  // iteration.
  record.evaluations = static_cast<long>(lambda) * (iterations + 1);
  record.best_f = record.mo_history.back().hypervolume;
  record.success = false;
  record.final_population = std::move(population);
  return record;
}

std::string bool_field(bool b) { return b ? "true" : "false"; }

}  // namespace

Algorithm algorithm_from_name(std::string_view name) {
  if (name == "cma-es-margin") return Algorithm::cma_es_margin;
  if (name == "cma-es-im") return Algorithm::cma_es_im;
  if (name == "cma-es-im-box") return Algorithm::cma_es_im_box;
  if (name == "mo-cma-es") return Algorithm::mo_cma_es;
  if (name == "mo-cma-es-margin") return Algorithm::mo_cma_es_margin;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::cma_es_margin: return "cma-es-margin";
    case Algorithm::cma_es_im: return "cma-es-im";
    case Algorithm::cma_es_im_box: return "cma-es-im-box";
    case Algorithm::mo_cma_es: return "mo-cma-es";
    case Algorithm::mo_cma_es_margin: return "mo-cma-es-margin";
  }
  return "unknown";
}

bool is_multi_objective(Algorithm algorithm) {
  return algorithm == Algorithm::mo_cma_es ||
         algorithm == Algorithm::mo_cma_es_margin;
}

bool uses_margin(Algorithm algorithm) {
  return algorithm == Algorithm::cma_es_margin ||
         algorithm == Algorithm::mo_cma_es_margin;
}

ExperimentConfig config_from_map(
    const std::map<std::string, std::string>& kv) {
  ExperimentConfig config;
  bool has_algorithm = false, has_benchmark = false, has_n = false;
  std::optional<int> integer_low, integer_high;

  for (const auto& [key, value] : kv) {
    if (key == "algorithm") {
      config.algorithm = algorithm_from_name(value);
      has_algorithm = true;
    } else if (key == "benchmark") {
      config.benchmark = value;
      has_benchmark = true;
    } else if (key == "n") {
      config.n = static_cast<int>(parse_integer(key, value));
      has_n = true;
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_integer(key, value));
    } else if (key == "seed") {
      config.master_seed = parse_u64(key, value);
    } else if (key == "alpha") {
      config.alpha = parse_double(key, value);
    } else if (key == "lambda") {
      config.lambda = static_cast<int>(parse_integer(key, value));
    } else if (key == "budget_evals") {
      config.budget_evals = static_cast<long>(parse_integer(key, value));
    } else if (key == "mo_iterations") {
      config.mo_iterations = static_cast<int>(parse_integer(key, value));
    } else if (key == "integer_low") {
      integer_low = static_cast<int>(parse_integer(key, value));
    } else if (key == "integer_high") {
      integer_high = static_cast<int>(parse_integer(key, value));
    } else if (key == "box_continuous") {
      config.box_continuous = parse_interval(key, value);
    } else if (key == "box_binary") {
      config.box_binary = parse_interval(key, value);
    } else if (key == "box_integer") {
      config.box_integer = parse_interval(key, value);
    } else if (key == "threads") {
      config.threads = static_cast<int>(parse_integer(key, value));
    } else if (key == "out") {
      config.out_dir = value;
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }

  if (!has_algorithm) throw std::invalid_argument("config: missing algorithm");
  if (!has_benchmark) throw std::invalid_argument("config: missing benchmark");
  if (!has_n) throw std::invalid_argument("config: missing n");
  if (integer_low.has_value() != integer_high.has_value())
    throw std::invalid_argument(
        "config: integer_low and integer_high must be set together");
  if (integer_low) config.integer_range = std::pair{*integer_low, *integer_high};
  validate_config(config);
  return config;
}

void validate_config(const ExperimentConfig& config) {
  if (config.trials < 1)
    throw std::invalid_argument("config: trials must be >= 1");
  if (config.threads < 1)
    throw std::invalid_argument("config: threads must be >= 1");
  if (config.alpha && (!(*config.alpha >= 0.0) || *config.alpha >= 0.5))
    throw std::invalid_argument("config: alpha must lie in [0, 0.5)");
  if (config.alpha && !uses_margin(config.algorithm))
    throw std::invalid_argument(
        "config: alpha applies to margin algorithms only");
  if (config.lambda) {
    if (!is_multi_objective(config.algorithm))
      throw std::invalid_argument(
          "config: lambda applies to multi-objective algorithms only");
    if (*config.lambda < 1)
      throw std::invalid_argument("config: lambda must be >= 1");
  }
  if (config.budget_evals && *config.budget_evals < 0)
    throw std::invalid_argument("config: budget_evals must be >= 0");
  if (config.mo_iterations < 0)
    throw std::invalid_argument("config: mo_iterations must be >= 0");

  const BenchmarkSpec bench = build_benchmark(config);  // validates name, n
  const bool mo = is_multi_objective(config.algorithm);
  if (mo && bench.arity != 2)
    throw std::invalid_argument("config: benchmark '" + config.benchmark +
                                "' has one objective; needs two");
  if (!mo && bench.arity != 1)
    throw std::invalid_argument("config: benchmark '" + config.benchmark +
                                "' has two objectives; needs one");
}

long resolved_budget(const ExperimentConfig& config) {
  return config.budget_evals.value_or(1'000'000L);
}

int resolved_mo_lambda(const ExperimentConfig& config) {
  return config.lambda.value_or(10);
}

double resolved_alpha(const ExperimentConfig& config) {
  if (config.alpha) return *config.alpha;
  const int lambda = is_multi_objective(config.algorithm)
                         ? resolved_mo_lambda(config)
                         : default_params(config.n).lambda;
  return 1.0 / (static_cast<double>(config.n) * lambda);
}

TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t seed,
                      bool record_history) {
  if (is_multi_objective(config.algorithm))
    return run_multi_objective_trial(config, seed);
  return run_single_objective_trial(config, seed, record_history);
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& config,
                                    bool record_history) {
  validate_config(config);
  const int trials = config.trials;
  std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
  const int workers = std::min(config.threads, trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    while (true) {
      const int index = next.fetch_add(1);
      if (index >= trials) return;
      try {
        records[static_cast<std::size_t>(index)] =
            run_trial(config,
                      derive_seed(config.master_seed,
                                  static_cast<std::uint64_t>(index)),
                      record_history);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

Summary aggregate(const std::vector<TrialRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("aggregate: needs at least one record");
  Summary summary;
  summary.trials = static_cast<int>(records.size());
  std::vector<double> evals;
  for (const TrialRecord& record : records) {
    if (!record.success) continue;
    ++summary.successes;
    evals.push_back(static_cast<double>(record.evaluations));
  }
  if (!evals.empty()) {
    summary.median_evals = percentile(evals, 0.5);
    summary.iqr = percentile(evals, 0.75) - percentile(evals, 0.25);
  }
  return summary;
}

std::vector<std::pair<double, double>> sweep_exponent_grid() {
  const double steps[] = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<std::pair<double, double>> grid;
  for (double m : steps)
    for (double n : steps)
      if (!(m == 0.0 && n == 0.0)) grid.emplace_back(m, n);
  return grid;
}

std::vector<SweepCell> alpha_sweep(const ExperimentConfig& config) {
  if (config.algorithm != Algorithm::cma_es_margin)
    throw std::invalid_argument("alpha_sweep: requires cma-es-margin");
  const int lambda = default_params(config.n).lambda;
  std::vector<SweepCell> cells;
  for (const auto& [m, n] : sweep_exponent_grid()) {
    SweepCell cell;
    cell.m_exponent = m;
    cell.n_exponent = n;
    cell.alpha = std::pow(static_cast<double>(config.n), -m) *
                 std::pow(static_cast<double>(lambda), -n);
    ExperimentConfig cell_config = config;
    cell_config.alpha = cell.alpha;
    if (!cell_config.budget_evals) cell_config.budget_evals = 100'000L;
    cell.summary = aggregate(run_trials(cell_config));
    cells.push_back(std::move(cell));
  }
  return cells;
}

CsvTable trials_table(const ExperimentConfig& config,
                      const std::vector<TrialRecord>& records) {
  CsvTable table({"function", "N", "algorithm", "alpha", "seed", "success",
                  "evaluations", "best_f", "termination"});
  const double alpha =
      uses_margin(config.algorithm) ? resolved_alpha(config) : 0.0;
  for (const TrialRecord& record : records) {
    table.add_row({config.benchmark, csv_number(config.n),
                   algorithm_name(config.algorithm), csv_number(alpha),
                   csv_number(static_cast<unsigned long long>(record.seed)),
                   bool_field(record.success), csv_number(record.evaluations),
                   csv_number(record.best_f),
                   termination_name(record.termination)});
  }
  return table;
}

CsvTable summary_table(const ExperimentConfig& config,
                       const Summary& summary) {
  CsvTable table({"function", "N", "algorithm", "alpha", "trials", "successes",
                  "median_evals", "iqr"});
  const double alpha =
      uses_margin(config.algorithm) ? resolved_alpha(config) : 0.0;
  table.add_row(
      {config.benchmark, csv_number(config.n),
       algorithm_name(config.algorithm), csv_number(alpha),
       csv_number(summary.trials), csv_number(summary.successes),
       summary.median_evals ? csv_number(*summary.median_evals)
                            : std::string("-"),
       summary.iqr ? csv_number(*summary.iqr) : std::string("-")});
  return table;
}

CsvTable sweep_table(const std::vector<SweepCell>& cells) {
  CsvTable table({"m", "n", "alpha", "success_rate", "median_evals", "iqr"});
  for (const SweepCell& cell : cells) {
    const double rate =
        static_cast<double>(cell.summary.successes) / cell.summary.trials;
    table.add_row({csv_number(cell.m_exponent), csv_number(cell.n_exponent),
                   csv_number(cell.alpha), csv_number(rate),
                   cell.summary.median_evals
                       ? csv_number(*cell.summary.median_evals)
                       : std::string("-"),
                   cell.summary.iqr ? csv_number(*cell.summary.iqr)
                                    : std::string("-")});
  }
  return table;
}

CsvTable trace_table(const TrialRecord& record, int n) {
  std::vector<std::string> header{"iteration", "evaluations", "sigma",
                                  "best_f"};
  for (int j = 1; j <= n; ++j) header.push_back("m_" + std::to_string(j));
  for (int j = 1; j <= n; ++j) header.push_back("sd_" + std::to_string(j));
  CsvTable table(std::move(header));
  for (const IterationSample& sample : record.history) {
    std::vector<std::string> row{
        csv_number(sample.iteration), csv_number(sample.evaluations),
        csv_number(sample.sigma), csv_number(sample.best_f)};
    for (double m : sample.mean) row.push_back(csv_number(m));
    for (double sd : sample.stddev) row.push_back(csv_number(sd));
    table.add_row(std::move(row));
  }
  return table;
}

CsvTable mo_trace_table(const TrialRecord& record) {
  CsvTable table({"iteration", "hypervolume", "p_med_min", "p_med_median"});
  for (const MoIterationSample& sample : record.mo_history) {
    table.add_row({csv_number(sample.iteration),
                   csv_number(sample.hypervolume),
                   csv_number(sample.p_med_min),
                   csv_number(sample.p_med_median)});
  }
  return table;
}

CsvTable mo_final_table(const TrialRecord& record, int n) {
  std::vector<std::string> header{"individual", "f1", "f2"};
  for (int j = 1; j <= n; ++j) header.push_back("v_" + std::to_string(j));
  CsvTable table(std::move(header));
  for (std::size_t i = 0; i < record.final_population.size(); ++i) {
    const MoIndividual& ind = record.final_population[i];
    std::vector<std::string> row{csv_number(static_cast<long long>(i)),
                                 csv_number(ind.f[0]), csv_number(ind.f[1])};
    for (int j = 0; j < n; ++j) row.push_back(csv_number(ind.v_bar(j)));
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace mibbo
