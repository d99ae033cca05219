#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mibbo/benchmarks.hpp"
#include "mibbo/cmaes.hpp"
#include "mibbo/csv.hpp"
#include "mibbo/mo.hpp"

namespace mibbo {

enum class Algorithm {
  cma_es_margin,
  cma_es_im,
  cma_es_im_box,
  mo_cma_es,
  mo_cma_es_margin,
};

Algorithm algorithm_from_name(std::string_view name);
const char* algorithm_name(Algorithm algorithm);
bool is_multi_objective(Algorithm algorithm);
bool uses_margin(Algorithm algorithm);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::cma_es_margin;
  std::string benchmark;
  int n = 0;
  int trials = 100;
  std::uint64_t master_seed = 1;
  // Margin strength; defaults to 1/(n * lambda) when unset. 0 disables the
  // correction. Ignored by the im variants.
  std::optional<double> alpha;
  std::optional<int> lambda;  // multi-objective population size (default 10)
  // Single-objective evaluation cap; defaults to 1e6 (1e5 inside the alpha
  // sweep, whose failing cells would otherwise burn the full budget).
  std::optional<long> budget_evals;
  int mo_iterations = 2000;
  std::optional<std::pair<int, int>> integer_range;
  // Box intervals per dimension group for cma-es-im-box. Binary dims default
  // to [-1, 1] and integer dims to their value range when unset.
  std::optional<std::pair<double, double>> box_continuous;
  std::optional<std::pair<double, double>> box_binary;
  std::optional<std::pair<double, double>> box_integer;
  int threads = 1;
  std::filesystem::path out_dir = ".";
};

// Builds a config from parsed key=value pairs; unknown keys, malformed
// values, and out-of-range settings raise std::invalid_argument.
ExperimentConfig config_from_map(
    const std::map<std::string, std::string>& kv);

// Cheap full validation (benchmark exists, arity matches the algorithm,
// ranges sane) so trial workers cannot hit configuration errors.
void validate_config(const ExperimentConfig& config);

long resolved_budget(const ExperimentConfig& config);
int resolved_mo_lambda(const ExperimentConfig& config);

struct IterationSample {
  long iteration = 0;
  long evaluations = 0;
  double sigma = 0.0;
  double best_f = 0.0;
  std::vector<double> mean;    // m_j
  std::vector<double> stddev;  // sigma * sqrt(C_jj)
};

struct MoIterationSample {
  long iteration = 0;
  double hypervolume = 0.0;
  double p_med_min = 0.0;     // NaN when the space has no binary dims
  double p_med_median = 0.0;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  bool success = false;
  long evaluations = 0;
  double best_f = std::numeric_limits<double>::infinity();
  Termination termination = Termination::budget_exhausted;
  std::vector<IterationSample> history;       // trace runs only
  std::vector<MoIterationSample> mo_history;  // multi-objective runs
  std::vector<MoIndividual> final_population; // multi-objective runs
};

// One full optimization run, deterministic given (config, seed). Numerical
// aborts surface as Termination::numerical_error in the record, never as
// exceptions.
TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t seed,
                      bool record_history = false);

// All configured trials with seeds derive_stream(master_seed, index), run
// across config.threads workers; records are indexed by trial, so the output
// is identical for any thread count.
std::vector<TrialRecord> run_trials(const ExperimentConfig& config,
                                    bool record_history = false);

struct Summary {
  int trials = 0;
  int successes = 0;
  // Absent when no trial succeeded (rendered as "-").
  std::optional<double> median_evals;
  std::optional<double> iqr;
};

// Median and IQR over successful trials only, linear interpolation between
// closest ranks.
Summary aggregate(const std::vector<TrialRecord>& records);

struct SweepCell {
  double m_exponent = 0.0;
  double n_exponent = 0.0;
  double alpha = 0.0;
  Summary summary;
};

// The 48-cell grid alpha = N^-m lambda^-n, m, n in {0, 0.5, ..., 3} without
// (0, 0).
std::vector<std::pair<double, double>> sweep_exponent_grid();
std::vector<SweepCell> alpha_sweep(const ExperimentConfig& config);

// CSV builders for the documented schemas.
CsvTable trials_table(const ExperimentConfig& config,
                      const std::vector<TrialRecord>& records);
CsvTable summary_table(const ExperimentConfig& config, const Summary& summary);
CsvTable sweep_table(const std::vector<SweepCell>& cells);
CsvTable trace_table(const TrialRecord& record, int n);
CsvTable mo_trace_table(const TrialRecord& record);
CsvTable mo_final_table(const TrialRecord& record, int n);

// The alpha actually used by a margin run of this config.
double resolved_alpha(const ExperimentConfig& config);

}  // namespace mibbo
