// Batch experiment driver: runs trials of the configured algorithm over a
// benchmark and emits the CSV artifacts described in the README.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mibbo/config.hpp"
#include "mibbo/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void attach_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config file")
      ->required();
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--trials", flags.trials, "trial count override");
  cmd->add_option("--out", flags.out, "output directory override");
  cmd->add_option("--threads", flags.threads, "worker thread override");
}

mibbo::ExperimentConfig load(const CommonFlags& flags) {
  mibbo::ExperimentConfig config =
      mibbo::config_from_map(mibbo::load_config_file(flags.config_path));
  if (flags.seed) config.master_seed = *flags.seed;
  if (flags.trials) config.trials = *flags.trials;
  if (flags.out) config.out_dir = *flags.out;
  if (flags.threads) config.threads = *flags.threads;
  mibbo::validate_config(config);
  std::filesystem::create_directories(config.out_dir);
  return config;
}

void write_table(const mibbo::CsvTable& table,
                 const std::filesystem::path& path) {
  mibbo::write_text_file(path, table.render());
  std::cout << "wrote " << path.string() << "\n";
}

bool all_numerical_aborts(const std::vector<mibbo::TrialRecord>& records) {
  for (const mibbo::TrialRecord& record : records)
    if (record.termination != mibbo::Termination::numerical_error)
      return false;
  return !records.empty();
}

int cmd_run(const CommonFlags& flags) {
  const mibbo::ExperimentConfig config = load(flags);
  if (mibbo::is_multi_objective(config.algorithm))
    throw std::invalid_argument("run: use mo-run for mo-* algorithms");
  const std::vector<mibbo::TrialRecord> records = mibbo::run_trials(config);
  write_table(mibbo::trials_table(config, records),
              config.out_dir / "trials.csv");
  write_table(mibbo::summary_table(config, mibbo::aggregate(records)),
              config.out_dir / "summary.csv");
  return all_numerical_aborts(records) ? 2 : 0;
}

int cmd_sweep(const CommonFlags& flags) {
  const mibbo::ExperimentConfig config = load(flags);
  const std::vector<mibbo::SweepCell> cells = mibbo::alpha_sweep(config);
  write_table(mibbo::sweep_table(cells), config.out_dir / "sweep.csv");
  return 0;
}

int cmd_mo_run(const CommonFlags& flags) {
  const mibbo::ExperimentConfig config = load(flags);
  if (!mibbo::is_multi_objective(config.algorithm))
    throw std::invalid_argument("mo-run: needs an mo-* algorithm");
  const std::vector<mibbo::TrialRecord> records = mibbo::run_trials(config);
  write_table(mibbo::trials_table(config, records),
              config.out_dir / "trials.csv");
  for (std::size_t k = 0; k < records.size(); ++k) {
    const std::string suffix = std::to_string(k) + ".csv";
    write_table(mibbo::mo_trace_table(records[k]),
                config.out_dir / ("mo_trace_" + suffix));
    write_table(mibbo::mo_final_table(records[k], config.n),
                config.out_dir / ("mo_final_" + suffix));
  }
  return all_numerical_aborts(records) ? 2 : 0;
}

int cmd_trace(const CommonFlags& flags) {
  const mibbo::ExperimentConfig config = load(flags);
  if (mibbo::is_multi_objective(config.algorithm))
    throw std::invalid_argument("trace: single-objective algorithms only");
  const std::vector<mibbo::TrialRecord> records =
      mibbo::run_trials(config, /*record_history=*/true);
  write_table(mibbo::trials_table(config, records),
              config.out_dir / "trials.csv");
  for (std::size_t k = 0; k < records.size(); ++k) {
    write_table(mibbo::trace_table(records[k], config.n),
                config.out_dir / ("trace_" + std::to_string(k) + ".csv"));
  }
  return all_numerical_aborts(records) ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-integer black-box optimization experiment harness"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, mo_flags, trace_flags;
  CLI::App* run = app.add_subcommand("run", "single-objective experiment");
  attach_common(run, run_flags);
  CLI::App* sweep =
      app.add_subcommand("sweep-alpha", "margin-strength grid sweep");
  attach_common(sweep, sweep_flags);
  CLI::App* mo_run = app.add_subcommand("mo-run", "multi-objective experiment");
  attach_common(mo_run, mo_flags);
  CLI::App* trace =
      app.add_subcommand("trace", "per-iteration distribution dump");
  attach_common(trace, trace_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (mo_run->parsed()) return cmd_mo_run(mo_flags);
    if (trace->parsed()) return cmd_trace(trace_flags);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
