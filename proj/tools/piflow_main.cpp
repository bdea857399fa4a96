// piflow command-line interface: single runs, parameter sweeps, metric
// recomputation, CSV export, and baseline comparisons.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "piflow/config.hpp"
#include "piflow/errors.hpp"
#include "piflow/metrics.hpp"
#include "piflow/orchestrator.hpp"
#include "piflow/run_io.hpp"
#include "piflow/tasks.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEndpoint = 3;

// Endpoint-side failures map to exit 3; everything else is configuration.
int exit_code_for(const piflow::Error& error) {
  const std::string& code = error.code();
  if (code == "endpoint-unavailable" || code == "provider-unavailable" ||
      code == "unparsable-reply-after-retries") {
    return kExitEndpoint;
  }
  return kExitConfig;
}

// Seed list syntax: "N" means seeds 1..N; "a,b,c" is an explicit list.
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (text.find(',') == std::string::npos) {
    std::size_t used = 0;
    const unsigned long long n = std::stoull(text, &used);
    if (used != text.size() || n == 0) {
      throw piflow::InvalidConfigError("seed count must be a positive integer");
    }
    for (unsigned long long s = 1; s <= n; ++s) seeds.push_back(s);
    return seeds;
  }
  std::istringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    const unsigned long long s = std::stoull(item, &used);
    if (used != item.size()) {
      throw piflow::InvalidConfigError("bad seed '" + item + "' in seed list");
    }
    seeds.push_back(s);
  }
  if (seeds.empty()) {
    throw piflow::InvalidConfigError("empty seed list");
  }
  return seeds;
}

// "field=v1,v2,..." -> grid entry.
void add_grid_spec(std::map<std::string, std::vector<std::string>>& grid,
                   const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size()) {
    throw piflow::InvalidConfigError("grid spec must look like field=v1,v2: '" +
                                     spec + "'");
  }
  const std::string field = spec.substr(0, eq);
  std::vector<std::string> values;
  std::istringstream stream(spec.substr(eq + 1));
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) values.push_back(item);
  }
  if (values.empty()) {
    throw piflow::InvalidConfigError("grid field '" + field +
                                     "' lists no values");
  }
  grid[field] = values;
}

struct SharedFlags {
  std::string config_file;
  std::string task;
  std::string policy;
  std::uint64_t seed = 0;
  int budget = 0;
  double lambda = 0.0;
  int cold_start = 0;
  std::string thresholds;
  double refine_threshold = 0.0;
  double validate_threshold = 0.0;
  double noise = 0.0;
  double stop_target = 0.0;
  std::vector<std::string> principles;
  bool use_llm = false;
  std::string base_url;
  std::string model;
  std::string out_dir = "piflow-out";
  bool no_timestamp = false;
};

// Registers the options shared by run/sweep/baselines on `cmd`, binding them
// to `flags`. Returns nothing; presence is checked via cmd->count() later.
void register_shared(CLI::App* cmd, SharedFlags& flags) {
  cmd->add_option("--config", flags.config_file,
                  "Config file (key=value with [section] headers)");
  cmd->add_option("--task", flags.task, "Task: nho, mbo, or spo");
  cmd->add_option("--policy", flags.policy,
                  "Policy: piflow, vanilla-random, or greedy-exploit");
  cmd->add_option("--seed", flags.seed, "Run seed");
  cmd->add_option("--budget", flags.budget, "Experiment budget (steps)");
  cmd->add_option("--lambda", flags.lambda,
                  "Exploitation weight in [0,1] for blended scoring");
  cmd->add_option("--cold-start", flags.cold_start,
                  "Valid records required before scoring starts");
  cmd->add_option("--thresholds", flags.thresholds,
                  "Threshold preset: loose, default, or strict");
  cmd->add_option("--refine-threshold", flags.refine_threshold,
                  "Exploitation score above which the action is refine");
  cmd->add_option("--validate-threshold", flags.validate_threshold,
                  "Exploitation score above which the action is validate");
  cmd->add_option("--noise", flags.noise,
                  "Uniform noise amplitude added to outcomes");
  cmd->add_option("--stop-target", flags.stop_target,
                  "Stop early once a valid outcome reaches this value");
  cmd->add_option("--principle", flags.principles,
                  "Initial expert principle, 'REFINE: text' or "
                  "'VALIDATE: text' (repeatable)");
  cmd->add_flag("--llm", flags.use_llm,
                "Drive hypothesis generation through the chat endpoint");
  cmd->add_option("--base-url", flags.base_url, "Chat endpoint base URL");
  cmd->add_option("--model", flags.model, "Chat endpoint model name");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_flag("--no-timestamp", flags.no_timestamp,
                "Omit timestamps and latencies for byte-reproducible output");
}

// Builds the effective RunConfig: defaults, then config file, then explicitly
// provided flags.
piflow::RunConfig effective_config(const CLI::App* cmd,
                                   const SharedFlags& flags) {
  piflow::RunConfig config;
  if (!flags.config_file.empty()) {
    piflow::apply_config(config, piflow::parse_config_file(flags.config_file));
  }
  if (cmd->count("--task")) config.task = flags.task;
  if (cmd->count("--policy")) config.policy = piflow::parse_policy(flags.policy);
  if (cmd->count("--seed")) config.seed = flags.seed;
  if (cmd->count("--budget")) config.budget = flags.budget;
  if (cmd->count("--lambda")) config.decision.lambda = flags.lambda;
  if (cmd->count("--cold-start")) config.decision.cold_start = flags.cold_start;
  if (cmd->count("--thresholds")) {
    const piflow::DecisionConfig preset =
        piflow::threshold_preset(flags.thresholds);
    config.decision.refine_threshold = preset.refine_threshold;
    config.decision.validate_threshold = preset.validate_threshold;
  }
  if (cmd->count("--refine-threshold")) {
    config.decision.refine_threshold = flags.refine_threshold;
  }
  if (cmd->count("--validate-threshold")) {
    config.decision.validate_threshold = flags.validate_threshold;
  }
  if (cmd->count("--noise")) config.noise_amplitude = flags.noise;
  if (cmd->count("--stop-target")) config.stop_target = flags.stop_target;
  if (cmd->count("--principle")) {
    config.initial_principles.clear();
    for (const auto& text : flags.principles) {
      config.initial_principles.push_back(piflow::parse_tagged_principle(text));
    }
  }
  if (cmd->count("--llm")) config.use_llm = true;
  if (cmd->count("--base-url")) config.endpoint.base_url = flags.base_url;
  if (cmd->count("--model")) config.endpoint.model = flags.model;
  piflow::make_objective(config.task);  // fail fast on unknown task names
  config.decision.validate();
  return config;
}

int cmd_run(const CLI::App* cmd, const SharedFlags& flags) {
  const piflow::RunConfig config = effective_config(cmd, flags);
  const piflow::RunRecord record = piflow::run(config);

  const fs::path out_dir(flags.out_dir);
  fs::create_directories(out_dir);
  piflow::save_run(record, out_dir / "run.jsonl", !flags.no_timestamp);
  piflow::export_run_csvs(record, out_dir);

  std::cout << piflow::summary_line(record) << "\n";
  std::cout << "record: " << (out_dir / "run.jsonl").string() << "\n";
  return kExitOk;
}

std::string cell_label(const piflow::SweepCellResult& cell) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cell.cell.size(); ++i) {
    if (i > 0) out << " ";
    out << cell.cell[i].first << "=" << cell.cell[i].second;
  }
  return out.str();
}

int cmd_sweep(const CLI::App* cmd, const SharedFlags& flags,
              const std::vector<std::string>& grid_specs,
              const std::string& seeds_text, int workers) {
  const piflow::RunConfig base = effective_config(cmd, flags);
  std::map<std::string, std::vector<std::string>> grid;
  for (const auto& spec : grid_specs) add_grid_spec(grid, spec);
  if (grid.empty()) {
    throw piflow::InvalidConfigError("sweep needs at least one --grid spec");
  }
  const std::vector<std::uint64_t> seeds = parse_seed_list(seeds_text);

  const piflow::SweepOutcome outcome =
      piflow::sweep(base, grid, seeds, workers);

  const fs::path out_dir(flags.out_dir);
  fs::create_directories(out_dir);
  piflow::write_ablation_csv(outcome.cells, out_dir / "ablation.csv");

  const piflow::SweepCellResult* best = nullptr;
  for (const auto& cell : outcome.cells) {
    std::ostringstream row;
    row << std::fixed << std::setprecision(2);
    row << cell_label(cell) << ": SQ " << cell.sq_mean << "% +/- "
        << cell.sq_std << ", AUC " << cell.auc_mean << "% +/- " << cell.auc_std
        << " (" << cell.n_seeds << " seeds)";
    std::cout << row.str() << "\n";
    if (best == nullptr || cell.auc_mean > best->auc_mean) best = &cell;
  }
  if (best != nullptr) {
    std::cout << "best by mean AUC: " << cell_label(*best) << " ("
              << std::fixed << std::setprecision(2) << best->auc_mean
              << "%)\n";
  }
  std::cout << "table: " << (out_dir / "ablation.csv").string() << "\n";
  return kExitOk;
}

int cmd_metrics(const std::string& record_path) {
  piflow::RunRecord record = piflow::load_run(record_path);
  const double mu_ref = piflow::make_objective(record.config.task).mu_ref();
  record.summary = piflow::summarize(record.valid_outcomes(), mu_ref, mu_ref);
  try {
    record.summary.info_regret_corr = piflow::info_regret_correlation(record);
  } catch (const piflow::Error&) {
    record.summary.info_regret_corr.reset();
  }
  std::cout << piflow::summary_json(record) << "\n";
  return kExitOk;
}

int cmd_export(const std::string& record_path, const std::string& out_dir) {
  const piflow::RunRecord record = piflow::load_run(record_path);
  fs::create_directories(out_dir);
  const auto files = piflow::export_run_csvs(record, out_dir);
  for (const auto& file : files) {
    std::cout << file.string() << "\n";
  }
  return kExitOk;
}

int cmd_baselines(const CLI::App* cmd, SharedFlags flags,
                  const std::string& seeds_text) {
  const std::vector<std::uint64_t> seeds = parse_seed_list(seeds_text);
  const std::vector<piflow::Policy> policies = {
      piflow::Policy::piflow, piflow::Policy::vanilla_random,
      piflow::Policy::greedy_exploit};

  std::cout << std::left << std::setw(16) << "policy" << std::right
            << std::setw(12) << "mean SQ%" << std::setw(12) << "mean AUC%"
            << std::setw(8) << "seeds" << "\n";
  for (piflow::Policy policy : policies) {
    piflow::RunConfig config = effective_config(cmd, flags);
    config.policy = policy;
    double sq_sum = 0.0;
    double auc_sum = 0.0;
    int counted = 0;
    for (std::uint64_t seed : seeds) {
      config.seed = seed;
      const piflow::RunRecord record = piflow::run(config);
      if (record.summary.sq_percent && record.summary.auc_percent) {
        sq_sum += *record.summary.sq_percent;
        auc_sum += *record.summary.auc_percent;
        ++counted;
      }
    }
    std::ostringstream row;
    row << std::left << std::setw(16) << piflow::to_string(policy)
        << std::right << std::fixed << std::setprecision(2);
    if (counted > 0) {
      row << std::setw(12) << sq_sum / counted << std::setw(12)
          << auc_sum / counted;
    } else {
      row << std::setw(12) << "n/a" << std::setw(12) << "n/a";
    }
    row << std::setw(8) << seeds.size();
    std::cout << row.str() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PiFlow: principle-aware scientific discovery engine"};
  app.require_subcommand(1);

  SharedFlags run_flags;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Execute one discovery run and export it");
  register_shared(run_cmd, run_flags);

  SharedFlags sweep_flags;
  std::vector<std::string> grid_specs;
  std::string sweep_seeds = "3";
  int workers = 1;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Run a config grid across seeds and tabulate SQ/AUC");
  register_shared(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--grid", grid_specs,
                        "Grid spec field=v1,v2,... (repeatable); fields: "
                        "lambda, thresholds, cold_start, budget, noise, "
                        "policy, task, stop_target");
  sweep_cmd->add_option("--seeds", sweep_seeds,
                        "N for seeds 1..N, or an explicit list a,b,c");
  sweep_cmd->add_option("--workers", workers, "Parallel sweep workers");

  std::string metrics_path;
  CLI::App* metrics_cmd = app.add_subcommand(
      "metrics", "Recompute and print the summary of a saved run");
  metrics_cmd->add_option("record", metrics_path, "Run record file")
      ->required();

  std::string export_path;
  std::string export_out = "piflow-out";
  CLI::App* export_cmd =
      app.add_subcommand("export", "Write plotting CSVs for a saved run");
  export_cmd->add_option("record", export_path, "Run record file")->required();
  export_cmd->add_option("--out", export_out, "Output directory");

  SharedFlags baseline_flags;
  std::string baseline_seeds = "3";
  CLI::App* baselines_cmd = app.add_subcommand(
      "baselines", "Compare piflow, vanilla-random, and greedy-exploit");
  register_shared(baselines_cmd, baseline_flags);
  baselines_cmd->add_option("--seeds", baseline_seeds,
                            "N for seeds 1..N, or an explicit list a,b,c");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_cmd, run_flags);
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_cmd, sweep_flags, grid_specs, sweep_seeds,
                       workers);
    }
    if (metrics_cmd->parsed()) return cmd_metrics(metrics_path);
    if (export_cmd->parsed()) return cmd_export(export_path, export_out);
    if (baselines_cmd->parsed()) {
      return cmd_baselines(baselines_cmd, baseline_flags, baseline_seeds);
    }
  } catch (const piflow::Error& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
