#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "piflow/agents.hpp"
#include "piflow/decision.hpp"
#include "piflow/embedding.hpp"
#include "piflow/llm.hpp"
#include "piflow/metrics.hpp"
#include "piflow/principle_store.hpp"
#include "piflow/tasks.hpp"

namespace piflow {

enum class Policy { piflow, vanilla_random, greedy_exploit };

std::string to_string(Policy policy);
Policy parse_policy(const std::string& text);  // throws unknown-policy

// An expert-given initial principle with its strategic tag. Tags are REFINE
// or VALIDATE; the tagged principle gets one forced directive of that action
// immediately after cold start ends.
struct TaggedPrinciple {
  Action tag = Action::refine;
  std::string text;

  bool operator==(const TaggedPrinciple&) const = default;
};

// Parses "REFINE: some text" / "VALIDATE: some text". Throws unknown-tag.
TaggedPrinciple parse_tagged_principle(const std::string& spec_text);

struct RunConfig {
  std::string task = "nho";
  int budget = 24;
  DecisionConfig decision;
  Policy policy = Policy::piflow;
  std::uint64_t seed = 0;
  double noise_amplitude = 0.0;
  std::optional<double> stop_target;
  std::vector<TaggedPrinciple> initial_principles;
  ScriptedAgentOptions agent;
  std::size_t embedding_dim = 256;
  bool use_llm = false;
  EndpointConfig endpoint;

  bool operator==(const RunConfig&) const = default;
};

struct StepLog {
  Directive directive;
  Hypothesis hypothesis;
  TrajectoryRecord record;
  std::optional<Principle> new_principle;
  double latency_ms = 0.0;  // excluded from equality; dropped by --no-timestamp

  bool operator==(const StepLog& other) const {
    return directive == other.directive && hypothesis == other.hypothesis &&
           record == other.record && new_principle == other.new_principle;
  }
};

struct RunRecord {
  RunConfig config;
  std::vector<Principle> initial_principles;  // pool contents before step 1
  std::vector<StepLog> steps;
  MetricSummary summary;

  // Valid outcomes in step order.
  std::vector<double> valid_outcomes() const;

  bool operator==(const RunRecord&) const = default;
};

// Inserts tagged principles with origin=initial-expert at step 0.
void seed_principles(const std::vector<TaggedPrinciple>& tagged,
                     PrinciplePool& pool);

// Executes the hypothesis-validation loop for config.budget steps (halting
// early when a valid outcome reaches stop_target). All stochastic components
// derive from config.seed; with scripted agents the result is a pure function
// of the config.
RunRecord run(const RunConfig& config);
RunRecord run(const RunConfig& config,
              std::shared_ptr<EmbeddingService> embeddings,
              std::shared_ptr<Transport> transport = nullptr);

// Pearson correlation between the per-step exploration score of the acted-on
// principle and instantaneous regret, over scored valid steps.
double info_regret_correlation(const RunRecord& record);

struct SweepCellResult {
  std::vector<std::pair<std::string, std::string>> cell;  // field, value
  double sq_mean = 0.0;
  double sq_std = 0.0;
  double auc_mean = 0.0;
  double auc_std = 0.0;
  int n_seeds = 0;
};

struct SweepOutcome {
  std::vector<SweepCellResult> cells;
  std::vector<RunRecord> records;
};

// Cartesian product of grid values x seeds. Supported grid fields: lambda,
// thresholds (preset names), cold_start, budget, noise, policy, task,
// stop_target. Throws invalid-grid-field otherwise. Cells may execute on up
// to `workers` threads; result order is deterministic.
SweepOutcome sweep(const RunConfig& base,
                   const std::map<std::string, std::vector<std::string>>& grid,
                   const std::vector<std::uint64_t>& seeds, int workers = 1);

}  // namespace piflow
