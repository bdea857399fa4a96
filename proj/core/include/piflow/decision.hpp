#pragma once

#include <optional>
#include <string>

#include "piflow/embedding.hpp"
#include "piflow/principle_store.hpp"
#include "piflow/scorer.hpp"

namespace piflow {

enum class Action { explore, validate, refine, initialize };

std::string to_string(Action action);
std::optional<Action> parse_action(const std::string& text);

// The decision layer's output: which strategic move to make, against which
// principle, with the rendered suggestion text and the score snapshot that
// justified it (absent for cold start and forced directives).
struct Directive {
  Action action = Action::initialize;
  std::optional<std::string> principle_id;
  std::string suggestion;
  std::optional<ScoreSheet> scores;

  bool operator==(const Directive&) const = default;
};

struct DecisionConfig {
  double lambda = 0.5;
  int cold_start = 3;
  double refine_threshold = 0.7;
  double validate_threshold = 0.4;

  // Throws invalid-config unless lambda in [0,1], cold_start >= 1, and
  // 0 <= validate_threshold < refine_threshold <= 1.
  void validate() const;

  bool operator==(const DecisionConfig&) const = default;
};

// Shipped threshold presets: "loose" (0.6/0.3), "default" (0.7/0.4),
// "strict" (0.8/0.5). Throws invalid-config on unknown names.
DecisionConfig threshold_preset(const std::string& name);

// One decision step: cold start while fewer than cold_start valid records
// exist; otherwise scores the pool, picks the best principle (argmax of final
// scores, lowest index on ties), and maps its exploitation score through the
// strict thresholds refine > validate > explore.
Directive decide(const PrinciplePool& pool, const DecisionConfig& config,
                 EmbeddingService& embeddings);

// Deterministic planner message derived from the directive and the pool's
// latest evidence; injected verbatim into the agent loop each iteration.
std::string render_planner_brief(const Directive& directive,
                                 const PrinciplePool& pool);

}  // namespace piflow
