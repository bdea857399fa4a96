#include "piflow/decision.hpp"

#include <sstream>

#include "piflow/errors.hpp"

namespace piflow {

namespace {

constexpr const char* kInitializeSuggestion =
    "Initialize one principle to explore.";

std::string action_prefix(Action action) {
  switch (action) {
    case Action::refine:
      return "Focus on refining: ";
    case Action::validate:
      return "Validate: ";
    case Action::explore:
      return "Explore alternatives: ";
    case Action::initialize:
      return "";
  }
  return "";
}

}  // namespace

std::string to_string(Action action) {
  switch (action) {
    case Action::explore:
      return "explore";
    case Action::validate:
      return "validate";
    case Action::refine:
      return "refine";
    case Action::initialize:
      return "initialize";
  }
  return "explore";
}

std::optional<Action> parse_action(const std::string& text) {
  if (text == "explore") return Action::explore;
  if (text == "validate") return Action::validate;
  if (text == "refine") return Action::refine;
  if (text == "initialize") return Action::initialize;
  return std::nullopt;
}

void DecisionConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidConfigError("lambda must lie in [0,1]");
  }
  if (cold_start < 1) {
    throw InvalidConfigError("cold_start must be >= 1");
  }
  if (!(validate_threshold >= 0.0 && validate_threshold < refine_threshold &&
        refine_threshold <= 1.0)) {
    throw InvalidConfigError(
        "thresholds must satisfy 0 <= validate < refine <= 1");
  }
}

DecisionConfig threshold_preset(const std::string& name) {
  DecisionConfig config;
  if (name == "loose") {
    config.refine_threshold = 0.6;
    config.validate_threshold = 0.3;
  } else if (name == "default") {
    config.refine_threshold = 0.7;
    config.validate_threshold = 0.4;
  } else if (name == "strict") {
    config.refine_threshold = 0.8;
    config.validate_threshold = 0.5;
  } else {
    throw InvalidConfigError("unknown threshold preset '" + name + "'");
  }
  return config;
}

Directive decide(const PrinciplePool& pool, const DecisionConfig& config,
                 EmbeddingService& embeddings) {
  config.validate();
  if (pool.valid_record_count() <
      static_cast<std::size_t>(config.cold_start)) {
    Directive directive;
    directive.action = Action::initialize;
    directive.suggestion = kInitializeSuggestion;
    return directive;
  }
  ScoreSheet sheet = score_pool(pool, embeddings, config.lambda);
  const std::size_t best = best_index(sheet);
  const ScoreEntry& entry = sheet.entries[best];

  Directive directive;
  if (entry.exploitation > config.refine_threshold) {
    directive.action = Action::refine;
  } else if (entry.exploitation > config.validate_threshold) {
    directive.action = Action::validate;
  } else {
    directive.action = Action::explore;
  }
  directive.principle_id = entry.principle_id;
  const Principle* principle = pool.find(entry.principle_id);
  directive.suggestion = action_prefix(directive.action) + principle->content;
  directive.scores = std::move(sheet);
  return directive;
}

std::string render_planner_brief(const Directive& directive,
                                 const PrinciplePool& pool) {
  double best = 0.0;
  std::size_t valid = 0;
  for (const auto& record : pool.records()) {
    if (!record.valid) continue;
    ++valid;
    if (valid == 1 || record.outcome.value() > best) {
      best = record.outcome.value();
    }
  }

  std::ostringstream gap;
  if (valid == 0) {
    gap << "No validated outcomes yet; the record holds no evidence.";
  } else {
    gap << "Best validated outcome so far is " << best << " across " << valid
        << " valid experiment" << (valid == 1 ? "" : "s")
        << "; the gap to the reference optimum remains open.";
  }

  std::string principle_statement;
  if (directive.action == Action::validate ||
      directive.action == Action::refine) {
    if (directive.principle_id) {
      if (const Principle* p = pool.find(*directive.principle_id)) {
        principle_statement = p->content;
      }
    }
  }
  // Exploration phases leave the principle statement blank.

  std::string instruct;
  switch (directive.action) {
    case Action::initialize:
      instruct =
          "Propose one fresh principle and one candidate to gather initial "
          "evidence.";
      break;
    case Action::explore:
      instruct =
          "Propose one conceptually new principle and one candidate far from "
          "tested regions.";
      break;
    case Action::validate:
      instruct =
          "Re-test the stated principle with one nearby candidate to confirm "
          "its evidence.";
      break;
    case Action::refine:
      instruct =
          "Sharpen the stated principle with one close-by candidate expected "
          "to improve the outcome.";
      break;
  }

  std::ostringstream brief;
  brief << "Understand the suggestion: " << directive.suggestion << "\n"
        << "Clarify the GAP: " << gap.str() << "\n"
        << "Connect to the underlying principle: "
        << (principle_statement.empty()
                ? "Exploration phase; no established principle applies yet."
                : "Ground the next hypothesis in the stated principle.")
        << "\n"
        << "Principle statement: " << principle_statement << "\n"
        << "Instruct: " << instruct << "\n"
        << "Double-check: Propose exactly one hypothesis with one candidate, "
           "inside the parameter space.";
  return brief.str();
}

}  // namespace piflow
