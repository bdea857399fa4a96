#pragma once

#include <string>
#include <utility>
#include <vector>

#include "piflow/orchestrator.hpp"

namespace piflow {

// Flat key=value config format with [section] headers. Keys are returned
// section-qualified ("run.task"), in file order, duplicates preserved.
// '#' starts a comment; blank lines are skipped.
std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path);

std::vector<std::pair<std::string, std::string>> parse_config_text(
    const std::string& text);

// Applies entries onto a RunConfig. Recognized keys:
//   run.task, run.policy, run.budget, run.seed, run.noise, run.stop_target,
//   decision.lambda, decision.cold_start, decision.thresholds,
//   decision.refine_threshold, decision.validate_threshold,
//   principles.principle (repeatable, "TAG: text"),
//   llm.use, llm.base_url, llm.model, llm.temperature, llm.timeout_seconds,
//   llm.retries, embedding.dim
// Throws invalid-config on unknown keys or unparsable values.
void apply_config(
    RunConfig& config,
    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace piflow
