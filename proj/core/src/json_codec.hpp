#pragma once

// Internal JSON encode/decode helpers. Field names are part of the on-disk
// contract; keep them stable. Not installed.

#include <json.hpp>

#include "piflow/agents.hpp"
#include "piflow/decision.hpp"
#include "piflow/metrics.hpp"
#include "piflow/orchestrator.hpp"
#include "piflow/principle_store.hpp"
#include "piflow/scorer.hpp"
#include "piflow/types.hpp"

namespace piflow::codec {

using json = nlohmann::json;

json origin_to_json(const Origin& origin);
Origin origin_from_json(const json& j);

json candidate_to_json(const Candidate& candidate);
Candidate candidate_from_json(const json& j);

json principle_to_json(const Principle& principle);
Principle principle_from_json(const json& j);

json record_to_json(const TrajectoryRecord& record);
TrajectoryRecord record_from_json(const json& j);

json score_sheet_to_json(const ScoreSheet& sheet);
ScoreSheet score_sheet_from_json(const json& j);

json directive_to_json(const Directive& directive);
Directive directive_from_json(const json& j);

json hypothesis_to_json(const Hypothesis& hypothesis);
Hypothesis hypothesis_from_json(const json& j);

json summary_to_json(const MetricSummary& summary);
MetricSummary summary_from_json(const json& j);

json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const json& j);

}  // namespace piflow::codec
