#include "json_codec.hpp"

#include "piflow/errors.hpp"

namespace piflow::codec {

namespace {

// Throws a plain Error; callers translate into line-numbered
// MalformedRecordError when reading files.
[[noreturn]] void bad(const std::string& what) {
  throw Error("malformed-json", what);
}

json require(const json& j, const char* field) {
  if (!j.contains(field)) bad(std::string("missing field '") + field + "'");
  return j.at(field);
}

}  // namespace

json origin_to_json(const Origin& origin) { return to_string(origin); }

Origin origin_from_json(const json& j) {
  if (!j.is_string()) bad("origin must be a string");
  auto parsed = parse_origin(j.get<std::string>());
  if (!parsed) bad("unrecognized origin '" + j.get<std::string>() + "'");
  return *parsed;
}

json candidate_to_json(const Candidate& candidate) {
  json j;
  switch (candidate.kind) {
    case Candidate::Kind::continuous: {
      j["kind"] = "continuous";
      // Array of [name, value] pairs: keeps dim order across round-trips.
      json values = json::array();
      for (const auto& [name, value] : candidate.assignment) {
        values.push_back(json::array({name, value}));
      }
      j["values"] = values;
      break;
    }
    case Candidate::Kind::discrete:
      j["kind"] = "discrete";
      j["id"] = candidate.id;
      break;
    case Candidate::Kind::composition:
      j["kind"] = "composition";
      j["formula"] = candidate.composition;
      break;
  }
  return j;
}

Candidate candidate_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "continuous") {
    std::vector<std::pair<std::string, double>> values;
    for (const auto& pair : require(j, "values")) {
      if (!pair.is_array() || pair.size() != 2) bad("bad assignment pair");
      values.emplace_back(pair.at(0).get<std::string>(),
                          pair.at(1).get<double>());
    }
    return Candidate::make_continuous(std::move(values));
  }
  if (kind == "discrete") {
    return Candidate::make_discrete(require(j, "id").get<std::string>());
  }
  if (kind == "composition") {
    return Candidate::make_composition(
        require(j, "formula").get<std::string>());
  }
  bad("unrecognized candidate kind '" + kind + "'");
}

json principle_to_json(const Principle& principle) {
  return json{{"id", principle.id},
              {"content", principle.content},
              {"origin", origin_to_json(principle.origin)},
              {"created_step", principle.created_step}};
}

Principle principle_from_json(const json& j) {
  Principle p;
  p.id = require(j, "id").get<std::string>();
  p.content = require(j, "content").get<std::string>();
  p.origin = origin_from_json(require(j, "origin"));
  p.created_step = require(j, "created_step").get<int>();
  return p;
}

json record_to_json(const TrajectoryRecord& record) {
  json j{{"step", record.step},
         {"principle_id", record.principle_id},
         {"hypothesis", record.hypothesis},
         {"candidate", candidate_to_json(record.candidate)},
         {"valid", record.valid}};
  j["outcome"] = record.outcome ? json(*record.outcome) : json(nullptr);
  return j;
}

TrajectoryRecord record_from_json(const json& j) {
  TrajectoryRecord r;
  r.step = require(j, "step").get<int>();
  r.principle_id = require(j, "principle_id").get<std::string>();
  r.hypothesis = require(j, "hypothesis").get<std::string>();
  r.candidate = candidate_from_json(require(j, "candidate"));
  const json outcome = require(j, "outcome");
  if (!outcome.is_null()) r.outcome = outcome.get<double>();
  r.valid = require(j, "valid").get<bool>();
  return r;
}

json score_sheet_to_json(const ScoreSheet& sheet) {
  json entries = json::array();
  for (const auto& e : sheet.entries) {
    entries.push_back(json{{"principle_id", e.principle_id},
                           {"exploration", e.exploration},
                           {"exploitation", e.exploitation},
                           {"final", e.final_score}});
  }
  return json{{"lambda", sheet.lambda}, {"entries", entries}};
}

ScoreSheet score_sheet_from_json(const json& j) {
  ScoreSheet sheet;
  sheet.lambda = require(j, "lambda").get<double>();
  for (const auto& e : require(j, "entries")) {
    ScoreEntry entry;
    entry.principle_id = require(e, "principle_id").get<std::string>();
    entry.exploration = require(e, "exploration").get<double>();
    entry.exploitation = require(e, "exploitation").get<double>();
    entry.final_score = require(e, "final").get<double>();
    sheet.entries.push_back(std::move(entry));
  }
  return sheet;
}

json directive_to_json(const Directive& directive) {
  json j{{"action", to_string(directive.action)},
         {"suggestion", directive.suggestion}};
  j["principle_id"] =
      directive.principle_id ? json(*directive.principle_id) : json(nullptr);
  j["scores"] = directive.scores ? score_sheet_to_json(*directive.scores)
                                 : json(nullptr);
  return j;
}

Directive directive_from_json(const json& j) {
  Directive d;
  auto action = parse_action(require(j, "action").get<std::string>());
  if (!action) bad("unrecognized action");
  d.action = *action;
  const json pid = require(j, "principle_id");
  if (!pid.is_null()) d.principle_id = pid.get<std::string>();
  d.suggestion = require(j, "suggestion").get<std::string>();
  const json scores = require(j, "scores");
  if (!scores.is_null()) d.scores = score_sheet_from_json(scores);
  return d;
}

json hypothesis_to_json(const Hypothesis& hypothesis) {
  return json{{"principle_id", hypothesis.principle_id},
              {"major_premise", hypothesis.rationale.major_premise},
              {"minor_premises", hypothesis.rationale.minor_premises},
              {"statement", hypothesis.statement},
              {"candidate", candidate_to_json(hypothesis.candidate)}};
}

Hypothesis hypothesis_from_json(const json& j) {
  Hypothesis h;
  h.principle_id = require(j, "principle_id").get<std::string>();
  h.rationale.major_premise = require(j, "major_premise").get<std::string>();
  h.rationale.minor_premises =
      require(j, "minor_premises").get<std::vector<std::string>>();
  h.statement = require(j, "statement").get<std::string>();
  h.candidate = candidate_from_json(require(j, "candidate"));
  return h;
}

json summary_to_json(const MetricSummary& summary) {
  json j;
  j["sq_percent"] = summary.sq_percent ? json(*summary.sq_percent) : json();
  j["auc_percent"] = summary.auc_percent ? json(*summary.auc_percent) : json();
  json regret = json::array();
  for (const auto& point : summary.regret) {
    regret.push_back(json::array({point.t, point.average_regret}));
  }
  j["regret"] = regret;
  if (summary.fit) {
    j["fit"] = json{{"c", summary.fit->c},
                    {"exponent", summary.fit->exponent},
                    {"r_squared", summary.fit->r_squared},
                    {"dropped", summary.fit->dropped}};
  } else {
    j["fit"] = json();
  }
  j["info_regret_corr"] =
      summary.info_regret_corr ? json(*summary.info_regret_corr) : json();
  return j;
}

MetricSummary summary_from_json(const json& j) {
  MetricSummary s;
  const json sq = require(j, "sq_percent");
  if (!sq.is_null()) s.sq_percent = sq.get<double>();
  const json auc = require(j, "auc_percent");
  if (!auc.is_null()) s.auc_percent = auc.get<double>();
  for (const auto& point : require(j, "regret")) {
    s.regret.push_back(
        RegretPoint{point.at(0).get<int>(), point.at(1).get<double>()});
  }
  const json fit = require(j, "fit");
  if (!fit.is_null()) {
    PowerLawFit f;
    f.c = require(fit, "c").get<double>();
    f.exponent = require(fit, "exponent").get<double>();
    f.r_squared = require(fit, "r_squared").get<double>();
    f.dropped = require(fit, "dropped").get<std::size_t>();
    s.fit = f;
  }
  const json corr = require(j, "info_regret_corr");
  if (!corr.is_null()) s.info_regret_corr = corr.get<double>();
  return s;
}

json run_config_to_json(const RunConfig& config) {
  json j;
  j["task"] = config.task;
  j["budget"] = config.budget;
  j["policy"] = to_string(config.policy);
  j["seed"] = config.seed;
  j["noise_amplitude"] = config.noise_amplitude;
  j["stop_target"] =
      config.stop_target ? json(*config.stop_target) : json(nullptr);
  j["decision"] = json{{"lambda", config.decision.lambda},
                       {"cold_start", config.decision.cold_start},
                       {"refine_threshold", config.decision.refine_threshold},
                       {"validate_threshold",
                        config.decision.validate_threshold}};
  json tagged = json::array();
  for (const auto& p : config.initial_principles) {
    tagged.push_back(json::array({to_string(p.tag), p.text}));
  }
  j["initial_principles"] = tagged;
  j["agent"] = json{{"validate_sigma", config.agent.validate_sigma},
                    {"refine_sigma", config.agent.refine_sigma}};
  j["embedding_dim"] = config.embedding_dim;
  j["use_llm"] = config.use_llm;
  // api_key deliberately never serialized.
  j["endpoint"] = json{{"base_url", config.endpoint.base_url},
                       {"model", config.endpoint.model},
                       {"temperature", config.endpoint.temperature},
                       {"timeout_seconds", config.endpoint.timeout_seconds},
                       {"retries", config.endpoint.retries}};
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.task = require(j, "task").get<std::string>();
  c.budget = require(j, "budget").get<int>();
  c.policy = parse_policy(require(j, "policy").get<std::string>());
  c.seed = require(j, "seed").get<std::uint64_t>();
  c.noise_amplitude = require(j, "noise_amplitude").get<double>();
  const json stop = require(j, "stop_target");
  if (!stop.is_null()) c.stop_target = stop.get<double>();
  const json d = require(j, "decision");
  c.decision.lambda = require(d, "lambda").get<double>();
  c.decision.cold_start = require(d, "cold_start").get<int>();
  c.decision.refine_threshold = require(d, "refine_threshold").get<double>();
  c.decision.validate_threshold =
      require(d, "validate_threshold").get<double>();
  for (const auto& pair : require(j, "initial_principles")) {
    auto tag = parse_action(pair.at(0).get<std::string>());
    if (!tag) bad("unrecognized principle tag");
    c.initial_principles.push_back(
        TaggedPrinciple{*tag, pair.at(1).get<std::string>()});
  }
  const json agent = require(j, "agent");
  c.agent.validate_sigma = require(agent, "validate_sigma").get<double>();
  c.agent.refine_sigma = require(agent, "refine_sigma").get<double>();
  c.embedding_dim = require(j, "embedding_dim").get<std::size_t>();
  c.use_llm = require(j, "use_llm").get<bool>();
  const json ep = require(j, "endpoint");
  c.endpoint.base_url = require(ep, "base_url").get<std::string>();
  c.endpoint.model = require(ep, "model").get<std::string>();
  c.endpoint.temperature = require(ep, "temperature").get<double>();
  c.endpoint.timeout_seconds = require(ep, "timeout_seconds").get<int>();
  c.endpoint.retries = require(ep, "retries").get<int>();
  return c;
}

}  // namespace piflow::codec
