#include "piflow/llm.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "piflow/errors.hpp"

namespace piflow {

namespace {

using nlohmann::json;

const std::string kPlannerTemplate = R"(Role: You are the Planner Agent, the strategic coordinator of a multi-agent scientific discovery system. You guide the research process by orchestrating the activities of Hypothesis agents while incorporating insights from PiFlow.

Teammates:
- Hypothesis Agent: formulates one testable hypothesis per iteration.
- Experiment Agent: conducts one experiment per iteration based on the hypothesis.
- Planner Agent (you): guides the research direction using PiFlow insights.

Responsibilities:
1. Grasp the guidance from PiFlow.
2. Interpret scientific principles when the Hypothesis Agent proposes new ones.
3. Synthesize insights from history and guidance.
4. Track progress and identify patterns, especially tendencies in the experiments.
5. Transform the tendencies into scientific conclusions and synthesize new insights.
6. Suggest all valuable insights to the Hypothesis Agent.

Required response structure:
- Understand the suggestion: interpret the insights produced by PiFlow.
- Clarify the GAP: compare the current objective value to the target objective value.
- Connect to the underlying physicochemical principle: incorporate insights from the previous chat history, discover the tendency in the experiments, synthesize the scientific principle.
- Principle statement: state the principle by integrating the observed insights (leave blank if in the exploration phase).
- Instruct: use one paragraph to instruct the Hypothesis Agent what to do (explore, validate, or refine).
- Double-check: confirm your suggestion with one sentence by incorporating principles, the current conclusion, and the PiFlow suggestion.

PiFlow suggestion: {{suggestion}}
Task: {{task}}
Recent experiments:
{{history}}
)";

const std::string kHypothesisTemplate = R"(Role: You are the Hypothesis Agent. Your purpose is to drive scientific progress through principled hypothesizing.

Core responsibilities:
1. Formulate one clear scientific principle grounded in physicochemical rules per iteration.
2. Link your hypothesis with underlying physical and chemical principles and prior experimental results.
3. Follow the suggestion from the Planner recommendations.
4. Acknowledge guidance explicitly and adjust your hypothesis accordingly.

Important constraints:
- A hypothesis explains the underlying physical or chemical mechanism of the problem.
- In each iteration, you must suggest only one hypothesis with one specific experimental candidate.
- Commit to your most promising hypothesis rather than suggesting multiple options.
- Focus on principles that offer causal explanations, connect observations to fundamental mechanisms, generalize, and make quantitative or qualitative predictions.

Scientific approach requirements:
- Rationality: logical mechanistic explanation connecting cause and effect.
- Testability: a specific, measurable prediction that the Experiment Agent can test.
- Principle-based: grounded in established or emerging scientific principles.
- Falsifiability: could potentially be proven false through experimentation.
- Parsimony: prefer simpler explanations.
- Commitment: commit to a single, specific hypothesis.

Required output format:
- Rationale: major premises and minor premises using analytical methods.
- Hypothesis: clear, concise statement grounded in physicochemical mechanisms.
- Reiterate: specific prediction with exact parameters.
- Experimental Candidate: one precise experiment candidate to test.

Planner brief:
{{planner_brief}}

Parameter space:
{{space}}

Recent experiments:
{{history}}
)";

const std::string kExperimentTemplate = R"(Role: You are an Experiment Agent specialized in validating hypotheses through computational testing.

Key responsibilities:
1. Test proposed candidates using the characterize tool.
2. Report complete experimental results.
3. Maintain accurate records of tested candidates.
4. Present results in a consistent, structured format.
5. Flag unexpected outcomes that warrant further investigation.

For each experiment:
1. Use only the provided tools to test hypotheses.
2. Report the exact candidate tested and the resulting objective value.
3. Present results objectively without interpretation.
4. Maintain a record of prior experimental outcomes.

Constraints:
- Do not propose your own hypotheses or candidates.
- Do not analyze results beyond reporting experimental outcomes.
- Do not direct future research directions or workflow.
- Do not modify hypotheses before testing them.

Your role is strictly limited to hypothesis validation through experimental testing.

Hypothesis under test: {{hypothesis}}
Candidate: {{candidate}}
)";

std::string to_lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return text;
}

// Strips list markers, markdown emphasis, and surrounding whitespace.
std::string clean_line(const std::string& line) {
  std::string out;
  out.reserve(line.size());
  for (char c : line) {
    if (c == '*' || c == '#' || c == '`') continue;
    out.push_back(c);
  }
  std::size_t begin = out.find_first_not_of(" \t-");
  if (begin == std::string::npos) return "";
  std::size_t end = out.find_last_not_of(" \t\r");
  return out.substr(begin, end - begin + 1);
}

// If the line starts with `label` (case-insensitive, optional plural 's')
// followed by ':', returns the text after the colon.
std::optional<std::string> labeled_value(const std::string& line,
                                         const std::string& label) {
  const std::string lower = to_lower(line);
  if (lower.rfind(label, 0) != 0) return std::nullopt;
  std::size_t pos = label.size();
  if (pos < lower.size() && lower[pos] == 's') ++pos;
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  if (pos >= line.size() || line[pos] != ':') return std::nullopt;
  ++pos;
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  return line.substr(pos);
}

std::string strip_quotes(std::string text) {
  while (!text.empty() &&
         (text.front() == '"' || text.front() == '\'' || text.front() == '.'))
    text.erase(text.begin());
  while (!text.empty() &&
         (text.back() == '"' || text.back() == '\'' || text.back() == '.'))
    text.pop_back();
  return text;
}

Candidate candidate_from_text(const std::string& text,
                              const ParameterSpace& space) {
  if (space.kind == SpaceKind::continuous) {
    std::vector<std::pair<std::string, double>> values;
    for (const auto& dim : space.continuous_dims) {
      const std::string lower_text = to_lower(text);
      std::size_t pos = lower_text.find(to_lower(dim.name));
      if (pos == std::string::npos) {
        throw CandidateViolatesSpaceError("candidate line misses dimension '" +
                                          dim.name + "'");
      }
      pos = text.find_first_of("=:", pos + dim.name.size());
      if (pos == std::string::npos) {
        throw CandidateViolatesSpaceError("no value for dimension '" +
                                          dim.name + "'");
      }
      ++pos;
      while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) {
        ++pos;
      }
      try {
        values.emplace_back(dim.name, std::stod(text.substr(pos)));
      } catch (const std::exception&) {
        throw CandidateViolatesSpaceError("unreadable value for dimension '" +
                                          dim.name + "'");
      }
    }
    return Candidate::make_continuous(std::move(values));
  }
  std::string token = strip_quotes(clean_line(text));
  const std::size_t space_pos = token.find_first_of(" \t");
  if (space_pos != std::string::npos) token = token.substr(0, space_pos);
  if (token.empty()) {
    throw CandidateViolatesSpaceError("candidate line carries no candidate");
  }
  if (space.kind == SpaceKind::discrete) {
    return Candidate::make_discrete(token);
  }
  return Candidate::make_composition(token);
}

std::string describe_space(const ParameterSpace& space) {
  switch (space.kind) {
    case SpaceKind::continuous: {
      std::ostringstream out;
      out << "Continuous dimensions:";
      for (const auto& dim : space.continuous_dims) {
        out << "\n- " << dim.name << " in [" << dim.lower << ", " << dim.upper
            << "]";
        if (!dim.unit.empty()) out << " " << dim.unit;
      }
      out << "\nAnswer the Experimental Candidate line as "
             "name=value pairs separated by commas.";
      return out.str();
    }
    case SpaceKind::discrete: {
      std::ostringstream out;
      out << "Discrete catalog of " << space.discrete_catalog.size()
          << " candidates; answer the Experimental Candidate line with one "
             "catalog id";
      if (!space.discrete_catalog.empty()) {
        out << " (e.g. " << space.discrete_catalog.front().id << ")";
      }
      out << ".";
      return out.str();
    }
    case SpaceKind::hybrid:
      return "Hybrid composition space; answer the Experimental Candidate "
             "line with one chemical formula such as Bi2Sr2Ca2Cu3O10.";
  }
  return "";
}

std::string recent_history(const PrinciplePool& pool, std::size_t limit) {
  const auto& records = pool.records();
  if (records.empty()) return "(none yet)";
  std::ostringstream out;
  const std::size_t start =
      records.size() > limit ? records.size() - limit : 0;
  for (std::size_t i = start; i < records.size(); ++i) {
    const auto& r = records[i];
    out << "step " << r.step << ": candidate " << r.candidate.describe();
    if (r.valid) {
      out << " -> " << r.outcome.value();
    } else {
      out << " -> invalid";
    }
    if (i + 1 < records.size()) out << "\n";
  }
  return out.str();
}

}  // namespace

EndpointConfig endpoint_from_env(EndpointConfig base) {
  if (const char* key = std::getenv("PIFLOW_API_KEY")) {
    base.api_key = key;
  }
  return base;
}

HttplibTransport::HttplibTransport(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

HttpResponse HttplibTransport::post_json(
    const std::string& path, const std::string& body,
    const std::vector<std::pair<std::string, std::string>>& headers) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  client.set_write_timeout(timeout_seconds_, 0);
  httplib::Headers request_headers;
  for (const auto& [name, value] : headers) {
    request_headers.emplace(name, value);
  }
  auto result = client.Post(path, request_headers, body, "application/json");
  if (!result) {
    throw EndpointUnavailableError("POST " + base_url_ + path + " failed: " +
                                   httplib::to_string(result.error()));
  }
  return HttpResponse{result->status, result->body};
}

StubTransport::StubTransport(std::vector<HttpResponse> responses)
    : responses_(responses.begin(), responses.end()) {}

HttpResponse StubTransport::post_json(
    const std::string& path, const std::string& body,
    const std::vector<std::pair<std::string, std::string>>&) {
  std::lock_guard lock(mutex_);
  requests_.emplace_back(path, body);
  if (responses_.empty()) {
    throw EndpointUnavailableError("stub endpoint has no response queued");
  }
  HttpResponse response = std::move(responses_.front());
  responses_.pop_front();
  return response;
}

void StubTransport::enqueue(HttpResponse response) {
  std::lock_guard lock(mutex_);
  responses_.push_back(std::move(response));
}

ChatClient::ChatClient(std::shared_ptr<Transport> transport,
                       EndpointConfig config)
    : transport_(std::move(transport)), config_(std::move(config)) {}

std::string ChatClient::complete(
    const std::vector<std::pair<std::string, std::string>>& messages) {
  json body;
  body["model"] = config_.model;
  body["temperature"] = config_.temperature;
  json msgs = json::array();
  for (const auto& [role, content] : messages) {
    msgs.push_back(json{{"role", role}, {"content", content}});
  }
  body["messages"] = msgs;

  std::vector<std::pair<std::string, std::string>> headers;
  if (!config_.api_key.empty()) {
    headers.emplace_back("Authorization", "Bearer " + config_.api_key);
  }
  const HttpResponse response =
      transport_->post_json(config_.chat_path, body.dump(), headers);
  if (response.status != 200) {
    throw EndpointUnavailableError("chat endpoint returned status " +
                                   std::to_string(response.status));
  }
  json parsed;
  try {
    parsed = json::parse(response.body);
  } catch (const json::exception&) {
    throw EndpointUnavailableError("chat endpoint returned invalid JSON");
  }
  if (!parsed.contains("choices") || parsed["choices"].empty() ||
      !parsed["choices"][0].contains("message") ||
      !parsed["choices"][0]["message"].contains("content")) {
    throw EndpointUnavailableError("chat endpoint reply has no content");
  }
  return parsed["choices"][0]["message"]["content"].get<std::string>();
}

RemoteEmbedder::RemoteEmbedder(std::shared_ptr<Transport> transport,
                               EndpointConfig config)
    : transport_(std::move(transport)), config_(std::move(config)) {}

std::string RemoteEmbedder::tag() const { return "remote-" + config_.model; }

std::vector<std::vector<double>> RemoteEmbedder::embed_batch(
    const std::vector<std::string>& inputs) {
  json body;
  body["model"] = config_.model;
  body["input"] = inputs;
  std::vector<std::pair<std::string, std::string>> headers;
  if (!config_.api_key.empty()) {
    headers.emplace_back("Authorization", "Bearer " + config_.api_key);
  }

  const int attempts = 1 + std::max(0, config_.retries);
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    try {
      const HttpResponse response = transport_->post_json(
          config_.embeddings_path, body.dump(), headers);
      if (response.status != 200) {
        throw EndpointUnavailableError("embeddings endpoint returned status " +
                                       std::to_string(response.status));
      }
      const json parsed = json::parse(response.body);
      std::vector<std::vector<double>> vectors;
      for (const auto& item : parsed.at("data")) {
        vectors.push_back(item.at("embedding").get<std::vector<double>>());
      }
      if (vectors.size() != inputs.size()) {
        throw EndpointUnavailableError(
            "embeddings endpoint returned wrong vector count");
      }
      return vectors;
    } catch (const json::exception& e) {
      last_error = e.what();
    } catch (const EndpointUnavailableError& e) {
      last_error = e.what();
    }
  }
  throw ProviderUnavailableError("embeddings provider failed after " +
                                 std::to_string(attempts) +
                                 " attempts: " + last_error);
}

const std::string& planner_prompt_template() { return kPlannerTemplate; }
const std::string& hypothesis_prompt_template() { return kHypothesisTemplate; }
const std::string& experiment_prompt_template() { return kExperimentTemplate; }

std::string fill_template(
    const std::string& tmpl,
    const std::vector<std::pair<std::string, std::string>>& slots) {
  std::string out = tmpl;
  for (const auto& [name, value] : slots) {
    const std::string placeholder = "{{" + name + "}}";
    std::size_t pos = 0;
    while ((pos = out.find(placeholder, pos)) != std::string::npos) {
      out.replace(pos, placeholder.size(), value);
      pos += value.size();
    }
  }
  return out;
}

std::string render_hypothesis_prompt(const Directive& directive,
                                     const PrinciplePool& pool,
                                     const ParameterSpace& space) {
  return fill_template(
      kHypothesisTemplate,
      {{"planner_brief", render_planner_brief(directive, pool)},
       {"space", describe_space(space)},
       {"history", recent_history(pool, 5)}});
}

Hypothesis parse_hypothesis_reply(const std::string& reply,
                                  const Directive& directive,
                                  const ParameterSpace& space) {
  std::string major;
  std::vector<std::string> minors;
  std::string rationale_inline;
  std::string statement;
  std::string candidate_text;

  std::istringstream lines(reply);
  std::string raw_line;
  while (std::getline(lines, raw_line)) {
    const std::string line = clean_line(raw_line);
    if (line.empty()) continue;
    if (auto v = labeled_value(line, "major premise")) {
      if (major.empty()) major = *v;
      continue;
    }
    if (auto v = labeled_value(line, "minor premise")) {
      if (!v->empty()) minors.push_back(*v);
      continue;
    }
    if (auto v = labeled_value(line, "rationale")) {
      rationale_inline = *v;
      continue;
    }
    if (auto v = labeled_value(line, "experimental candidate")) {
      candidate_text = *v;
      continue;
    }
    if (auto v = labeled_value(line, "candidate")) {
      if (candidate_text.empty()) candidate_text = *v;
      continue;
    }
    if (auto v = labeled_value(line, "hypothesis")) {
      if (statement.empty()) statement = *v;
      continue;
    }
  }

  if (major.empty()) major = rationale_inline;
  if (major.empty() || minors.empty() || statement.empty() ||
      candidate_text.empty()) {
    throw Error("malformed-reply",
                "reply lacks labeled rationale, hypothesis, or candidate");
  }

  Hypothesis hypothesis;
  hypothesis.principle_id =
      directive.principle_id ? *directive.principle_id : "";
  hypothesis.rationale.major_premise = major;
  hypothesis.rationale.minor_premises = minors;
  hypothesis.statement = statement;
  hypothesis.candidate = candidate_from_text(candidate_text, space);
  return hypothesis;
}

HypothesisProposal llm_hypothesizer(const Directive& directive,
                                    const PrinciplePool& pool,
                                    const ParameterSpace& space,
                                    ChatClient& client) {
  const std::string prompt =
      render_hypothesis_prompt(directive, pool, space);
  const int attempts = 1 + std::max(0, client.config().retries);
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const std::string reply = client.complete(
        {{"system", "You are the Hypothesis Agent."}, {"user", prompt}});
    Hypothesis hypothesis;
    try {
      hypothesis = parse_hypothesis_reply(reply, directive, space);
    } catch (const CandidateViolatesSpaceError&) {
      throw;
    } catch (const Error& e) {
      last_error = e.what();
      continue;
    }

    HypothesisProposal proposal;
    proposal.hypothesis = std::move(hypothesis);
    const bool mints = directive.action == Action::explore ||
                       directive.action == Action::initialize ||
                       directive.action == Action::refine;
    if (mints) {
      Principle minted;
      minted.id = next_principle_id(pool);
      minted.content = proposal.hypothesis.statement;
      minted.created_step = pool.last_step() + 1;
      if (directive.action == Action::refine && directive.principle_id) {
        minted.origin = Origin::refined_from(*directive.principle_id);
      } else {
        minted.origin = Origin::agent_proposed();
      }
      proposal.hypothesis.principle_id = minted.id;
      proposal.new_principle = std::move(minted);
    }
    return proposal;
  }
  throw UnparsableReplyError("no parsable reply after " +
                             std::to_string(attempts) +
                             " attempts; last error: " + last_error);
}

}  // namespace piflow
