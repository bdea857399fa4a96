#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "piflow/agents.hpp"
#include "piflow/decision.hpp"
#include "piflow/embedding.hpp"
#include "piflow/tasks.hpp"

namespace piflow {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Minimal HTTP seam so remote providers can be swapped for canned responses
// in tests. Implementations throw endpoint-unavailable on transport failure.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post_json(
      const std::string& path, const std::string& body,
      const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8080";
  std::string chat_path = "/v1/chat/completions";
  std::string embeddings_path = "/v1/embeddings";
  std::string model = "default-model";
  double temperature = 0.2;
  int timeout_seconds = 30;
  int retries = 2;
  std::string api_key;  // populated from PIFLOW_API_KEY

  bool operator==(const EndpointConfig&) const = default;
};

// Reads PIFLOW_API_KEY into config.api_key (empty when unset).
EndpointConfig endpoint_from_env(EndpointConfig base = {});

// Real HTTP transport over the configured base URL.
class HttplibTransport : public Transport {
 public:
  HttplibTransport(std::string base_url, int timeout_seconds);
  HttpResponse post_json(
      const std::string& path, const std::string& body,
      const std::vector<std::pair<std::string, std::string>>& headers)
      override;

 private:
  std::string base_url_;
  int timeout_seconds_;
};

// Canned-response transport for offline tests. Responses are consumed in
// order; an empty queue behaves like an unreachable endpoint. Requests are
// recorded for assertions.
class StubTransport : public Transport {
 public:
  explicit StubTransport(std::vector<HttpResponse> responses = {});

  HttpResponse post_json(
      const std::string& path, const std::string& body,
      const std::vector<std::pair<std::string, std::string>>& headers)
      override;

  void enqueue(HttpResponse response);
  const std::vector<std::pair<std::string, std::string>>& requests() const {
    return requests_;
  }

 private:
  std::mutex mutex_;
  std::deque<HttpResponse> responses_;
  std::vector<std::pair<std::string, std::string>> requests_;  // path, body
};

// Chat-completions client: one request per call, bearer auth when an API key
// is configured, returns the assistant message content.
class ChatClient {
 public:
  ChatClient(std::shared_ptr<Transport> transport, EndpointConfig config);

  std::string complete(
      const std::vector<std::pair<std::string, std::string>>& messages);

  const EndpointConfig& config() const { return config_; }

 private:
  std::shared_ptr<Transport> transport_;
  EndpointConfig config_;
};

// Remote embeddings provider speaking the {model, input:[...]} wire shape,
// with configured timeout/retries.
class RemoteEmbedder : public EmbeddingProvider {
 public:
  RemoteEmbedder(std::shared_ptr<Transport> transport, EndpointConfig config);

  std::string tag() const override;
  std::vector<std::vector<double>> embed_batch(
      const std::vector<std::string>& inputs) override;

 private:
  std::shared_ptr<Transport> transport_;
  EndpointConfig config_;
};

// Prompt templates shipped with the library (also installed as plain-text
// assets). Placeholders use {{name}} syntax.
const std::string& planner_prompt_template();
const std::string& hypothesis_prompt_template();
const std::string& experiment_prompt_template();
std::string fill_template(
    const std::string& tmpl,
    const std::vector<std::pair<std::string, std::string>>& slots);

// Renders the hypothesis-agent prompt for one iteration.
std::string render_hypothesis_prompt(const Directive& directive,
                                     const PrinciplePool& pool,
                                     const ParameterSpace& space);

// Parses a structured agent reply (labeled Rationale / Major premise / Minor
// premise / Hypothesis / Experimental Candidate lines) into a Hypothesis.
// Throws candidate-violates-space when the candidate line cannot be read for
// the active space, and plain Error("malformed-reply") when required labels
// are missing.
Hypothesis parse_hypothesis_reply(const std::string& reply,
                                  const Directive& directive,
                                  const ParameterSpace& space);

// LLM-backed hypothesizer: renders the prompt, asks the chat endpoint, and
// parses the reply; malformed replies are retried up to config.retries times,
// then surfaced as unparsable-reply-after-retries. Endpoint failures
// propagate untouched.
HypothesisProposal llm_hypothesizer(const Directive& directive,
                                    const PrinciplePool& pool,
                                    const ParameterSpace& space,
                                    ChatClient& client);

}  // namespace piflow
