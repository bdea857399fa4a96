#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "piflow/decision.hpp"
#include "piflow/principle_store.hpp"
#include "piflow/tasks.hpp"
#include "piflow/types.hpp"

namespace piflow {

struct Rationale {
  std::string major_premise;
  std::vector<std::string> minor_premises;

  bool operator==(const Rationale&) const = default;
};

// One testable proposal: which principle it rests on, the syllogistic
// rationale, the statement itself, and the single candidate to try.
struct Hypothesis {
  std::string principle_id;
  Rationale rationale;
  std::string statement;
  Candidate candidate;

  bool operator==(const Hypothesis&) const = default;
};

// Bounded FIFO transcript per agent; oldest messages evicted first.
class MessageBuffer {
 public:
  explicit MessageBuffer(std::size_t capacity = 10) : capacity_(capacity) {}

  void push(std::string role, std::string text);

  const std::deque<std::pair<std::string, std::string>>& messages() const {
    return messages_;
  }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return messages_.size(); }

 private:
  std::size_t capacity_;
  std::deque<std::pair<std::string, std::string>> messages_;
};

// A hypothesizer's full output: the hypothesis plus any principle it minted
// (explore/initialize and refine directives create one).
struct HypothesisProposal {
  std::optional<Principle> new_principle;
  Hypothesis hypothesis;

  bool operator==(const HypothesisProposal&) const = default;
};

// Neighborhood widths for the scripted hypothesizer, as fractions of each
// continuous dim's range. Defaults: validate casts a wider net (10%) than
// refine (3%).
struct ScriptedAgentOptions {
  double validate_sigma = 0.10;
  double refine_sigma = 0.03;

  bool operator==(const ScriptedAgentOptions&) const = default;
};

// Deterministic scripted stand-in for an LLM hypothesis agent.
//  - explore/initialize: fresh uniform candidate (continuous), an untried
//    catalog id (discrete), or a random valid composition (hybrid); mints a
//    new principle describing the sampled region.
//  - validate: resamples near the directive principle's best-known candidate
//    (Gaussian sigma = validate_sigma of each dim's range, clipped; nearest
//    untried id by catalog order; one element count nudged by +-1 or +-0.1).
//  - refine: the same neighborhood at refine_sigma, plus a refined-from
//    principle.
// Pure in (directive, pool, space, seed, options).
HypothesisProposal scripted_hypothesizer(
    const Directive& directive, const PrinciplePool& pool,
    const ParameterSpace& space, std::uint64_t seed,
    const ScriptedAgentOptions& options = {});

// Runs the experiment: evaluates the candidate against the objective. Any
// objective error becomes a valid=false record; no interpretation happens
// here. Never touches the principle list.
TrajectoryRecord run_experiment(const Hypothesis& hypothesis,
                                const Objective& objective, int step);

// Mints the next free principle id of the form "p-<n>".
std::string next_principle_id(const PrinciplePool& pool);

}  // namespace piflow
