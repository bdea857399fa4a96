#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace piflow {

enum class OriginKind { initial_expert, agent_proposed, refined_from };

// Where a principle came from. refined_from carries the parent principle id.
struct Origin {
  OriginKind kind = OriginKind::agent_proposed;
  std::string parent_id;

  static Origin initial_expert() { return {OriginKind::initial_expert, {}}; }
  static Origin agent_proposed() { return {OriginKind::agent_proposed, {}}; }
  static Origin refined_from(std::string parent) {
    return {OriginKind::refined_from, std::move(parent)};
  }

  bool operator==(const Origin&) const = default;
};

// Serialized form: "initial-expert" | "agent-proposed" | "refined-from:<id>".
std::string to_string(const Origin& origin);
std::optional<Origin> parse_origin(const std::string& text);

struct Principle {
  std::string id;
  std::string content;
  Origin origin;
  int created_step = 0;

  bool operator==(const Principle&) const = default;
};

// A point in the task's parameter space: a named continuous assignment, a
// catalog id, or a composition string, depending on the space kind.
struct Candidate {
  enum class Kind { continuous, discrete, composition };

  Kind kind = Kind::continuous;
  std::vector<std::pair<std::string, double>> assignment;  // continuous
  std::string id;                                          // discrete
  std::string composition;                                 // composition

  static Candidate make_continuous(
      std::vector<std::pair<std::string, double>> values) {
    Candidate c;
    c.kind = Kind::continuous;
    c.assignment = std::move(values);
    return c;
  }
  static Candidate make_discrete(std::string catalog_id) {
    Candidate c;
    c.kind = Kind::discrete;
    c.id = std::move(catalog_id);
    return c;
  }
  static Candidate make_composition(std::string text) {
    Candidate c;
    c.kind = Kind::composition;
    c.composition = std::move(text);
    return c;
  }

  // One-line human-readable rendering for logs and CSV export.
  std::string describe() const;

  bool operator==(const Candidate&) const = default;
};

struct TrajectoryRecord {
  int step = 0;
  std::string principle_id;
  std::string hypothesis;
  Candidate candidate;
  std::optional<double> outcome;  // unset when the experiment produced none
  bool valid = true;

  bool operator==(const TrajectoryRecord&) const = default;
};

}  // namespace piflow
