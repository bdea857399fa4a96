#include "piflow/principle_store.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "json_codec.hpp"
#include "piflow/errors.hpp"

namespace piflow {

namespace {

constexpr const char* kPoolFormat = "piflow-pool";
constexpr int kPoolVersion = 1;

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::string format_number(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

}  // namespace

std::string to_string(const Origin& origin) {
  switch (origin.kind) {
    case OriginKind::initial_expert:
      return "initial-expert";
    case OriginKind::agent_proposed:
      return "agent-proposed";
    case OriginKind::refined_from:
      return "refined-from:" + origin.parent_id;
  }
  return "agent-proposed";
}

std::optional<Origin> parse_origin(const std::string& text) {
  if (text == "initial-expert") return Origin::initial_expert();
  if (text == "agent-proposed") return Origin::agent_proposed();
  constexpr const char* prefix = "refined-from:";
  if (text.rfind(prefix, 0) == 0 && text.size() > 13) {
    return Origin::refined_from(text.substr(13));
  }
  return std::nullopt;
}

std::string Candidate::describe() const {
  switch (kind) {
    case Kind::continuous: {
      std::string out;
      for (const auto& [name, value] : assignment) {
        if (!out.empty()) out += ", ";
        out += name + "=" + format_number(value);
      }
      return out;
    }
    case Kind::discrete:
      return id;
    case Kind::composition:
      return composition;
  }
  return "";
}

void PrinciplePool::add_principle(Principle principle) {
  if (trim(principle.content).empty()) {
    throw InvalidPrincipleError("principle '" + principle.id +
                                "' has empty content");
  }
  if (find(principle.id) != nullptr) {
    throw InvalidPrincipleError("duplicate principle id '" + principle.id +
                                "'");
  }
  if (principle.origin.kind == OriginKind::refined_from &&
      find(principle.origin.parent_id) == nullptr) {
    throw InvalidPrincipleError("refined-from parent '" +
                                principle.origin.parent_id +
                                "' is not in the pool");
  }
  principles_.push_back(std::move(principle));
}

void PrinciplePool::append_record(TrajectoryRecord record) {
  if (find(record.principle_id) == nullptr) {
    throw UnknownPrincipleError("record step " + std::to_string(record.step) +
                                " references principle '" +
                                record.principle_id + "'");
  }
  const int expected = last_step() + 1;
  if (record.step != expected) {
    throw NonMonotoneStepError("expected step " + std::to_string(expected) +
                               ", got " + std::to_string(record.step));
  }
  if (record.valid &&
      (!record.outcome.has_value() || !std::isfinite(*record.outcome))) {
    throw NonFiniteOutcomeError("valid record at step " +
                                std::to_string(record.step) +
                                " has no finite outcome");
  }
  records_.push_back(std::move(record));
}

const Principle* PrinciplePool::find(const std::string& id) const {
  for (const auto& p : principles_) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

int PrinciplePool::last_step() const {
  return records_.empty() ? 0 : records_.back().step;
}

std::size_t PrinciplePool::valid_record_count() const {
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (r.valid) ++n;
  }
  return n;
}

std::vector<PrincipleGroup> group_by_principle(const PrinciplePool& pool) {
  std::vector<PrincipleGroup> groups;
  std::unordered_map<std::string, std::size_t> index_of;
  for (const auto& record : pool.records()) {
    if (!record.valid) continue;
    auto it = index_of.find(record.principle_id);
    if (it == index_of.end()) {
      const Principle* principle = pool.find(record.principle_id);
      index_of.emplace(record.principle_id, groups.size());
      groups.push_back(PrincipleGroup{*principle, {}});
      it = index_of.find(record.principle_id);
    }
    groups[it->second].outcomes.push_back(record.outcome.value());
  }
  return groups;
}

void save_pool(const PrinciplePool& pool, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoFailureError("cannot open '" + path.string() + "' for writing");
  }
  out << codec::json{{"format", kPoolFormat}, {"version", kPoolVersion}}
             .dump()
      << '\n';
  for (const auto& principle : pool.principles()) {
    out << codec::principle_to_json(principle).dump() << '\n';
  }
  for (const auto& record : pool.records()) {
    out << codec::record_to_json(record).dump() << '\n';
  }
  if (!out) {
    throw IoFailureError("write to '" + path.string() + "' failed");
  }
}

PrinciplePool load_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoFailureError("cannot open '" + path.string() + "' for reading");
  }
  PrinciplePool pool;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    codec::json j;
    try {
      j = codec::json::parse(line);
    } catch (const codec::json::exception& e) {
      throw MalformedRecordError(std::string("invalid JSON: ") + e.what(),
                                 line_no);
    }
    try {
      if (!saw_header) {
        if (!j.is_object() || j.value("format", "") != kPoolFormat) {
          throw Error("malformed-json", "missing pool header");
        }
        if (j.value("version", 0) != kPoolVersion) {
          throw Error("malformed-json", "unsupported pool version");
        }
        saw_header = true;
        continue;
      }
      if (j.contains("step")) {
        pool.append_record(codec::record_from_json(j));
      } else {
        pool.add_principle(codec::principle_from_json(j));
      }
    } catch (const MalformedRecordError&) {
      throw;
    } catch (const Error& e) {
      throw MalformedRecordError(e.what(), line_no);
    }
  }
  return pool;  // an empty file loads as an empty pool
}

}  // namespace piflow
