#include "piflow/config.hpp"

#include <fstream>
#include <sstream>

#include "piflow/errors.hpp"

namespace piflow {

namespace {

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw InvalidConfigError("key '" + key + "' needs a number, got '" +
                             value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw InvalidConfigError("key '" + key + "' needs an integer, got '" +
                             value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidConfigError("key '" + key + "' needs a boolean, got '" +
                           value + "'");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream lines(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw InvalidConfigError("bad section header at line " +
                                 std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfigError("expected key=value at line " +
                               std::to_string(line_no));
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw InvalidConfigError("empty key at line " + std::to_string(line_no));
    }
    if (!section.empty()) key = section + "." + key;
    entries.emplace_back(std::move(key), value);
  }
  return entries;
}

std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_config(
    RunConfig& config,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "run.task") {
      config.task = value;
    } else if (key == "run.policy") {
      config.policy = parse_policy(value);
    } else if (key == "run.budget") {
      config.budget = static_cast<int>(parse_int(key, value));
    } else if (key == "run.seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "run.noise") {
      config.noise_amplitude = parse_double(key, value);
    } else if (key == "run.stop_target") {
      config.stop_target = parse_double(key, value);
    } else if (key == "decision.lambda") {
      config.decision.lambda = parse_double(key, value);
    } else if (key == "decision.cold_start") {
      config.decision.cold_start = static_cast<int>(parse_int(key, value));
    } else if (key == "decision.thresholds") {
      const DecisionConfig preset = threshold_preset(value);
      config.decision.refine_threshold = preset.refine_threshold;
      config.decision.validate_threshold = preset.validate_threshold;
    } else if (key == "decision.refine_threshold") {
      config.decision.refine_threshold = parse_double(key, value);
    } else if (key == "decision.validate_threshold") {
      config.decision.validate_threshold = parse_double(key, value);
    } else if (key == "principles.principle") {
      config.initial_principles.push_back(parse_tagged_principle(value));
    } else if (key == "agent.validate_sigma") {
      config.agent.validate_sigma = parse_double(key, value);
    } else if (key == "agent.refine_sigma") {
      config.agent.refine_sigma = parse_double(key, value);
    } else if (key == "llm.use") {
      config.use_llm = parse_bool(key, value);
    } else if (key == "llm.base_url") {
      config.endpoint.base_url = value;
    } else if (key == "llm.model") {
      config.endpoint.model = value;
    } else if (key == "llm.temperature") {
      config.endpoint.temperature = parse_double(key, value);
    } else if (key == "llm.timeout_seconds") {
      config.endpoint.timeout_seconds =
          static_cast<int>(parse_int(key, value));
    } else if (key == "llm.retries") {
      config.endpoint.retries = static_cast<int>(parse_int(key, value));
    } else if (key == "embedding.dim") {
      config.embedding_dim =
          static_cast<std::size_t>(parse_int(key, value));
    } else {
      throw InvalidConfigError("unknown config key '" + key + "'");
    }
  }
}

}  // namespace piflow
