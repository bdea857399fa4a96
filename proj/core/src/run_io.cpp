#include "piflow/run_io.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "json_codec.hpp"
#include "piflow/errors.hpp"

namespace piflow {

namespace {

using nlohmann::json;

constexpr const char* kRunFormat = "piflow-run";
constexpr int kRunVersion = 1;

std::string utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

// CSV cell formatting: full double round-trip precision, plain '.' decimal.
std::string csv_number(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted += "\"";
  return quoted;
}

// Principle ids in order of first appearance across score sheets.
std::vector<std::string> scored_principles(const RunRecord& record) {
  std::vector<std::string> ids;
  for (const auto& step : record.steps) {
    if (!step.directive.scores) continue;
    for (const auto& entry : step.directive.scores->entries) {
      if (std::find(ids.begin(), ids.end(), entry.principle_id) ==
          ids.end()) {
        ids.push_back(entry.principle_id);
      }
    }
  }
  return ids;
}

void write_score_csv(const RunRecord& record,
                     const std::filesystem::path& path,
                     double ScoreEntry::*field) {
  const auto ids = scored_principles(record);
  std::ofstream out(path);
  if (!out) {
    throw IoFailureError("cannot open '" + path.string() + "' for writing");
  }
  out << "step";
  for (const auto& id : ids) out << "," << csv_escape(id);
  out << "\n";
  for (const auto& step : record.steps) {
    out << step.record.step;
    for (const auto& id : ids) {
      out << ",";
      if (!step.directive.scores) continue;
      const auto& entries = step.directive.scores->entries;
      for (const auto& entry : entries) {
        if (entry.principle_id == id) {
          out << csv_number(entry.*field);
          break;
        }
      }
    }
    out << "\n";
  }
}

}  // namespace

void save_run(const RunRecord& record, const std::filesystem::path& path,
              bool include_timestamp) {
  std::ofstream out(path);
  if (!out) {
    throw IoFailureError("cannot open '" + path.string() + "' for writing");
  }
  json header{{"format", kRunFormat},
              {"version", kRunVersion},
              {"config", codec::run_config_to_json(record.config)}};
  json principles = json::array();
  for (const auto& principle : record.initial_principles) {
    principles.push_back(codec::principle_to_json(principle));
  }
  header["initial_principles"] = principles;
  if (include_timestamp) {
    header["generated_at"] = utc_now();
  }
  out << header.dump() << '\n';

  for (const auto& step : record.steps) {
    json line{{"step", step.record.step},
              {"directive", codec::directive_to_json(step.directive)},
              {"hypothesis", codec::hypothesis_to_json(step.hypothesis)},
              {"record", codec::record_to_json(step.record)}};
    line["new_principle"] = step.new_principle
                                ? codec::principle_to_json(*step.new_principle)
                                : json(nullptr);
    if (include_timestamp) {
      line["latency_ms"] = step.latency_ms;
    }
    out << line.dump() << '\n';
  }
  out << json{{"summary", codec::summary_to_json(record.summary)}}.dump()
      << '\n';
  if (!out) {
    throw IoFailureError("write to '" + path.string() + "' failed");
  }
}

RunRecord load_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoFailureError("cannot open '" + path.string() + "' for reading");
  }
  RunRecord record;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  bool saw_summary = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw MalformedRecordError(std::string("invalid JSON: ") + e.what(),
                                 line_no);
    }
    try {
      if (!saw_header) {
        if (j.value("format", "") != kRunFormat ||
            j.value("version", 0) != kRunVersion) {
          throw Error("malformed-json", "missing run header");
        }
        record.config = codec::run_config_from_json(j.at("config"));
        for (const auto& p : j.at("initial_principles")) {
          record.initial_principles.push_back(codec::principle_from_json(p));
        }
        saw_header = true;
        continue;
      }
      if (j.contains("summary")) {
        record.summary = codec::summary_from_json(j.at("summary"));
        saw_summary = true;
        continue;
      }
      StepLog step;
      step.directive = codec::directive_from_json(j.at("directive"));
      step.hypothesis = codec::hypothesis_from_json(j.at("hypothesis"));
      step.record = codec::record_from_json(j.at("record"));
      const json new_principle = j.at("new_principle");
      if (!new_principle.is_null()) {
        step.new_principle = codec::principle_from_json(new_principle);
      }
      step.latency_ms = j.value("latency_ms", 0.0);
      record.steps.push_back(std::move(step));
    } catch (const MalformedRecordError&) {
      throw;
    } catch (const Error& e) {
      throw MalformedRecordError(e.what(), line_no);
    } catch (const json::exception& e) {
      throw MalformedRecordError(std::string("bad field: ") + e.what(),
                                 line_no);
    }
  }
  if (!saw_header) {
    throw MalformedRecordError("file has no run header", 1);
  }
  if (!saw_summary) {
    throw MalformedRecordError("file has no summary footer",
                               line_no == 0 ? 1 : line_no);
  }
  return record;
}

std::vector<std::filesystem::path> export_run_csvs(
    const RunRecord& record, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  const double v_star = make_objective(record.config.task).mu_ref();

  // regret.csv: rows only for valid steps, where regret is defined.
  {
    const auto path = out_dir / "regret.csv";
    std::ofstream out(path);
    if (!out) {
      throw IoFailureError("cannot open '" + path.string() + "'");
    }
    out << "t,average_regret,instantaneous_regret\n";
    const auto outcomes = record.valid_outcomes();
    if (!outcomes.empty()) {
      const auto series = regret_series(outcomes, v_star);
      for (std::size_t i = 0; i < series.size(); ++i) {
        out << series[i].t << "," << csv_number(series[i].average_regret)
            << "," << csv_number(v_star - outcomes[i]) << "\n";
      }
    }
    written.push_back(path);
  }

  // trajectory.csv: one row per loop step, valid or not.
  {
    const auto path = out_dir / "trajectory.csv";
    std::ofstream out(path);
    if (!out) {
      throw IoFailureError("cannot open '" + path.string() + "'");
    }
    out << "step,action,principle_id,candidate,valid,outcome\n";
    for (const auto& step : record.steps) {
      out << step.record.step << "," << to_string(step.directive.action)
          << "," << csv_escape(step.record.principle_id) << ","
          << csv_escape(step.record.candidate.describe()) << ","
          << (step.record.valid ? "true" : "false") << ",";
      if (step.record.outcome) out << csv_number(*step.record.outcome);
      out << "\n";
    }
    written.push_back(path);
  }

  const std::filesystem::path exploration = out_dir / "scores_exploration.csv";
  write_score_csv(record, exploration, &ScoreEntry::exploration);
  written.push_back(exploration);
  const std::filesystem::path exploitation =
      out_dir / "scores_exploitation.csv";
  write_score_csv(record, exploitation, &ScoreEntry::exploitation);
  written.push_back(exploitation);
  const std::filesystem::path final_path = out_dir / "scores_final.csv";
  write_score_csv(record, final_path, &ScoreEntry::final_score);
  written.push_back(final_path);

  return written;
}

void write_ablation_csv(const std::vector<SweepCellResult>& cells,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoFailureError("cannot open '" + path.string() + "' for writing");
  }
  // All cells in one sweep share the same field list.
  std::vector<std::string> fields;
  if (!cells.empty()) {
    for (const auto& [field, value] : cells.front().cell) {
      fields.push_back(field);
    }
  }
  for (const auto& field : fields) out << csv_escape(field) << ",";
  out << "sq_mean,sq_std,auc_mean,auc_std,n_seeds\n";
  for (const auto& cell : cells) {
    for (const auto& [field, value] : cell.cell) {
      out << csv_escape(value) << ",";
    }
    out << csv_number(cell.sq_mean) << "," << csv_number(cell.sq_std) << ","
        << csv_number(cell.auc_mean) << "," << csv_number(cell.auc_std) << ","
        << cell.n_seeds << "\n";
  }
}

std::string summary_line(const RunRecord& record) {
  std::ostringstream out;
  out << "SQ=";
  if (record.summary.sq_percent) {
    out << csv_number(*record.summary.sq_percent) << "%";
  } else {
    out << "n/a";
  }
  out << " AUC=";
  if (record.summary.auc_percent) {
    out << csv_number(*record.summary.auc_percent) << "%";
  } else {
    out << "n/a";
  }
  out << " final_regret=";
  if (!record.summary.regret.empty()) {
    out << csv_number(record.summary.regret.back().average_regret);
  } else {
    out << "n/a";
  }
  out << " steps=" << record.steps.size();
  return out.str();
}

std::string summary_json(const RunRecord& record) {
  return codec::summary_to_json(record.summary).dump(2);
}

}  // namespace piflow
