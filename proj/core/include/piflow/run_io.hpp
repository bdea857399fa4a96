#pragma once

#include <filesystem>
#include <string>

#include "piflow/orchestrator.hpp"

namespace piflow {

// Run-record file: a JSON header line (format, version, config, initial
// principles, and a generated_at stamp unless suppressed), one JSON line per
// step, then a {"summary": ...} footer line. include_timestamp=false also
// drops per-step latency so identical runs serialize byte-identically.
void save_run(const RunRecord& record, const std::filesystem::path& path,
              bool include_timestamp = true);
RunRecord load_run(const std::filesystem::path& path);

// Per-step CSV exports for external plotting: regret.csv, trajectory.csv,
// and scores_exploration/exploitation/final.csv (one column per principle,
// blank cells for unscored steps). Returns the list of files written.
std::vector<std::filesystem::path> export_run_csvs(
    const RunRecord& record, const std::filesystem::path& out_dir);

// Ablation table: one row per sweep cell with mean/std of SQ and AUC.
void write_ablation_csv(const std::vector<SweepCellResult>& cells,
                        const std::filesystem::path& path);

// "SQ=... AUC=... final_regret=..." one-line summary for CLI output.
std::string summary_line(const RunRecord& record);

// Summary as a JSON object string (pretty-printed).
std::string summary_json(const RunRecord& record);

}  // namespace piflow
