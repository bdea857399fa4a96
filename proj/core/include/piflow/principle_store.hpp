#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "piflow/types.hpp"

namespace piflow {

// Persistent pool of principles plus the append-only trajectory of
// principle-outcome records. Single writer; copies act as read snapshots.
class PrinciplePool {
 public:
  const std::vector<Principle>& principles() const { return principles_; }
  const std::vector<TrajectoryRecord>& records() const { return records_; }

  // Validates: unique id, non-empty content after trimming, and a resolvable
  // parent for refined-from origins.
  void add_principle(Principle principle);

  // Appends the next record. The step must be exactly last_step()+1 (1 for an
  // empty trajectory), the principle must resolve, and a valid record must
  // carry a finite outcome.
  void append_record(TrajectoryRecord record);

  const Principle* find(const std::string& id) const;
  int last_step() const;  // 0 when no records exist
  std::size_t valid_record_count() const;

  bool operator==(const PrinciplePool&) const = default;

 private:
  std::vector<Principle> principles_;
  std::vector<TrajectoryRecord> records_;
};

// Outcomes of valid records grouped per principle, in first-appearance order.
struct PrincipleGroup {
  Principle principle;
  std::vector<double> outcomes;

  bool operator==(const PrincipleGroup&) const = default;
};

std::vector<PrincipleGroup> group_by_principle(const PrinciplePool& pool);

// Line-delimited JSON persistence: a header line with format+version, then
// one line per principle and per record. load(save(pool)) == pool.
void save_pool(const PrinciplePool& pool, const std::filesystem::path& path);
PrinciplePool load_pool(const std::filesystem::path& path);

}  // namespace piflow
