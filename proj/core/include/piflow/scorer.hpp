#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "piflow/embedding.hpp"
#include "piflow/principle_store.hpp"

namespace piflow {

struct ScoreEntry {
  std::string principle_id;
  double exploration = 0.0;
  double exploitation = 0.0;
  double final_score = 0.0;

  bool operator==(const ScoreEntry&) const = default;
};

// Per-principle scores in group order, plus the blend weight that produced
// final = (1-lambda)*exploration + lambda*exploitation.
struct ScoreSheet {
  std::vector<ScoreEntry> entries;
  double lambda = 0.5;

  bool operator==(const ScoreSheet&) const = default;
};

// Representative value per principle = max outcome in its group; then min-max
// normalized across principles to [0,1]. All-equal representatives map to 0.5.
std::vector<double> exploitation_scores(
    const std::vector<PrincipleGroup>& groups);

// Raw novelty of principle i = min over j != i of cosine distance between the
// embeddings; scores = raw / max(raw). All-zero raw -> all 0.0. A single
// principle scores [1.0].
std::vector<double> exploration_scores(
    const std::vector<PrincipleGroup>& groups,
    const std::vector<EmbeddingVector>& embeddings);

// Element-wise blend into a ScoreSheet. Throws length-mismatch and
// lambda-out-of-range.
ScoreSheet final_scores(const std::vector<std::string>& principle_ids,
                        const std::vector<double>& exploration,
                        const std::vector<double>& exploitation,
                        double lambda);

// Argmax of final scores with lowest-index tie-break.
std::size_t best_index(const ScoreSheet& sheet);

// Convenience: group the pool, embed each principle's content, and build the
// full sheet in one call.
ScoreSheet score_pool(const PrinciplePool& pool, EmbeddingService& embeddings,
                      double lambda);

}  // namespace piflow
