#include "piflow/scorer.hpp"

#include <algorithm>
#include <limits>

#include "piflow/errors.hpp"

namespace piflow {

std::vector<double> exploitation_scores(
    const std::vector<PrincipleGroup>& groups) {
  if (groups.empty()) {
    throw EmptyGroupsError("no principle groups to score");
  }
  std::vector<double> representatives;
  representatives.reserve(groups.size());
  for (const auto& group : groups) {
    if (group.outcomes.empty()) {
      throw EmptyGroupsError("principle '" + group.principle.id +
                             "' has no outcomes");
    }
    representatives.push_back(
        *std::max_element(group.outcomes.begin(), group.outcomes.end()));
  }
  const auto [lo_it, hi_it] =
      std::minmax_element(representatives.begin(), representatives.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> scores(representatives.size());
  if (hi - lo <= 0.0) {
    std::fill(scores.begin(), scores.end(), 0.5);
    return scores;
  }
  for (std::size_t i = 0; i < representatives.size(); ++i) {
    scores[i] = (representatives[i] - lo) / (hi - lo);
  }
  return scores;
}

std::vector<double> exploration_scores(
    const std::vector<PrincipleGroup>& groups,
    const std::vector<EmbeddingVector>& embeddings) {
  if (groups.empty()) {
    throw EmptyGroupsError("no principle groups to score");
  }
  if (embeddings.size() != groups.size()) {
    throw MissingEmbeddingError(
        "have " + std::to_string(embeddings.size()) + " embeddings for " +
        std::to_string(groups.size()) + " principles");
  }
  if (groups.size() == 1) {
    return {1.0};  // a lone principle is maximally novel
  }
  std::vector<double> raw(groups.size());
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < embeddings.size(); ++j) {
      if (j == i) continue;
      nearest = std::min(nearest, cosine_distance(embeddings[i], embeddings[j]));
    }
    raw[i] = nearest;
  }
  const double max_raw = *std::max_element(raw.begin(), raw.end());
  std::vector<double> scores(raw.size(), 0.0);
  if (max_raw <= 0.0) {
    return scores;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    scores[i] = raw[i] / max_raw;
  }
  return scores;
}

ScoreSheet final_scores(const std::vector<std::string>& principle_ids,
                        const std::vector<double>& exploration,
                        const std::vector<double>& exploitation,
                        double lambda) {
  if (principle_ids.size() != exploration.size() ||
      exploration.size() != exploitation.size()) {
    throw LengthMismatchError("ids/exploration/exploitation sizes differ");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw LambdaOutOfRangeError("lambda = " + std::to_string(lambda));
  }
  ScoreSheet sheet;
  sheet.lambda = lambda;
  sheet.entries.reserve(principle_ids.size());
  for (std::size_t i = 0; i < principle_ids.size(); ++i) {
    ScoreEntry entry;
    entry.principle_id = principle_ids[i];
    entry.exploration = exploration[i];
    entry.exploitation = exploitation[i];
    entry.final_score =
        (1.0 - lambda) * exploration[i] + lambda * exploitation[i];
    sheet.entries.push_back(std::move(entry));
  }
  return sheet;
}

std::size_t best_index(const ScoreSheet& sheet) {
  if (sheet.entries.empty()) {
    throw EmptyGroupsError("score sheet has no entries");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < sheet.entries.size(); ++i) {
    if (sheet.entries[i].final_score > sheet.entries[best].final_score) {
      best = i;
    }
  }
  return best;
}

ScoreSheet score_pool(const PrinciplePool& pool, EmbeddingService& embeddings,
                      double lambda) {
  const auto groups = group_by_principle(pool);
  std::vector<EmbeddingVector> vectors;
  std::vector<std::string> ids;
  vectors.reserve(groups.size());
  ids.reserve(groups.size());
  for (const auto& group : groups) {
    vectors.push_back(embeddings.embed(group.principle.content));
    ids.push_back(group.principle.id);
  }
  return final_scores(ids, exploration_scores(groups, vectors),
                      exploitation_scores(groups), lambda);
}

}  // namespace piflow
