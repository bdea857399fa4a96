#pragma once

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace piflow {

struct EmbeddingVector {
  std::vector<double> values;
  std::string provider_tag;

  std::size_t dim() const { return values.size(); }

  bool operator==(const EmbeddingVector&) const = default;
};

// 1 - <a,b> for unit vectors; range [0,2]. Throws dimension-mismatch.
double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b);

// Produces raw (unnormalized) vectors for a batch of inputs.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string tag() const = 0;
  virtual std::vector<std::vector<double>> embed_batch(
      const std::vector<std::string>& inputs) = 0;
};

// Deterministic offline embedder: hashes each whitespace token into one of
// `dim` buckets with a hash-derived sign, then sums. Hermetic stand-in for a
// hosted sentence-embedding model.
class HashingEmbedder : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {}

  std::string tag() const override;
  std::vector<std::vector<double>> embed_batch(
      const std::vector<std::string>& inputs) override;

  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
};

// Front door for embeddings: trims input, rejects empty content, unit-
// normalizes provider output, and caches by content so repeated lookups do
// no provider round-trip. Safe for concurrent readers; writes serialize.
class EmbeddingService {
 public:
  explicit EmbeddingService(std::shared_ptr<EmbeddingProvider> provider);

  EmbeddingVector embed(const std::string& content);

  std::size_t cache_size() const;

 private:
  std::shared_ptr<EmbeddingProvider> provider_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
};

}  // namespace piflow
