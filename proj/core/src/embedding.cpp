#include "piflow/embedding.hpp"

#include <cmath>
#include <mutex>

#include "piflow/errors.hpp"

namespace piflow {

namespace {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace

double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError("dims " + std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
  }
  // Unit inputs keep 1-dot inside [0,2] up to rounding; clamp the rounding.
  double d = 1.0 - dot;
  if (d < 0.0) d = 0.0;
  if (d > 2.0) d = 2.0;
  return d;
}

std::string HashingEmbedder::tag() const {
  return "hashing-" + std::to_string(dim_);
}

std::vector<std::vector<double>> HashingEmbedder::embed_batch(
    const std::vector<std::string>& inputs) {
  std::vector<std::vector<double>> out;
  out.reserve(inputs.size());
  for (const auto& input : inputs) {
    std::vector<double> v(dim_, 0.0);
    for (const auto& token : tokenize(input)) {
      const std::uint64_t h = fnv1a64(token);
      const std::size_t bucket = static_cast<std::size_t>(h % dim_);
      const double sign = ((h >> 32) & 1ULL) ? 1.0 : -1.0;
      v[bucket] += sign;
    }
    // Distinct tokens can cancel in a shared bucket; fall back to a single
    // content-derived spike so the vector stays normalizable.
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    if (norm_sq < 1e-24) {
      v.assign(dim_, 0.0);
      v[static_cast<std::size_t>(fnv1a64(input) % dim_)] = 1.0;
    }
    out.push_back(std::move(v));
  }
  return out;
}

EmbeddingService::EmbeddingService(std::shared_ptr<EmbeddingProvider> provider)
    : provider_(std::move(provider)) {}

EmbeddingVector EmbeddingService::embed(const std::string& content) {
  const std::string key = trim(content);
  if (key.empty()) {
    throw EmptyContentError("cannot embed empty content");
  }
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto raw = provider_->embed_batch({key});
  if (raw.size() != 1 || raw[0].empty()) {
    throw ProviderUnavailableError("provider returned no vector");
  }
  EmbeddingVector vec{std::move(raw[0]), provider_->tag()};
  double norm_sq = 0.0;
  for (double x : vec.values) {
    if (!std::isfinite(x)) {
      throw ProviderUnavailableError("provider returned non-finite values");
    }
    norm_sq += x * x;
  }
  if (norm_sq <= 0.0) {
    throw ProviderUnavailableError("provider returned a zero vector");
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& x : vec.values) x *= inv;
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.emplace(key, std::move(vec));
  return it->second;
}

std::size_t EmbeddingService::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

}  // namespace piflow
