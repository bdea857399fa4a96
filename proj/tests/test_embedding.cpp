#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "piflow/embedding.hpp"
#include "piflow/errors.hpp"

using namespace piflow;

namespace {

// Provider that counts batch calls so cache hits are observable.
class CountingProvider : public EmbeddingProvider {
 public:
  explicit CountingProvider(std::size_t dim = 8) : inner_(dim) {}

  std::string tag() const override { return inner_.tag(); }
  std::vector<std::vector<double>> embed_batch(
      const std::vector<std::string>& inputs) override {
    calls += inputs.size();
    return inner_.embed_batch(inputs);
  }

  std::size_t calls = 0;

 private:
  HashingEmbedder inner_;
};

double norm(const EmbeddingVector& v) {
  double s = 0.0;
  for (double x : v.values) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("hashing embedder is deterministic and dimension-faithful") {
  HashingEmbedder embedder(64);
  auto a = embedder.embed_batch({"helix pitch near 150 nm"});
  auto b = embedder.embed_batch({"helix pitch near 150 nm"});
  REQUIRE(a.size() == 1);
  CHECK(a == b);
  CHECK(a[0].size() == 64);
}

TEST_CASE("different contents almost surely embed differently") {
  HashingEmbedder embedder(256);
  auto vecs = embedder.embed_batch(
      {"wide fiber radius with low turn count",
       "narrow fiber radius with high turn count",
       "mid-catalog aromatics with amide linkers"});
  CHECK(vecs[0] != vecs[1]);
  CHECK(vecs[0] != vecs[2]);
  CHECK(vecs[1] != vecs[2]);
}

TEST_CASE("service unit-normalizes provider output") {
  EmbeddingService service(std::make_shared<HashingEmbedder>(128));
  EmbeddingVector v = service.embed("a modest sentence about helices");
  CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.provider_tag == HashingEmbedder(128).tag());
}

TEST_CASE("service caches by trimmed content") {
  auto provider = std::make_shared<CountingProvider>();
  EmbeddingService service(provider);

  EmbeddingVector a = service.embed("pitch matters");
  CHECK(provider->calls == 1);
  EmbeddingVector b = service.embed("pitch matters");
  CHECK(provider->calls == 1);  // cache hit
  EmbeddingVector c = service.embed("  pitch matters  \n");
  CHECK(provider->calls == 1);  // trimmed to the same key
  CHECK(a == b);
  CHECK(a == c);
  CHECK(service.cache_size() == 1);

  service.embed("a different sentence");
  CHECK(provider->calls == 2);
  CHECK(service.cache_size() == 2);
}

TEST_CASE("empty or whitespace-only content is rejected") {
  EmbeddingService service(std::make_shared<HashingEmbedder>(16));
  CHECK_THROWS_AS(service.embed(""), EmptyContentError);
  CHECK_THROWS_AS(service.embed("   \t  "), EmptyContentError);
}

TEST_CASE("cosine distance spans [0,2] and detects dimension mismatch") {
  EmbeddingVector x{{1.0, 0.0}, "t"};
  EmbeddingVector y{{0.0, 1.0}, "t"};
  EmbeddingVector nx{{-1.0, 0.0}, "t"};
  CHECK(cosine_distance(x, x) == doctest::Approx(0.0));
  CHECK(cosine_distance(x, y) == doctest::Approx(1.0));
  CHECK(cosine_distance(x, nx) == doctest::Approx(2.0));

  EmbeddingVector z{{1.0, 0.0, 0.0}, "t"};
  CHECK_THROWS_AS(cosine_distance(x, z), DimensionMismatchError);
}

TEST_CASE("token permutation changes nothing; bag-of-words semantics") {
  HashingEmbedder embedder(128);
  auto a = embedder.embed_batch({"alpha beta gamma"});
  auto b = embedder.embed_batch({"gamma alpha beta"});
  CHECK(a == b);
}

TEST_CASE("single-token content embeds to a usable nonzero vector") {
  EmbeddingService service(std::make_shared<HashingEmbedder>(32));
  EmbeddingVector v = service.embed("tungsten");
  CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-12));
}
