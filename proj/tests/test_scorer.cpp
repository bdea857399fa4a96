#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "piflow/embedding.hpp"
#include "piflow/errors.hpp"
#include "piflow/rng.hpp"
#include "piflow/scorer.hpp"

using namespace piflow;

namespace {

PrincipleGroup make_group(const std::string& id, std::vector<double> outcomes,
                          const std::string& content = "") {
  PrincipleGroup g;
  g.principle.id = id;
  g.principle.content = content.empty() ? ("principle " + id) : content;
  g.principle.origin = Origin::agent_proposed();
  g.outcomes = std::move(outcomes);
  return g;
}

EmbeddingVector unit_vector(rng::Rng& r, std::size_t dim) {
  EmbeddingVector v;
  v.values.resize(dim);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (auto& x : v.values) {
      x = r.normal(0.0, 1.0);
      norm_sq += x * x;
    }
  } while (norm_sq < 1e-12);
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (auto& x : v.values) x *= inv;
  v.provider_tag = "test";
  return v;
}

double euclidean(const EmbeddingVector& a, const EmbeddingVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("exploitation uses per-principle max, min-max normalized") {
  std::vector<PrincipleGroup> groups = {
      make_group("p-1", {0.2, 1.0, 0.5}),  // max 1.0
      make_group("p-2", {3.0}),            // max 3.0
      make_group("p-3", {2.0, 1.9}),       // max 2.0
  };
  auto scores = exploitation_scores(groups);
  REQUIRE(scores.size() == 3);
  CHECK(scores[0] == doctest::Approx(0.0));
  CHECK(scores[1] == doctest::Approx(1.0));
  CHECK(scores[2] == doctest::Approx(0.5));
}

TEST_CASE("all-equal exploitation representatives map to 0.5") {
  std::vector<PrincipleGroup> groups = {
      make_group("p-1", {1.4}),
      make_group("p-2", {1.4, 0.2}),
      make_group("p-3", {1.4, 1.4}),
  };
  auto scores = exploitation_scores(groups);
  for (double s : scores) CHECK(s == doctest::Approx(0.5));
}

TEST_CASE("exploitation rejects an empty group list") {
  CHECK_THROWS_AS(exploitation_scores({}), EmptyGroupsError);
}

TEST_CASE("exploration normalizes min-cosine novelty by the max raw value") {
  // Orthogonal pair plus a duplicate direction: the duplicate pair has raw
  // novelty 0 against each other... but min over *others* counts both.
  std::vector<PrincipleGroup> groups = {
      make_group("p-1", {}), make_group("p-2", {}), make_group("p-3", {})};
  std::vector<EmbeddingVector> embeddings = {
      {{1.0, 0.0}, "t"}, {{0.0, 1.0}, "t"}, {{1.0, 0.0}, "t"}};
  auto scores = exploration_scores(groups, embeddings);
  REQUIRE(scores.size() == 3);
  // raw: p1 -> min(1, 0) = 0; p2 -> min(1, 1) = 1; p3 -> min(0, 1) = 0.
  CHECK(scores[0] == doctest::Approx(0.0));
  CHECK(scores[1] == doctest::Approx(1.0));
  CHECK(scores[2] == doctest::Approx(0.0));
}

TEST_CASE("a lone principle scores exploration 1.0") {
  auto scores = exploration_scores({make_group("p-1", {})},
                                   {{{1.0, 0.0}, "t"}});
  REQUIRE(scores.size() == 1);
  CHECK(scores[0] == doctest::Approx(1.0));
}

TEST_CASE("identical embeddings yield all-zero exploration") {
  std::vector<PrincipleGroup> groups = {make_group("p-1", {}),
                                        make_group("p-2", {})};
  std::vector<EmbeddingVector> embeddings = {{{0.6, 0.8}, "t"},
                                             {{0.6, 0.8}, "t"}};
  auto scores = exploration_scores(groups, embeddings);
  CHECK(scores[0] == doctest::Approx(0.0));
  CHECK(scores[1] == doctest::Approx(0.0));
}

TEST_CASE("final_scores blends with lambda and validates inputs") {
  ScoreSheet sheet = final_scores({"p-1", "p-2"}, {1.0, 0.0}, {0.0, 1.0}, 0.25);
  REQUIRE(sheet.entries.size() == 2);
  CHECK(sheet.lambda == doctest::Approx(0.25));
  CHECK(sheet.entries[0].final_score == doctest::Approx(0.75));
  CHECK(sheet.entries[1].final_score == doctest::Approx(0.25));
  CHECK(sheet.entries[0].principle_id == "p-1");

  CHECK_THROWS_AS(final_scores({"p-1"}, {1.0, 0.0}, {0.0}, 0.5),
                  LengthMismatchError);
  CHECK_THROWS_AS(final_scores({"p-1"}, {1.0}, {0.0}, 1.5),
                  LambdaOutOfRangeError);
  CHECK_THROWS_AS(final_scores({"p-1"}, {1.0}, {0.0}, -0.1),
                  LambdaOutOfRangeError);
}

TEST_CASE("best_index breaks ties toward the lowest index") {
  ScoreSheet sheet;
  sheet.entries = {{"p-1", 0.0, 0.0, 0.4},
                   {"p-2", 0.0, 0.0, 0.9},
                   {"p-3", 0.0, 0.0, 0.9}};
  CHECK(best_index(sheet) == 1);
}

TEST_CASE("property: argmax of final scores is invariant to affine outcome "
          "maps with positive slope") {
  rng::Rng seeds(2024);
  for (int trial = 0; trial < 500; ++trial) {
    rng::Rng r(seeds.next_u64());
    const std::size_t n = 2 + r.index(6);
    std::vector<PrincipleGroup> groups;
    std::vector<EmbeddingVector> embeddings;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t m = 1 + r.index(4);
      std::vector<double> outcomes;
      for (std::size_t k = 0; k < m; ++k)
        outcomes.push_back(r.uniform(-5.0, 5.0));
      groups.push_back(make_group("p-" + std::to_string(i + 1), outcomes));
      embeddings.push_back(unit_vector(r, 16));
    }
    const double lambda = r.uniform();
    auto exploration = exploration_scores(groups, embeddings);

    auto ids = [&] {
      std::vector<std::string> out;
      for (const auto& g : groups) out.push_back(g.principle.id);
      return out;
    }();

    ScoreSheet base = final_scores(ids, exploration,
                                   exploitation_scores(groups), lambda);

    const double a = r.uniform(0.1, 3.0);
    const double b = r.uniform(-4.0, 4.0);
    auto mapped = groups;
    for (auto& g : mapped)
      for (auto& y : g.outcomes) y = a * y + b;
    ScoreSheet shifted = final_scores(ids, exploration,
                                      exploitation_scores(mapped), lambda);

    CHECK(best_index(base) == best_index(shifted));
  }
}

TEST_CASE("property: exploration scores are equivariant under permutation") {
  rng::Rng seeds(77);
  for (int trial = 0; trial < 200; ++trial) {
    rng::Rng r(seeds.next_u64());
    const std::size_t n = 2 + r.index(6);
    std::vector<PrincipleGroup> groups;
    std::vector<EmbeddingVector> embeddings;
    for (std::size_t i = 0; i < n; ++i) {
      groups.push_back(make_group("p-" + std::to_string(i + 1), {}));
      embeddings.push_back(unit_vector(r, 8));
    }
    auto base = exploration_scores(groups, embeddings);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i > 1; --i)
      std::swap(perm[i - 1], perm[r.index(i)]);

    std::vector<PrincipleGroup> pg;
    std::vector<EmbeddingVector> pe;
    for (std::size_t i : perm) {
      pg.push_back(groups[i]);
      pe.push_back(embeddings[i]);
    }
    auto permuted = exploration_scores(pg, pe);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(permuted[i] == doctest::Approx(base[perm[i]]).epsilon(1e-12));
  }
}

TEST_CASE("property: every score stays inside [0,1]") {
  rng::Rng seeds(31337);
  for (int trial = 0; trial < 300; ++trial) {
    rng::Rng r(seeds.next_u64());
    const std::size_t n = 1 + r.index(7);
    std::vector<PrincipleGroup> groups;
    std::vector<EmbeddingVector> embeddings;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t m = 1 + r.index(3);
      std::vector<double> outcomes;
      for (std::size_t k = 0; k < m; ++k)
        outcomes.push_back(r.uniform(-100.0, 100.0));
      groups.push_back(make_group("p-" + std::to_string(i + 1), outcomes));
      embeddings.push_back(unit_vector(r, 12));
      ids.push_back(groups.back().principle.id);
    }
    auto exploration = exploration_scores(groups, embeddings);
    auto exploitation = exploitation_scores(groups);
    ScoreSheet sheet =
        final_scores(ids, exploration, exploitation, r.uniform());
    for (const auto& e : sheet.entries) {
      CHECK(e.exploration >= 0.0);
      CHECK(e.exploration <= 1.0);
      CHECK(e.exploitation >= 0.0);
      CHECK(e.exploitation <= 1.0);
      CHECK(e.final_score >= 0.0);
      CHECK(e.final_score <= 1.0);
    }
  }
}

TEST_CASE("property: cosine and Euclidean nearest neighbors agree on unit "
          "vectors") {
  rng::Rng seeds(90210);
  for (int trial = 0; trial < 200; ++trial) {
    rng::Rng r(seeds.next_u64());
    const std::size_t n = 3 + r.index(5);
    std::vector<EmbeddingVector> vecs;
    for (std::size_t i = 0; i < n; ++i) vecs.push_back(unit_vector(r, 10));
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best_cos = n, best_euc = n;
      double min_cos = 1e30, min_euc = 1e30;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double c = cosine_distance(vecs[i], vecs[j]);
        const double e = euclidean(vecs[i], vecs[j]);
        if (c < min_cos) { min_cos = c; best_cos = j; }
        if (e < min_euc) { min_euc = e; best_euc = j; }
      }
      CHECK(best_cos == best_euc);
    }
  }
}

TEST_CASE("score_pool assembles the sheet from live pool content") {
  PrinciplePool pool;
  Principle a;
  a.id = "p-1";
  a.content = "Wide helices with slow pitch hold the low regime.";
  pool.add_principle(a);
  Principle b;
  b.id = "p-2";
  b.content = "Tight small-radius coils spike near resonance.";
  pool.add_principle(b);

  TrajectoryRecord r1;
  r1.step = 1;
  r1.principle_id = "p-1";
  r1.hypothesis = "h1";
  r1.candidate = Candidate::make_continuous({{"fiber_radius", 40.0},
                                             {"helix_radius", 70.0},
                                             {"n_turns", 6.5},
                                             {"pitch", 130.0}});
  r1.outcome = 0.4;
  pool.append_record(r1);
  TrajectoryRecord r2 = r1;
  r2.step = 2;
  r2.principle_id = "p-2";
  r2.outcome = 1.6;
  pool.append_record(r2);

  EmbeddingService embeddings(std::make_shared<HashingEmbedder>(64));
  ScoreSheet sheet = score_pool(pool, embeddings, 0.5);
  REQUIRE(sheet.entries.size() == 2);
  CHECK(sheet.entries[0].principle_id == "p-1");
  CHECK(sheet.entries[1].principle_id == "p-2");
  CHECK(sheet.entries[0].exploitation == doctest::Approx(0.0));
  CHECK(sheet.entries[1].exploitation == doctest::Approx(1.0));
  // Two mutually-nearest distinct contents: both raw novelties equal, so both
  // normalize to 1.0.
  CHECK(sheet.entries[0].exploration == doctest::Approx(1.0));
  CHECK(sheet.entries[1].exploration == doctest::Approx(1.0));
}
