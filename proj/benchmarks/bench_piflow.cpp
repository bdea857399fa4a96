// Microbenchmarks for the hot paths: decision steps over growing pools,
// hashing embeddings, formula parsing, and objective evaluation.

#include <memory>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "piflow/decision.hpp"
#include "piflow/embedding.hpp"
#include "piflow/formula.hpp"
#include "piflow/principle_store.hpp"
#include "piflow/rng.hpp"
#include "piflow/tasks.hpp"

namespace {

piflow::PrinciplePool make_pool(int n_principles, int records_per_principle) {
  piflow::PrinciplePool pool;
  piflow::rng::Rng rng(42);
  int step = 1;
  for (int i = 0; i < n_principles; ++i) {
    piflow::Principle p;
    p.id = "p-" + std::to_string(i + 1);
    p.content = "Candidate region " + std::to_string(i + 1) +
                " with pitch near " + std::to_string(100 + 7 * i) +
                " and radius near " + std::to_string(20 + 3 * i) +
                " may hold stronger outcomes.";
    p.origin = piflow::Origin::agent_proposed();
    p.created_step = step;
    pool.add_principle(p);
    for (int r = 0; r < records_per_principle; ++r) {
      piflow::TrajectoryRecord record;
      record.step = step++;
      record.principle_id = p.id;
      record.hypothesis = "probe " + std::to_string(step);
      record.candidate = piflow::Candidate::make_continuous(
          {{"fiber_radius", rng.uniform(20, 60)},
           {"helix_radius", rng.uniform(20, 90)},
           {"n_turns", rng.uniform(3, 10)},
           {"pitch", rng.uniform(60, 200)}});
      record.outcome = rng.uniform(0.0, 2.0);
      record.valid = true;
      pool.append_record(record);
    }
  }
  return pool;
}

void BM_DecisionStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const piflow::PrinciplePool pool = make_pool(n, 3);
  piflow::EmbeddingService embeddings(
      std::make_shared<piflow::HashingEmbedder>(256));
  piflow::DecisionConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(piflow::decide(pool, config, embeddings));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DecisionStep)->RangeMultiplier(2)->Range(2, 64)->Complexity();

void BM_HashingEmbedder(benchmark::State& state) {
  piflow::HashingEmbedder embedder(256);
  const std::vector<std::string> batch = {
      "Helix pitch near 150 with moderate fiber radius maximizes the "
      "photothermal objective under the resonance principle."};
  for (auto _ : state) {
    benchmark::DoNotOptimize(embedder.embed_batch(batch));
  }
}
BENCHMARK(BM_HashingEmbedder);

void BM_FormulaParse(benchmark::State& state) {
  const std::string formula = "Ba0.2La1.8Cu1O4";
  for (auto _ : state) {
    benchmark::DoNotOptimize(piflow::parse_formula(formula));
  }
}
BENCHMARK(BM_FormulaParse);

void BM_NhoEvaluate(benchmark::State& state) {
  const piflow::Objective objective = piflow::nho_objective();
  const piflow::Candidate candidate =
      piflow::Candidate::make_continuous({{"fiber_radius", 40.0},
                                          {"helix_radius", 70.0},
                                          {"n_turns", 6.5},
                                          {"pitch", 130.0}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective.evaluate(candidate));
  }
}
BENCHMARK(BM_NhoEvaluate);

}  // namespace

BENCHMARK_MAIN();
