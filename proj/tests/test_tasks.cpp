#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "piflow/errors.hpp"
#include "piflow/formula.hpp"
#include "piflow/rng.hpp"
#include "piflow/tasks.hpp"

using namespace piflow;

namespace {

Candidate nho_candidate(double fiber, double helix, double turns,
                        double pitch) {
  return Candidate::make_continuous({{"fiber_radius", fiber},
                                     {"helix_radius", helix},
                                     {"n_turns", turns},
                                     {"pitch", pitch}});
}

}  // namespace

TEST_CASE("the helix landscape peaks at exactly 2.0 at the documented "
          "optimum") {
  CHECK(nho_landscape(30.0, 30.0, 8.0, 150.0) == 2.0);
  Objective nho = nho_objective();
  CHECK(nho.evaluate(nho_candidate(30.0, 30.0, 8.0, 150.0)) == 2.0);
  CHECK(nho.mu_ref() == doctest::Approx(2.0));
  CHECK(nho.name() == "nho");
}

TEST_CASE("the documented example point evaluates to its frozen value") {
  // Independently computed from the closed-form surface definition.
  CHECK(nho_landscape(40.0, 70.0, 6.5, 130.0) ==
        doctest::Approx(0.11236576402932365).epsilon(1e-9));
}

TEST_CASE("landscape values stay within [0, 2] across a lattice; the "
          "optimum is unique") {
  double best = -1.0;
  int best_count = 0;
  const int n = 9;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double fiber = 20.0 + 40.0 * a / (n - 1);
          const double helix = 20.0 + 70.0 * b / (n - 1);
          const double turns = 3.0 + 7.0 * c / (n - 1);
          const double pitch = 60.0 + 140.0 * d / (n - 1);
          const double v = nho_landscape(fiber, helix, turns, pitch);
          CHECK(v >= 0.0);
          CHECK(v <= 2.0);
          if (v > best + 1e-12) {
            best = v;
            best_count = 1;
          } else if (v > best - 1e-12) {
            ++best_count;
          }
        }
  // The lattice misses the exact center, so its max stays clearly below the
  // global peak, which only the true optimum attains.
  CHECK(best < 2.0);
  CHECK(nho_landscape(30.0, 30.0, 8.0, 150.0) > best);
}

TEST_CASE("both decoy optima stay at or below the documented 1.2 ceiling") {
  // Local maxima near the two compact-support bumps.
  const double peak_a = nho_landscape(52.0, 82.0, 4.0, 80.0);
  const double peak_b = nho_landscape(56.0, 26.0, 9.6, 72.0);
  CHECK(peak_a > 0.9);
  CHECK(peak_a <= 1.2);
  CHECK(peak_b > 0.8);
  CHECK(peak_b <= 1.2);

  // Each decoy is separated from the summit by a deep valley.
  auto path_min = [](double from[4]) {
    double lowest = 1e30;
    for (int k = 0; k <= 100; ++k) {
      const double t = k / 100.0;
      const double v = nho_landscape(from[0] + (30.0 - from[0]) * t,
                                     from[1] + (30.0 - from[1]) * t,
                                     from[2] + (8.0 - from[2]) * t,
                                     from[3] + (150.0 - from[3]) * t);
      lowest = std::min(lowest, v);
    }
    return lowest;
  };
  double a[4] = {52.0, 82.0, 4.0, 80.0};
  double b[4] = {56.0, 26.0, 9.6, 72.0};
  CHECK(path_min(a) < 0.2);
  CHECK(path_min(b) < 0.2);
}

TEST_CASE("continuous candidates are validated dimension by dimension") {
  Objective nho = nho_objective();

  try {
    nho.evaluate(nho_candidate(19.0, 30.0, 8.0, 150.0));
    FAIL("expected InvalidCandidateError");
  } catch (const InvalidCandidateError& e) {
    CHECK(e.dim() == "fiber_radius");
  }
  try {
    nho.evaluate(nho_candidate(30.0, 30.0, 11.0, 150.0));
    FAIL("expected InvalidCandidateError");
  } catch (const InvalidCandidateError& e) {
    CHECK(e.dim() == "n_turns");
  }

  // Missing dimension.
  Candidate missing = Candidate::make_continuous(
      {{"fiber_radius", 30.0}, {"helix_radius", 30.0}, {"n_turns", 8.0}});
  try {
    nho.evaluate(missing);
    FAIL("expected InvalidCandidateError");
  } catch (const InvalidCandidateError& e) {
    CHECK(e.dim() == "pitch");
  }

  // Unknown dimension.
  Candidate unknown = nho_candidate(30.0, 30.0, 8.0, 150.0);
  unknown.assignment.emplace_back("twist", 1.0);
  CHECK_THROWS_AS(nho.evaluate(unknown), InvalidCandidateError);

  // Repeated dimension.
  Candidate repeated = nho_candidate(30.0, 30.0, 8.0, 150.0);
  repeated.assignment.emplace_back("pitch", 140.0);
  CHECK_THROWS_AS(nho.evaluate(repeated), InvalidCandidateError);

  // Non-finite value.
  CHECK_THROWS_AS(
      nho.evaluate(nho_candidate(std::nan(""), 30.0, 8.0, 150.0)),
      InvalidCandidateError);

  // Wrong candidate kind entirely.
  CHECK_THROWS_AS(nho.evaluate(Candidate::make_discrete("MBO-0001")),
                  InvalidCandidateError);
}

TEST_CASE("the parameter space advertises the documented bounds and units") {
  const auto& dims = nho_objective().space().continuous_dims;
  REQUIRE(dims.size() == 4);
  CHECK(dims[0] == ContinuousDim{"fiber_radius", 20.0, 60.0, "nm"});
  CHECK(dims[1] == ContinuousDim{"helix_radius", 20.0, 90.0, "nm"});
  CHECK(dims[2] == ContinuousDim{"n_turns", 3.0, 10.0, ""});
  CHECK(dims[3] == ContinuousDim{"pitch", 60.0, 200.0, "nm"});
}

TEST_CASE("the molecule catalog is deterministic with one planted winner") {
  auto catalog = mbo_catalog();
  REQUIRE(catalog.size() == 240);
  CHECK(catalog == mbo_catalog());  // fully deterministic rebuild

  std::size_t winners = 0;
  std::set<std::string> ids;
  for (const auto& entry : catalog) {
    ids.insert(entry.id);
    if (entry.score > 7.4) {
      ++winners;
      CHECK(entry.id == "MBO-0138");
      CHECK(entry.score == doctest::Approx(7.65));
    } else {
      CHECK(entry.score >= -0.5);
      CHECK(entry.score <= 7.4);
    }
    CHECK_FALSE(entry.blurb.empty());
  }
  CHECK(winners == 1);
  CHECK(ids.size() == 240);  // unique ids
  CHECK(catalog.front().id == "MBO-0001");
  CHECK(catalog.back().id == "MBO-0240");
}

TEST_CASE("the shipped catalog asset matches the in-code build") {
  std::ifstream in(PIFLOW_ASSET_DIR "/mbo_catalog.jsonl");
  REQUIRE(in.good());
  auto catalog = mbo_catalog();
  std::string line;
  std::size_t i = 0;
  while (std::getline(in, line)) {
    REQUIRE(i < catalog.size());
    auto j = nlohmann::json::parse(line);
    CHECK(j.at("id").get<std::string>() == catalog[i].id);
    CHECK(j.at("blurb").get<std::string>() == catalog[i].blurb);
    CHECK(j.at("score").get<double>() == doctest::Approx(catalog[i].score));
    ++i;
  }
  CHECK(i == catalog.size());
}

TEST_CASE("the molecule objective scores by id and hides nothing it "
          "should not") {
  Objective mbo = mbo_objective();
  CHECK(mbo.mu_ref() == doctest::Approx(6.5));
  CHECK(mbo.evaluate(Candidate::make_discrete("MBO-0138")) ==
        doctest::Approx(7.65));

  CHECK_THROWS_AS(mbo.evaluate(Candidate::make_discrete("MBO-9999")),
                  UnknownCandidateIdError);
  CHECK_THROWS_AS(mbo.evaluate(nho_candidate(30.0, 30.0, 8.0, 150.0)),
                  UnknownCandidateIdError);

  // Agents may see ids and blurbs; scores stay server-side.
  auto view = agent_visible_catalog(mbo.space());
  REQUIRE(view.size() == 240);
  CHECK(view[137].first == "MBO-0138");
  CHECK(view[137].second == mbo.space().discrete_catalog[137].blurb);
}

TEST_CASE("the composition score peaks at exactly 103 for the reference "
          "stoichiometry") {
  CHECK(spo_score(parse_formula("Bi2Sr2Ca2Cu3O10")) == 103.0);
  Objective spo = spo_objective();
  CHECK(spo.evaluate(Candidate::make_composition("Bi2Sr2Ca2Cu3O10")) ==
        103.0);
  CHECK(spo.mu_ref() == doctest::Approx(298.15));
  CHECK(spo.space().kind == SpaceKind::hybrid);
  CHECK(spo.space().formula_grammar);
}

TEST_CASE("composition scoring matches independently computed goldens") {
  CHECK(spo_score(parse_formula("YBa2Cu3O7")) ==
        doctest::Approx(74.675).epsilon(1e-12));
  CHECK(spo_score(parse_formula("Bi2Sr2Ca2Cu3O9F")) ==
        doctest::Approx(98.31973684210526).epsilon(1e-12));
  CHECK(spo_score(parse_formula("Bi2Sr2Ca2Cu2FeO10")) ==
        doctest::Approx(86.77280701754387).epsilon(1e-12));
}

TEST_CASE("composition score clamps to [0, 150] and ignores suffixes") {
  CHECK(spo_score(parse_formula("NaCl")) == 0.0);  // penalties floor at zero
  CHECK(spo_score(parse_formula("Bi2Sr2Ca2Cu3O10-2212")) == 103.0);

  rng::Rng r(5150);
  const auto& symbols = element_symbols();
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const std::size_t parts = 1 + r.index(5);
    for (std::size_t k = 0; k < parts; ++k) {
      text += symbols[r.index(symbols.size())];
      text += std::to_string(1 + r.index(12));
    }
    const double score = spo_score(parse_formula(text));
    CHECK(score >= 0.0);
    CHECK(score <= 150.0);
  }
}

TEST_CASE("the composition objective rejects non-composition candidates") {
  Objective spo = spo_objective();
  CHECK_THROWS_AS(spo.evaluate(Candidate::make_discrete("MBO-0001")),
                  FormulaParseError);
  CHECK_THROWS_AS(spo.evaluate(Candidate::make_composition("NotAFormula!")),
                  FormulaParseError);
}

TEST_CASE("noise draws are pure functions of seed and counter") {
  for (std::uint64_t seed : {1ULL, 7ULL, 123456789ULL}) {
    for (std::uint64_t k : {0ULL, 1ULL, 99ULL}) {
      CHECK(noise_draw(seed, k, 0.2) == noise_draw(seed, k, 0.2));
    }
  }
  CHECK(noise_draw(1, 0, 0.2) != noise_draw(1, 1, 0.2));
  CHECK(noise_draw(1, 0, 0.2) != noise_draw(2, 0, 0.2));
  // Amplitude scales linearly.
  CHECK(noise_draw(9, 4, 0.4) ==
        doctest::Approx(2.0 * noise_draw(9, 4, 0.2)).epsilon(1e-12));
}

TEST_CASE("noise stays within the amplitude and averages out") {
  Objective noisy = with_noise(nho_objective(), 0.2, 42);
  Candidate at_peak = nho_candidate(30.0, 30.0, 8.0, 150.0);
  double sum = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double delta = noisy.evaluate(at_peak) - 2.0;
    CHECK(std::abs(delta) <= 0.2);
    sum += delta;
  }
  CHECK(std::abs(sum / 2000.0) < 0.02);
}

TEST_CASE("a rebuilt noisy objective replays the identical sequence") {
  Objective first = with_noise(nho_objective(), 0.1, 7);
  Objective second = with_noise(nho_objective(), 0.1, 7);
  Candidate probe = nho_candidate(40.0, 70.0, 6.5, 130.0);
  for (int i = 0; i < 50; ++i) {
    CHECK(first.evaluate(probe) == second.evaluate(probe));
  }
  // A different seed diverges immediately.
  Objective other = with_noise(nho_objective(), 0.1, 8);
  CHECK(other.evaluate(probe) != first.evaluate(probe));
}

TEST_CASE("zero-amplitude noise is the identity") {
  Objective wrapped = with_noise(nho_objective(), 0.0, 999);
  Candidate probe = nho_candidate(40.0, 70.0, 6.5, 130.0);
  CHECK(wrapped.evaluate(probe) == nho_landscape(40.0, 70.0, 6.5, 130.0));
}

TEST_CASE("the task registry resolves names and rejects strangers") {
  CHECK(make_objective("nho").name() == "nho");
  CHECK(make_objective("mbo").name() == "mbo");
  CHECK(make_objective("spo").name() == "spo");
  CHECK_THROWS_AS(make_objective("xyz"), UnknownTaskError);
}
