#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "piflow/formula.hpp"
#include "piflow/types.hpp"

namespace piflow {

enum class SpaceKind { continuous, discrete, hybrid };

struct ContinuousDim {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  std::string unit;

  bool operator==(const ContinuousDim&) const = default;
};

struct CatalogEntry {
  std::string id;
  std::string blurb;
  double score = 0.0;  // ground truth; stripped from agent-visible views

  bool operator==(const CatalogEntry&) const = default;
};

struct ParameterSpace {
  SpaceKind kind = SpaceKind::continuous;
  std::vector<ContinuousDim> continuous_dims;
  std::vector<CatalogEntry> discrete_catalog;
  bool formula_grammar = false;
};

// What agents may see of a discrete catalog: ids and blurbs, never scores.
std::vector<std::pair<std::string, std::string>> agent_visible_catalog(
    const ParameterSpace& space);

// A named objective f* over its parameter space. evaluate is deterministic;
// stochasticity lives only in the with_noise wrapper.
class Objective {
 public:
  Objective(std::string name, ParameterSpace space, double mu_ref,
            std::function<double(const Candidate&)> evaluate_fn)
      : name_(std::move(name)),
        space_(std::move(space)),
        mu_ref_(mu_ref),
        evaluate_(std::move(evaluate_fn)) {}

  const std::string& name() const { return name_; }
  const ParameterSpace& space() const { return space_; }
  double mu_ref() const { return mu_ref_; }

  double evaluate(const Candidate& candidate) const {
    return evaluate_(candidate);
  }

 private:
  std::string name_;
  ParameterSpace space_;
  double mu_ref_;
  std::function<double(const Candidate&)> evaluate_;
};

// Continuous 4-D helix-geometry landscape: a smooth (C-infinity) layered
// surface with a unique global optimum of exactly 2.0 at (fiber_radius=30,
// helix_radius=30, n_turns=8, pitch=150), two compact-support local optima
// (peaks near 1.00 and 0.87, both at most 1.2) far from the center, and
// low-valued valleys (below 0.13) separating them from the summit. Values
// stay within [0, 2.0] over the whole box. Bounds: fiber_radius 20-60 nm,
// helix_radius 20-90 nm, n_turns 3-10, pitch 60-200 nm. Reference value 2.0.
Objective nho_objective();

// The raw landscape over (fiber_radius, helix_radius, n_turns, pitch),
// defined on the full box; no bounds checking.
double nho_landscape(double fiber_radius, double helix_radius, double n_turns,
                     double pitch);

// Discrete catalog of 240 synthetic molecule blurbs with fixed scores in
// [-0.5, 7.4], except a single planted winner at 7.65. Reference value 6.5.
Objective mbo_objective();

// Deterministic build of the full catalog (same content as the shipped
// asset file).
std::vector<CatalogEntry> mbo_catalog();

// Hybrid composition task: a documented weighted score over parsed element
// fractions, peaking at exactly 103.0 for "Bi2Sr2Ca2Cu3O10", clamped to
// [0, 150]. Reference value 298.15.
Objective spo_objective();

// The raw composition score in kelvin for an already-parsed formula.
double spo_score(const ParsedFormula& formula);

// Additive uniform noise on [-amplitude, amplitude]; draw k is a pure
// function of (seed, k), so replaying the call sequence is bit-identical.
Objective with_noise(Objective base, double amplitude, std::uint64_t seed);

// The k-th noise deviate for a given seed and amplitude.
double noise_draw(std::uint64_t seed, std::uint64_t counter, double amplitude);

// Registry: nho | mbo | spo. Throws unknown-task.
Objective make_objective(const std::string& name);

}  // namespace piflow
