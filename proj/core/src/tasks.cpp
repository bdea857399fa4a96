#include "piflow/tasks.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <unordered_map>

#include "piflow/errors.hpp"
#include "piflow/rng.hpp"

namespace piflow {

namespace {

struct Bump {
  double center[4];  // raw units
  double amplitude;
  double radius;  // in normalized coordinates
};

// The surface is three concentric layers over one optimum plus two decoys.
// A broad Gaussian dome carries an informative gradient over the whole box.
// A wide shelf mollifier lifts and steepens the middle band (normalized
// distance ~0.2-0.6 from the optimum) so that iterative search pays off all
// the way in from a typical random draw. A compactly supported spike with a
// cubed mollifier profile sits directly over the center: negligible through
// its outer shell but steep inside ~0.2, so sustained local refinement is
// what cashes in the summit. Dome + shelf + spike = 0.97 + 0.73 + 0.30 = 2.0
// exactly at the optimum. Two more compactly supported bumps far from the
// center (normalized distances 1.20 and 0.89) form local optima with peaks
// near 1.00 and 0.87, under the 1.2 ceiling; both sit where the central
// layers have decayed to almost nothing, so each is separated from the
// global optimum by a deep valley (minimum ~0.01-0.13 along the connecting
// path) and neither overlaps the other's support.
constexpr Bump kGlobalSpike = {{30.0, 30.0, 8.0, 150.0}, 0.30, 0.30};
constexpr Bump kLocalBumpA = {{52.0, 82.0, 4.0, 80.0}, 1.00, 0.25};
constexpr Bump kLocalBumpB = {{56.0, 26.0, 9.6, 72.0}, 0.85, 0.25};
constexpr Bump kShelf = {{30.0, 30.0, 8.0, 150.0}, 0.73, 0.68};

constexpr double kDomeCenter[4] = {30.0, 30.0, 8.0, 150.0};
constexpr double kDomeAmplitude = 0.97;
constexpr double kDomeSigma = 0.325;  // in normalized coordinates

constexpr double kNhoLower[4] = {20.0, 20.0, 3.0, 60.0};
constexpr double kNhoUpper[4] = {60.0, 90.0, 10.0, 200.0};

// C-infinity bump: exp(1 - 1/(1 - r^2)) for r < 1, else 0; equals 1 at r = 0.
double mollifier(double r) {
  if (r >= 1.0) return 0.0;
  const double r2 = r * r;
  return std::exp(1.0 - 1.0 / (1.0 - r2));
}

double bump_value(const Bump& bump, const double x[4]) {
  double dist_sq = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double range = kNhoUpper[i] - kNhoLower[i];
    const double d = (x[i] - bump.center[i]) / range;
    dist_sq += d * d;
  }
  return bump.amplitude * mollifier(std::sqrt(dist_sq) / bump.radius);
}

const std::vector<ContinuousDim>& nho_dims() {
  static const std::vector<ContinuousDim> dims = {
      {"fiber_radius", 20.0, 60.0, "nm"},
      {"helix_radius", 20.0, 90.0, "nm"},
      {"n_turns", 3.0, 10.0, ""},
      {"pitch", 60.0, 200.0, "nm"},
  };
  return dims;
}

// Pulls the named dims out of a continuous candidate, enforcing bounds.
std::array<double, 4> checked_nho_point(const Candidate& candidate) {
  if (candidate.kind != Candidate::Kind::continuous) {
    throw InvalidCandidateError("candidate is not a continuous assignment",
                                "");
  }
  const auto& dims = nho_dims();
  std::array<double, 4> point{};
  std::array<bool, 4> seen{};
  for (const auto& [name, value] : candidate.assignment) {
    bool known = false;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (dims[i].name != name) continue;
      known = true;
      if (seen[i]) {
        throw InvalidCandidateError("dimension '" + name + "' repeats", name);
      }
      if (!std::isfinite(value) || value < dims[i].lower ||
          value > dims[i].upper) {
        throw InvalidCandidateError(
            "dimension '" + name + "' = " + std::to_string(value) +
                " violates [" + std::to_string(dims[i].lower) + ", " +
                std::to_string(dims[i].upper) + "]",
            name);
      }
      point[i] = value;
      seen[i] = true;
    }
    if (!known) {
      throw InvalidCandidateError("unknown dimension '" + name + "'", name);
    }
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!seen[i]) {
      throw InvalidCandidateError("missing dimension '" + dims[i].name + "'",
                                  dims[i].name);
    }
  }
  return point;
}

constexpr std::uint64_t kMboCatalogSeed = 0x4D424F2D763100ULL;
constexpr std::size_t kMboCatalogSize = 240;
constexpr std::size_t kMboWinnerIndex = 137;  // id MBO-0138
constexpr double kMboWinnerScore = 7.65;

std::string mbo_id(std::size_t index) {
  std::string digits = std::to_string(index + 1);
  while (digits.size() < 4) digits.insert(digits.begin(), '0');
  return "MBO-" + digits;
}

}  // namespace

double nho_landscape(double fiber_radius, double helix_radius, double n_turns,
                     double pitch) {
  const double x[4] = {fiber_radius, helix_radius, n_turns, pitch};
  double dist_sq = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double range = kNhoUpper[i] - kNhoLower[i];
    const double d = (x[i] - kDomeCenter[i]) / range;
    dist_sq += d * d;
  }
  const double dome =
      kDomeAmplitude * std::exp(-dist_sq / (2.0 * kDomeSigma * kDomeSigma));
  const double shelf = bump_value(kShelf, x);
  const double spike_profile =
      bump_value(kGlobalSpike, x) / kGlobalSpike.amplitude;
  const double spike = kGlobalSpike.amplitude * spike_profile * spike_profile *
                       spike_profile;
  return dome + shelf + spike + bump_value(kLocalBumpA, x) +
         bump_value(kLocalBumpB, x);
}

Objective nho_objective() {
  ParameterSpace space;
  space.kind = SpaceKind::continuous;
  space.continuous_dims = nho_dims();
  return Objective("nho", std::move(space), 2.0, [](const Candidate& c) {
    const auto point = checked_nho_point(c);
    return nho_landscape(point[0], point[1], point[2], point[3]);
  });
}

std::vector<CatalogEntry> mbo_catalog() {
  static const char* kScaffolds[] = {
      "pyridine",   "quinoline",     "indole",     "morpholine",
      "piperazine", "benzimidazole", "thiophene",  "imidazole",
      "pyrimidine", "furan"};
  static const char* kSubstituents[] = {
      "fluoro",  "chloro", "methoxy", "hydroxyl", "amino",
      "nitro",   "cyano",  "methyl",  "ethyl",    "trifluoromethyl"};
  static const char* kMotifs[] = {"amide", "sulfonamide", "urea",
                                  "ester", "carbamate",   "ketone"};

  rng::Rng gen(kMboCatalogSeed);
  std::vector<CatalogEntry> catalog;
  catalog.reserve(kMboCatalogSize);
  for (std::size_t i = 0; i < kMboCatalogSize; ++i) {
    CatalogEntry entry;
    entry.id = mbo_id(i);
    entry.blurb = std::string(kScaffolds[gen.index(10)]) + " core with " +
                  kSubstituents[gen.index(10)] + " substitution and " +
                  kMotifs[gen.index(6)] + " linker";
    entry.score = std::round(gen.uniform(-0.5, 7.4) * 100.0) / 100.0;
    catalog.push_back(std::move(entry));
  }
  catalog[kMboWinnerIndex].score = kMboWinnerScore;
  return catalog;
}

Objective mbo_objective() {
  ParameterSpace space;
  space.kind = SpaceKind::discrete;
  space.discrete_catalog = mbo_catalog();
  auto scores = std::make_shared<std::unordered_map<std::string, double>>();
  for (const auto& entry : space.discrete_catalog) {
    (*scores)[entry.id] = entry.score;
  }
  return Objective("mbo", std::move(space), 6.5,
                   [scores](const Candidate& c) {
                     if (c.kind != Candidate::Kind::discrete) {
                       throw UnknownCandidateIdError(
                           "candidate is not a catalog id");
                     }
                     auto it = scores->find(c.id);
                     if (it == scores->end()) {
                       throw UnknownCandidateIdError("no catalog entry '" +
                                                     c.id + "'");
                     }
                     return it->second;
                   });
}

double spo_score(const ParsedFormula& formula) {
  struct Family {
    const char* const* symbols;
    std::size_t count;
    double ideal_fraction;
    double weight;
  };
  static const char* kCarrier[] = {"Cu"};
  static const char* kOxide[] = {"O"};
  static const char* kSpacer[] = {"Ba", "Sr", "Ca", "La"};
  static const char* kChain[] = {"Bi", "Tl", "Hg", "Pb", "Y"};
  static const char* kHalogen[] = {"F", "Cl", "Br", "I"};
  static const char* kMagnetic[] = {"Fe", "Co", "Ni", "Mn", "Cr"};

  // Ideal fractions follow the Bi2Sr2Ca2Cu3O10 stoichiometry (19 atoms).
  static const Family kFamilies[] = {
      {kCarrier, 1, 3.0 / 19.0, 0.35},
      {kOxide, 1, 10.0 / 19.0, 0.25},
      {kSpacer, 4, 4.0 / 19.0, 0.25},
      {kChain, 5, 2.0 / 19.0, 0.15},
  };

  const double total = formula.total();
  if (!(total > 0.0)) {
    throw FormulaParseError("composition has no atoms", 0);
  }

  auto family_fraction = [&](const char* const* symbols, std::size_t count) {
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      sum += formula.count_of(symbols[i]);
    }
    return sum / total;
  };

  double quality = 0.0;
  for (const auto& family : kFamilies) {
    const double x = family_fraction(family.symbols, family.count);
    const double closeness =
        std::max(0.0, 1.0 - std::abs(x - family.ideal_fraction) /
                                family.ideal_fraction);
    quality += family.weight * closeness;
  }

  const double halogen = family_fraction(kHalogen, 4);
  const double magnetic = family_fraction(kMagnetic, 5);
  double t_c = 103.0 * quality - 40.0 * halogen - 80.0 * magnetic;
  if (t_c < 0.0) t_c = 0.0;
  if (t_c > 150.0) t_c = 150.0;
  return t_c;
}

Objective spo_objective() {
  ParameterSpace space;
  space.kind = SpaceKind::hybrid;
  space.formula_grammar = true;
  return Objective("spo", std::move(space), 298.15, [](const Candidate& c) {
    if (c.kind != Candidate::Kind::composition) {
      throw FormulaParseError("candidate is not a composition string", 0);
    }
    return spo_score(parse_formula(c.composition));
  });
}

double noise_draw(std::uint64_t seed, std::uint64_t counter,
                  double amplitude) {
  const std::uint64_t mixed =
      rng::splitmix64(seed ^ rng::splitmix64(counter + 1));
  const double unit = static_cast<double>(mixed >> 11) * 0x1.0p-53;  // [0,1)
  return (2.0 * unit - 1.0) * amplitude;
}

Objective with_noise(Objective base, double amplitude, std::uint64_t seed) {
  auto inner = std::make_shared<Objective>(std::move(base));
  auto counter = std::make_shared<std::uint64_t>(0);
  return Objective(inner->name(), inner->space(), inner->mu_ref(),
                   [inner, counter, amplitude, seed](const Candidate& c) {
                     const double value = inner->evaluate(c);
                     return value + noise_draw(seed, (*counter)++, amplitude);
                   });
}

std::vector<std::pair<std::string, std::string>> agent_visible_catalog(
    const ParameterSpace& space) {
  std::vector<std::pair<std::string, std::string>> view;
  view.reserve(space.discrete_catalog.size());
  for (const auto& entry : space.discrete_catalog) {
    view.emplace_back(entry.id, entry.blurb);
  }
  return view;
}

Objective make_objective(const std::string& name) {
  if (name == "nho") return nho_objective();
  if (name == "mbo") return mbo_objective();
  if (name == "spo") return spo_objective();
  throw UnknownTaskError("no task named '" + name + "'");
}

}  // namespace piflow
