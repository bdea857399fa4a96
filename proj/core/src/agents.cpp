#include "piflow/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "piflow/errors.hpp"
#include "piflow/formula.hpp"
#include "piflow/rng.hpp"

namespace piflow {

namespace {

std::optional<Candidate> best_known_candidate(const PrinciplePool& pool,
                                              const std::string& principle_id) {
  std::optional<Candidate> best;
  double best_outcome = 0.0;
  for (const auto& record : pool.records()) {
    if (!record.valid || record.principle_id != principle_id) continue;
    if (!best || record.outcome.value() > best_outcome) {
      best = record.candidate;
      best_outcome = record.outcome.value();
    }
  }
  return best;
}

std::unordered_set<std::string> tried_catalog_ids(const PrinciplePool& pool) {
  std::unordered_set<std::string> tried;
  for (const auto& record : pool.records()) {
    if (record.candidate.kind == Candidate::Kind::discrete) {
      tried.insert(record.candidate.id);
    }
  }
  return tried;
}

Candidate sample_uniform_continuous(const ParameterSpace& space,
                                    rng::Rng& gen) {
  std::vector<std::pair<std::string, double>> values;
  values.reserve(space.continuous_dims.size());
  for (const auto& dim : space.continuous_dims) {
    values.emplace_back(dim.name, gen.uniform(dim.lower, dim.upper));
  }
  return Candidate::make_continuous(std::move(values));
}

// Coarse per-dimension position words ("low-pitch high-n_turns ...") so that
// principle texts about nearby regions share tokens and embed close together,
// while texts about distant regions drift apart.
std::string region_descriptor(const ParameterSpace& space,
                              const Candidate& candidate) {
  switch (space.kind) {
    case SpaceKind::continuous: {
      std::string out;
      for (const auto& dim : space.continuous_dims) {
        double value = dim.lower;
        for (const auto& [name, v] : candidate.assignment) {
          if (name == dim.name) {
            value = v;
            break;
          }
        }
        const double range = dim.upper - dim.lower;
        const double pos = range > 0.0 ? (value - dim.lower) / range : 0.0;
        const char* band = pos < (1.0 / 3.0) ? "low"
                           : pos < (2.0 / 3.0) ? "mid"
                                               : "high";
        if (!out.empty()) out += " ";
        out += std::string(band) + "-" + dim.name;
      }
      return out;
    }
    case SpaceKind::discrete: {
      for (const auto& entry : space.discrete_catalog) {
        if (entry.id == candidate.id) return entry.blurb;
      }
      return candidate.id;
    }
    case SpaceKind::hybrid: {
      std::string out = "elements";
      try {
        const ParsedFormula formula = parse_formula(candidate.composition);
        for (const auto& [symbol, count] : formula.counts) {
          out += " " + symbol;
        }
      } catch (const Error&) {
        out += " " + candidate.composition;
      }
      return out;
    }
  }
  return "";
}

// Cuts at the first sentence boundary (". "); a bare '.' may sit inside a
// numeric literal, so it does not count.
std::string first_sentence(const std::string& text) {
  const std::size_t dot = text.find(". ");
  if (dot == std::string::npos) return text;
  return text.substr(0, dot + 1);
}


Candidate perturb_continuous(const ParameterSpace& space,
                             const Candidate& center, double sigma_fraction,
                             rng::Rng& gen) {
  std::vector<std::pair<std::string, double>> values;
  values.reserve(space.continuous_dims.size());
  for (const auto& dim : space.continuous_dims) {
    double base = dim.lower;
    for (const auto& [name, value] : center.assignment) {
      if (name == dim.name) {
        base = value;
        break;
      }
    }
    const double range = dim.upper - dim.lower;
    double value = gen.normal(base, sigma_fraction * range);
    value = std::clamp(value, dim.lower, dim.upper);
    values.emplace_back(dim.name, value);
  }
  return Candidate::make_continuous(std::move(values));
}

Candidate sample_untried_discrete(const ParameterSpace& space,
                                  const PrinciplePool& pool, rng::Rng& gen) {
  const auto tried = tried_catalog_ids(pool);
  std::vector<std::string> untried;
  for (const auto& entry : space.discrete_catalog) {
    if (!tried.count(entry.id)) untried.push_back(entry.id);
  }
  if (untried.empty()) {
    throw ExhaustedCatalogError("all catalog candidates have been tried");
  }
  return Candidate::make_discrete(untried[gen.index(untried.size())]);
}

Candidate nearest_untried_discrete(const ParameterSpace& space,
                                   const PrinciplePool& pool,
                                   const Candidate& center) {
  const auto tried = tried_catalog_ids(pool);
  std::size_t center_index = 0;
  for (std::size_t i = 0; i < space.discrete_catalog.size(); ++i) {
    if (space.discrete_catalog[i].id == center.id) {
      center_index = i;
      break;
    }
  }
  const std::size_t n = space.discrete_catalog.size();
  for (std::size_t distance = 1; distance < n; ++distance) {
    if (center_index >= distance) {
      const auto& id = space.discrete_catalog[center_index - distance].id;
      if (!tried.count(id)) return Candidate::make_discrete(id);
    }
    if (center_index + distance < n) {
      const auto& id = space.discrete_catalog[center_index + distance].id;
      if (!tried.count(id)) return Candidate::make_discrete(id);
    }
  }
  throw ExhaustedCatalogError("all catalog candidates have been tried");
}

Candidate sample_fresh_composition(rng::Rng& gen) {
  const auto& symbols = element_symbols();
  const std::size_t element_count = 2 + gen.index(3);  // 2..4 elements
  ParsedFormula formula;
  while (formula.counts.size() < element_count) {
    const std::string& symbol = symbols[gen.index(symbols.size())];
    bool seen = false;
    for (const auto& [existing, count] : formula.counts) {
      if (existing == symbol) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    const double count = static_cast<double>(1 + gen.index(9));  // 1..9
    formula.counts.emplace_back(symbol, count);
  }
  return Candidate::make_composition(render_formula(formula));
}

Candidate perturb_composition(const Candidate& center, rng::Rng& gen) {
  ParsedFormula formula = parse_formula(center.composition);
  const std::size_t which = gen.index(formula.counts.size());
  static constexpr double kDeltas[4] = {1.0, -1.0, 0.1, -0.1};
  const double delta = kDeltas[gen.index(4)];
  double& count = formula.counts[which].second;
  count = (count + delta > 0.0) ? count + delta : count + std::abs(delta);
  return Candidate::make_composition(render_formula(formula));
}

Candidate sample_fresh(const ParameterSpace& space, const PrinciplePool& pool,
                       rng::Rng& gen) {
  switch (space.kind) {
    case SpaceKind::continuous:
      return sample_uniform_continuous(space, gen);
    case SpaceKind::discrete:
      return sample_untried_discrete(space, pool, gen);
    case SpaceKind::hybrid:
      return sample_fresh_composition(gen);
  }
  return sample_uniform_continuous(space, gen);
}

Candidate sample_near(const ParameterSpace& space, const PrinciplePool& pool,
                      const Candidate& center, double sigma_fraction,
                      rng::Rng& gen) {
  switch (space.kind) {
    case SpaceKind::continuous:
      return perturb_continuous(space, center, sigma_fraction, gen);
    case SpaceKind::discrete:
      return nearest_untried_discrete(space, pool, center);
    case SpaceKind::hybrid:
      return perturb_composition(center, gen);
  }
  return center;
}

Rationale build_rationale(const std::string& major,
                          const Candidate& candidate) {
  Rationale rationale;
  rationale.major_premise = major;
  rationale.minor_premises = {
      "The trajectory so far justifies testing this region next.",
      "Candidate " + candidate.describe() +
          " lies inside the allowed parameter space."};
  return rationale;
}

}  // namespace

void MessageBuffer::push(std::string role, std::string text) {
  messages_.emplace_back(std::move(role), std::move(text));
  while (messages_.size() > capacity_) {
    messages_.pop_front();
  }
}

std::string next_principle_id(const PrinciplePool& pool) {
  long long max_suffix = 0;
  for (const auto& principle : pool.principles()) {
    const auto& id = principle.id;
    if (id.rfind("p-", 0) != 0) continue;
    bool numeric = !id.substr(2).empty();
    for (char c : id.substr(2)) {
      if (c < '0' || c > '9') {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      max_suffix = std::max(max_suffix, std::stoll(id.substr(2)));
    }
  }
  return "p-" + std::to_string(max_suffix + 1);
}

HypothesisProposal scripted_hypothesizer(const Directive& directive,
                                         const PrinciplePool& pool,
                                         const ParameterSpace& space,
                                         std::uint64_t seed,
                                         const ScriptedAgentOptions& options) {
  rng::Rng gen(seed);
  const int next_step = pool.last_step() + 1;
  HypothesisProposal proposal;

  switch (directive.action) {
    case Action::initialize:
    case Action::explore: {
      const Candidate candidate = sample_fresh(space, pool, gen);
      Principle minted;
      minted.id = next_principle_id(pool);
      minted.content = "Unexplored region " +
                       region_descriptor(space, candidate) + " around " +
                       candidate.describe() + " may hold stronger outcomes.";
      minted.origin = Origin::agent_proposed();
      minted.created_step = next_step;
      proposal.hypothesis.principle_id = minted.id;
      proposal.hypothesis.rationale =
          build_rationale(minted.content, candidate);
      proposal.hypothesis.statement =
          "Sampling " + candidate.describe() +
          " will reveal whether this region outperforms the record so far.";
      proposal.hypothesis.candidate = candidate;
      proposal.new_principle = std::move(minted);
      break;
    }
    case Action::validate: {
      if (!directive.principle_id) {
        throw UnknownPrincipleError("validate directive names no principle");
      }
      const Principle* principle = pool.find(*directive.principle_id);
      if (principle == nullptr) {
        throw UnknownPrincipleError("validate directive references '" +
                                    *directive.principle_id + "'");
      }
      const auto center = best_known_candidate(pool, principle->id);
      const Candidate candidate =
          center ? sample_near(space, pool, *center, options.validate_sigma,
                               gen)
                 : sample_fresh(space, pool, gen);
      proposal.hypothesis.principle_id = principle->id;
      proposal.hypothesis.rationale =
          build_rationale(principle->content, candidate);
      proposal.hypothesis.statement =
          "Re-testing near the best evidence for " + principle->id +
          " at " + candidate.describe() + " will confirm the principle.";
      proposal.hypothesis.candidate = candidate;
      break;
    }
    case Action::refine: {
      if (!directive.principle_id) {
        throw UnknownPrincipleError("refine directive names no principle");
      }
      const Principle* parent = pool.find(*directive.principle_id);
      if (parent == nullptr) {
        throw UnknownPrincipleError("refine directive references '" +
                                    *directive.principle_id + "'");
      }
      const auto center = best_known_candidate(pool, parent->id);
      const Candidate candidate =
          center ? sample_near(space, pool, *center, options.refine_sigma, gen)
                 : sample_fresh(space, pool, gen);
      Principle refined;
      refined.id = next_principle_id(pool);
      refined.content = first_sentence(parent->content) +
                        " Sharpened toward " +
                        region_descriptor(space, candidate) + " near " +
                        candidate.describe() + ".";
      refined.origin = Origin::refined_from(parent->id);
      refined.created_step = next_step;
      proposal.hypothesis.principle_id = refined.id;
      proposal.hypothesis.rationale =
          build_rationale(refined.content, candidate);
      proposal.hypothesis.statement =
          "Tightening " + parent->id + " around " + candidate.describe() +
          " should push the outcome higher.";
      proposal.hypothesis.candidate = candidate;
      proposal.new_principle = std::move(refined);
      break;
    }
  }
  return proposal;
}

TrajectoryRecord run_experiment(const Hypothesis& hypothesis,
                                const Objective& objective, int step) {
  TrajectoryRecord record;
  record.step = step;
  record.principle_id = hypothesis.principle_id;
  record.hypothesis = hypothesis.statement;
  record.candidate = hypothesis.candidate;
  try {
    const double value = objective.evaluate(hypothesis.candidate);
    if (std::isfinite(value)) {
      record.outcome = value;
      record.valid = true;
    } else {
      record.valid = false;
    }
  } catch (const Error&) {
    record.valid = false;
  }
  return record;
}

}  // namespace piflow
