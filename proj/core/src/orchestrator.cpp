#include "piflow/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <mutex>
#include <thread>

#include "piflow/errors.hpp"
#include "piflow/rng.hpp"

namespace piflow {

namespace {

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::string expert_principle_id(std::size_t index) {
  return "expert-" + std::to_string(index + 1);
}

std::string forced_suggestion(Action action, const std::string& content) {
  switch (action) {
    case Action::refine:
      return "Focus on refining: " + content;
    case Action::validate:
      return "Validate: " + content;
    default:
      return content;
  }
}

// Directive used by the vanilla-random baseline each step.
Directive unguided_explore_directive() {
  Directive directive;
  directive.action = Action::explore;
  directive.suggestion =
      "Explore alternatives: unguided uniform search over the space.";
  return directive;
}

// greedy-exploit: refine whichever principle produced the best valid outcome.
Directive greedy_directive(const PrinciplePool& pool) {
  const TrajectoryRecord* best = nullptr;
  for (const auto& record : pool.records()) {
    if (!record.valid) continue;
    if (best == nullptr || record.outcome.value() > best->outcome.value()) {
      best = &record;
    }
  }
  if (best == nullptr) {
    return unguided_explore_directive();
  }
  Directive directive;
  directive.action = Action::refine;
  directive.principle_id = best->principle_id;
  const Principle* principle = pool.find(best->principle_id);
  directive.suggestion = "Focus on refining: " + principle->content;
  return directive;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double std_of(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean = mean_of(values);
  double sum_sq = 0.0;
  for (double v : values) sum_sq += (v - mean) * (v - mean);
  return std::sqrt(sum_sq / static_cast<double>(values.size() - 1));
}

}  // namespace

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::piflow:
      return "piflow";
    case Policy::vanilla_random:
      return "vanilla-random";
    case Policy::greedy_exploit:
      return "greedy-exploit";
  }
  return "piflow";
}

Policy parse_policy(const std::string& text) {
  if (text == "piflow") return Policy::piflow;
  if (text == "vanilla-random") return Policy::vanilla_random;
  if (text == "greedy-exploit") return Policy::greedy_exploit;
  throw UnknownPolicyError("no policy named '" + text + "'");
}

TaggedPrinciple parse_tagged_principle(const std::string& spec_text) {
  const std::size_t colon = spec_text.find(':');
  if (colon == std::string::npos) {
    throw UnknownTagError("expected 'TAG: text', got '" + spec_text + "'");
  }
  const std::string tag = trim(spec_text.substr(0, colon));
  const std::string text = trim(spec_text.substr(colon + 1));
  TaggedPrinciple principle;
  if (tag == "REFINE") {
    principle.tag = Action::refine;
  } else if (tag == "VALIDATE") {
    principle.tag = Action::validate;
  } else {
    throw UnknownTagError("tag must be REFINE or VALIDATE, got '" + tag +
                          "'");
  }
  if (text.empty()) {
    throw UnknownTagError("tagged principle has empty text");
  }
  principle.text = text;
  return principle;
}

void seed_principles(const std::vector<TaggedPrinciple>& tagged,
                     PrinciplePool& pool) {
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    Principle principle;
    principle.id = expert_principle_id(pool.principles().size());
    principle.content = tagged[i].text;
    principle.origin = Origin::initial_expert();
    principle.created_step = 0;
    pool.add_principle(std::move(principle));
  }
}

std::vector<double> RunRecord::valid_outcomes() const {
  std::vector<double> outcomes;
  for (const auto& step : steps) {
    if (step.record.valid) outcomes.push_back(step.record.outcome.value());
  }
  return outcomes;
}

RunRecord run(const RunConfig& config) {
  auto embeddings = std::make_shared<EmbeddingService>(
      std::make_shared<HashingEmbedder>(config.embedding_dim));
  return run(config, embeddings);
}

RunRecord run(const RunConfig& config,
              std::shared_ptr<EmbeddingService> embeddings,
              std::shared_ptr<Transport> transport) {
  config.decision.validate();
  if (config.budget < 1) {
    throw InvalidConfigError("budget must be >= 1");
  }
  if (config.noise_amplitude < 0.0) {
    throw InvalidConfigError("noise amplitude must be >= 0");
  }
  Objective objective = make_objective(config.task);
  if (config.noise_amplitude > 0.0) {
    objective = with_noise(std::move(objective), config.noise_amplitude,
                           rng::splitmix64(config.seed ^ 0x6E6F697365ULL));
  }

  std::unique_ptr<ChatClient> chat;
  if (config.use_llm) {
    auto endpoint = endpoint_from_env(config.endpoint);
    if (!transport) {
      transport = std::make_shared<HttplibTransport>(
          endpoint.base_url, endpoint.timeout_seconds);
    }
    chat = std::make_unique<ChatClient>(transport, endpoint);
  }

  PrinciplePool pool;
  seed_principles(config.initial_principles, pool);

  // Tagged expert principles queue one forced directive each, fired in order
  // once cold start has passed.
  std::deque<std::pair<Action, std::string>> forced;
  for (std::size_t i = 0; i < config.initial_principles.size(); ++i) {
    forced.emplace_back(config.initial_principles[i].tag,
                        expert_principle_id(i));
  }

  RunRecord record;
  record.config = config;
  record.initial_principles = pool.principles();

  MessageBuffer planner_buffer;
  MessageBuffer hypothesis_buffer;

  for (int step = 1; step <= config.budget; ++step) {
    const auto step_start = std::chrono::steady_clock::now();

    Directive directive;
    const bool past_cold_start =
        pool.valid_record_count() >=
        static_cast<std::size_t>(config.decision.cold_start);
    switch (config.policy) {
      case Policy::piflow:
        if (past_cold_start && !forced.empty()) {
          const auto [action, principle_id] = forced.front();
          forced.pop_front();
          directive.action = action;
          directive.principle_id = principle_id;
          directive.suggestion = forced_suggestion(
              action, pool.find(principle_id)->content);
        } else {
          directive = decide(pool, config.decision, *embeddings);
        }
        break;
      case Policy::vanilla_random:
        directive = unguided_explore_directive();
        break;
      case Policy::greedy_exploit:
        directive = greedy_directive(pool);
        break;
    }

    const std::string brief = render_planner_brief(directive, pool);
    planner_buffer.push("planner", brief);

    HypothesisProposal proposal;
    if (config.use_llm) {
      proposal = llm_hypothesizer(directive, pool, objective.space(), *chat);
    } else {
      const std::uint64_t step_seed = rng::splitmix64(
          config.seed ^ rng::splitmix64(static_cast<std::uint64_t>(step)));
      proposal = scripted_hypothesizer(directive, pool, objective.space(),
                                       step_seed, config.agent);
    }
    hypothesis_buffer.push("hypothesis", proposal.hypothesis.statement);

    if (proposal.new_principle) {
      pool.add_principle(*proposal.new_principle);
    }
    TrajectoryRecord outcome =
        run_experiment(proposal.hypothesis, objective, step);
    pool.append_record(outcome);

    StepLog log;
    log.directive = std::move(directive);
    log.hypothesis = std::move(proposal.hypothesis);
    log.record = outcome;
    log.new_principle = std::move(proposal.new_principle);
    log.latency_ms = elapsed_ms(step_start);
    record.steps.push_back(std::move(log));

    if (config.stop_target && outcome.valid &&
        outcome.outcome.value() >= *config.stop_target) {
      break;
    }
  }

  const std::vector<double> outcomes = record.valid_outcomes();
  record.summary =
      summarize(outcomes, objective.mu_ref(), objective.mu_ref());
  try {
    record.summary.info_regret_corr = info_regret_correlation(record);
  } catch (const Error&) {
    record.summary.info_regret_corr.reset();
  }
  return record;
}

double info_regret_correlation(const RunRecord& record) {
  const double v_star = make_objective(record.config.task).mu_ref();
  std::vector<double> info_gain;
  std::vector<double> instant_regret;
  for (const auto& step : record.steps) {
    if (!step.record.valid || !step.directive.scores ||
        !step.directive.principle_id) {
      continue;
    }
    const auto& entries = step.directive.scores->entries;
    const auto it = std::find_if(
        entries.begin(), entries.end(), [&](const ScoreEntry& entry) {
          return entry.principle_id == *step.directive.principle_id;
        });
    if (it == entries.end()) continue;
    info_gain.push_back(it->exploration);
    instant_regret.push_back(v_star - step.record.outcome.value());
  }
  return pearson_correlation(info_gain, instant_regret);
}

SweepOutcome sweep(const RunConfig& base,
                   const std::map<std::string, std::vector<std::string>>& grid,
                   const std::vector<std::uint64_t>& seeds, int workers) {
  // Validate fields up front so a bad grid fails before any run starts.
  static const std::vector<std::string> kFields = {
      "lambda",     "thresholds", "cold_start", "budget",
      "noise",      "policy",     "task",       "stop_target"};
  for (const auto& [field, values] : grid) {
    if (std::find(kFields.begin(), kFields.end(), field) == kFields.end()) {
      throw InvalidGridFieldError("no sweep field named '" + field + "'");
    }
    if (values.empty()) {
      throw InvalidGridFieldError("sweep field '" + field +
                                  "' has no values");
    }
  }
  if (seeds.empty()) {
    throw InvalidConfigError("sweep needs at least one seed");
  }

  // Expand the Cartesian product in deterministic (map-ordered) field order.
  std::vector<std::vector<std::pair<std::string, std::string>>> cells = {{}};
  for (const auto& [field, values] : grid) {
    std::vector<std::vector<std::pair<std::string, std::string>>> expanded;
    for (const auto& cell : cells) {
      for (const auto& value : values) {
        auto next = cell;
        next.emplace_back(field, value);
        expanded.push_back(std::move(next));
      }
    }
    cells = std::move(expanded);
  }

  auto apply_cell =
      [&base](const std::vector<std::pair<std::string, std::string>>& cell,
              std::uint64_t seed) {
        RunConfig config = base;
        config.seed = seed;
        for (const auto& [field, value] : cell) {
          try {
            if (field == "lambda") {
              config.decision.lambda = std::stod(value);
            } else if (field == "thresholds") {
              const DecisionConfig preset = threshold_preset(value);
              config.decision.refine_threshold = preset.refine_threshold;
              config.decision.validate_threshold = preset.validate_threshold;
            } else if (field == "cold_start") {
              config.decision.cold_start = std::stoi(value);
            } else if (field == "budget") {
              config.budget = std::stoi(value);
            } else if (field == "noise") {
              config.noise_amplitude = std::stod(value);
            } else if (field == "policy") {
              config.policy = parse_policy(value);
            } else if (field == "task") {
              config.task = value;
            } else if (field == "stop_target") {
              config.stop_target = std::stod(value);
            }
          } catch (const Error&) {
            throw;
          } catch (const std::exception&) {
            throw InvalidGridFieldError("bad value '" + value +
                                        "' for sweep field '" + field + "'");
          }
        }
        return config;
      };

  struct Job {
    std::size_t cell_index;
    std::size_t flat_index;
    RunConfig config;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (const std::uint64_t seed : seeds) {
      jobs.push_back(Job{c, jobs.size(), apply_cell(cells[c], seed)});
    }
  }

  auto embeddings = std::make_shared<EmbeddingService>(
      std::make_shared<HashingEmbedder>(base.embedding_dim));

  std::vector<RunRecord> records(jobs.size());
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<std::size_t> next_job{0};
  const int thread_count =
      std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));

  auto worker = [&]() {
    while (true) {
      const std::size_t index = next_job.fetch_add(1);
      if (index >= jobs.size()) return;
      try {
        records[index] = run(jobs[index].config, embeddings);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SweepOutcome outcome;
  outcome.records = std::move(records);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> sqs;
    std::vector<double> aucs;
    for (const auto& job : jobs) {
      if (job.cell_index != c) continue;
      const MetricSummary& summary = outcome.records[job.flat_index].summary;
      if (summary.sq_percent) sqs.push_back(*summary.sq_percent);
      if (summary.auc_percent) aucs.push_back(*summary.auc_percent);
    }
    SweepCellResult result;
    result.cell = cells[c];
    result.sq_mean = mean_of(sqs);
    result.sq_std = std_of(sqs);
    result.auc_mean = mean_of(aucs);
    result.auc_std = std_of(aucs);
    result.n_seeds = static_cast<int>(seeds.size());
    outcome.cells.push_back(std::move(result));
  }
  return outcome;
}

}  // namespace piflow
