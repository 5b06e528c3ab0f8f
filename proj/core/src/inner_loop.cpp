#include "hevo/inner_loop.hpp"

#include <sstream>

#include "hevo/error.hpp"
#include "hevo/simkit.hpp"

#ifndef HEVO_ENGINE_VERSION
#define HEVO_ENGINE_VERSION "0.0.0"
#endif

namespace hevo {

std::string_view engine_version() { return HEVO_ENGINE_VERSION; }

void to_json(Json& j, const InnerRunResult& v) {
  j = Json{{"best_harness", v.best_harness},
           {"best_score", v.best_score},
           {"history", v.history},
           {"stopped_early", v.stopped_early}};
}

void from_json(const Json& j, InnerRunResult& v) {
  v.best_harness = j.at("best_harness").get<Harness>();
  v.best_score = j.at("best_score").get<Score>();
  v.history = j.at("history").get<std::vector<HistoryEntry>>();
  v.stopped_early = j.at("stopped_early").get<bool>();
}

namespace {

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

}  // namespace

AgentSet make_agents(const Blueprint& blueprint) {
  AgentSet agents;
  if (blueprint.worker_binding.kind == BindingKind::builtin) {
    agents.worker = std::make_unique<simkit::StringForgeWorker>();
  } else {
    agents.worker = std::make_unique<ExternalWorker>(blueprint.worker_binding);
  }

  if (auto command = get_string(blueprint.evaluator_config, "command")) {
    auto words = split_words(*command);
    if (words.empty()) throw Error(ErrorCode::invalid_config, "evaluator_config.command is empty");
    std::vector<std::string> args(words.begin() + 1, words.end());
    auto timeout = get_int(blueprint.evaluator_config, "timeout_ms").value_or(AgentBinding{}.timeout_ms);
    agents.evaluator = std::make_unique<ExternalEvaluator>(external_binding(words.front(), std::move(args), timeout));
  } else {
    agents.evaluator = std::make_unique<simkit::StringForgeEvaluator>(strictness(blueprint));
  }

  const auto& strategy = blueprint.evolution_strategy;
  if (strategy.kind == StrategyKind::external) {
    agents.evolution = std::make_unique<ExternalEvolution>(strategy.agent);
  } else {
    agents.evolution = std::make_unique<simkit::BuiltinEvolution>(strategy.kind, strategy.params);
  }
  return agents;
}

InnerRunResult run_inner_loop(const Task& task, const Blueprint& blueprint, std::uint64_t seed, const InnerLoopOptions& options) {
  if (auto v = validate_task(task); !v.ok()) throw Error(ErrorCode::invalid_config, "task: " + v.describe());
  if (auto v = validate_blueprint(blueprint); !v.ok()) throw Error(ErrorCode::invalid_config, "blueprint: " + v.describe());

  AgentSet owned;
  AgentSet* agents = options.agents;
  if (agents == nullptr) {
    owned = make_agents(blueprint);
    agents = &owned;
  }
  auto emit = [&](const std::string& line) {
    if (options.log) options.log(line);
  };
  emit(canonical_of(make_header(task, blueprint, seed)));

  const std::int64_t K = blueprint.loop.K;
  const std::int64_t budget = time_budget_ms(blueprint);
  InnerRunResult result;
  result.best_harness = blueprint.initial_harness;
  Harness current = blueprint.initial_harness;

  for (std::int64_t k = 1; k <= K; ++k) {
    try {
      Trace trace = call_worker(*agents->worker, current, task);
      Evaluation evaluation = call_evaluator(*agents->evaluator, trace, task);

      HistoryEntry entry;
      entry.iteration = k;
      entry.harness = current;
      entry.report = std::move(evaluation.report);
      entry.score = evaluation.score;
      if (compare_scores(evaluation.score, result.best_score) > 0) {
        entry.verdict = Verdict::improved;
        result.best_harness = current;
        result.best_score = evaluation.score;
      } else {
        entry.verdict = Verdict::regressed;
      }
      result.history.push_back(std::move(entry));
      emit(canonical_of(result.history.back()));

      if (blueprint.loop.early_stop && scalarize(result.best_score, budget) >= *blueprint.loop.early_stop) {
        result.stopped_early = true;
        break;
      }
      if (k == K) break;

      if (options.on_evolve) options.on_evolve(result.history, result.best_harness);
      auto next = call_evolution(*agents->evolution, result.history, result.best_harness, derive_seed(seed, {static_cast<std::uint64_t>(k)}),
                                 task.id, blueprint.worker_binding.kind);
      if (!next) {
        result.stopped_early = true;
        break;
      }
      current = std::move(*next);
    } catch (const Error& e) {
      throw e.annotated("iteration " + std::to_string(k));
    }
  }
  return result;
}

std::pair<std::optional<Harness>, Score> select_best(const std::vector<HistoryEntry>& history) {
  std::optional<Harness> best;
  Score best_score;
  for (const auto& e : history) {
    if (compare_scores(e.score, best_score) > 0) {
      best = e.harness;
      best_score = e.score;
    }
  }
  return {best, best_score};
}

// ---------------------------------------------------------------------------

void to_json(Json& j, const RunLogHeader& v) {
  j = Json{{"blueprint_digest", v.blueprint_digest},
           {"engine_version", v.engine_version},
           {"seed", v.seed},
           {"task_id", v.task_id}};
}

void from_json(const Json& j, RunLogHeader& v) {
  if (!j.is_object() || j.size() != 4) throw Error(ErrorCode::invalid_argument, "run log header needs exactly four fields");
  v.blueprint_digest = j.at("blueprint_digest").get<std::string>();
  v.engine_version = j.at("engine_version").get<std::string>();
  v.seed = j.at("seed").get<std::uint64_t>();
  v.task_id = j.at("task_id").get<std::string>();
}

RunLogHeader make_header(const Task& task, const Blueprint& blueprint, std::uint64_t seed) {
  return RunLogHeader{task.id, blueprint_digest(blueprint), seed, std::string(engine_version())};
}

RunLog parse_run_log(std::string_view text) {
  std::vector<std::string> lines = split_lines(text);
  if (!text.empty() && text.back() != '\n' && !lines.empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::resume_mismatch, "run log has no complete header line");
  RunLog log;
  try {
    log.header = parse_json(lines.front(), ErrorCode::resume_mismatch, "run log header").get<RunLogHeader>();
  } catch (const Error& e) {
    throw Error(ErrorCode::resume_mismatch, "run log header: " + e.detail());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::resume_mismatch, std::string("run log header: ") + e.what());
  }
  log.entry_lines.assign(lines.begin() + 1, lines.end());
  return log;
}

std::vector<HistoryEntry> log_history(const RunLog& log) {
  std::vector<HistoryEntry> history;
  history.reserve(log.entry_lines.size());
  for (const auto& line : log.entry_lines) history.push_back(decode<HistoryEntry>(line, ErrorCode::resume_mismatch));
  return history;
}

InnerRunResult resume_inner_loop(std::string_view log_text, const Blueprint& blueprint, const Task& task, std::uint64_t seed,
                                 const InnerLoopOptions& options) {
  if (log_text.find('\n') == std::string_view::npos) return run_inner_loop(task, blueprint, seed, options);
  RunLog log = parse_run_log(log_text);
  if (!(log.header == make_header(task, blueprint, seed))) {
    throw Error(ErrorCode::resume_mismatch, "run log header does not match this task, blueprint, seed and engine");
  }

  std::size_t line_no = 0;  // 0 is the header
  InnerLoopOptions replay = options;
  replay.log = [&](const std::string& line) {
    if (line_no > 0 && line_no <= log.entry_lines.size() && line != log.entry_lines[line_no - 1]) {
      throw Error(ErrorCode::resume_mismatch, "logged iteration " + std::to_string(line_no) + " differs from its replay");
    }
    if (line_no > log.entry_lines.size() && options.log) options.log(line);
    ++line_no;
  };
  InnerRunResult result = run_inner_loop(task, blueprint, seed, replay);
  if (line_no <= log.entry_lines.size()) {
    throw Error(ErrorCode::resume_mismatch, "run log holds more iterations than the run produces");
  }
  return result;
}

}  // namespace hevo
