#include "hevo/meta_loop.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "hevo/error.hpp"

namespace hevo {

Rational aggregate(const std::vector<TaskResult>& task_results) {
  if (task_results.empty()) throw Error(ErrorCode::empty_aggregate, "cannot average zero task results");
  Rational sum(0);
  for (const auto& r : task_results) sum += r.scalar;
  return sum / static_cast<std::int64_t>(task_results.size());
}

void to_json(Json& j, const MetaRunResult& v) {
  j = Json{{"best_blueprint", v.best_blueprint},
           {"best_meta_score", to_string(v.best_meta_score)},
           {"meta_history", v.meta_history},
           {"stopped_early", v.stopped_early}};
}

void to_json(Json& j, const MetaLogHeader& v) {
  j = Json{{"J", v.J},
           {"blueprint0_digest", v.blueprint0_digest},
           {"engine_version", v.engine_version},
           {"seed", v.seed},
           {"task_ids", v.task_ids}};
}

std::string inner_log_path(std::int64_t round, const std::string& task_id) {
  return "rounds/r" + std::to_string(round) + "/" + task_id + ".log";
}

std::uint64_t inner_seed(std::uint64_t seed, std::int64_t round, std::size_t task_index) {
  return derive_seed(seed, {static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(task_index)});
}

void validate_task_set(const std::vector<Task>& tasks) {
  if (tasks.empty()) throw Error(ErrorCode::invalid_config, "task set is empty");
  std::set<std::string> ids;
  for (const auto& t : tasks) {
    if (auto v = validate_task(t); !v.ok()) throw Error(ErrorCode::invalid_config, "task '" + t.id + "': " + v.describe());
    if (!ids.insert(t.id).second) throw Error(ErrorCode::invalid_config, "duplicate task id '" + t.id + "'");
  }
}

RoundRun run_round(const std::vector<Task>& tasks, const Blueprint& blueprint, std::uint64_t seed, std::int64_t round,
                   std::int64_t parallelism) {
  const std::size_t n = tasks.size();
  RoundRun out;
  out.results.resize(n);
  out.logs.resize(n);
  std::vector<std::exception_ptr> errors(n);

  auto run_one = [&](std::size_t i) {
    try {
      std::string text;
      InnerLoopOptions options;
      options.log = [&text](const std::string& line) {
        text += line;
        text += '\n';
      };
      out.results[i] = run_inner_loop(tasks[i], blueprint, inner_seed(seed, round, i), options);
      out.logs[i] = std::move(text);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max<std::int64_t>(parallelism, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    std::string where = "round " + std::to_string(round) + ", task " + tasks[i].id;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw e.annotated(where);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::io_error, where + ": " + e.what());
    }
  }
  return out;
}

MetaRunResult run_meta_loop(const std::vector<Task>& tasks, MetaEvolutionAgent& meta_agent, const Blueprint& blueprint0,
                            std::int64_t J, std::uint64_t seed, const MetaLoopOptions& options) {
  validate_task_set(tasks);
  if (auto v = validate_blueprint(blueprint0); !v.ok()) throw Error(ErrorCode::invalid_config, "blueprint: " + v.describe());
  if (J < 1) throw Error(ErrorCode::invalid_config, "J must be positive");

  MetaLogHeader header;
  for (const auto& t : tasks) header.task_ids.push_back(t.id);
  header.blueprint0_digest = blueprint_digest(blueprint0);
  header.seed = seed;
  header.J = J;
  header.engine_version = std::string(engine_version());
  if (options.log) options.log(canonical_of(header));

  MetaRunResult result;
  result.best_blueprint = blueprint0;
  Blueprint current = blueprint0;
  bool have_best = false;

  for (std::int64_t j = 0; j < J; ++j) {
    const std::int64_t parallelism = options.parallelism.value_or(current.loop.parallelism);
    RoundRun round = run_round(tasks, current, seed, j, parallelism);

    MetaHistoryEntry entry;
    entry.round = j;
    entry.blueprint = current;
    const std::int64_t budget = time_budget_ms(current);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      TaskResult r;
      r.task_id = tasks[i].id;
      r.best_score = round.results[i].best_score;
      r.scalar = scalarize(r.best_score, budget);
      r.history_digest = hex64(fnv1a64(round.logs[i]));
      r.history_path = inner_log_path(j, tasks[i].id);
      if (options.inner_log) options.inner_log(r.history_path, round.logs[i]);
      entry.task_results.push_back(std::move(r));
    }
    entry.meta_score = aggregate(entry.task_results);
    if (!have_best || entry.meta_score > result.best_meta_score) {
      entry.verdict = Verdict::improved;
      result.best_blueprint = current;
      result.best_meta_score = entry.meta_score;
      have_best = true;
    } else {
      entry.verdict = Verdict::regressed;
    }
    result.meta_history.push_back(std::move(entry));
    if (options.log) options.log(canonical_of(result.meta_history.back()));

    if (j + 1 == J) break;
    try {
      if (options.on_evolve) options.on_evolve(result.meta_history, result.best_blueprint);
      auto next = call_meta_evolution(meta_agent, result.meta_history, result.best_blueprint,
                                      derive_seed(seed, {static_cast<std::uint64_t>(j)}));
      if (!next) {
        result.stopped_early = true;
        break;
      }
      current = std::move(*next);
    } catch (const Error& e) {
      throw e.annotated("round " + std::to_string(j) + ", meta evolve");
    }
  }
  return result;
}

}  // namespace hevo
