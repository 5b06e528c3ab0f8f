#pragma once

// The meta-evolution loop: evolves a blueprint across a set of training tasks,
// scoring each round by the mean scalarized best score of its inner runs.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hevo/inner_loop.hpp"
#include "hevo/meta_types.hpp"
#include "hevo/model.hpp"
#include "hevo/protocol.hpp"

namespace hevo {

// Exact mean of the scalars; empty_aggregate for an empty list.
Rational aggregate(const std::vector<TaskResult>& task_results);

struct MetaRunResult {
  Blueprint best_blueprint;
  Rational best_meta_score{0};
  std::vector<MetaHistoryEntry> meta_history;
  bool stopped_early = false;
};

void to_json(Json& j, const MetaRunResult& v);

struct MetaLogHeader {
  std::vector<std::string> task_ids;
  std::string blueprint0_digest;
  std::uint64_t seed = 0;
  std::int64_t J = 0;
  std::string engine_version;
};

void to_json(Json& j, const MetaLogHeader& v);

struct MetaLoopOptions {
  // Overrides the round blueprint's loop.parallelism when set.
  std::optional<std::int64_t> parallelism;
  // Receives every meta log line (header first), without trailing newline.
  std::function<void(const std::string& line)> log;
  // Receives each inner run log once the round has joined, in task order.
  std::function<void(const std::string& history_path, const std::string& log_text)> inner_log;
  // Called before each meta evolve request.
  std::function<void(const std::vector<MetaHistoryEntry>& meta_history, const Blueprint& best)> on_evolve;
};

// Relative path of the inner run log for round j and a task.
std::string inner_log_path(std::int64_t round, const std::string& task_id);

// Seed of the inner run for round j, task position i.
std::uint64_t inner_seed(std::uint64_t seed, std::int64_t round, std::size_t task_index);

MetaRunResult run_meta_loop(const std::vector<Task>& tasks, MetaEvolutionAgent& meta_agent, const Blueprint& blueprint0,
                            std::int64_t J, std::uint64_t seed, const MetaLoopOptions& options = {});

// Runs inner loops for `tasks` under one blueprint, up to `parallelism` at a
// time, joined in task order. Inner seeds are inner_seed(seed, round, i).
struct RoundRun {
  std::vector<InnerRunResult> results;
  std::vector<std::string> logs;
};
RoundRun run_round(const std::vector<Task>& tasks, const Blueprint& blueprint, std::uint64_t seed, std::int64_t round,
                   std::int64_t parallelism);

// Checks that task ids are present, valid and unique (invalid_config).
void validate_task_set(const std::vector<Task>& tasks);

}  // namespace hevo
