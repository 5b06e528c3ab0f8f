#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hevo/model.hpp"

namespace hevo {

// Outcome of one inner loop inside a meta round.
struct TaskResult {
  std::string task_id;
  Score best_score;
  Rational scalar{0};  // scalarize(best_score, time_budget_ms of the round's blueprint)
  std::string history_digest;  // FNV-1a of the inner run log bytes
  std::string history_path;  // relative to the meta run directory
  bool operator==(const TaskResult&) const = default;
};

struct MetaHistoryEntry {
  std::int64_t round = 0;
  Blueprint blueprint;
  std::vector<TaskResult> task_results;
  Rational meta_score{0};
  Verdict verdict = Verdict::regressed;
  bool operator==(const MetaHistoryEntry&) const = default;
};

void to_json(Json& j, const TaskResult& v);
void from_json(const Json& j, TaskResult& v);
void to_json(Json& j, const MetaHistoryEntry& v);
void from_json(const Json& j, MetaHistoryEntry& v);

}  // namespace hevo
