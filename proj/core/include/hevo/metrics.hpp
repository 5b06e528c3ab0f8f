#pragma once

// Evaluation metrics over run histories: convergence speed, final pass rate
// and robustness, plus the report document and plot series built from them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hevo/inner_loop.hpp"
#include "hevo/model.hpp"

namespace hevo {

// Iteration count to reach a threshold; nullopt means NOT_REACHED.
using Speed = std::optional<std::int64_t>;

// Smallest k such that the best score among the first k entries scalarizes
// to at least `threshold`.
Speed convergence_speed(const std::vector<HistoryEntry>& history, const Rational& threshold, std::int64_t time_budget_ms);

// Prefix maximum of per-iteration scalars.
std::vector<Rational> best_scalar_series(const std::vector<HistoryEntry>& history, std::int64_t time_budget_ms);

// Fraction of runs whose best score passed; empty_aggregate when empty.
Rational final_performance(const std::vector<InnerRunResult>& results);
Rational final_performance(const std::vector<Score>& best_scores);

struct Robustness {
  std::optional<Rational> variance;  // population variance of reached speeds; nullopt is UNDEFINED
  std::int64_t not_reached = 0;
  bool operator==(const Robustness&) const = default;
};

Robustness robustness(const std::vector<Speed>& speeds);

struct ConvergenceRecord {
  std::string task_id;
  Speed iterations_to_threshold;
  bool final_pass = false;
  std::vector<Rational> best_scalar_by_iteration;
};

ConvergenceRecord make_record(const std::string& task_id, const std::vector<HistoryEntry>& history, const Rational& threshold,
                              std::int64_t time_budget_ms);

// "iteration best_scalar" per line, scalars at fixed precision 6.
std::string series_text(const std::vector<Rational>& series);

struct ReportProvenance {
  std::string blueprint_digest;
  std::vector<std::string> train_task_ids;
  std::vector<std::string> test_task_ids;
  std::int64_t K = 0;
  std::uint64_t seed = 0;
};

// Report document with sections metrics, per_task and provenance. A pure
// function of the inner run logs (header plus entries), in task order.
Json build_report(const std::vector<std::string>& run_logs, const Rational& threshold, std::int64_t time_budget_ms,
                  const ReportProvenance& provenance);

struct MetaTestReport {
  Json document;
  std::vector<std::string> task_ids;
  std::vector<std::string> run_logs;
  std::vector<ConvergenceRecord> records;
};

// Runs the blueprint (with K replaced) on every test task, then builds the
// report from the produced logs. train_test_overlap when a test id appears in
// train_task_ids; empty_aggregate when there are no test tasks.
MetaTestReport meta_test_report(const Blueprint& blueprint, const std::vector<std::string>& train_task_ids,
                                const std::vector<Task>& test_tasks, std::int64_t K, std::uint64_t seed, const Rational& threshold,
                                std::int64_t parallelism = 1);

}  // namespace hevo
