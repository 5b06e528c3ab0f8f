#include "hevo/metrics.hpp"

#include <algorithm>
#include <set>

#include "hevo/error.hpp"
#include "hevo/meta_loop.hpp"

namespace hevo {

Speed convergence_speed(const std::vector<HistoryEntry>& history, const Rational& threshold, std::int64_t time_budget_ms) {
  Score best;
  for (std::size_t k = 0; k < history.size(); ++k) {
    if (compare_scores(history[k].score, best) > 0) best = history[k].score;
    if (scalarize(best, time_budget_ms) >= threshold) return static_cast<std::int64_t>(k + 1);
  }
  return std::nullopt;
}

std::vector<Rational> best_scalar_series(const std::vector<HistoryEntry>& history, std::int64_t time_budget_ms) {
  std::vector<Rational> series;
  series.reserve(history.size());
  Rational best(0);
  for (const auto& e : history) {
    best = std::max(best, scalarize(e.score, time_budget_ms));
    series.push_back(best);
  }
  return series;
}

Rational final_performance(const std::vector<Score>& best_scores) {
  if (best_scores.empty()) throw Error(ErrorCode::empty_aggregate, "no runs to compute a pass rate over");
  auto passed = std::count_if(best_scores.begin(), best_scores.end(), [](const Score& s) { return s.passed(); });
  return Rational(static_cast<std::int64_t>(passed), static_cast<std::int64_t>(best_scores.size()));
}

Rational final_performance(const std::vector<InnerRunResult>& results) {
  std::vector<Score> scores;
  scores.reserve(results.size());
  for (const auto& r : results) scores.push_back(r.best_score);
  return final_performance(scores);
}

Robustness robustness(const std::vector<Speed>& speeds) {
  Robustness out;
  std::vector<std::int64_t> reached;
  for (const auto& s : speeds) {
    if (s) {
      reached.push_back(*s);
    } else {
      ++out.not_reached;
    }
  }
  if (reached.empty()) return out;
  const auto n = static_cast<std::int64_t>(reached.size());
  Rational mean(0);
  for (auto r : reached) mean += r;
  mean /= n;
  Rational sum_sq(0);
  for (auto r : reached) sum_sq += (Rational(r) - mean) * (Rational(r) - mean);
  out.variance = sum_sq / n;
  return out;
}

ConvergenceRecord make_record(const std::string& task_id, const std::vector<HistoryEntry>& history, const Rational& threshold,
                              std::int64_t time_budget_ms) {
  ConvergenceRecord record;
  record.task_id = task_id;
  record.iterations_to_threshold = convergence_speed(history, threshold, time_budget_ms);
  record.final_pass = select_best(history).second.passed();
  record.best_scalar_by_iteration = best_scalar_series(history, time_budget_ms);
  return record;
}

std::string series_text(const std::vector<Rational>& series) {
  std::string out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += std::to_string(i + 1) + " " + to_fixed6(series[i]) + "\n";
  }
  return out;
}

namespace {

Json speed_json(const Speed& s) { return s ? Json(*s) : Json("NOT_REACHED"); }

}  // namespace

Json build_report(const std::vector<std::string>& run_logs, const Rational& threshold, std::int64_t time_budget_ms,
                  const ReportProvenance& provenance) {
  if (run_logs.empty()) throw Error(ErrorCode::empty_aggregate, "report needs at least one test task");

  std::vector<Speed> speeds;
  std::vector<Score> best_scores;
  Json per_task = Json::array();
  for (const auto& text : run_logs) {
    RunLog log = parse_run_log(text);
    auto history = log_history(log);
    ConvergenceRecord record = make_record(log.header.task_id, history, threshold, time_budget_ms);
    speeds.push_back(record.iterations_to_threshold);
    best_scores.push_back(select_best(history).second);

    Json series = Json::array();
    for (const auto& r : record.best_scalar_by_iteration) series.push_back(to_string(r));
    per_task.push_back(Json{{"task_id", record.task_id},
                            {"iterations_to_threshold", speed_json(record.iterations_to_threshold)},
                            {"final_pass", record.final_pass},
                            {"best_score", best_scores.back()},
                            {"history_digest", hex64(fnv1a64(text))},
                            {"best_scalar_by_iteration", series}});
  }

  Robustness rob = robustness(speeds);
  Json metrics{
      {"convergence_speed", Json{{"threshold", to_string(threshold)}, {"time_budget_ms", time_budget_ms}}},
      {"final_performance", to_string(final_performance(best_scores))},
      {"robustness",
       Json{{"variance", rob.variance ? Json(to_string(*rob.variance)) : Json("UNDEFINED")},
            {"not_reached", rob.not_reached},
            {"definition", "population variance of iterations_to_threshold over tasks that reached the threshold; "
                           "NOT_REACHED tasks are excluded and counted"}}},
  };
  Json prov{{"blueprint_digest", provenance.blueprint_digest},
            {"train_task_ids", provenance.train_task_ids},
            {"test_task_ids", provenance.test_task_ids},
            {"K", provenance.K},
            {"seed", provenance.seed},
            {"engine_version", std::string(engine_version())}};
  return Json{{"metrics", metrics}, {"per_task", per_task}, {"provenance", prov}};
}

MetaTestReport meta_test_report(const Blueprint& blueprint, const std::vector<std::string>& train_task_ids,
                                const std::vector<Task>& test_tasks, std::int64_t K, std::uint64_t seed, const Rational& threshold,
                                std::int64_t parallelism) {
  std::set<std::string> train(train_task_ids.begin(), train_task_ids.end());
  for (const auto& t : test_tasks) {
    if (train.count(t.id)) throw Error(ErrorCode::train_test_overlap, "test task '" + t.id + "' was used for training");
  }
  if (test_tasks.empty()) throw Error(ErrorCode::empty_aggregate, "report needs at least one test task");
  if (threshold < 0 || threshold > 1) throw Error(ErrorCode::invalid_config, "threshold must lie in [0, 1]");
  validate_task_set(test_tasks);

  Blueprint b = blueprint;
  b.loop.K = K;
  RoundRun round = run_round(test_tasks, b, seed, 0, parallelism);

  MetaTestReport out;
  ReportProvenance prov;
  prov.blueprint_digest = blueprint_digest(b);
  prov.train_task_ids = train_task_ids;
  prov.K = K;
  prov.seed = seed;
  for (std::size_t i = 0; i < test_tasks.size(); ++i) {
    out.task_ids.push_back(test_tasks[i].id);
    prov.test_task_ids.push_back(test_tasks[i].id);
    out.records.push_back(make_record(test_tasks[i].id, round.results[i].history, threshold, time_budget_ms(b)));
  }
  out.run_logs = std::move(round.logs);
  out.document = build_report(out.run_logs, threshold, time_budget_ms(b), prov);
  return out;
}

}  // namespace hevo
