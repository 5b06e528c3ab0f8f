#include <gtest/gtest.h>

#include "hevo/inner_loop.hpp"
#include "hevo/simkit.hpp"
#include "reference.hpp"
#include "test_util.hpp"

using namespace hevo;

namespace {

Task task_at(std::size_t i) { return simkit::bundled_corpus().at(i); }

Blueprint bp(StrategyKind kind, std::int64_t K) { return simkit::default_blueprint(kind, K); }

ErrorCode code_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::invalid_argument;
}

// Builtin worker that leaves junk in its environment after every run.
class DirtyWorker : public Worker {
 public:
  void rebuild(const Harness& h) override { inner_.rebuild(h); }
  void prepare(const Task& t) override { inner_.prepare(t); }
  Trace execute(const Task& t) override {
    Trace tr = inner_.execute(t);
    inner_.env().set_current("bbbbbbbb");
    return tr;
  }

 private:
  simkit::StringForgeWorker inner_;
};

class FixedEvolution : public EvolutionAgent {
 public:
  explicit FixedEvolution(std::vector<Harness> proposals) : proposals_(std::move(proposals)) {}
  std::optional<Harness> evolve(const std::vector<HistoryEntry>&, const Harness&, std::uint64_t, const std::string&) override {
    if (next_ >= proposals_.size()) return std::nullopt;
    return proposals_[next_++];
  }

 private:
  std::vector<Harness> proposals_;
  std::size_t next_ = 0;
};

class ThrowingEvaluator : public Evaluator {
 public:
  explicit ThrowingEvaluator(int fail_at) : fail_at_(fail_at) {}
  Evaluation evaluate(const Trace& trace, const Task& task) override {
    if (++calls_ == fail_at_) throw Error(ErrorCode::report_invalid, "scripted");
    return simkit::sim_evaluate(trace, task);
  }

 private:
  int fail_at_;
  int calls_ = 0;
};

}  // namespace

TEST(InnerLoop, ZeroIterationsReturnsInitialHarnessAndMinScore) {
  std::vector<std::string> lines;
  InnerLoopOptions o;
  o.log = [&](const std::string& l) { lines.push_back(l); };
  Blueprint b = bp(StrategyKind::random, 0);
  auto r = run_inner_loop(task_at(0), b, 1, o);
  EXPECT_EQ(r.best_harness, b.initial_harness);
  EXPECT_TRUE(r.best_score.is_min());
  EXPECT_TRUE(r.history.empty());
  EXPECT_FALSE(r.stopped_early);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0], canonical_of(make_header(task_at(0), b, 1)));
}

TEST(InnerLoop, FirstEntryIsAlwaysImprovedAndEvaluatesInitialHarness) {
  for (auto kind : {StrategyKind::random, StrategyKind::hill_climb, StrategyKind::exhaustive}) {
    auto r = run_inner_loop(task_at(2), bp(kind, 3), 9);
    ASSERT_FALSE(r.history.empty());
    EXPECT_EQ(r.history[0].verdict, Verdict::improved);
    EXPECT_EQ(r.history[0].harness, simkit::default_harness());
    EXPECT_EQ(r.history[0].iteration, 1);
  }
}

TEST(InnerLoop, HeaderLineShape) {
  Blueprint b = bp(StrategyKind::hill_climb, 2);
  std::string log = testutil::run_log(task_at(0), b, 42);
  std::string header = log.substr(0, log.find('\n'));
  EXPECT_EQ(header, R"({"blueprint_digest":")" + blueprint_digest(b) + R"(","engine_version":")" + std::string(engine_version()) +
                        R"(","seed":42,"task_id":"T1"})");
}

TEST(SelectBest, EarliestMaximum) {
  Harness a = simkit::default_harness();
  Harness b = simkit::baseline_harness();
  auto entry = [](std::int64_t k, const Harness& h, Score s) { return HistoryEntry{k, h, {}, s, Verdict::regressed}; };
  Score pass16 = Score::make(true, 1, 16);
  Score fail = Score::make(false, Rational(1, 2), 5);
  EXPECT_EQ(select_best({}).first, std::nullopt);
  EXPECT_TRUE(select_best({}).second.is_min());
  auto [h1, s1] = select_best({entry(1, a, fail), entry(2, b, pass16)});
  EXPECT_EQ(h1, b);
  EXPECT_EQ(s1, pass16);
  auto [h2, s2] = select_best({entry(1, a, pass16), entry(2, b, pass16)});
  EXPECT_EQ(h2, a);
  auto [h3, s3] = select_best({entry(1, a, Score::make(true, 1, 30)), entry(2, b, pass16)});
  EXPECT_EQ(h3, b);
  (void)s2;
  (void)s3;
}

TEST(InnerLoop, VerdictsAndBestAreConsistentWithHistory) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (std::size_t t = 0; t < 12; t += 3) {
      for (auto kind : {StrategyKind::random, StrategyKind::hill_climb}) {
        auto r = run_inner_loop(task_at(t), bp(kind, 10), seed);
        Score best;
        for (const auto& e : r.history) {
          EXPECT_EQ(e.verdict == Verdict::improved, compare_scores(e.score, best) > 0);
          if (e.verdict == Verdict::improved) best = e.score;
          EXPECT_EQ(e.score, e.report.score);
        }
        auto [h, s] = select_best(r.history);
        EXPECT_EQ(s, r.best_score);
        EXPECT_EQ(h, r.best_harness);
        EXPECT_EQ(best, r.best_score);
      }
    }
  }
}

TEST(InnerLoop, EvolvesFromBestAndFullHistory) {
  std::vector<std::size_t> history_sizes;
  InnerLoopOptions o;
  std::vector<HistoryEntry> seen;
  o.on_evolve = [&](const std::vector<HistoryEntry>& history, const Harness& best) {
    history_sizes.push_back(history.size());
    EXPECT_EQ(best, select_best(history).first.value());
    seen = history;
  };
  auto r = run_inner_loop(task_at(4), bp(StrategyKind::hill_climb, 6), 3, o);
  ASSERT_EQ(r.history.size(), 6u);
  // No evolve request after the last iteration.
  EXPECT_EQ(history_sizes, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(std::vector<HistoryEntry>(r.history.begin(), r.history.end() - 1), seen);
}

TEST(InnerLoop, EvolveSeedsDeriveFromRunSeedAndIteration) {
  Blueprint b = bp(StrategyKind::random, 4);
  auto space = simkit::HarnessSpace::restricted();
  auto r = run_inner_loop(task_at(4), b, 77);
  for (std::size_t k = 1; k < r.history.size(); ++k) {
    std::vector<HistoryEntry> prefix(r.history.begin(), r.history.begin() + static_cast<std::ptrdiff_t>(k));
    auto expected = simkit::evolve_random(prefix, select_best(prefix).first.value(), derive_seed(77, {k}), space);
    EXPECT_EQ(r.history[k].harness, expected.value());
  }
}

TEST(InnerLoop, EnvironmentIsResetBeforeEveryExecution) {
  AgentSet agents;
  agents.worker = std::make_unique<DirtyWorker>();
  agents.evaluator = std::make_unique<simkit::StringForgeEvaluator>();
  agents.evolution = std::make_unique<simkit::BuiltinEvolution>(StrategyKind::exhaustive, ScalarMap{});
  InnerLoopOptions o;
  o.agents = &agents;
  Blueprint b = bp(StrategyKind::exhaustive, 12);
  auto dirty = run_inner_loop(task_at(0), b, 5, o);
  auto clean = run_inner_loop(task_at(0), b, 5);
  EXPECT_EQ(canonical_of(dirty), canonical_of(clean));
}

TEST(InnerLoop, EarlyStopHaltsOnceThresholdReached) {
  Blueprint b = bp(StrategyKind::exhaustive, 84);
  b.loop.early_stop = Rational(9, 10);
  auto r = run_inner_loop(task_at(0), b, 1);
  EXPECT_TRUE(r.stopped_early);
  EXPECT_TRUE(r.best_score.passed());
  EXPECT_LT(r.history.size(), 84u);
  for (std::size_t k = 0; k + 1 < r.history.size(); ++k) {
    std::vector<HistoryEntry> prefix(r.history.begin(), r.history.begin() + static_cast<std::ptrdiff_t>(k + 1));
    EXPECT_LT(scalarize(select_best(prefix).second, 1000), Rational(9, 10));
  }
  Blueprint never = bp(StrategyKind::exhaustive, 5);
  never.loop.early_stop = Rational(1);
  EXPECT_FALSE(run_inner_loop(task_at(0), never, 1).stopped_early);
}

TEST(InnerLoop, ExhaustedSpaceStopsEarly) {
  AgentSet agents;
  agents.worker = std::make_unique<simkit::StringForgeWorker>();
  agents.evaluator = std::make_unique<simkit::StringForgeEvaluator>();
  agents.evolution = std::make_unique<FixedEvolution>(std::vector<Harness>{simkit::baseline_harness()});
  InnerLoopOptions o;
  o.agents = &agents;
  auto r = run_inner_loop(task_at(0), bp(StrategyKind::hill_climb, 10), 1, o);
  EXPECT_EQ(r.history.size(), 2u);
  EXPECT_TRUE(r.stopped_early);

  auto full = run_inner_loop(task_at(0), bp(StrategyKind::exhaustive, 100), 1);
  EXPECT_EQ(full.history.size(), 84u);
  EXPECT_TRUE(full.stopped_early);
}

TEST(InnerLoop, ErrorsNameTheIteration) {
  AgentSet agents;
  agents.worker = std::make_unique<simkit::StringForgeWorker>();
  agents.evaluator = std::make_unique<ThrowingEvaluator>(3);
  agents.evolution = std::make_unique<simkit::BuiltinEvolution>(StrategyKind::exhaustive, ScalarMap{});
  InnerLoopOptions o;
  o.agents = &agents;
  std::string message;
  EXPECT_EQ(code_of([&] { run_inner_loop(task_at(0), bp(StrategyKind::exhaustive, 5), 1, o); }, &message), ErrorCode::report_invalid);
  EXPECT_NE(message.find("iteration 3"), std::string::npos) << message;
}

TEST(InnerLoop, InvalidProposalIsRejected) {
  Harness broken = simkit::baseline_harness();
  broken.orchestration["planner_depth"] = std::int64_t{9};
  AgentSet agents;
  agents.worker = std::make_unique<simkit::StringForgeWorker>();
  agents.evaluator = std::make_unique<simkit::StringForgeEvaluator>();
  agents.evolution = std::make_unique<FixedEvolution>(std::vector<Harness>{broken});
  InnerLoopOptions o;
  o.agents = &agents;
  std::string message;
  EXPECT_EQ(code_of([&] { run_inner_loop(task_at(0), bp(StrategyKind::hill_climb, 3), 1, o); }, &message), ErrorCode::harness_invalid);
  EXPECT_NE(message.find("iteration 1"), std::string::npos);
}

TEST(InnerLoop, InvalidInputsAreConfigErrors) {
  Task t = task_at(0);
  t.criteria.clear();
  EXPECT_EQ(code_of([&] { run_inner_loop(t, bp(StrategyKind::random, 1), 1); }), ErrorCode::invalid_config);
  Blueprint b = bp(StrategyKind::random, 1);
  b.evaluator_config.erase("time_budget_ms");
  EXPECT_EQ(code_of([&] { run_inner_loop(task_at(0), b, 1); }), ErrorCode::invalid_config);
}

TEST(InnerLoop, ExhaustiveFullBudgetFindsTheOracleOptimum) {
  auto space = simkit::HarnessSpace::restricted();
  for (const auto& task : simkit::bundled_corpus()) {
    auto r = run_inner_loop(task, bp(StrategyKind::exhaustive, 84), 3);
    auto expected = ref::oracle(task, ref::restricted_tools());
    EXPECT_EQ(r.best_score.passed(), expected.outcome.passed) << task.id;
    EXPECT_EQ(r.best_score.criteria_fraction(), expected.outcome.fraction);
    EXPECT_EQ(r.best_score.total_time_ms(), expected.outcome.time_ms);
    EXPECT_EQ(space.index_of(r.best_harness), expected.index);
  }
}

TEST(InnerLoop, ScoresNeverExceedTheOracle) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (const auto& task : simkit::bundled_corpus()) {
      auto best = simkit::brute_force_oracle(task, simkit::HarnessSpace::restricted()).score;
      for (auto kind : {StrategyKind::random, StrategyKind::hill_climb}) {
        auto r = run_inner_loop(task, bp(kind, 12), seed);
        EXPECT_TRUE(compare_scores(r.best_score, best) <= 0) << task.id;
      }
    }
  }
}

TEST(InnerLoop, DeterministicLogs) {
  for (auto kind : {StrategyKind::random, StrategyKind::hill_climb, StrategyKind::exhaustive}) {
    EXPECT_EQ(testutil::run_log(task_at(6), bp(kind, 15), 11), testutil::run_log(task_at(6), bp(kind, 15), 11));
  }
  EXPECT_NE(testutil::run_log(task_at(6), bp(StrategyKind::random, 15), 11),
            testutil::run_log(task_at(6), bp(StrategyKind::random, 15), 12));
}

// Resume --------------------------------------------------------------------

namespace {

struct Resumed {
  InnerRunResult result;
  std::string appended;
};

Resumed resume(const std::string& prefix, const Task& task, const Blueprint& b, std::uint64_t seed) {
  Resumed out;
  InnerLoopOptions o;
  o.log = [&](const std::string& l) { out.appended += l + "\n"; };
  out.result = resume_inner_loop(prefix, b, task, seed, o);
  return out;
}

std::string first_lines(const std::string& text, std::size_t n) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) pos = text.find('\n', pos) + 1;
  return text.substr(0, pos);
}

}  // namespace

TEST(Resume, ContinuesAfterThreeOfTenIterations) {
  Blueprint b = bp(StrategyKind::hill_climb, 10);
  InnerRunResult full_result;
  std::string full = testutil::run_log(task_at(5), b, 8, &full_result);
  std::string prefix = first_lines(full, 4);
  Resumed r = resume(prefix, task_at(5), b, 8);
  EXPECT_EQ(prefix + r.appended, full);
  EXPECT_EQ(canonical_of(r.result), canonical_of(full_result));
}

TEST(Resume, EmptyOrHeaderlessLogStartsFresh) {
  Blueprint b = bp(StrategyKind::random, 5);
  std::string full = testutil::run_log(task_at(3), b, 2);
  for (std::string prefix : {std::string(), full.substr(0, 10)}) {
    Resumed r = resume(prefix, task_at(3), b, 2);
    EXPECT_EQ(r.appended, full);
  }
}

TEST(Resume, TornLastLineIsDropped) {
  Blueprint b = bp(StrategyKind::random, 6);
  std::string full = testutil::run_log(task_at(3), b, 2);
  std::string prefix = first_lines(full, 3);
  std::string torn = prefix + full.substr(prefix.size(), 25);
  Resumed r = resume(torn, task_at(3), b, 2);
  EXPECT_EQ(prefix + r.appended, full);
}

TEST(Resume, CompleteLogAppendsNothing) {
  Blueprint b = bp(StrategyKind::hill_climb, 4);
  std::string full = testutil::run_log(task_at(3), b, 2);
  EXPECT_EQ(resume(full, task_at(3), b, 2).appended, "");
}

TEST(Resume, TamperedEntryIsAMismatch) {
  Blueprint b = bp(StrategyKind::hill_climb, 10);
  std::string full = testutil::run_log(task_at(5), b, 8);
  std::string prefix = first_lines(full, 4);
  auto pos = prefix.find(R"("total_time_ms":)", prefix.find('\n'));
  ASSERT_NE(pos, std::string::npos);
  prefix.insert(pos + 16, "1");
  EXPECT_EQ(code_of([&] { resume(prefix, task_at(5), b, 8); }), ErrorCode::resume_mismatch);
}

TEST(Resume, HeaderMustMatchTheRun) {
  Blueprint b = bp(StrategyKind::hill_climb, 10);
  std::string prefix = first_lines(testutil::run_log(task_at(5), b, 8), 3);
  EXPECT_EQ(code_of([&] { resume(prefix, task_at(5), b, 9); }), ErrorCode::resume_mismatch);
  EXPECT_EQ(code_of([&] { resume(prefix, task_at(6), b, 8); }), ErrorCode::resume_mismatch);
  EXPECT_EQ(code_of([&] { resume(prefix, task_at(5), bp(StrategyKind::random, 10), 8); }), ErrorCode::resume_mismatch);
  EXPECT_EQ(code_of([&] { resume("not a header\n", task_at(5), b, 8); }), ErrorCode::resume_mismatch);
}

TEST(RunLog, ParseAndHistory) {
  Blueprint b = bp(StrategyKind::hill_climb, 5);
  InnerRunResult r;
  std::string text = testutil::run_log(task_at(4), b, 3, &r);
  RunLog log = parse_run_log(text);
  EXPECT_EQ(log.header, make_header(task_at(4), b, 3));
  EXPECT_EQ(log.entry_lines.size(), 5u);
  EXPECT_EQ(log_history(log), r.history);
  EXPECT_EQ(parse_run_log(text + "{\"partial").entry_lines.size(), 5u);
  EXPECT_EQ(code_of([&] { parse_run_log(""); }), ErrorCode::resume_mismatch);
}
