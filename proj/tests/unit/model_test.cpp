#include <gtest/gtest.h>

#include <random>

#include "hevo/meta_types.hpp"
#include "hevo/model.hpp"
#include "hevo/simkit.hpp"

using namespace hevo;

namespace {

Score S(bool passed, Rational f, std::int64_t t) { return Score::make(passed, f, t); }

Score random_score(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> time(0, 40);
  int d = den(rng);
  int n = std::uniform_int_distribution<int>(0, d)(rng);
  Rational f(n, d);
  return S(f == Rational(1), f, time(rng));
}

bool has_violation(const ValidationResult& r, const std::string& path) {
  for (const auto& v : r.violations) {
    if (v.path == path) return true;
  }
  return false;
}

}  // namespace

TEST(CompareScores, PassedBeatsFasterFailure) {
  EXPECT_EQ(compare_scores(S(true, 1, 900), S(false, Rational(9, 10), 10)), std::strong_ordering::greater);
}

TEST(CompareScores, TimeBreaksTiesAmongPasses) {
  EXPECT_EQ(compare_scores(S(true, 1, 50), S(true, 1, 80)), std::strong_ordering::greater);
}

TEST(CompareScores, IdenticalScoresAreEqual) {
  EXPECT_EQ(compare_scores(S(false, Rational(1, 2), 10), S(false, Rational(1, 2), 10)), std::strong_ordering::equal);
}

TEST(CompareScores, FractionIsTheMiddleTier) {
  EXPECT_EQ(compare_scores(S(false, Rational(1, 2), 90), S(false, Rational(1, 3), 1)), std::strong_ordering::greater);
}

TEST(CompareScores, MinScoreIsBelowEverything) {
  EXPECT_EQ(compare_scores(Score::min(), S(false, 0, 1000000)), std::strong_ordering::less);
  EXPECT_EQ(compare_scores(Score::min(), Score::min()), std::strong_ordering::equal);
  EXPECT_TRUE(Score().is_min());
}

TEST(CompareScores, TotalOrderOnRandomTriples) {
  std::mt19937_64 rng(1234);
  std::vector<Score> scores{Score::min()};
  for (int i = 0; i < 1000; ++i) scores.push_back(random_score(rng));
  for (std::size_t i = 0; i + 2 < scores.size(); i += 1) {
    const Score& a = scores[i];
    const Score& b = scores[i + 1];
    const Score& c = scores[i + 2];
    auto ab = compare_scores(a, b);
    auto ba = compare_scores(b, a);
    EXPECT_EQ(ab == std::strong_ordering::less, ba == std::strong_ordering::greater);
    EXPECT_EQ(ab == std::strong_ordering::equal, ba == std::strong_ordering::equal);
    EXPECT_EQ(ab == std::strong_ordering::equal, a == b);
    if (ab <= 0 && compare_scores(b, c) <= 0) { EXPECT_TRUE(compare_scores(a, c) <= 0); }
    if (ab >= 0 && compare_scores(b, c) >= 0) { EXPECT_TRUE(compare_scores(a, c) >= 0); }
  }
}

TEST(Score, RejectsInconsistentConstruction) {
  EXPECT_THROW(S(true, Rational(1, 2), 0), Error);
  EXPECT_THROW(S(false, 1, 0), Error);
  EXPECT_THROW(S(false, Rational(3, 2), 0), Error);
  EXPECT_THROW(S(false, Rational(-1, 2), 0), Error);
  EXPECT_THROW(S(false, 0, -1), Error);
}

TEST(Scalarize, Examples) {
  EXPECT_EQ(scalarize(S(true, 1, 0), 1000), Rational(1));
  EXPECT_EQ(scalarize(S(false, Rational(1, 2), 10), 1000), Rational(9, 20));
  EXPECT_EQ(scalarize(S(true, 1, 1000), 1000), Rational(9, 10));
  EXPECT_EQ(scalarize(S(true, 1, 5000), 1000), Rational(9, 10));
  EXPECT_EQ(scalarize(S(true, 1, 16), 1000), Rational(9, 10) + Rational(1, 10) * Rational(984, 1000));
  EXPECT_EQ(scalarize(Score::min(), 1000), Rational(0));
  EXPECT_THROW(scalarize(S(true, 1, 0), 0), Error);
}

TEST(Scalarize, FailedScoresIgnoreTime) {
  EXPECT_EQ(scalarize(S(false, Rational(1, 2), 10), 100), scalarize(S(false, Rational(1, 2), 90), 100));
}

TEST(Scalarize, PassFailTierIsPreserved) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    Score a = random_score(rng);
    Score b = random_score(rng);
    std::int64_t budget = std::uniform_int_distribution<std::int64_t>(1, 200)(rng);
    if (a.passed() && !b.passed()) { EXPECT_GT(scalarize(a, budget), scalarize(b, budget)); }
    if (a.passed()) { EXPECT_GE(scalarize(a, budget), Rational(9, 10)); }
    if (!a.passed()) { EXPECT_LT(scalarize(a, budget), Rational(9, 10)); }
  }
}

TEST(ValidateHarness, Examples) {
  Harness h = simkit::default_harness();
  h.tools = {"append_a"};
  EXPECT_TRUE(validate_harness(h).ok());

  Harness empty = h;
  empty.tools.clear();
  EXPECT_TRUE(has_violation(validate_harness(empty), "tools"));

  Harness deep = h;
  deep.orchestration["planner_depth"] = std::int64_t{7};
  EXPECT_TRUE(has_violation(validate_harness(deep), "orchestration.planner_depth"));
}

TEST(ValidateHarness, NamesEveryOffendingPath) {
  Harness h = simkit::default_harness();
  h.tools = {"append_a", "teleport", "append_a"};
  h.orchestration["max_steps"] = std::int64_t{0};
  h.model_config["model_tier"] = std::string("huge");
  h.model_config.erase("prompt_style");
  auto r = validate_harness(h);
  EXPECT_TRUE(has_violation(r, "tools[1]"));
  EXPECT_TRUE(has_violation(r, "tools[2]"));
  EXPECT_TRUE(has_violation(r, "orchestration.max_steps"));
  EXPECT_TRUE(has_violation(r, "model_config.model_tier"));
  EXPECT_TRUE(has_violation(r, "model_config.prompt_style"));
}

TEST(ValidateHarness, ExternalWorkersOnlyNeedAnObjectShape) {
  Harness h;
  h.tools = {"browser.click"};
  EXPECT_TRUE(validate_harness(h, BindingKind::external).ok());
  EXPECT_FALSE(validate_harness(h, BindingKind::builtin).ok());
}

TEST(ValidateTask, CriteriaMustBeNonemptyAndUnique) {
  Task t = simkit::bundled_corpus().front();
  EXPECT_TRUE(validate_task(t).ok());
  Task none = t;
  none.criteria.clear();
  EXPECT_TRUE(has_violation(validate_task(none), "criteria"));
  Task dup = t;
  dup.criteria[1].id = dup.criteria[0].id;
  EXPECT_TRUE(has_violation(validate_task(dup), "criteria[1].id"));
}

TEST(ValidateTrace, TotalsAndIndices) {
  Trace t = simkit::sim_execute(simkit::baseline_harness(), simkit::bundled_corpus().front());
  EXPECT_TRUE(validate_trace(t).ok());
  Trace bad_totals = t;
  bad_totals.totals.llm_time_ms += 1;
  EXPECT_TRUE(has_violation(validate_trace(bad_totals), "totals.llm_time_ms"));
  Trace bad_index = t;
  bad_index.steps[0].index = 2;
  EXPECT_TRUE(has_violation(validate_trace(bad_index), "steps[0].index"));
}

TEST(ValidateReport, PassedRequiresVerifiedStateAndAllCriteria) {
  Task t = simkit::bundled_corpus().front();
  Evaluation e = simkit::sim_evaluate(simkit::sim_execute(simkit::baseline_harness(), t), t);
  ASSERT_TRUE(e.score.passed());
  EXPECT_TRUE(validate_report(e.report).ok());

  EvaluationReport unverified = e.report;
  unverified.state_verified = false;
  unverified.first_divergence = 1;
  EXPECT_TRUE(has_violation(validate_report(unverified), "score.passed"));

  EvaluationReport failed = e.report;
  failed.criterion_verdicts[0].passed = false;
  EXPECT_TRUE(has_violation(validate_report(failed), "criterion_verdicts[0]"));

  EvaluationReport wrong_label = e.report;
  wrong_label.audit.dominant_bottleneck = Bottleneck::tool;
  EXPECT_TRUE(has_violation(validate_report(wrong_label), "audit.dominant_bottleneck"));
}

TEST(DominantBottleneck, LargerTotalTiesToLlm) {
  EXPECT_EQ(dominant_bottleneck(10, 6), Bottleneck::llm);
  EXPECT_EQ(dominant_bottleneck(6, 10), Bottleneck::tool);
  EXPECT_EQ(dominant_bottleneck(6, 6), Bottleneck::llm);
  EXPECT_EQ(dominant_bottleneck(0, 0), Bottleneck::llm);
}

TEST(Blueprint, DefaultIsValidAndDigestIsStable) {
  Blueprint b = simkit::default_blueprint(StrategyKind::exhaustive, 84);
  EXPECT_TRUE(validate_blueprint(b).ok()) << validate_blueprint(b).describe();
  EXPECT_EQ(blueprint_digest(b), hex64(fnv1a64(canonical_of(b))));
  EXPECT_EQ(blueprint_digest(b).size(), 16u);
  Blueprint other = b;
  other.loop.K = 83;
  EXPECT_NE(blueprint_digest(b), blueprint_digest(other));
}

TEST(Blueprint, ValidationPaths) {
  Blueprint b = simkit::default_blueprint(StrategyKind::random, 5);
  b.evaluator_config.erase("time_budget_ms");
  b.loop.K = -1;
  b.loop.parallelism = 0;
  b.loop.early_stop = Rational(3, 2);
  auto r = validate_blueprint(b);
  EXPECT_TRUE(has_violation(r, "evaluator_config.time_budget_ms"));
  EXPECT_TRUE(has_violation(r, "loop.K"));
  EXPECT_TRUE(has_violation(r, "loop.parallelism"));
  EXPECT_TRUE(has_violation(r, "loop.early_stop"));

  Blueprint zero = simkit::default_blueprint(StrategyKind::random, 0);
  EXPECT_TRUE(validate_blueprint(zero).ok());
}

// Round trips ---------------------------------------------------------------

template <typename T>
void expect_round_trip(const T& value) {
  std::string text = canonical_of(value);
  T back = decode<T>(text);
  EXPECT_EQ(back, value);
  EXPECT_EQ(canonical_of(back), text);
}

TEST(RoundTrip, EveryHarnessOfTheFullSpace) {
  auto space = simkit::HarnessSpace::full();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Harness h = space.at(i);
    h.extensions["notes"] = Json{{"i", i}};
    expect_round_trip(h);
  }
}

TEST(RoundTrip, DomainValues) {
  Task t = simkit::bundled_corpus()[7];
  expect_round_trip(t);
  Trace tr = simkit::sim_execute(simkit::baseline_harness(), t);
  expect_round_trip(tr);
  Evaluation e = simkit::sim_evaluate(tr, t);
  expect_round_trip(e.report);
  expect_round_trip(e.score);
  expect_round_trip(Score::min());
  expect_round_trip(HistoryEntry{3, simkit::baseline_harness(), e.report, e.score, Verdict::improved});

  Blueprint b = simkit::default_blueprint(StrategyKind::hill_climb, 12);
  b.loop.early_stop = Rational(9, 10);
  expect_round_trip(b);
  Blueprint ext = b;
  ext.worker_binding = external_binding("/bin/agent", {"--x", "1"}, 500);
  ext.evolution_strategy.kind = StrategyKind::external;
  ext.evolution_strategy.agent = external_binding("python3", {"evolve.py"}, 900);
  expect_round_trip(ext);

  TaskResult tr1{"T1", e.score, scalarize(e.score, 1000), "0123456789abcdef", "rounds/r0/T1.log"};
  expect_round_trip(tr1);
  expect_round_trip(MetaHistoryEntry{0, b, {tr1}, tr1.scalar, Verdict::improved});
}

TEST(RoundTrip, ScoreEncodingIsPinned) {
  EXPECT_EQ(canonical_of(S(true, 1, 16)), R"({"criteria_fraction":"1","passed":true,"total_time_ms":16})");
  EXPECT_EQ(canonical_of(S(false, Rational(1, 3), 64)), R"({"criteria_fraction":"1/3","passed":false,"total_time_ms":64})");
  EXPECT_EQ(canonical_of(Score::min()), R"("MIN_SCORE")");
}

TEST(Decode, RejectsUnknownFieldsAndBadTypes) {
  EXPECT_THROW(decode<Score>(R"({"criteria_fraction":"1","passed":true,"total_time_ms":1,"x":0})"), Error);
  EXPECT_THROW(decode<Score>(R"({"criteria_fraction":0.5,"passed":false,"total_time_ms":1})"), Error);
  EXPECT_THROW(decode<Task>(R"({"id":"x"})"), Error);
  EXPECT_THROW(decode<HistoryEntry>("[]"), Error);
  try {
    decode<Trace>("{", ErrorCode::resume_mismatch);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::resume_mismatch);
  }
}

TEST(Enums, NamesRoundTrip) {
  for (auto k : {StrategyKind::random, StrategyKind::hill_climb, StrategyKind::exhaustive, StrategyKind::external}) {
    EXPECT_EQ(parse_strategy_kind(to_string(k)), k);
  }
  for (auto r : {AgentRole::worker, AgentRole::evaluator, AgentRole::evolution, AgentRole::meta_evolution}) {
    EXPECT_EQ(parse_agent_role(to_string(r)), r);
  }
  EXPECT_EQ(to_string(Verdict::improved), "IMPROVED");
  EXPECT_EQ(to_string(Verdict::regressed), "REGRESSED");
  EXPECT_THROW(parse_strategy_kind("annealing"), Error);
}
