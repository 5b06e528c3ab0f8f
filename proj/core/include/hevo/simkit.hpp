#pragma once

// StringForge: a deterministic string-editing environment, reference agents
// for all four roles, the finite harness and blueprint spaces they search, and
// a brute-force oracle over those spaces.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hevo/meta_types.hpp"
#include "hevo/model.hpp"
#include "hevo/protocol.hpp"
#include "hevo/search.hpp"

namespace hevo::simkit {

inline constexpr std::array<std::string_view, 5> kToolNames = {"append_a", "append_b", "drop_last", "reverse", "swapcase"};

inline constexpr std::int64_t kToolTimeMs = 3;
inline constexpr std::int64_t kFastLlmTimeMs = 5;
inline constexpr std::int64_t kSmartLlmTimeMs = 20;
inline constexpr std::int64_t kVerbosePenaltyMs = 2;

bool is_tool(std::string_view name);

// Pure transition function; Error(trace_invalid) for unknown tools.
std::string apply_tool(std::string_view tool, std::string_view state);

// Unit-cost edit distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

class StringForgeEnv {
 public:
  void reset(const Task& task);
  const std::string& apply(std::string_view tool);

  const std::string& current() const { return current_; }
  std::int64_t steps_used() const { return steps_used_; }

  // Direct state access, for tests that perturb the environment.
  void set_current(std::string state) { current_ = std::move(state); }

 private:
  std::string current_;
  std::int64_t steps_used_ = 0;
};

// Greedy depth-limited planner: per step, pick the action sequence (length 1..d,
// d = planner_depth for smart tier, 1 for fast) minimizing the edit distance to
// the target, ties broken by lexicographic action-name sequence, then execute
// its first action. Stops at the target or after orchestration.max_steps.
class StringForgeWorker : public Worker {
 public:
  void rebuild(const Harness& harness) override;
  void prepare(const Task& task) override;
  Trace execute(const Task& task) override;

  const StringForgeEnv& env() const { return env_; }
  StringForgeEnv& env() { return env_; }

 private:
  std::vector<std::string> tools_;  // sorted
  std::int64_t depth_ = 1;
  std::int64_t max_steps_ = 1;
  std::int64_t llm_ms_ = kFastLlmTimeMs;
  StringForgeEnv env_;
};

Trace sim_execute(const Harness& harness, const Task& task);

// Replays the trace through a fresh environment to verify observations, then
// checks criteria against the replayed state (never the claimed one), audits
// time and scores. With strictness 1 a claimed final state that differs from
// the replay also counts as a divergence (at step n + 1).
//
// criteria_fraction is passed/m when the state verifies and passed/(m + 1)
// otherwise, so an unverified run can never reach fraction 1.
class StringForgeEvaluator : public Evaluator {
 public:
  explicit StringForgeEvaluator(std::int64_t strictness = 1) : strictness_(strictness) {}
  Evaluation evaluate(const Trace& trace, const Task& task) override;

 private:
  std::int64_t strictness_;
};

Evaluation sim_evaluate(const Trace& trace, const Task& task, const ScalarMap& evaluator_config = {});

// ---------------------------------------------------------------------------
// Harness space

// Grid over (tool subset bitmask 1..2^n-1, planner_depth, model_tier,
// prompt_style); bit i of the mask selects tools[i]. Enumeration runs mask
// ascending, then depth, tier, style.
class HarnessSpace {
 public:
  HarnessSpace(std::vector<std::string> tools, std::vector<std::int64_t> depths, std::vector<std::string> tiers,
               std::vector<std::string> styles, std::int64_t max_steps = 8);

  // {append_a, append_b, drop_last}: 7 * 3 * 2 * 2 = 84 harnesses.
  static HarnessSpace restricted();
  // All five tools: 31 * 3 * 2 * 2 = 372 harnesses.
  static HarnessSpace full();
  // "restricted" or "full"; Error(invalid_config) otherwise.
  static HarnessSpace named(std::string_view name);
  // Declaration document; every dimension must be an explicit finite list.
  static HarnessSpace from_json(const Json& j);
  Json to_json() const;

  std::size_t size() const { return grid_.size(); }
  const search::Grid& grid() const { return grid_; }

  // Canonical harness for an index (fixed prompts, empty extensions).
  Harness at(std::size_t index) const;
  // `base` with its tool list and knobs replaced by those of `index`.
  Harness apply(std::size_t index, const Harness& base) const;
  std::optional<std::size_t> index_of(const Harness& harness) const;

 private:
  std::vector<std::string> tools_;
  std::vector<std::int64_t> depths_;
  std::vector<std::string> tiers_;
  std::vector<std::string> styles_;
  std::int64_t max_steps_;
  search::Grid grid_;
};

Harness default_harness();  // first element of the restricted space

// Every restricted tool, smart tier, planner depth 1, terse: a capable model
// behind a shallow planner. Starting point of the adaptation comparisons.
Harness baseline_harness();

std::optional<Harness> evolve_random(const std::vector<HistoryEntry>& history, const Harness& best, std::uint64_t seed,
                                     const HarnessSpace& space);
std::optional<Harness> evolve_hill_climb(const std::vector<HistoryEntry>& history, const Harness& best,
                                         const HarnessSpace& space);
std::optional<Harness> evolve_exhaustive(const std::vector<HistoryEntry>& history, const HarnessSpace& space);

// Builtin evolution agent; the space comes from params["space"] (default "restricted").
class BuiltinEvolution : public EvolutionAgent {
 public:
  BuiltinEvolution(StrategyKind kind, const ScalarMap& params);
  std::optional<Harness> evolve(const std::vector<HistoryEntry>& history, const Harness& best, std::uint64_t seed,
                                const std::string& task_id) override;

 private:
  StrategyKind kind_;
  HarnessSpace space_;
};

// ---------------------------------------------------------------------------
// Blueprint (meta) space

// Grid over (initial harness choice, strategy kind, strategy params, K). The
// remaining blueprint fields come from a template.
class MetaSpace {
 public:
  MetaSpace(Blueprint base, std::vector<Harness> initial_harnesses, std::vector<StrategyKind> kinds,
            std::vector<ScalarMap> params, std::vector<std::int64_t> ks);

  static MetaSpace from_json(const Json& j);
  Json to_json() const;

  std::size_t size() const { return grid_.size(); }
  const search::Grid& grid() const { return grid_; }

  Blueprint at(std::size_t index) const;
  std::optional<std::size_t> index_of(const Blueprint& blueprint) const;

 private:
  Blueprint base_;
  std::vector<Harness> initial_harnesses_;
  std::vector<StrategyKind> kinds_;
  std::vector<ScalarMap> params_;
  std::vector<std::int64_t> ks_;
  search::Grid grid_;
};

std::optional<Blueprint> meta_evolve_hill_climb(const std::vector<MetaHistoryEntry>& meta_history, const Blueprint& best,
                                                const MetaSpace& space);
std::optional<Blueprint> meta_evolve_exhaustive(const std::vector<MetaHistoryEntry>& meta_history, const MetaSpace& space);

class BuiltinMetaEvolution : public MetaEvolutionAgent {
 public:
  BuiltinMetaEvolution(StrategyKind kind, MetaSpace space);
  std::optional<Blueprint> evolve(const std::vector<MetaHistoryEntry>& meta_history, const Blueprint& best,
                                  std::uint64_t seed) override;

 private:
  StrategyKind kind_;
  MetaSpace space_;
};

// ---------------------------------------------------------------------------
// Oracle

struct OracleResult {
  Harness harness;
  Score score;
  std::size_t index = 0;
};

// Executes and evaluates every harness in enumeration order and returns the
// earliest maximum under compare_scores.
OracleResult brute_force_oracle(const Task& task, const HarnessSpace& space, const ScalarMap& evaluator_config = {});

// ---------------------------------------------------------------------------
// Tasks

// Task with criteria [reach_target: equals_target, within_budget: step_budget].
Task make_task(std::string id, std::string start, std::string target, std::string alphabet, std::int64_t max_steps);

// Twelve tasks T1..T12 of graded difficulty.
std::vector<Task> bundled_corpus();

// Random StringForge task derived from a seed (alphabet {a, b}).
Task generate_task(std::uint64_t seed);

// Builtin worker, default_harness() as H^(0), time budget 1000 ms, strictness 1.
Blueprint default_blueprint(StrategyKind kind, std::int64_t K, std::string_view space = "restricted");

}  // namespace hevo::simkit
