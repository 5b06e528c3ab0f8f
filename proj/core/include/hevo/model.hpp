#pragma once

// Shared domain types: tasks, harness documents, traces, scores, evaluation
// reports, history entries and blueprints. Every type is an immutable value
// with a canonical JSON encoding whose field names double as wire and file
// names.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hevo/canonical.hpp"
#include "hevo/rational.hpp"

namespace hevo {

using Scalar = std::variant<bool, std::int64_t, std::string>;
using ScalarMap = std::map<std::string, Scalar>;

}  // namespace hevo

template <>
struct nlohmann::adl_serializer<hevo::Scalar> {
  static void to_json(hevo::Json& j, const hevo::Scalar& v);
  static void from_json(const hevo::Json& j, hevo::Scalar& v);
};

namespace hevo {

std::optional<std::int64_t> get_int(const ScalarMap& map, const std::string& key);
std::optional<std::string> get_string(const ScalarMap& map, const std::string& key);

struct Violation {
  std::string path;
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

// ---------------------------------------------------------------------------
// Tasks

enum class CriterionKind { equals_target, step_budget, custom };

struct Criterion {
  std::string id;
  CriterionKind kind = CriterionKind::equals_target;
  ScalarMap params;
  bool operator==(const Criterion&) const = default;
};

// A task is its instructions plus a checklist of criteria. The environment
// fields (start, target, alphabet, max_steps) are stored inline so a task file
// is a single flat object.
struct Task {
  std::string id;
  std::string instructions;
  std::vector<Criterion> criteria;
  std::string start;
  std::string target;
  std::string alphabet;
  std::int64_t max_steps = 0;
  bool operator==(const Task&) const = default;
};

ValidationResult validate_task(const Task& task);

// ---------------------------------------------------------------------------
// Agent bindings

enum class BindingKind { builtin, external };
enum class AgentRole { worker, evaluator, evolution, meta_evolution };

struct AgentBinding {
  BindingKind kind = BindingKind::builtin;
  std::string name;  // builtin only
  std::string command;  // external only
  std::vector<std::string> args;
  std::int64_t timeout_ms = 30000;
  bool operator==(const AgentBinding&) const = default;
};

AgentBinding builtin_binding(std::string name);
AgentBinding external_binding(std::string command, std::vector<std::string> args, std::int64_t timeout_ms);

// ---------------------------------------------------------------------------
// Harness

struct Harness {
  std::map<std::string, std::string> prompts;
  std::vector<std::string> tools;
  ScalarMap orchestration;
  ScalarMap model_config;
  Json extensions = Json::object();  // free-form sections for external workers

  bool operator==(const Harness& other) const;
};

// Accepted ranges for the builtin worker's knobs.
inline constexpr std::int64_t kMinPlannerDepth = 1;
inline constexpr std::int64_t kMaxPlannerDepth = 3;
inline constexpr std::int64_t kMinMaxSteps = 1;
inline constexpr std::int64_t kMaxMaxSteps = 64;

// Checks required sections and, for builtin workers, the range table:
//   orchestration.planner_depth in [1, 3], orchestration.max_steps in [1, 64],
//   model_config.model_tier in {fast, smart},
//   model_config.prompt_style in {terse, verbose},
//   tools nonempty, unique and drawn from the StringForge tool set.
ValidationResult validate_harness(const Harness& harness, BindingKind worker = BindingKind::builtin);

// ---------------------------------------------------------------------------
// Traces

struct Action {
  std::string name;
  ScalarMap args;
  bool operator==(const Action&) const = default;
};

struct Step {
  std::int64_t index = 0;
  Action action;
  std::string observation;
  std::int64_t llm_time_ms = 0;
  std::int64_t tool_time_ms = 0;
  bool operator==(const Step&) const = default;
};

struct TimeTotals {
  std::int64_t llm_time_ms = 0;
  std::int64_t tool_time_ms = 0;
  bool operator==(const TimeTotals&) const = default;
};

struct Trace {
  std::vector<Step> steps;
  std::string claimed_final_state;
  TimeTotals totals;
  bool operator==(const Trace&) const = default;
};

// Builds a trace whose totals are the sums over steps.
Trace make_trace(std::vector<Step> steps, std::string claimed_final_state);

// Totals match step sums, indices run 1..n, times are nonnegative.
ValidationResult validate_trace(const Trace& trace);

// ---------------------------------------------------------------------------
// Scores

// Three-tier score: passed first, then criteria_fraction, then lower
// total_time_ms. Score::min() is a sentinel that compares below every
// constructible score and is never produced by an evaluation.
class Score {
 public:
  // Throws Error(invalid_argument) unless fraction is in [0,1], time is
  // nonnegative and passed == (fraction == 1).
  static Score make(bool passed, Rational criteria_fraction, std::int64_t total_time_ms);
  static Score min() { return Score(); }

  // Default construction yields the MIN_SCORE sentinel.
  Score() = default;

  bool is_min() const { return is_min_; }
  bool passed() const { return passed_; }
  const Rational& criteria_fraction() const { return fraction_; }
  std::int64_t total_time_ms() const { return time_ms_; }

  bool operator==(const Score&) const = default;

 private:
  bool is_min_ = true;
  bool passed_ = false;
  Rational fraction_{0};
  std::int64_t time_ms_ = 0;
};

std::strong_ordering compare_scores(const Score& a, const Score& b);

inline std::strong_ordering operator<=>(const Score& a, const Score& b) { return compare_scores(a, b); }

// 0.9 * fraction + (passed ? 0.1 * max(0, 1 - time / budget) : 0); MIN_SCORE maps to 0.
// Throws Error(invalid_argument) when time_budget_ms <= 0.
Rational scalarize(const Score& score, std::int64_t time_budget_ms);

// ---------------------------------------------------------------------------
// Evaluation

enum class Bottleneck { llm, tool };

struct CriterionVerdict {
  std::string criterion_id;
  bool passed = false;
  std::string evidence;
  bool operator==(const CriterionVerdict&) const = default;
};

struct Audit {
  std::int64_t llm_time_ms = 0;
  std::int64_t tool_time_ms = 0;
  Bottleneck dominant_bottleneck = Bottleneck::llm;
  bool operator==(const Audit&) const = default;
};

// Larger of the two totals; ties go to llm.
Bottleneck dominant_bottleneck(std::int64_t llm_time_ms, std::int64_t tool_time_ms);

struct EvaluationReport {
  std::vector<CriterionVerdict> criterion_verdicts;
  bool state_verified = true;
  std::optional<std::int64_t> first_divergence;
  Audit audit;
  Score score = Score::min();
  bool operator==(const EvaluationReport&) const = default;
};

// score is constructible; passed implies every verdict passed and state verified;
// an unverified state names the divergence step.
ValidationResult validate_report(const EvaluationReport& report);

// ---------------------------------------------------------------------------
// History

enum class Verdict { improved, regressed };

struct HistoryEntry {
  std::int64_t iteration = 0;
  Harness harness;
  EvaluationReport report;
  Score score = Score::min();
  Verdict verdict = Verdict::regressed;
  bool operator==(const HistoryEntry&) const = default;
};

// ---------------------------------------------------------------------------
// Blueprint

enum class StrategyKind { random, hill_climb, exhaustive, external };

struct EvolutionStrategy {
  StrategyKind kind = StrategyKind::hill_climb;
  ScalarMap params;
  AgentBinding agent;  // used when kind == external
  bool operator==(const EvolutionStrategy&) const = default;
};

struct LoopConfig {
  std::int64_t K = 0;
  std::optional<Rational> early_stop;
  std::int64_t parallelism = 1;
  bool operator==(const LoopConfig&) const = default;
};

// The evolution blueprint: everything that determines how a harness is evolved.
// evaluator_config keys: time_budget_ms (required, > 0), strictness (0 or 1,
// default 1), command / timeout_ms (optional external evaluator).
struct Blueprint {
  AgentBinding worker_binding;
  Harness initial_harness;
  ScalarMap evaluator_config;
  EvolutionStrategy evolution_strategy;
  LoopConfig loop;
  bool operator==(const Blueprint& other) const;
};

std::int64_t time_budget_ms(const Blueprint& blueprint);
std::int64_t strictness(const Blueprint& blueprint);

ValidationResult validate_blueprint(const Blueprint& blueprint);

// 16 hex digits of the FNV-1a hash of the canonical encoding.
std::string blueprint_digest(const Blueprint& blueprint);

// ---------------------------------------------------------------------------
// Enum names

std::string_view to_string(CriterionKind kind);
std::string_view to_string(BindingKind kind);
std::string_view to_string(AgentRole role);
std::string_view to_string(Bottleneck b);
std::string_view to_string(Verdict v);
std::string_view to_string(StrategyKind kind);

CriterionKind parse_criterion_kind(std::string_view text);
AgentRole parse_agent_role(std::string_view text);
StrategyKind parse_strategy_kind(std::string_view text);

// ---------------------------------------------------------------------------
// JSON (canonical encoding). from_json throws Error(invalid_argument) on
// malformed documents.

void to_json(Json& j, const Criterion& v);
void from_json(const Json& j, Criterion& v);
void to_json(Json& j, const Task& v);
void from_json(const Json& j, Task& v);
void to_json(Json& j, const AgentBinding& v);
void from_json(const Json& j, AgentBinding& v);
void to_json(Json& j, const Harness& v);
void from_json(const Json& j, Harness& v);
void to_json(Json& j, const Action& v);
void from_json(const Json& j, Action& v);
void to_json(Json& j, const Step& v);
void from_json(const Json& j, Step& v);
void to_json(Json& j, const Trace& v);
void from_json(const Json& j, Trace& v);
void to_json(Json& j, const Score& v);
void from_json(const Json& j, Score& v);
void to_json(Json& j, const CriterionVerdict& v);
void from_json(const Json& j, CriterionVerdict& v);
void to_json(Json& j, const Audit& v);
void from_json(const Json& j, Audit& v);
void to_json(Json& j, const EvaluationReport& v);
void from_json(const Json& j, EvaluationReport& v);
void to_json(Json& j, const HistoryEntry& v);
void from_json(const Json& j, HistoryEntry& v);
void to_json(Json& j, const EvolutionStrategy& v);
void from_json(const Json& j, EvolutionStrategy& v);
void to_json(Json& j, const LoopConfig& v);
void from_json(const Json& j, LoopConfig& v);
void to_json(Json& j, const Blueprint& v);
void from_json(const Json& j, Blueprint& v);

// Parses canonical text into T, mapping JSON errors to Error(code).
template <typename T>
T decode(std::string_view text, ErrorCode code = ErrorCode::invalid_argument) {
  Json j = parse_json(text, code, "decode");
  try {
    return j.get<T>();
  } catch (const Error& e) {
    if (e.code() == code) throw;
    throw Error(code, e.detail());
  } catch (const nlohmann::json::exception& e) {
    throw Error(code, e.what());
  }
}

}  // namespace hevo
