#include "hevo/model.hpp"

#include <algorithm>
#include <set>

#include "hevo/error.hpp"
#include "hevo/meta_types.hpp"

namespace hevo {

namespace {

constexpr std::string_view kBuiltinTools[] = {"append_a", "append_b", "drop_last", "reverse", "swapcase"};

bool is_builtin_tool(std::string_view name) {
  return std::find(std::begin(kBuiltinTools), std::end(kBuiltinTools), name) != std::end(kBuiltinTools);
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::invalid_argument, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object containing '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

std::string str_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::int64_t int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

bool bool_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_boolean()) malformed(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

ScalarMap scalar_map_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_object()) malformed(std::string("field '") + key + "' must be an object");
  return v.get<ScalarMap>();
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> known, std::string_view what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      malformed("unknown field '" + it.key() + "' in " + std::string(what));
    }
  }
}

Verdict verdict_field(const Json& j, const char* key) {
  std::string verdict = str_field(j, key);
  if (verdict == "IMPROVED") return Verdict::improved;
  if (verdict == "REGRESSED") return Verdict::regressed;
  malformed("unknown verdict '" + verdict + "'");
}

Rational rational_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  malformed(std::string("field '") + key + "' must be a rational string");
}

}  // namespace

std::optional<std::int64_t> get_int(const ScalarMap& map, const std::string& key) {
  auto it = map.find(key);
  if (it == map.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  return std::nullopt;
}

std::optional<std::string> get_string(const ScalarMap& map, const std::string& key) {
  auto it = map.find(key);
  if (it == map.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  return std::nullopt;
}

std::string ValidationResult::describe() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.path + ": " + v.message;
  }
  return out;
}

// ---------------------------------------------------------------------------

ValidationResult validate_task(const Task& task) {
  ValidationResult result;
  auto add = [&](std::string path, std::string message) { result.violations.push_back({std::move(path), std::move(message)}); };
  if (task.id.empty()) add("id", "task id is empty");
  if (task.criteria.empty()) add("criteria", "criteria list is empty");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < task.criteria.size(); ++i) {
    const auto& c = task.criteria[i];
    std::string path = "criteria[" + std::to_string(i) + "]";
    if (c.id.empty()) add(path + ".id", "criterion id is empty");
    if (!ids.insert(c.id).second) add(path + ".id", "duplicate criterion id '" + c.id + "'");
  }
  if (task.max_steps < 0) add("max_steps", "must be nonnegative");
  for (char ch : task.start + task.target) {
    if (task.alphabet.find(ch) == std::string::npos) {
      add("alphabet", std::string("character '") + ch + "' not in alphabet");
      break;
    }
  }
  return result;
}

AgentBinding builtin_binding(std::string name) {
  AgentBinding b;
  b.kind = BindingKind::builtin;
  b.name = std::move(name);
  return b;
}

AgentBinding external_binding(std::string command, std::vector<std::string> args, std::int64_t timeout_ms) {
  AgentBinding b;
  b.kind = BindingKind::external;
  b.command = std::move(command);
  b.args = std::move(args);
  b.timeout_ms = timeout_ms;
  return b;
}

bool Harness::operator==(const Harness& other) const { return canonical_of(*this) == canonical_of(other); }

ValidationResult validate_harness(const Harness& harness, BindingKind worker) {
  ValidationResult result;
  auto add = [&](std::string path, std::string message) { result.violations.push_back({std::move(path), std::move(message)}); };

  if (!harness.extensions.is_object()) add("extensions", "must be an object");

  if (worker == BindingKind::builtin) {
    if (harness.tools.empty()) add("tools", "builtin worker needs at least one tool");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < harness.tools.size(); ++i) {
      const auto& t = harness.tools[i];
      std::string path = "tools[" + std::to_string(i) + "]";
      if (!is_builtin_tool(t)) add(path, "unknown tool '" + t + "'");
      if (!seen.insert(t).second) add(path, "duplicate tool '" + t + "'");
    }
  }

  auto check_int_range = [&](const ScalarMap& section, const std::string& section_name, const std::string& key,
                             std::int64_t lo, std::int64_t hi, bool required) {
    std::string path = section_name + "." + key;
    auto it = section.find(key);
    if (it == section.end()) {
      if (required) add(path, "missing");
      return;
    }
    const auto* v = std::get_if<std::int64_t>(&it->second);
    if (v == nullptr) {
      add(path, "must be an integer");
    } else if (*v < lo || *v > hi) {
      add(path, std::to_string(*v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  };
  auto check_choice = [&](const ScalarMap& section, const std::string& section_name, const std::string& key,
                          std::initializer_list<std::string_view> choices, bool required) {
    std::string path = section_name + "." + key;
    auto it = section.find(key);
    if (it == section.end()) {
      if (required) add(path, "missing");
      return;
    }
    const auto* v = std::get_if<std::string>(&it->second);
    if (v == nullptr || std::find(choices.begin(), choices.end(), *v) == choices.end()) {
      add(path, "not one of the accepted values");
    }
  };

  const bool required = worker == BindingKind::builtin;
  check_int_range(harness.orchestration, "orchestration", "planner_depth", kMinPlannerDepth, kMaxPlannerDepth, required);
  check_int_range(harness.orchestration, "orchestration", "max_steps", kMinMaxSteps, kMaxMaxSteps, required);
  check_choice(harness.model_config, "model_config", "model_tier", {"fast", "smart"}, required);
  check_choice(harness.model_config, "model_config", "prompt_style", {"terse", "verbose"}, required);
  return result;
}

// ---------------------------------------------------------------------------

Trace make_trace(std::vector<Step> steps, std::string claimed_final_state) {
  Trace trace;
  for (const auto& s : steps) {
    trace.totals.llm_time_ms += s.llm_time_ms;
    trace.totals.tool_time_ms += s.tool_time_ms;
  }
  trace.steps = std::move(steps);
  trace.claimed_final_state = std::move(claimed_final_state);
  return trace;
}

ValidationResult validate_trace(const Trace& trace) {
  ValidationResult result;
  auto add = [&](std::string path, std::string message) { result.violations.push_back({std::move(path), std::move(message)}); };
  TimeTotals sums;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    std::string path = "steps[" + std::to_string(i) + "]";
    if (s.index != static_cast<std::int64_t>(i) + 1) add(path + ".index", "expected " + std::to_string(i + 1));
    if (s.llm_time_ms < 0) add(path + ".llm_time_ms", "negative");
    if (s.tool_time_ms < 0) add(path + ".tool_time_ms", "negative");
    if (s.action.name.empty()) add(path + ".action.name", "empty");
    sums.llm_time_ms += s.llm_time_ms;
    sums.tool_time_ms += s.tool_time_ms;
  }
  if (sums.llm_time_ms != trace.totals.llm_time_ms) add("totals.llm_time_ms", "does not equal the sum over steps");
  if (sums.tool_time_ms != trace.totals.tool_time_ms) add("totals.tool_time_ms", "does not equal the sum over steps");
  return result;
}

// ---------------------------------------------------------------------------

Score Score::make(bool passed, Rational criteria_fraction, std::int64_t total_time_ms) {
  if (criteria_fraction < 0 || criteria_fraction > 1) throw Error(ErrorCode::invalid_argument, "criteria_fraction outside [0,1]");
  if (total_time_ms < 0) throw Error(ErrorCode::invalid_argument, "negative total_time_ms");
  if (passed != (criteria_fraction == Rational(1))) throw Error(ErrorCode::invalid_argument, "passed must hold exactly when criteria_fraction = 1");
  Score s;
  s.is_min_ = false;
  s.passed_ = passed;
  s.fraction_ = criteria_fraction;
  s.time_ms_ = total_time_ms;
  return s;
}

std::strong_ordering compare_scores(const Score& a, const Score& b) {
  if (a.is_min() || b.is_min()) {
    if (a.is_min() && b.is_min()) return std::strong_ordering::equal;
    return a.is_min() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.passed() != b.passed()) return a.passed() ? std::strong_ordering::greater : std::strong_ordering::less;
  if (a.criteria_fraction() != b.criteria_fraction()) {
    return a.criteria_fraction() > b.criteria_fraction() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  // Less time is better.
  return b.total_time_ms() <=> a.total_time_ms();
}

Rational scalarize(const Score& score, std::int64_t time_budget_ms) {
  if (time_budget_ms <= 0) throw Error(ErrorCode::invalid_argument, "time_budget_ms must be positive");
  if (score.is_min()) return Rational(0);
  Rational value = Rational(9, 10) * score.criteria_fraction();
  if (score.passed()) {
    Rational remaining = Rational(1) - Rational(score.total_time_ms(), time_budget_ms);
    if (remaining > 0) value += Rational(1, 10) * remaining;
  }
  return value;
}

Bottleneck dominant_bottleneck(std::int64_t llm_time_ms, std::int64_t tool_time_ms) {
  return tool_time_ms > llm_time_ms ? Bottleneck::tool : Bottleneck::llm;
}

ValidationResult validate_report(const EvaluationReport& report) {
  ValidationResult result;
  auto add = [&](std::string path, std::string message) { result.violations.push_back({std::move(path), std::move(message)}); };
  if (report.score.is_min()) add("score", "MIN_SCORE is not a valid evaluation result");
  if (report.score.passed()) {
    if (!report.state_verified) add("score.passed", "passed with unverified state");
    for (std::size_t i = 0; i < report.criterion_verdicts.size(); ++i) {
      if (!report.criterion_verdicts[i].passed) add("criterion_verdicts[" + std::to_string(i) + "]", "failed criterion in a passed report");
    }
  }
  if (!report.state_verified && !report.first_divergence) add("first_divergence", "required when state_verified is false");
  if (report.state_verified && report.first_divergence) add("first_divergence", "present although state_verified is true");
  if (report.first_divergence && *report.first_divergence < 1) add("first_divergence", "must be positive");
  if (report.audit.llm_time_ms < 0 || report.audit.tool_time_ms < 0) add("audit", "negative time");
  if (report.audit.dominant_bottleneck != dominant_bottleneck(report.audit.llm_time_ms, report.audit.tool_time_ms)) {
    add("audit.dominant_bottleneck", "does not name the larger total");
  }
  return result;
}

// ---------------------------------------------------------------------------

bool Blueprint::operator==(const Blueprint& other) const { return canonical_of(*this) == canonical_of(other); }

std::int64_t time_budget_ms(const Blueprint& blueprint) {
  auto v = get_int(blueprint.evaluator_config, "time_budget_ms");
  if (!v || *v <= 0) throw Error(ErrorCode::blueprint_invalid, "evaluator_config.time_budget_ms must be a positive integer");
  return *v;
}

std::int64_t strictness(const Blueprint& blueprint) { return get_int(blueprint.evaluator_config, "strictness").value_or(1); }

ValidationResult validate_blueprint(const Blueprint& blueprint) {
  ValidationResult result;
  auto add = [&](std::string path, std::string message) { result.violations.push_back({std::move(path), std::move(message)}); };

  const auto& wb = blueprint.worker_binding;
  if (wb.kind == BindingKind::builtin && wb.name != "stringforge") add("worker_binding.name", "unknown builtin worker '" + wb.name + "'");
  if (wb.kind == BindingKind::external) {
    if (wb.command.empty()) add("worker_binding.command", "empty");
    if (wb.timeout_ms <= 0) add("worker_binding.timeout_ms", "must be positive");
  }
  for (const auto& v : validate_harness(blueprint.initial_harness, wb.kind).violations) {
    add("initial_harness." + v.path, v.message);
  }

  auto budget = blueprint.evaluator_config.find("time_budget_ms");
  if (budget == blueprint.evaluator_config.end()) {
    add("evaluator_config.time_budget_ms", "missing");
  } else if (const auto* v = std::get_if<std::int64_t>(&budget->second); v == nullptr || *v <= 0) {
    add("evaluator_config.time_budget_ms", "must be a positive integer");
  }
  if (auto it = blueprint.evaluator_config.find("strictness"); it != blueprint.evaluator_config.end()) {
    const auto* v = std::get_if<std::int64_t>(&it->second);
    if (v == nullptr || (*v != 0 && *v != 1)) add("evaluator_config.strictness", "must be 0 or 1");
  }
  if (auto it = blueprint.evaluator_config.find("command"); it != blueprint.evaluator_config.end()) {
    const auto* v = std::get_if<std::string>(&it->second);
    if (v == nullptr || v->empty()) add("evaluator_config.command", "must be a nonempty string");
  }

  const auto& strategy = blueprint.evolution_strategy;
  if (strategy.kind == StrategyKind::external) {
    if (strategy.agent.command.empty()) add("evolution_strategy.command", "empty");
    if (strategy.agent.timeout_ms <= 0) add("evolution_strategy.timeout_ms", "must be positive");
  } else if (auto space = get_string(strategy.params, "space"); space && *space != "restricted" && *space != "full") {
    add("evolution_strategy.params.space", "must be 'restricted' or 'full'");
  }

  if (blueprint.loop.K < 0) add("loop.K", "must be nonnegative");
  if (blueprint.loop.parallelism < 1) add("loop.parallelism", "must be positive");
  if (blueprint.loop.early_stop && (*blueprint.loop.early_stop < 0 || *blueprint.loop.early_stop > 1)) {
    add("loop.early_stop", "must lie in [0,1]");
  }
  return result;
}

std::string blueprint_digest(const Blueprint& blueprint) { return hex64(fnv1a64(canonical_of(blueprint))); }

// ---------------------------------------------------------------------------

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::equals_target: return "equals_target";
    case CriterionKind::step_budget: return "step_budget";
    case CriterionKind::custom: return "custom";
  }
  return "";
}

std::string_view to_string(BindingKind kind) { return kind == BindingKind::builtin ? "builtin" : "external"; }

std::string_view to_string(AgentRole role) {
  switch (role) {
    case AgentRole::worker: return "worker";
    case AgentRole::evaluator: return "evaluator";
    case AgentRole::evolution: return "evolution";
    case AgentRole::meta_evolution: return "meta_evolution";
  }
  return "";
}

std::string_view to_string(Bottleneck b) { return b == Bottleneck::llm ? "llm" : "tool"; }
std::string_view to_string(Verdict v) { return v == Verdict::improved ? "IMPROVED" : "REGRESSED"; }

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::random: return "random";
    case StrategyKind::hill_climb: return "hill_climb";
    case StrategyKind::exhaustive: return "exhaustive";
    case StrategyKind::external: return "external";
  }
  return "";
}

CriterionKind parse_criterion_kind(std::string_view text) {
  if (text == "equals_target") return CriterionKind::equals_target;
  if (text == "step_budget") return CriterionKind::step_budget;
  if (text == "custom") return CriterionKind::custom;
  malformed("unknown criterion kind '" + std::string(text) + "'");
}

AgentRole parse_agent_role(std::string_view text) {
  if (text == "worker") return AgentRole::worker;
  if (text == "evaluator") return AgentRole::evaluator;
  if (text == "evolution") return AgentRole::evolution;
  if (text == "meta_evolution") return AgentRole::meta_evolution;
  malformed("unknown agent role '" + std::string(text) + "'");
}

StrategyKind parse_strategy_kind(std::string_view text) {
  if (text == "random") return StrategyKind::random;
  if (text == "hill_climb") return StrategyKind::hill_climb;
  if (text == "exhaustive") return StrategyKind::exhaustive;
  if (text == "external") return StrategyKind::external;
  malformed("unknown strategy kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// JSON

}  // namespace hevo

void nlohmann::adl_serializer<hevo::Scalar>::to_json(hevo::Json& j, const hevo::Scalar& v) {
  std::visit([&](const auto& x) { j = x; }, v);
}

void nlohmann::adl_serializer<hevo::Scalar>::from_json(const hevo::Json& j, hevo::Scalar& v) {
  using namespace hevo;
  if (j.is_boolean()) {
    v = j.get<bool>();
  } else if (j.is_number_integer()) {
    v = j.get<std::int64_t>();
  } else if (j.is_string()) {
    v = j.get<std::string>();
  } else {
    throw Error(ErrorCode::invalid_argument, "scalar must be a boolean, integer or string");
  }
}

namespace hevo {

void to_json(Json& j, const Criterion& v) {
  j = Json{{"id", v.id}, {"kind", to_string(v.kind)}, {"params", v.params}};
}

void from_json(const Json& j, Criterion& v) {
  reject_unknown(j, {"id", "kind", "params"}, "criterion");
  v.id = str_field(j, "id");
  v.kind = parse_criterion_kind(str_field(j, "kind"));
  v.params = j.contains("params") ? scalar_map_field(j, "params") : ScalarMap{};
}

void to_json(Json& j, const Task& v) {
  j = Json{{"id", v.id},         {"instructions", v.instructions}, {"criteria", v.criteria},
           {"start", v.start},   {"target", v.target},             {"alphabet", v.alphabet},
           {"max_steps", v.max_steps}};
}

void from_json(const Json& j, Task& v) {
  reject_unknown(j, {"id", "instructions", "criteria", "start", "target", "alphabet", "max_steps"}, "task");
  v.id = str_field(j, "id");
  v.instructions = j.contains("instructions") ? str_field(j, "instructions") : std::string();
  const Json& criteria = field(j, "criteria");
  if (!criteria.is_array()) malformed("criteria must be an array");
  v.criteria = criteria.get<std::vector<Criterion>>();
  v.start = str_field(j, "start");
  v.target = str_field(j, "target");
  v.alphabet = str_field(j, "alphabet");
  v.max_steps = int_field(j, "max_steps");
}

void to_json(Json& j, const AgentBinding& v) {
  if (v.kind == BindingKind::builtin) {
    j = Json{{"kind", "builtin"}, {"name", v.name}};
  } else {
    j = Json{{"kind", "external"}, {"command", v.command}, {"args", v.args}, {"timeout_ms", v.timeout_ms}};
  }
}

void from_json(const Json& j, AgentBinding& v) {
  std::string kind = str_field(j, "kind");
  v = AgentBinding{};
  if (kind == "builtin") {
    reject_unknown(j, {"kind", "name"}, "builtin binding");
    v.kind = BindingKind::builtin;
    v.name = str_field(j, "name");
  } else if (kind == "external") {
    reject_unknown(j, {"kind", "command", "args", "timeout_ms"}, "external binding");
    v.kind = BindingKind::external;
    v.command = str_field(j, "command");
    if (j.contains("args")) v.args = field(j, "args").get<std::vector<std::string>>();
    if (j.contains("timeout_ms")) v.timeout_ms = int_field(j, "timeout_ms");
  } else {
    malformed("unknown binding kind '" + kind + "'");
  }
}

void to_json(Json& j, const Harness& v) {
  j = Json{{"prompts", v.prompts},
           {"tools", v.tools},
           {"orchestration", v.orchestration},
           {"model_config", v.model_config},
           {"extensions", v.extensions}};
}

void from_json(const Json& j, Harness& v) {
  reject_unknown(j, {"prompts", "tools", "orchestration", "model_config", "extensions"}, "harness");
  const Json& prompts = field(j, "prompts");
  if (!prompts.is_object()) malformed("prompts must be an object");
  v.prompts = prompts.get<std::map<std::string, std::string>>();
  const Json& tools = field(j, "tools");
  if (!tools.is_array()) malformed("tools must be an array");
  v.tools = tools.get<std::vector<std::string>>();
  v.orchestration = scalar_map_field(j, "orchestration");
  v.model_config = scalar_map_field(j, "model_config");
  v.extensions = j.contains("extensions") ? j.at("extensions") : Json::object();
  if (!v.extensions.is_object()) malformed("extensions must be an object");
}

void to_json(Json& j, const Action& v) { j = Json{{"name", v.name}, {"args", v.args}}; }

void from_json(const Json& j, Action& v) {
  reject_unknown(j, {"name", "args"}, "action");
  v.name = str_field(j, "name");
  v.args = j.contains("args") ? scalar_map_field(j, "args") : ScalarMap{};
}

void to_json(Json& j, const Step& v) {
  j = Json{{"index", v.index},
           {"action", v.action},
           {"observation", v.observation},
           {"llm_time_ms", v.llm_time_ms},
           {"tool_time_ms", v.tool_time_ms}};
}

void from_json(const Json& j, Step& v) {
  reject_unknown(j, {"index", "action", "observation", "llm_time_ms", "tool_time_ms"}, "step");
  v.index = int_field(j, "index");
  v.action = field(j, "action").get<Action>();
  v.observation = str_field(j, "observation");
  v.llm_time_ms = int_field(j, "llm_time_ms");
  v.tool_time_ms = int_field(j, "tool_time_ms");
}

void to_json(Json& j, const Trace& v) {
  j = Json{{"steps", v.steps},
           {"claimed_final_state", v.claimed_final_state},
           {"totals", Json{{"llm_time_ms", v.totals.llm_time_ms}, {"tool_time_ms", v.totals.tool_time_ms}}}};
}

void from_json(const Json& j, Trace& v) {
  reject_unknown(j, {"steps", "claimed_final_state", "totals"}, "trace");
  const Json& steps = field(j, "steps");
  if (!steps.is_array()) malformed("steps must be an array");
  v.steps = steps.get<std::vector<Step>>();
  v.claimed_final_state = str_field(j, "claimed_final_state");
  const Json& totals = field(j, "totals");
  v.totals.llm_time_ms = int_field(totals, "llm_time_ms");
  v.totals.tool_time_ms = int_field(totals, "tool_time_ms");
}

void to_json(Json& j, const Score& v) {
  if (v.is_min()) {
    j = "MIN_SCORE";
    return;
  }
  j = Json{{"passed", v.passed()}, {"criteria_fraction", to_string(v.criteria_fraction())}, {"total_time_ms", v.total_time_ms()}};
}

void from_json(const Json& j, Score& v) {
  if (j.is_string() && j.get<std::string>() == "MIN_SCORE") {
    v = Score::min();
    return;
  }
  reject_unknown(j, {"passed", "criteria_fraction", "total_time_ms"}, "score");
  v = Score::make(bool_field(j, "passed"), rational_field(j, "criteria_fraction"), int_field(j, "total_time_ms"));
}

void to_json(Json& j, const CriterionVerdict& v) {
  j = Json{{"criterion_id", v.criterion_id}, {"passed", v.passed}, {"evidence", v.evidence}};
}

void from_json(const Json& j, CriterionVerdict& v) {
  reject_unknown(j, {"criterion_id", "passed", "evidence"}, "criterion verdict");
  v.criterion_id = str_field(j, "criterion_id");
  v.passed = bool_field(j, "passed");
  v.evidence = j.contains("evidence") ? str_field(j, "evidence") : std::string();
}

void to_json(Json& j, const Audit& v) {
  j = Json{{"llm_time_ms", v.llm_time_ms},
           {"tool_time_ms", v.tool_time_ms},
           {"dominant_bottleneck", to_string(v.dominant_bottleneck)}};
}

void from_json(const Json& j, Audit& v) {
  reject_unknown(j, {"llm_time_ms", "tool_time_ms", "dominant_bottleneck"}, "audit");
  v.llm_time_ms = int_field(j, "llm_time_ms");
  v.tool_time_ms = int_field(j, "tool_time_ms");
  std::string b = str_field(j, "dominant_bottleneck");
  if (b == "llm") {
    v.dominant_bottleneck = Bottleneck::llm;
  } else if (b == "tool") {
    v.dominant_bottleneck = Bottleneck::tool;
  } else {
    malformed("unknown bottleneck '" + b + "'");
  }
}

void to_json(Json& j, const EvaluationReport& v) {
  j = Json{{"criterion_verdicts", v.criterion_verdicts},
           {"state_verified", v.state_verified},
           {"first_divergence", v.first_divergence ? Json(*v.first_divergence) : Json(nullptr)},
           {"audit", v.audit},
           {"score", v.score}};
}

void from_json(const Json& j, EvaluationReport& v) {
  reject_unknown(j, {"criterion_verdicts", "state_verified", "first_divergence", "audit", "score"}, "report");
  const Json& verdicts = field(j, "criterion_verdicts");
  if (!verdicts.is_array()) malformed("criterion_verdicts must be an array");
  v.criterion_verdicts = verdicts.get<std::vector<CriterionVerdict>>();
  v.state_verified = bool_field(j, "state_verified");
  v.first_divergence.reset();
  if (j.contains("first_divergence") && !j.at("first_divergence").is_null()) v.first_divergence = int_field(j, "first_divergence");
  v.audit = field(j, "audit").get<Audit>();
  v.score = field(j, "score").get<Score>();
}

void to_json(Json& j, const HistoryEntry& v) {
  j = Json{{"iteration", v.iteration},
           {"harness", v.harness},
           {"report", v.report},
           {"score", v.score},
           {"verdict", to_string(v.verdict)}};
}

void from_json(const Json& j, HistoryEntry& v) {
  reject_unknown(j, {"iteration", "harness", "report", "score", "verdict"}, "history entry");
  v.iteration = int_field(j, "iteration");
  v.harness = field(j, "harness").get<Harness>();
  v.report = field(j, "report").get<EvaluationReport>();
  v.score = field(j, "score").get<Score>();
  v.verdict = verdict_field(j, "verdict");
}

void to_json(Json& j, const EvolutionStrategy& v) {
  if (v.kind == StrategyKind::external) {
    j = Json{{"kind", "external"},
             {"command", v.agent.command},
             {"args", v.agent.args},
             {"timeout_ms", v.agent.timeout_ms},
             {"params", v.params}};
  } else {
    j = Json{{"kind", to_string(v.kind)}, {"params", v.params}};
  }
}

void from_json(const Json& j, EvolutionStrategy& v) {
  v = EvolutionStrategy{};
  v.kind = parse_strategy_kind(str_field(j, "kind"));
  v.params = j.contains("params") ? scalar_map_field(j, "params") : ScalarMap{};
  if (v.kind == StrategyKind::external) {
    reject_unknown(j, {"kind", "command", "args", "timeout_ms", "params"}, "evolution strategy");
    v.agent.kind = BindingKind::external;
    v.agent.command = str_field(j, "command");
    if (j.contains("args")) v.agent.args = field(j, "args").get<std::vector<std::string>>();
    if (j.contains("timeout_ms")) v.agent.timeout_ms = int_field(j, "timeout_ms");
  } else {
    reject_unknown(j, {"kind", "params"}, "evolution strategy");
  }
}

void to_json(Json& j, const LoopConfig& v) {
  j = Json{{"K", v.K},
           {"early_stop", v.early_stop ? Json(to_string(*v.early_stop)) : Json(nullptr)},
           {"parallelism", v.parallelism}};
}

void from_json(const Json& j, LoopConfig& v) {
  reject_unknown(j, {"K", "early_stop", "parallelism"}, "loop");
  v.K = int_field(j, "K");
  v.early_stop.reset();
  if (j.contains("early_stop") && !j.at("early_stop").is_null()) v.early_stop = rational_field(j, "early_stop");
  v.parallelism = j.contains("parallelism") ? int_field(j, "parallelism") : 1;
}

void to_json(Json& j, const Blueprint& v) {
  j = Json{{"worker_binding", v.worker_binding},
           {"initial_harness", v.initial_harness},
           {"evaluator_config", v.evaluator_config},
           {"evolution_strategy", v.evolution_strategy},
           {"loop", v.loop}};
}

void from_json(const Json& j, Blueprint& v) {
  reject_unknown(j, {"worker_binding", "initial_harness", "evaluator_config", "evolution_strategy", "loop"}, "blueprint");
  v.worker_binding = field(j, "worker_binding").get<AgentBinding>();
  v.initial_harness = field(j, "initial_harness").get<Harness>();
  v.evaluator_config = scalar_map_field(j, "evaluator_config");
  v.evolution_strategy = field(j, "evolution_strategy").get<EvolutionStrategy>();
  v.loop = field(j, "loop").get<LoopConfig>();
}

void to_json(Json& j, const TaskResult& v) {
  j = Json{{"task_id", v.task_id},
           {"best_score", v.best_score},
           {"scalar", to_string(v.scalar)},
           {"history_digest", v.history_digest},
           {"history_path", v.history_path}};
}

void from_json(const Json& j, TaskResult& v) {
  reject_unknown(j, {"task_id", "best_score", "scalar", "history_digest", "history_path"}, "task result");
  v.task_id = str_field(j, "task_id");
  v.best_score = field(j, "best_score").get<Score>();
  v.scalar = rational_field(j, "scalar");
  v.history_digest = str_field(j, "history_digest");
  v.history_path = str_field(j, "history_path");
}

void to_json(Json& j, const MetaHistoryEntry& v) {
  j = Json{{"round", v.round},
           {"blueprint", v.blueprint},
           {"task_results", v.task_results},
           {"meta_score", to_string(v.meta_score)},
           {"verdict", to_string(v.verdict)}};
}

void from_json(const Json& j, MetaHistoryEntry& v) {
  reject_unknown(j, {"round", "blueprint", "task_results", "meta_score", "verdict"}, "meta history entry");
  v.round = int_field(j, "round");
  v.blueprint = field(j, "blueprint").get<Blueprint>();
  const Json& results = field(j, "task_results");
  if (!results.is_array()) malformed("task_results must be an array");
  v.task_results = results.get<std::vector<TaskResult>>();
  v.meta_score = rational_field(j, "meta_score");
  v.verdict = verdict_field(j, "verdict");
}

}  // namespace hevo
