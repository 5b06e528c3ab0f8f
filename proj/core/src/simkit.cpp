#include "hevo/simkit.hpp"

#include <algorithm>
#include <cctype>

#include "hevo/error.hpp"

namespace hevo::simkit {

namespace {

constexpr std::string_view kSystemPrompt = "Transform the current string into the target string using the available tools.";

std::vector<std::string> sorted_tools(const std::vector<std::string>& tools) {
  std::vector<std::string> out = tools;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool is_tool(std::string_view name) { return std::find(kToolNames.begin(), kToolNames.end(), name) != kToolNames.end(); }

std::string apply_tool(std::string_view tool, std::string_view state) {
  std::string s(state);
  if (tool == "append_a") {
    s.push_back('a');
  } else if (tool == "append_b") {
    s.push_back('b');
  } else if (tool == "drop_last") {
    if (!s.empty()) s.pop_back();
  } else if (tool == "reverse") {
    std::reverse(s.begin(), s.end());
  } else if (tool == "swapcase") {
    for (char& c : s) {
      auto u = static_cast<unsigned char>(c);
      if (std::islower(u)) {
        c = static_cast<char>(std::toupper(u));
      } else if (std::isupper(u)) {
        c = static_cast<char>(std::tolower(u));
      }
    }
  } else {
    throw Error(ErrorCode::trace_invalid, "unknown tool '" + std::string(tool) + "'");
  }
  return s;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// ---------------------------------------------------------------------------

void StringForgeEnv::reset(const Task& task) {
  current_ = task.start;
  steps_used_ = 0;
}

const std::string& StringForgeEnv::apply(std::string_view tool) {
  current_ = apply_tool(tool, current_);
  ++steps_used_;
  return current_;
}

void StringForgeWorker::rebuild(const Harness& harness) {
  if (auto v = validate_harness(harness, BindingKind::builtin); !v.ok()) throw Error(ErrorCode::harness_invalid, v.describe());
  tools_ = sorted_tools(harness.tools);
  const bool smart = get_string(harness.model_config, "model_tier") == "smart";
  const bool verbose = get_string(harness.model_config, "prompt_style") == "verbose";
  depth_ = smart ? get_int(harness.orchestration, "planner_depth").value_or(1) : 1;
  max_steps_ = get_int(harness.orchestration, "max_steps").value_or(1);
  llm_ms_ = (smart ? kSmartLlmTimeMs : kFastLlmTimeMs) + (verbose ? kVerbosePenaltyMs : 0);
}

void StringForgeWorker::prepare(const Task& task) { env_.reset(task); }

namespace {

struct Plan {
  std::vector<std::size_t> actions;  // indices into the sorted tool list
  std::size_t distance = 0;
  bool found = false;
};

// Preorder DFS over sorted tool names visits sequences in lexicographic order,
// so keeping only strict improvements implements the tie-break.
void search_plans(const std::vector<std::string>& tools, const std::string& state, const std::string& target,
                  std::int64_t depth_left, std::vector<std::size_t>& prefix, Plan& best) {
  for (std::size_t t = 0; t < tools.size(); ++t) {
    std::string next = apply_tool(tools[t], state);
    prefix.push_back(t);
    std::size_t d = levenshtein(next, target);
    if (!best.found || d < best.distance) {
      best.found = true;
      best.distance = d;
      best.actions = prefix;
    }
    if (depth_left > 1) search_plans(tools, next, target, depth_left - 1, prefix, best);
    prefix.pop_back();
  }
}

}  // namespace

Trace StringForgeWorker::execute(const Task& task) {
  std::vector<Step> steps;
  std::vector<std::size_t> prefix;
  while (env_.current() != task.target && env_.steps_used() < max_steps_) {
    Plan plan;
    search_plans(tools_, env_.current(), task.target, depth_, prefix, plan);
    const std::string& tool = tools_[plan.actions.front()];
    Step step;
    step.index = env_.steps_used() + 1;
    step.action.name = tool;
    step.observation = env_.apply(tool);
    step.llm_time_ms = llm_ms_;
    step.tool_time_ms = kToolTimeMs;
    steps.push_back(std::move(step));
  }
  return make_trace(std::move(steps), env_.current());
}

Trace sim_execute(const Harness& harness, const Task& task) {
  StringForgeWorker worker;
  worker.rebuild(harness);
  worker.prepare(task);
  return worker.execute(task);
}

// ---------------------------------------------------------------------------

Evaluation StringForgeEvaluator::evaluate(const Trace& trace, const Task& task) {
  if (auto v = validate_trace(trace); !v.ok()) throw Error(ErrorCode::trace_invalid, v.describe());

  StringForgeEnv truth;
  truth.reset(task);
  EvaluationReport report;
  for (const auto& step : trace.steps) {
    if (!is_tool(step.action.name)) {
      throw Error(ErrorCode::trace_invalid, "step " + std::to_string(step.index) + " uses unknown tool '" + step.action.name + "'");
    }
    truth.apply(step.action.name);
    if (report.state_verified && step.observation != truth.current()) {
      report.state_verified = false;
      report.first_divergence = step.index;
    }
  }
  if (strictness_ >= 1 && report.state_verified && trace.claimed_final_state != truth.current()) {
    report.state_verified = false;
    report.first_divergence = static_cast<std::int64_t>(trace.steps.size()) + 1;
  }

  std::int64_t passed = 0;
  for (const auto& criterion : task.criteria) {
    CriterionVerdict verdict;
    verdict.criterion_id = criterion.id;
    switch (criterion.kind) {
      case CriterionKind::equals_target: {
        std::string target = get_string(criterion.params, "target").value_or(task.target);
        verdict.passed = truth.current() == target;
        verdict.evidence = "replayed final state \"" + truth.current() + "\" " + (verdict.passed ? "equals" : "differs from") +
                           " target \"" + target + "\"";
        break;
      }
      case CriterionKind::step_budget: {
        std::int64_t budget = get_int(criterion.params, "max_steps").value_or(task.max_steps);
        verdict.passed = truth.steps_used() <= budget;
        verdict.evidence = std::to_string(truth.steps_used()) + " steps used, budget " + std::to_string(budget);
        break;
      }
      case CriterionKind::custom:
        throw Error(ErrorCode::unsupported_criterion, "builtin evaluator cannot check custom criterion '" + criterion.id + "'");
    }
    if (verdict.passed) ++passed;
    report.criterion_verdicts.push_back(std::move(verdict));
  }

  const auto m = static_cast<std::int64_t>(task.criteria.size());
  if (m == 0) throw Error(ErrorCode::invalid_argument, "task has no criteria");
  Rational fraction = report.state_verified ? Rational(passed, m) : Rational(passed, m + 1);

  report.audit.llm_time_ms = trace.totals.llm_time_ms;
  report.audit.tool_time_ms = trace.totals.tool_time_ms;
  report.audit.dominant_bottleneck = dominant_bottleneck(trace.totals.llm_time_ms, trace.totals.tool_time_ms);
  report.score = Score::make(report.state_verified && passed == m, fraction, trace.totals.llm_time_ms + trace.totals.tool_time_ms);
  return Evaluation{report, report.score};
}

Evaluation sim_evaluate(const Trace& trace, const Task& task, const ScalarMap& evaluator_config) {
  StringForgeEvaluator evaluator(get_int(evaluator_config, "strictness").value_or(1));
  return evaluator.evaluate(trace, task);
}

// ---------------------------------------------------------------------------

HarnessSpace::HarnessSpace(std::vector<std::string> tools, std::vector<std::int64_t> depths, std::vector<std::string> tiers,
                           std::vector<std::string> styles, std::int64_t max_steps)
    : tools_(std::move(tools)),
      depths_(std::move(depths)),
      tiers_(std::move(tiers)),
      styles_(std::move(styles)),
      max_steps_(max_steps) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::invalid_config, "harness space: " + m); };
  if (tools_.empty() || tools_.size() > kToolNames.size()) bad("tool list must hold 1..5 tools");
  for (std::size_t i = 0; i < tools_.size(); ++i) {
    if (!is_tool(tools_[i])) bad("unknown tool '" + tools_[i] + "'");
    if (std::find(tools_.begin(), tools_.begin() + static_cast<std::ptrdiff_t>(i), tools_[i]) != tools_.begin() + static_cast<std::ptrdiff_t>(i)) {
      bad("duplicate tool '" + tools_[i] + "'");
    }
  }
  if (depths_.empty() || tiers_.empty() || styles_.empty()) bad("every dimension needs at least one value");
  for (auto d : depths_) {
    if (d < kMinPlannerDepth || d > kMaxPlannerDepth) bad("planner_depth out of range");
  }
  for (const auto& t : tiers_) {
    if (t != "fast" && t != "smart") bad("unknown model_tier '" + t + "'");
  }
  for (const auto& s : styles_) {
    if (s != "terse" && s != "verbose") bad("unknown prompt_style '" + s + "'");
  }
  if (max_steps_ < kMinMaxSteps || max_steps_ > kMaxMaxSteps) bad("max_steps out of range");
  grid_ = search::Grid({(std::size_t{1} << tools_.size()) - 1, depths_.size(), tiers_.size(), styles_.size()});
}

HarnessSpace HarnessSpace::restricted() {
  return HarnessSpace({"append_a", "append_b", "drop_last"}, {1, 2, 3}, {"fast", "smart"}, {"terse", "verbose"});
}

HarnessSpace HarnessSpace::full() {
  return HarnessSpace({kToolNames.begin(), kToolNames.end()}, {1, 2, 3}, {"fast", "smart"}, {"terse", "verbose"});
}

HarnessSpace HarnessSpace::named(std::string_view name) {
  if (name == "restricted") return restricted();
  if (name == "full") return full();
  throw Error(ErrorCode::invalid_config, "unknown harness space '" + std::string(name) + "'");
}

HarnessSpace HarnessSpace::from_json(const Json& j) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::invalid_config, "harness space: " + m); };
  if (!j.is_object()) bad("declaration must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "tools" && k != "planner_depth" && k != "model_tier" && k != "prompt_style" && k != "max_steps") {
      bad("unknown field '" + k + "'");
    }
  }
  auto list = [&](const char* key) -> const Json& {
    if (!j.contains(key)) bad(std::string("missing '") + key + "'");
    const Json& v = j.at(key);
    if (!v.is_array()) bad(std::string("'") + key + "' is not a finite list of values");
    return v;
  };
  try {
    std::int64_t max_steps = 8;
    if (j.contains("max_steps")) {
      if (!j.at("max_steps").is_number_integer()) bad("'max_steps' must be an integer");
      max_steps = j.at("max_steps").get<std::int64_t>();
    }
    return HarnessSpace(list("tools").get<std::vector<std::string>>(), list("planner_depth").get<std::vector<std::int64_t>>(),
                        list("model_tier").get<std::vector<std::string>>(), list("prompt_style").get<std::vector<std::string>>(),
                        max_steps);
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  return restricted();  // unreachable
}

Json HarnessSpace::to_json() const {
  return Json{{"tools", tools_}, {"planner_depth", depths_}, {"model_tier", tiers_}, {"prompt_style", styles_}, {"max_steps", max_steps_}};
}

Harness HarnessSpace::at(std::size_t index) const {
  Harness base;
  base.prompts["system"] = std::string(kSystemPrompt);
  base.orchestration["max_steps"] = max_steps_;
  return apply(index, base);
}

Harness HarnessSpace::apply(std::size_t index, const Harness& base) const {
  search::Coords c = grid_.decode(index);
  const std::size_t mask = c[0] + 1;
  Harness h = base;
  h.tools.clear();
  for (std::size_t i = 0; i < tools_.size(); ++i) {
    if (mask & (std::size_t{1} << i)) h.tools.push_back(tools_[i]);
  }
  h.orchestration["planner_depth"] = depths_[c[1]];
  h.model_config["model_tier"] = tiers_[c[2]];
  h.model_config["prompt_style"] = styles_[c[3]];
  return h;
}

std::optional<std::size_t> HarnessSpace::index_of(const Harness& harness) const {
  std::size_t mask = 0;
  for (const auto& t : harness.tools) {
    auto it = std::find(tools_.begin(), tools_.end(), t);
    if (it == tools_.end()) return std::nullopt;
    std::size_t bit = std::size_t{1} << static_cast<std::size_t>(it - tools_.begin());
    if (mask & bit) return std::nullopt;
    mask |= bit;
  }
  if (mask == 0) return std::nullopt;
  auto depth = get_int(harness.orchestration, "planner_depth");
  auto tier = get_string(harness.model_config, "model_tier");
  auto style = get_string(harness.model_config, "prompt_style");
  if (!depth || !tier || !style) return std::nullopt;
  auto di = std::find(depths_.begin(), depths_.end(), *depth);
  auto ti = std::find(tiers_.begin(), tiers_.end(), *tier);
  auto si = std::find(styles_.begin(), styles_.end(), *style);
  if (di == depths_.end() || ti == tiers_.end() || si == styles_.end()) return std::nullopt;
  return grid_.encode({mask - 1, static_cast<std::size_t>(di - depths_.begin()), static_cast<std::size_t>(ti - tiers_.begin()),
                       static_cast<std::size_t>(si - styles_.begin())});
}

Harness default_harness() { return HarnessSpace::restricted().at(0); }

Harness baseline_harness() {
  HarnessSpace space = HarnessSpace::restricted();
  return space.at(space.grid().encode({6, 0, 1, 0}));
}

namespace {

std::vector<search::Visit> visits_of(const std::vector<HistoryEntry>& history, const HarnessSpace& space) {
  std::vector<search::Visit> visits;
  visits.reserve(history.size());
  for (const auto& e : history) visits.push_back({space.index_of(e.harness), e.verdict});
  return visits;
}

std::size_t require_index(const HarnessSpace& space, const Harness& best) {
  auto index = space.index_of(best);
  if (!index) throw Error(ErrorCode::harness_invalid, "best harness lies outside the strategy's space");
  return *index;
}

}  // namespace

std::optional<Harness> evolve_random(const std::vector<HistoryEntry>& history, const Harness& best, std::uint64_t seed,
                                     const HarnessSpace& space) {
  require_index(space, best);
  auto next = search::next_random(space.grid(), visits_of(history, space), seed);
  if (!next) return std::nullopt;
  return space.apply(*next, best);
}

std::optional<Harness> evolve_hill_climb(const std::vector<HistoryEntry>& history, const Harness& best,
                                         const HarnessSpace& space) {
  auto next = search::next_hill_climb(space.grid(), visits_of(history, space), require_index(space, best));
  if (!next) return std::nullopt;
  return space.apply(*next, best);
}

std::optional<Harness> evolve_exhaustive(const std::vector<HistoryEntry>& history, const HarnessSpace& space) {
  auto next = search::next_exhaustive(space.grid(), visits_of(history, space));
  if (!next) return std::nullopt;
  return space.at(*next);
}

BuiltinEvolution::BuiltinEvolution(StrategyKind kind, const ScalarMap& params)
    : kind_(kind), space_(HarnessSpace::named(get_string(params, "space").value_or("restricted"))) {
  if (kind == StrategyKind::external) throw Error(ErrorCode::invalid_argument, "external strategies are not builtin");
}

std::optional<Harness> BuiltinEvolution::evolve(const std::vector<HistoryEntry>& history, const Harness& best, std::uint64_t seed,
                                                const std::string&) {
  switch (kind_) {
    case StrategyKind::random: return evolve_random(history, best, seed, space_);
    case StrategyKind::hill_climb: return evolve_hill_climb(history, best, space_);
    case StrategyKind::exhaustive: return evolve_exhaustive(history, space_);
    case StrategyKind::external: break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

MetaSpace::MetaSpace(Blueprint base, std::vector<Harness> initial_harnesses, std::vector<StrategyKind> kinds,
                     std::vector<ScalarMap> params, std::vector<std::int64_t> ks)
    : base_(std::move(base)),
      initial_harnesses_(std::move(initial_harnesses)),
      kinds_(std::move(kinds)),
      params_(std::move(params)),
      ks_(std::move(ks)) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::invalid_config, "meta space: " + m); };
  if (initial_harnesses_.empty() || kinds_.empty() || params_.empty() || ks_.empty()) bad("every dimension needs a value");
  for (auto k : kinds_) {
    if (k == StrategyKind::external) bad("external strategies cannot be enumerated");
  }
  for (auto k : ks_) {
    if (k < 0) bad("K must be nonnegative");
  }
  grid_ = search::Grid({initial_harnesses_.size(), kinds_.size(), params_.size(), ks_.size()});
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (auto v = validate_blueprint(at(i)); !v.ok()) bad("blueprint " + std::to_string(i) + " invalid: " + v.describe());
  }
}

MetaSpace MetaSpace::from_json(const Json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::invalid_config, "meta space must be an object");
    std::vector<StrategyKind> kinds;
    for (const auto& k : j.at("kinds")) kinds.push_back(parse_strategy_kind(k.get<std::string>()));
    return MetaSpace(j.at("base").get<Blueprint>(), j.at("initial_harnesses").get<std::vector<Harness>>(), kinds,
                     j.at("params").get<std::vector<ScalarMap>>(), j.at("K").get<std::vector<std::int64_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("meta space: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_config) throw;
    throw Error(ErrorCode::invalid_config, "meta space: " + e.detail());
  }
}

Json MetaSpace::to_json() const {
  Json kinds = Json::array();
  for (auto k : kinds_) kinds.push_back(std::string(to_string(k)));
  return Json{{"base", base_}, {"initial_harnesses", initial_harnesses_}, {"kinds", kinds}, {"params", params_}, {"K", ks_}};
}

Blueprint MetaSpace::at(std::size_t index) const {
  search::Coords c = grid_.decode(index);
  Blueprint b = base_;
  b.initial_harness = initial_harnesses_[c[0]];
  b.evolution_strategy = EvolutionStrategy{kinds_[c[1]], params_[c[2]], AgentBinding{}};
  b.loop.K = ks_[c[3]];
  return b;
}

std::optional<std::size_t> MetaSpace::index_of(const Blueprint& blueprint) const {
  auto hi = std::find(initial_harnesses_.begin(), initial_harnesses_.end(), blueprint.initial_harness);
  auto ki = std::find(kinds_.begin(), kinds_.end(), blueprint.evolution_strategy.kind);
  auto pi = std::find(params_.begin(), params_.end(), blueprint.evolution_strategy.params);
  auto Ki = std::find(ks_.begin(), ks_.end(), blueprint.loop.K);
  if (hi == initial_harnesses_.end() || ki == kinds_.end() || pi == params_.end() || Ki == ks_.end()) return std::nullopt;
  std::size_t index = grid_.encode({static_cast<std::size_t>(hi - initial_harnesses_.begin()), static_cast<std::size_t>(ki - kinds_.begin()),
                                    static_cast<std::size_t>(pi - params_.begin()), static_cast<std::size_t>(Ki - ks_.begin())});
  if (!(at(index) == blueprint)) return std::nullopt;
  return index;
}

namespace {

std::vector<search::Visit> meta_visits(const std::vector<MetaHistoryEntry>& history, const MetaSpace& space) {
  std::vector<search::Visit> visits;
  visits.reserve(history.size());
  for (const auto& e : history) visits.push_back({space.index_of(e.blueprint), e.verdict});
  return visits;
}

}  // namespace

std::optional<Blueprint> meta_evolve_hill_climb(const std::vector<MetaHistoryEntry>& meta_history, const Blueprint& best,
                                                const MetaSpace& space) {
  auto best_index = space.index_of(best);
  if (!best_index) throw Error(ErrorCode::blueprint_invalid, "best blueprint lies outside the meta space");
  auto next = search::next_hill_climb(space.grid(), meta_visits(meta_history, space), *best_index);
  if (!next) return std::nullopt;
  return space.at(*next);
}

std::optional<Blueprint> meta_evolve_exhaustive(const std::vector<MetaHistoryEntry>& meta_history, const MetaSpace& space) {
  auto next = search::next_exhaustive(space.grid(), meta_visits(meta_history, space));
  if (!next) return std::nullopt;
  return space.at(*next);
}

BuiltinMetaEvolution::BuiltinMetaEvolution(StrategyKind kind, MetaSpace space) : kind_(kind), space_(std::move(space)) {
  if (kind != StrategyKind::hill_climb && kind != StrategyKind::exhaustive) {
    throw Error(ErrorCode::invalid_config, "builtin meta evolution supports hill_climb and exhaustive");
  }
}

std::optional<Blueprint> BuiltinMetaEvolution::evolve(const std::vector<MetaHistoryEntry>& meta_history, const Blueprint& best,
                                                      std::uint64_t) {
  if (kind_ == StrategyKind::exhaustive) return meta_evolve_exhaustive(meta_history, space_);
  return meta_evolve_hill_climb(meta_history, best, space_);
}

// ---------------------------------------------------------------------------

OracleResult brute_force_oracle(const Task& task, const HarnessSpace& space, const ScalarMap& evaluator_config) {
  OracleResult best;
  for (std::size_t i = 0; i < space.size(); ++i) {
    Harness h = space.at(i);
    Evaluation e = sim_evaluate(sim_execute(h, task), task, evaluator_config);
    if (i == 0 || compare_scores(e.score, best.score) > 0) {
      best.harness = std::move(h);
      best.score = e.score;
      best.index = i;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

Task make_task(std::string id, std::string start, std::string target, std::string alphabet, std::int64_t max_steps) {
  Task t;
  t.id = std::move(id);
  t.instructions = "Transform \"" + start + "\" into \"" + target + "\" within " + std::to_string(max_steps) + " steps.";
  t.criteria.push_back(Criterion{"reach_target", CriterionKind::equals_target, ScalarMap{{"target", target}}});
  t.criteria.push_back(Criterion{"within_budget", CriterionKind::step_budget, ScalarMap{{"max_steps", max_steps}}});
  t.start = std::move(start);
  t.target = std::move(target);
  t.alphabet = std::move(alphabet);
  t.max_steps = max_steps;
  return t;
}

std::vector<Task> bundled_corpus() {
  return {
      make_task("T1", "", "ab", "ab", 4),
      make_task("T2", "ab", "ab", "ab", 2),
      make_task("T3", "", "aaa", "ab", 4),
      make_task("T4", "abba", "ab", "ab", 3),
      make_task("T5", "", "ba", "ab", 3),
      make_task("T6", "a", "b", "ab", 3),
      make_task("T7", "", "bba", "ab", 4),
      make_task("T8", "a", "aba", "ab", 3),
      make_task("T9", "", "abba", "ab", 5),
      make_task("T10", "", "baa", "ab", 4),
      make_task("T11", "ab", "ba", "ab", 2),
      make_task("T12", "ab", "AB", "abAB", 2),
  };
}

Task generate_task(std::uint64_t seed) {
  auto draw = [&](std::uint64_t salt, std::uint64_t n) { return uniform_index(derive_seed(seed, {salt}), n); };
  auto word = [&](std::uint64_t salt, std::size_t length) {
    std::string s;
    for (std::size_t i = 0; i < length; ++i) s.push_back(draw(salt * 64 + i, 2) == 0 ? 'a' : 'b');
    return s;
  };
  std::string start = word(1, draw(2, 4));
  std::string target = word(3, 1 + draw(4, 4));
  auto budget = static_cast<std::int64_t>(levenshtein(start, target) + draw(5, 3));
  return make_task("G" + hex64(seed).substr(8), start, target, "ab", std::max<std::int64_t>(budget, 1));
}

Blueprint default_blueprint(StrategyKind kind, std::int64_t K, std::string_view space) {
  Blueprint b;
  b.worker_binding = builtin_binding("stringforge");
  b.initial_harness = default_harness();
  b.evaluator_config = ScalarMap{{"time_budget_ms", std::int64_t{1000}}, {"strictness", std::int64_t{1}}};
  b.evolution_strategy.kind = kind;
  b.evolution_strategy.params = ScalarMap{{"space", std::string(space)}};
  b.loop.K = K;
  return b;
}

}  // namespace hevo::simkit
