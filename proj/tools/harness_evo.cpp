// harness-evo: command line front end for the harness evolution engine.

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

#include "hevo/commands.hpp"
#include "hevo/protocol.hpp"
#include "hevo/simkit.hpp"

namespace {

using hevo::LogLevel;

spdlog::level::level_enum level_from_env() {
  const char* raw = std::getenv("HARNESS_EVO_LOG_LEVEL");
  std::string v = raw ? raw : "info";
  if (v == "error") return spdlog::level::err;
  if (v == "debug") return spdlog::level::debug;
  if (v != "info") spdlog::warn("HARNESS_EVO_LOG_LEVEL='{}' is not one of error, info, debug; using info", v);
  return spdlog::level::info;
}

void log_message(LogLevel level, const std::string& message) {
  switch (level) {
    case LogLevel::error: spdlog::error("{}", message); break;
    case LogLevel::info: spdlog::info("{}", message); break;
    case LogLevel::debug: spdlog::debug("{}", message); break;
  }
}

struct Flags {
  std::string config;
  std::string task, tasks, blueprint, out, space, meta_space, meta_strategy, meta_agent, agent, role, threshold;
  std::uint64_t seed = 0;
  std::int64_t K = 0, J = 0, parallelism = 0;
  bool resume = false;
};

struct Options {
  CLI::Option* task = nullptr;
  CLI::Option* tasks = nullptr;
  CLI::Option* blueprint = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* K = nullptr;
  CLI::Option* J = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* parallelism = nullptr;
  CLI::Option* threshold = nullptr;
  CLI::Option* resume = nullptr;
  CLI::Option* space = nullptr;
  CLI::Option* meta_space = nullptr;
  CLI::Option* meta_strategy = nullptr;
  CLI::Option* meta_agent = nullptr;
  CLI::Option* agent = nullptr;
  CLI::Option* role = nullptr;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

// Flags win over the configuration file, which wins over defaults.
hevo::RunConfig resolve(hevo::Mode mode, const Flags& f, const Options& o) {
  hevo::RunConfig c;
  if (!f.config.empty()) {
    std::string text;
    try {
      text = hevo::read_file(f.config);
    } catch (const hevo::Error& e) {
      throw hevo::Error(hevo::ErrorCode::invalid_config, "config file: " + e.detail());
    }
    c = hevo::config_from_json(hevo::parse_json(text, hevo::ErrorCode::invalid_config, "config file"), c);
  }
  c.mode = mode;
  if (given(o.task)) c.task = f.task;
  if (given(o.tasks)) c.tasks = f.tasks;
  if (given(o.blueprint)) c.blueprint = f.blueprint;
  if (given(o.seed)) c.seed = f.seed;
  if (given(o.K)) c.K = f.K;
  if (given(o.J)) c.J = f.J;
  if (given(o.out)) c.out = f.out;
  if (given(o.parallelism)) c.parallelism = f.parallelism;
  if (given(o.threshold)) c.threshold = hevo::parse_rational(f.threshold);
  if (given(o.resume)) c.resume = f.resume;
  if (given(o.space)) c.space = f.space;
  if (given(o.meta_space)) c.meta_space = f.meta_space;
  if (given(o.meta_strategy)) c.meta_strategy = f.meta_strategy;
  if (given(o.meta_agent)) c.meta_agent = f.meta_agent;
  if (given(o.agent)) c.agent = f.agent;
  if (given(o.role)) c.role = f.role;
  return c;
}

int serve(const std::string& role_name, const std::string& strategy, const std::string& space, const std::string& meta_space,
          std::int64_t strictness) {
  hevo::AgentRole role = hevo::parse_agent_role(role_name);
  hevo::simkit::StringForgeWorker worker;
  hevo::simkit::StringForgeEvaluator evaluator(strictness);
  std::unique_ptr<hevo::EvolutionAgent> evolution;
  std::unique_ptr<hevo::MetaEvolutionAgent> meta;
  hevo::ServedAgents agents;
  switch (role) {
    case hevo::AgentRole::worker: agents.worker = &worker; break;
    case hevo::AgentRole::evaluator: agents.evaluator = &evaluator; break;
    case hevo::AgentRole::evolution:
      evolution = std::make_unique<hevo::simkit::BuiltinEvolution>(hevo::parse_strategy_kind(strategy), hevo::ScalarMap{{"space", space}});
      agents.evolution = evolution.get();
      break;
    case hevo::AgentRole::meta_evolution: {
      if (meta_space.empty()) throw hevo::Error(hevo::ErrorCode::invalid_config, "meta_evolution agents need --meta-space");
      auto declared = hevo::simkit::MetaSpace::from_json(
          hevo::parse_json(hevo::read_file(meta_space), hevo::ErrorCode::invalid_config, "meta space file"));
      meta = std::make_unique<hevo::simkit::BuiltinMetaEvolution>(hevo::parse_strategy_kind(strategy), declared);
      agents.meta_evolution = meta.get();
      break;
    }
  }
  return hevo::serve_agent(role, agents, std::cin, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("harness-evo");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(level_from_env());

  CLI::App app{"Harness evolution engine: evolves agent harnesses per task and evolution blueprints across tasks."};
  app.require_subcommand(1);

  Flags f;
  std::map<hevo::Mode, Options> options;

  auto common = [&](CLI::App* sub, hevo::Mode mode) {
    Options& o = options[mode];
    sub->add_option("--config", f.config, "JSON configuration file; flags override its values");
    o.seed = sub->add_option("--seed", f.seed, "Run seed");
    o.out = sub->add_option("--out", f.out, "Parent directory for run directories (default: runs)");
    return &o;
  };

  auto* inner = app.add_subcommand("inner", "Evolve a harness on one task");
  {
    Options* o = common(inner, hevo::Mode::inner);
    o->task = inner->add_option("--task", f.task, "Task file or bundled:<id>");
    o->blueprint = inner->add_option("--blueprint", f.blueprint, "Blueprint file or default:<strategy>");
    o->K = inner->add_option("-K", f.K, "Iteration budget (overrides the blueprint)");
    o->threshold = inner->add_option("--threshold", f.threshold, "Stop early once the best scalar reaches this value");
    o->resume = inner->add_flag("--resume", f.resume, "Continue an interrupted run from its log");
  }

  auto* meta = app.add_subcommand("meta", "Evolve a blueprint across training tasks");
  {
    Options* o = common(meta, hevo::Mode::meta);
    o->tasks = meta->add_option("--tasks", f.tasks, "Task file (array), bundled, or bundled:<id>,<id>");
    o->blueprint = meta->add_option("--blueprint", f.blueprint, "Initial blueprint (default: first of the meta space)");
    o->J = meta->add_option("-J", f.J, "Round budget");
    o->parallelism = meta->add_option("--parallelism", f.parallelism, "Concurrent inner loops per round");
    o->meta_space = meta->add_option("--meta-space", f.meta_space, "Blueprint space declaration for builtin meta strategies");
    o->meta_strategy = meta->add_option("--meta-strategy", f.meta_strategy, "exhaustive, hill_climb or external");
    o->meta_agent = meta->add_option("--meta-agent", f.meta_agent, "Command line of an external meta-evolution agent");
    o->resume = meta->add_flag("--resume", f.resume, "Skip the run if it already completed");
  }

  auto* report = app.add_subcommand("report", "Meta-test a blueprint on held-out tasks and write metrics");
  {
    Options* o = common(report, hevo::Mode::report);
    o->tasks = report->add_option("--tasks", f.tasks, "Test tasks");
    o->blueprint = report->add_option("--blueprint", f.blueprint, "Blueprint file (a meta run's best_blueprint.json carries training ids)");
    o->K = report->add_option("-K", f.K, "Iteration budget per test task");
    o->threshold = report->add_option("--threshold", f.threshold, "Convergence threshold on the scalarized score (required)");
    o->parallelism = report->add_option("--parallelism", f.parallelism, "Concurrent inner loops");
  }

  auto* oracle = app.add_subcommand("oracle", "Enumerate a finite harness space per task");
  {
    Options* o = common(oracle, hevo::Mode::oracle);
    o->task = oracle->add_option("--task", f.task, "Single task");
    o->tasks = oracle->add_option("--tasks", f.tasks, "Task set");
    o->space = oracle->add_option("--space", f.space, "restricted, full, or a space declaration file");
  }

  auto* conformance = app.add_subcommand("conformance", "Check an external agent against the wire protocol");
  {
    Options& o = options[hevo::Mode::conformance];
    conformance->add_option("--config", f.config, "JSON configuration file");
    o.agent = conformance->add_option("--agent", f.agent, "Command line of the agent under test");
    o.role = conformance->add_option("--role", f.role, "worker, evaluator, evolution or meta_evolution");
  }

  std::string serve_role, serve_strategy = "hill_climb", serve_space = "restricted", serve_meta_space;
  std::int64_t serve_strictness = 1;
  auto* agent = app.add_subcommand("agent", "Serve a builtin agent over stdin/stdout");
  agent->add_option("--role", serve_role, "worker, evaluator, evolution or meta_evolution")->required();
  agent->add_option("--strategy", serve_strategy, "Evolution strategy for evolution and meta_evolution roles");
  agent->add_option("--space", serve_space, "Harness space of the evolution role");
  agent->add_option("--meta-space", serve_meta_space, "Blueprint space file of the meta_evolution role");
  agent->add_option("--strictness", serve_strictness, "Evaluator strictness (0 or 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (agent->parsed()) return serve(serve_role, serve_strategy, serve_space, serve_meta_space, serve_strictness);

    hevo::Mode mode = inner->parsed()         ? hevo::Mode::inner
                      : meta->parsed()        ? hevo::Mode::meta
                      : report->parsed()      ? hevo::Mode::report
                      : oracle->parsed()      ? hevo::Mode::oracle
                                              : hevo::Mode::conformance;
    hevo::RunConfig config = resolve(mode, f, options[mode]);
    hevo::CommandContext ctx{std::cout, log_message};
    return hevo::run_command(config, ctx);
  } catch (const hevo::Error& e) {
    spdlog::error("{}", e.what());
    return hevo::exit_code_for(e.code());
  }
}
