#pragma once

// Operational entry points behind the harness-evo tool: configuration,
// input loading, run directories, locking, resume and exit statuses.
//
// Exit statuses:
//   0  success
//   1  I/O failure or internal error
//   2  invalid configuration or inputs (missing files, schema violations,
//      duplicate task ids, unsupported criteria, train/test overlap)
//   3  agent or protocol failure (timeouts, malformed messages, invalid
//      traces, reports or proposals)
//   4  resume_mismatch
//   5  output directory locked by another process
//   6  conformance suite reported failures

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hevo/error.hpp"
#include "hevo/model.hpp"

namespace hevo {

enum class Mode { inner, meta, report, oracle, conformance };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAgent = 3;
inline constexpr int kExitResume = 4;
inline constexpr int kExitLocked = 5;
inline constexpr int kExitConformance = 6;

int exit_code_for(ErrorCode code);

struct RunConfig {
  Mode mode = Mode::inner;
  std::string task;  // file, or bundled:<id>
  std::string tasks;  // file holding an array, "bundled", or bundled:<id>,<id>
  std::string blueprint;  // file, or default:<strategy kind>
  std::uint64_t seed = 0;
  std::optional<std::int64_t> K;
  std::optional<std::int64_t> J;
  std::filesystem::path out = "runs";
  std::optional<std::int64_t> parallelism;
  std::optional<Rational> threshold;
  bool resume = false;
  std::string space = "restricted";  // oracle: restricted, full or a declaration file
  std::string meta_space;  // meta: declaration file (builtin meta strategies)
  std::string meta_strategy = "exhaustive";  // exhaustive, hill_climb or external
  std::string meta_agent;  // meta: external command line when meta_strategy is external
  std::string agent;  // conformance: command line of the agent under test
  std::string role;  // conformance: role of the agent under test
};

// Reads a configuration file; keys mirror the long flag names with dashes
// replaced by underscores. Unknown keys are rejected (invalid_config).
RunConfig config_from_json(const Json& j, RunConfig base = {});

// ---------------------------------------------------------------------------
// Inputs

std::vector<Task> load_tasks(const std::string& spec);
Task load_task(const std::string& spec);

struct LoadedBlueprint {
  Blueprint blueprint;
  std::vector<std::string> train_task_ids;  // from a provenance header, if any
};

// Plain blueprint document, a meta-run best_blueprint.json, or default:<kind>.
LoadedBlueprint load_blueprint(const std::string& spec);

// Splits a command line on whitespace.
std::vector<std::string> split_command(const std::string& line);

// ---------------------------------------------------------------------------
// Commands

enum class LogLevel { error, info, debug };

struct CommandContext {
  std::ostream& out;
  std::function<void(LogLevel, const std::string&)> log;
};

// Directory of a run below config.out, named by mode, inputs, digest and seed.
std::filesystem::path run_directory(const RunConfig& config);

int cmd_run_inner(const RunConfig& config, CommandContext& ctx);
int cmd_run_meta(const RunConfig& config, CommandContext& ctx);
int cmd_report(const RunConfig& config, CommandContext& ctx);
int cmd_oracle(const RunConfig& config, CommandContext& ctx);
int cmd_conformance(const RunConfig& config, CommandContext& ctx);

// Dispatches on config.mode and maps errors to exit statuses.
int run_command(const RunConfig& config, CommandContext& ctx);

}  // namespace hevo
