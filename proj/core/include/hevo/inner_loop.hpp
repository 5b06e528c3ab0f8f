#pragma once

// The harness evolution loop over one task: rebuild, reset, execute, evaluate,
// verdict, record, evolve from best.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hevo/model.hpp"
#include "hevo/protocol.hpp"

namespace hevo {

std::string_view engine_version();

struct InnerRunResult {
  Harness best_harness;
  Score best_score;
  std::vector<HistoryEntry> history;
  bool stopped_early = false;
};

void to_json(Json& j, const InnerRunResult& v);
void from_json(const Json& j, InnerRunResult& v);

// The three agents an inner run talks to, instantiated from a blueprint.
struct AgentSet {
  std::unique_ptr<Worker> worker;
  std::unique_ptr<Evaluator> evaluator;
  std::unique_ptr<EvolutionAgent> evolution;
};

// Builtin worker "stringforge" or an external process; the builtin evaluator
// unless evaluator_config names a command; builtin or external evolution.
AgentSet make_agents(const Blueprint& blueprint);

struct InnerLoopOptions {
  // Receives every run log line (header first), without trailing newline.
  std::function<void(const std::string& line)> log;
  // Called before each evolve request with the arguments about to be sent.
  std::function<void(const std::vector<HistoryEntry>& history, const Harness& best)> on_evolve;
  // Use these agents instead of make_agents(blueprint).
  AgentSet* agents = nullptr;
};

InnerRunResult run_inner_loop(const Task& task, const Blueprint& blueprint, std::uint64_t seed,
                              const InnerLoopOptions& options = {});

// Earliest maximum under compare_scores; (nullopt, MIN_SCORE) for an empty history.
std::pair<std::optional<Harness>, Score> select_best(const std::vector<HistoryEntry>& history);

// ---------------------------------------------------------------------------
// Run logs

struct RunLogHeader {
  std::string task_id;
  std::string blueprint_digest;
  std::uint64_t seed = 0;
  std::string engine_version;
  bool operator==(const RunLogHeader&) const = default;
};

void to_json(Json& j, const RunLogHeader& v);
void from_json(const Json& j, RunLogHeader& v);

RunLogHeader make_header(const Task& task, const Blueprint& blueprint, std::uint64_t seed);

struct RunLog {
  RunLogHeader header;
  std::vector<std::string> entry_lines;  // canonical HistoryEntry encodings
};

// Splits a log into header and entry lines. A trailing line without a
// newline is treated as torn by a crash and dropped. Raises resume_mismatch
// when the header is missing or malformed.
RunLog parse_run_log(std::string_view text);

std::vector<HistoryEntry> log_history(const RunLog& log);

// Replays the run from scratch and checks that it reproduces every logged
// line (resume_mismatch otherwise); `options.log` only sees the lines after
// the logged prefix. The result is that of the uninterrupted run. A log
// without a single complete line counts as empty and starts a fresh run.
InnerRunResult resume_inner_loop(std::string_view log_text, const Blueprint& blueprint, const Task& task, std::uint64_t seed,
                                 const InnerLoopOptions& options = {});

}  // namespace hevo
