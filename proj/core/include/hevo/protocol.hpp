#pragma once

// Agent contracts and the line-oriented wire protocol that lets external
// processes implement any of them.
//
// Transport: one canonical JSON message per line over the child's stdin and
// stdout. The engine opens with {"protocol_version":1,"role":...,"type":"hello"}
// and expects {"protocol_version":1,"type":"hello_ack"}. Every later request
// carries a positive seq which the single response must echo.
//
//   execute_req       {harness, task}                          -> execute_resp {trace}
//   evaluate_req      {task, trace}                            -> evaluate_resp {report, score}
//   evolve_req        {best, history, seed, task_id}           -> evolve_resp {harness} | {space_exhausted: true}
//   meta_evolve_req   {best, meta_history, seed}               -> meta_evolve_resp {blueprint} | {space_exhausted: true}
//   error             {message}   (agent-side failure; surfaced as protocol_error)

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hevo/meta_types.hpp"
#include "hevo/model.hpp"

namespace hevo {

inline constexpr std::int64_t kProtocolVersion = 1;

// ---------------------------------------------------------------------------
// Contracts

class Worker {
 public:
  virtual ~Worker() = default;
  // Rebuild the agent from a harness.
  virtual void rebuild(const Harness& harness) = 0;
  // Reset the target environment to a clean state for the task.
  virtual void prepare(const Task& task) = 0;
  virtual Trace execute(const Task& task) = 0;
};

struct Evaluation {
  EvaluationReport report;
  Score score;
};

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Evaluation evaluate(const Trace& trace, const Task& task) = 0;
};

class EvolutionAgent {
 public:
  virtual ~EvolutionAgent() = default;
  // nullopt signals that the agent's space is exhausted.
  virtual std::optional<Harness> evolve(const std::vector<HistoryEntry>& history, const Harness& best, std::uint64_t seed,
                                        const std::string& task_id) = 0;
};

class MetaEvolutionAgent {
 public:
  virtual ~MetaEvolutionAgent() = default;
  virtual std::optional<Blueprint> evolve(const std::vector<MetaHistoryEntry>& meta_history, const Blueprint& best,
                                          std::uint64_t seed) = 0;
};

// ---------------------------------------------------------------------------
// Engine-side checked calls. The engine, not the agent, enforces validity.

// rebuild + prepare + execute, then checks trace structure and that every
// action names a tool of the harness (trace_invalid otherwise).
Trace call_worker(Worker& worker, const Harness& harness, const Task& task);

// Checks the report invariants and that the score equals report.score (report_invalid).
Evaluation call_evaluator(Evaluator& evaluator, const Trace& trace, const Task& task);

// Validates the proposal against the worker binding (harness_invalid).
std::optional<Harness> call_evolution(EvolutionAgent& agent, const std::vector<HistoryEntry>& history, const Harness& best,
                                      std::uint64_t seed, const std::string& task_id, BindingKind worker_kind);

// Validates the proposal (blueprint_invalid).
std::optional<Blueprint> call_meta_evolution(MetaEvolutionAgent& agent, const std::vector<MetaHistoryEntry>& meta_history,
                                             const Blueprint& best, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Messages

enum class MessageType {
  hello,
  hello_ack,
  execute_req,
  execute_resp,
  evaluate_req,
  evaluate_resp,
  evolve_req,
  evolve_resp,
  meta_evolve_req,
  meta_evolve_resp,
  error,
};

std::string_view to_string(MessageType type);
MessageType parse_message_type(std::string_view text);  // protocol_error on unknown names

struct ProtocolMessage {
  MessageType type = MessageType::error;
  std::int64_t seq = 0;  // unused by hello / hello_ack
  Json payload = Json::object();
  AgentRole role = AgentRole::worker;  // hello only
  std::int64_t protocol_version = kProtocolVersion;  // hello / hello_ack only

  bool operator==(const ProtocolMessage& other) const;
};

// Canonical single-line encoding, without the trailing newline.
std::string encode(const ProtocolMessage& message);
// Strict inverse of encode; anything else is a protocol_error.
ProtocolMessage decode_message(std::string_view line);

MessageType response_type_for(MessageType request);
MessageType request_type_for(AgentRole role);

// ---------------------------------------------------------------------------
// External agents

class Subprocess;

// A spawned external agent speaking the wire protocol. One in-flight request
// at a time; the process lives as long as this object.
class AgentProcess {
 public:
  AgentProcess(const AgentBinding& binding, AgentRole role);
  ~AgentProcess();
  AgentProcess(const AgentProcess&) = delete;
  AgentProcess& operator=(const AgentProcess&) = delete;

  // Sends a request and returns the matching response payload. Times out
  // (worker_timeout for workers, agent_timeout otherwise) after timeout_ms;
  // malformed, mismatched or error responses raise protocol_error. After any
  // failure the process is killed and further calls fail.
  Json request(MessageType type, Json payload);

  AgentRole role() const { return role_; }

 private:
  std::string read_response(std::chrono::steady_clock::time_point deadline);
  [[noreturn]] void fail(ErrorCode code, const std::string& message);

  std::unique_ptr<Subprocess> process_;
  AgentRole role_;
  std::chrono::milliseconds timeout_;
  std::int64_t next_seq_ = 1;
  bool broken_ = false;
};

class ExternalWorker : public Worker {
 public:
  explicit ExternalWorker(const AgentBinding& binding) : process_(binding, AgentRole::worker) {}
  void rebuild(const Harness& harness) override { harness_ = harness; }
  void prepare(const Task&) override {}
  Trace execute(const Task& task) override;

 private:
  AgentProcess process_;
  Harness harness_;
};

class ExternalEvaluator : public Evaluator {
 public:
  explicit ExternalEvaluator(const AgentBinding& binding) : process_(binding, AgentRole::evaluator) {}
  Evaluation evaluate(const Trace& trace, const Task& task) override;

 private:
  AgentProcess process_;
};

class ExternalEvolution : public EvolutionAgent {
 public:
  explicit ExternalEvolution(const AgentBinding& binding) : process_(binding, AgentRole::evolution) {}
  std::optional<Harness> evolve(const std::vector<HistoryEntry>& history, const Harness& best, std::uint64_t seed,
                                const std::string& task_id) override;

 private:
  AgentProcess process_;
};

class ExternalMetaEvolution : public MetaEvolutionAgent {
 public:
  explicit ExternalMetaEvolution(const AgentBinding& binding) : process_(binding, AgentRole::meta_evolution) {}
  std::optional<Blueprint> evolve(const std::vector<MetaHistoryEntry>& meta_history, const Blueprint& best,
                                  std::uint64_t seed) override;

 private:
  AgentProcess process_;
};

// ---------------------------------------------------------------------------
// Agent side

// Agents an in-process server dispatches to; only the one matching the
// negotiated role is used.
struct ServedAgents {
  Worker* worker = nullptr;
  Evaluator* evaluator = nullptr;
  EvolutionAgent* evolution = nullptr;
  MetaEvolutionAgent* meta_evolution = nullptr;
};

// Serves one session: handshake, then request/response until input closes.
// Malformed or unexpected requests get an error response and serving continues.
// Returns 0 on a clean session, 1 when the handshake failed.
int serve_agent(AgentRole role, const ServedAgents& agents, std::istream& in, std::ostream& out);

}  // namespace hevo
