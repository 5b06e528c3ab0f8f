#include "hevo/protocol.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "hevo/error.hpp"
#include "hevo/subprocess.hpp"

namespace hevo {

// ---------------------------------------------------------------------------
// Checked calls

Trace call_worker(Worker& worker, const Harness& harness, const Task& task) {
  worker.rebuild(harness);
  worker.prepare(task);
  Trace trace = worker.execute(task);
  if (auto v = validate_trace(trace); !v.ok()) throw Error(ErrorCode::trace_invalid, v.describe());
  for (const auto& step : trace.steps) {
    if (std::find(harness.tools.begin(), harness.tools.end(), step.action.name) == harness.tools.end()) {
      throw Error(ErrorCode::trace_invalid,
                  "step " + std::to_string(step.index) + " uses tool '" + step.action.name + "' not in the harness");
    }
  }
  return trace;
}

Evaluation call_evaluator(Evaluator& evaluator, const Trace& trace, const Task& task) {
  Evaluation result = evaluator.evaluate(trace, task);
  if (auto v = validate_report(result.report); !v.ok()) throw Error(ErrorCode::report_invalid, v.describe());
  if (!(result.score == result.report.score)) throw Error(ErrorCode::report_invalid, "score differs from report.score");
  if (result.report.criterion_verdicts.size() != task.criteria.size()) {
    throw Error(ErrorCode::report_invalid, "expected one verdict per criterion");
  }
  return result;
}

std::optional<Harness> call_evolution(EvolutionAgent& agent, const std::vector<HistoryEntry>& history, const Harness& best,
                                      std::uint64_t seed, const std::string& task_id, BindingKind worker_kind) {
  auto proposal = agent.evolve(history, best, seed, task_id);
  if (proposal) {
    if (auto v = validate_harness(*proposal, worker_kind); !v.ok()) throw Error(ErrorCode::harness_invalid, v.describe());
  }
  return proposal;
}

std::optional<Blueprint> call_meta_evolution(MetaEvolutionAgent& agent, const std::vector<MetaHistoryEntry>& meta_history,
                                             const Blueprint& best, std::uint64_t seed) {
  auto proposal = agent.evolve(meta_history, best, seed);
  if (proposal) {
    if (auto v = validate_blueprint(*proposal); !v.ok()) throw Error(ErrorCode::blueprint_invalid, v.describe());
  }
  return proposal;
}

// ---------------------------------------------------------------------------
// Messages

namespace {

struct TypeName {
  MessageType type;
  std::string_view name;
};

constexpr TypeName kTypeNames[] = {
    {MessageType::hello, "hello"},
    {MessageType::hello_ack, "hello_ack"},
    {MessageType::execute_req, "execute_req"},
    {MessageType::execute_resp, "execute_resp"},
    {MessageType::evaluate_req, "evaluate_req"},
    {MessageType::evaluate_resp, "evaluate_resp"},
    {MessageType::evolve_req, "evolve_req"},
    {MessageType::evolve_resp, "evolve_resp"},
    {MessageType::meta_evolve_req, "meta_evolve_req"},
    {MessageType::meta_evolve_resp, "meta_evolve_resp"},
    {MessageType::error, "error"},
};

[[noreturn]] void protocol_failure(const std::string& message) { throw Error(ErrorCode::protocol_error, message); }

void expect_keys(const Json& j, std::initializer_list<std::string_view> keys) {
  if (j.size() != keys.size()) protocol_failure("unexpected field set in message");
  for (auto key : keys) {
    if (!j.contains(std::string(key))) protocol_failure("missing field '" + std::string(key) + "'");
  }
}

std::int64_t positive_int(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) protocol_failure(std::string("'") + key + "' must be a positive integer");
  return v.get<std::int64_t>();
}

template <typename T>
T payload_field(const Json& payload, const char* key) {
  if (!payload.is_object() || !payload.contains(key)) protocol_failure(std::string("payload lacks '") + key + "'");
  try {
    return payload.at(key).get<T>();
  } catch (const Error& e) {
    protocol_failure(std::string("payload field '") + key + "': " + e.detail());
  } catch (const nlohmann::json::exception& e) {
    protocol_failure(std::string("payload field '") + key + "': " + e.what());
  }
}

bool exhausted(const Json& payload) {
  return payload.is_object() && payload.contains("space_exhausted") && payload.at("space_exhausted") == true;
}

}  // namespace

std::string_view to_string(MessageType type) {
  for (const auto& tn : kTypeNames) {
    if (tn.type == type) return tn.name;
  }
  return "";
}

MessageType parse_message_type(std::string_view text) {
  for (const auto& tn : kTypeNames) {
    if (tn.name == text) return tn.type;
  }
  protocol_failure("unknown message type '" + std::string(text) + "'");
}

bool ProtocolMessage::operator==(const ProtocolMessage& other) const { return encode(*this) == encode(other); }

std::string encode(const ProtocolMessage& message) {
  Json j;
  switch (message.type) {
    case MessageType::hello:
      j = Json{{"type", "hello"}, {"role", std::string(to_string(message.role))}, {"protocol_version", message.protocol_version}};
      break;
    case MessageType::hello_ack:
      j = Json{{"type", "hello_ack"}, {"protocol_version", message.protocol_version}};
      break;
    default:
      j = Json{{"type", std::string(to_string(message.type))}, {"seq", message.seq}, {"payload", message.payload}};
      break;
  }
  return j.dump();
}

ProtocolMessage decode_message(std::string_view line) {
  Json j = parse_json(line, ErrorCode::protocol_error, "message");
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) protocol_failure("message lacks a type");
  ProtocolMessage m;
  m.type = parse_message_type(j.at("type").get<std::string>());
  switch (m.type) {
    case MessageType::hello: {
      expect_keys(j, {"type", "role", "protocol_version"});
      if (!j.at("role").is_string()) protocol_failure("role must be a string");
      try {
        m.role = parse_agent_role(j.at("role").get<std::string>());
      } catch (const Error& e) {
        protocol_failure(e.detail());
      }
      m.protocol_version = positive_int(j, "protocol_version");
      break;
    }
    case MessageType::hello_ack:
      expect_keys(j, {"type", "protocol_version"});
      m.protocol_version = positive_int(j, "protocol_version");
      break;
    default:
      expect_keys(j, {"type", "seq", "payload"});
      m.seq = positive_int(j, "seq");
      if (!j.at("payload").is_object()) protocol_failure("payload must be an object");
      m.payload = j.at("payload");
      break;
  }
  return m;
}

MessageType response_type_for(MessageType request) {
  switch (request) {
    case MessageType::hello: return MessageType::hello_ack;
    case MessageType::execute_req: return MessageType::execute_resp;
    case MessageType::evaluate_req: return MessageType::evaluate_resp;
    case MessageType::evolve_req: return MessageType::evolve_resp;
    case MessageType::meta_evolve_req: return MessageType::meta_evolve_resp;
    default: protocol_failure("'" + std::string(to_string(request)) + "' is not a request");
  }
}

MessageType request_type_for(AgentRole role) {
  switch (role) {
    case AgentRole::worker: return MessageType::execute_req;
    case AgentRole::evaluator: return MessageType::evaluate_req;
    case AgentRole::evolution: return MessageType::evolve_req;
    case AgentRole::meta_evolution: return MessageType::meta_evolve_req;
  }
  return MessageType::error;
}

// ---------------------------------------------------------------------------
// AgentProcess

AgentProcess::AgentProcess(const AgentBinding& binding, AgentRole role)
    : role_(role), timeout_(binding.timeout_ms) {
  if (binding.kind != BindingKind::external) throw Error(ErrorCode::invalid_argument, "AgentProcess needs an external binding");
  if (binding.timeout_ms <= 0) throw Error(ErrorCode::invalid_argument, "timeout_ms must be positive");
  process_ = std::make_unique<Subprocess>(binding.command, binding.args);

  ProtocolMessage hello;
  hello.type = MessageType::hello;
  hello.role = role;
  auto deadline = std::chrono::steady_clock::now() + timeout_;
  try {
    process_->write_line(encode(hello));
    ProtocolMessage ack = decode_message(read_response(deadline));
    if (ack.type == MessageType::error) fail(ErrorCode::protocol_error, "agent rejected the handshake");
    if (ack.type != MessageType::hello_ack) fail(ErrorCode::protocol_error, "expected hello_ack");
    if (ack.protocol_version != kProtocolVersion) {
      fail(ErrorCode::protocol_error, "protocol version mismatch: agent speaks " + std::to_string(ack.protocol_version));
    }
  } catch (const Error& e) {
    if (!broken_) {
      broken_ = true;
      process_->kill();
    }
    throw;
  }
}

AgentProcess::~AgentProcess() = default;

void AgentProcess::fail(ErrorCode code, const std::string& message) {
  broken_ = true;
  process_->kill();
  throw Error(code, message);
}

std::string AgentProcess::read_response(std::chrono::steady_clock::time_point deadline) {
  std::optional<std::string> line;
  try {
    line = process_->read_line(deadline);
  } catch (const Error& e) {
    fail(e.code(), e.detail());
  }
  if (!line) {
    fail(role_ == AgentRole::worker ? ErrorCode::worker_timeout : ErrorCode::agent_timeout,
         "no response within " + std::to_string(timeout_.count()) + " ms");
  }
  return *line;
}

Json AgentProcess::request(MessageType type, Json payload) {
  if (broken_) throw Error(ErrorCode::protocol_error, "agent process is no longer usable");
  ProtocolMessage req;
  req.type = type;
  req.seq = next_seq_++;
  req.payload = std::move(payload);
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  try {
    process_->write_line(encode(req));
  } catch (const Error& e) {
    fail(e.code(), e.detail());
  }
  std::string line = read_response(deadline);
  ProtocolMessage resp;
  try {
    resp = decode_message(line);
  } catch (const Error& e) {
    fail(ErrorCode::protocol_error, e.detail());
  }
  if (resp.type == MessageType::error) {
    std::string message = resp.payload.contains("message") && resp.payload.at("message").is_string()
                              ? resp.payload.at("message").get<std::string>()
                              : std::string("unspecified");
    fail(ErrorCode::protocol_error, "agent reported an error: " + message);
  }
  if (resp.type != response_type_for(type)) {
    fail(ErrorCode::protocol_error, "expected " + std::string(to_string(response_type_for(type))) + ", got " +
                                        std::string(to_string(resp.type)));
  }
  if (resp.seq != req.seq) {
    fail(ErrorCode::protocol_error, "response seq " + std::to_string(resp.seq) + " does not echo " + std::to_string(req.seq));
  }
  return resp.payload;
}

Trace ExternalWorker::execute(const Task& task) {
  Json payload = process_.request(MessageType::execute_req, Json{{"harness", harness_}, {"task", task}});
  return payload_field<Trace>(payload, "trace");
}

Evaluation ExternalEvaluator::evaluate(const Trace& trace, const Task& task) {
  Json payload = process_.request(MessageType::evaluate_req, Json{{"trace", trace}, {"task", task}});
  return Evaluation{payload_field<EvaluationReport>(payload, "report"), payload_field<Score>(payload, "score")};
}

std::optional<Harness> ExternalEvolution::evolve(const std::vector<HistoryEntry>& history, const Harness& best,
                                                 std::uint64_t seed, const std::string& task_id) {
  Json payload = process_.request(MessageType::evolve_req,
                                  Json{{"history", history}, {"best", best}, {"seed", seed}, {"task_id", task_id}});
  if (exhausted(payload)) return std::nullopt;
  try {
    return payload_field<Harness>(payload, "harness");
  } catch (const Error& e) {
    throw Error(ErrorCode::harness_invalid, e.detail());
  }
}

std::optional<Blueprint> ExternalMetaEvolution::evolve(const std::vector<MetaHistoryEntry>& meta_history, const Blueprint& best,
                                                       std::uint64_t seed) {
  Json payload =
      process_.request(MessageType::meta_evolve_req, Json{{"meta_history", meta_history}, {"best", best}, {"seed", seed}});
  if (exhausted(payload)) return std::nullopt;
  try {
    return payload_field<Blueprint>(payload, "blueprint");
  } catch (const Error& e) {
    throw Error(ErrorCode::blueprint_invalid, e.detail());
  }
}

// ---------------------------------------------------------------------------
// Agent side

namespace {

std::string error_line(std::int64_t seq, const std::string& message) {
  ProtocolMessage m;
  m.type = MessageType::error;
  m.seq = seq < 1 ? 1 : seq;
  m.payload = Json{{"message", message}};
  return encode(m);
}

// Best-effort seq recovery from a request we could not decode.
std::int64_t salvage_seq(const std::string& line) {
  try {
    Json j = Json::parse(line);
    if (j.is_object() && j.contains("seq") && j.at("seq").is_number_integer()) return j.at("seq").get<std::int64_t>();
  } catch (const nlohmann::json::exception&) {
  }
  return 1;
}

Json handle(AgentRole role, const ServedAgents& agents, const ProtocolMessage& req) {
  if (req.type != request_type_for(role)) {
    protocol_failure("this agent serves " + std::string(to_string(request_type_for(role))) + ", not " +
                     std::string(to_string(req.type)));
  }
  const Json& p = req.payload;
  switch (role) {
    case AgentRole::worker: {
      auto harness = payload_field<Harness>(p, "harness");
      auto task = payload_field<Task>(p, "task");
      agents.worker->rebuild(harness);
      agents.worker->prepare(task);
      return Json{{"trace", agents.worker->execute(task)}};
    }
    case AgentRole::evaluator: {
      auto result = agents.evaluator->evaluate(payload_field<Trace>(p, "trace"), payload_field<Task>(p, "task"));
      return Json{{"report", result.report}, {"score", result.score}};
    }
    case AgentRole::evolution: {
      auto next = agents.evolution->evolve(payload_field<std::vector<HistoryEntry>>(p, "history"),
                                           payload_field<Harness>(p, "best"), payload_field<std::uint64_t>(p, "seed"),
                                           payload_field<std::string>(p, "task_id"));
      if (!next) return Json{{"space_exhausted", true}};
      return Json{{"harness", *next}};
    }
    case AgentRole::meta_evolution: {
      auto next = agents.meta_evolution->evolve(payload_field<std::vector<MetaHistoryEntry>>(p, "meta_history"),
                                                payload_field<Blueprint>(p, "best"), payload_field<std::uint64_t>(p, "seed"));
      if (!next) return Json{{"space_exhausted", true}};
      return Json{{"blueprint", *next}};
    }
  }
  return Json::object();
}

bool has_agent(AgentRole role, const ServedAgents& agents) {
  switch (role) {
    case AgentRole::worker: return agents.worker != nullptr;
    case AgentRole::evaluator: return agents.evaluator != nullptr;
    case AgentRole::evolution: return agents.evolution != nullptr;
    case AgentRole::meta_evolution: return agents.meta_evolution != nullptr;
  }
  return false;
}

}  // namespace

int serve_agent(AgentRole role, const ServedAgents& agents, std::istream& in, std::ostream& out) {
  if (!has_agent(role, agents)) throw Error(ErrorCode::invalid_argument, "no agent for role " + std::string(to_string(role)));
  std::string line;
  if (!std::getline(in, line)) return 1;
  try {
    ProtocolMessage hello = decode_message(line);
    if (hello.type != MessageType::hello) protocol_failure("expected hello");
    if (hello.role != role) protocol_failure("engine asked for role " + std::string(to_string(hello.role)));
    if (hello.protocol_version != kProtocolVersion) protocol_failure("unsupported protocol version");
  } catch (const Error& e) {
    out << error_line(1, e.detail()) << '\n' << std::flush;
    return 1;
  }
  ProtocolMessage ack;
  ack.type = MessageType::hello_ack;
  out << encode(ack) << '\n' << std::flush;

  while (std::getline(in, line)) {
    ProtocolMessage req;
    try {
      req = decode_message(line);
    } catch (const Error& e) {
      out << error_line(salvage_seq(line), e.detail()) << '\n' << std::flush;
      continue;
    }
    try {
      ProtocolMessage resp;
      resp.type = response_type_for(req.type);
      resp.seq = req.seq;
      resp.payload = handle(role, agents, req);
      out << encode(resp) << '\n' << std::flush;
    } catch (const Error& e) {
      out << error_line(req.seq, e.detail()) << '\n' << std::flush;
    } catch (const std::exception& e) {
      out << error_line(req.seq, e.what()) << '\n' << std::flush;
    }
  }
  return 0;
}

}  // namespace hevo
