#include "hevo/commands.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "hevo/inner_loop.hpp"
#include "hevo/meta_loop.hpp"
#include "hevo/metrics.hpp"
#include "hevo/protocol.hpp"
#include "hevo/simkit.hpp"
#include "hevo/subprocess.hpp"

namespace hevo {

namespace fs = std::filesystem;

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::inner: return "inner";
    case Mode::meta: return "meta";
    case Mode::report: return "report";
    case Mode::oracle: return "oracle";
    case Mode::conformance: return "conformance";
  }
  return "inner";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::inner, Mode::meta, Mode::report, Mode::oracle, Mode::conformance}) {
    if (to_string(m) == text) return m;
  }
  throw Error(ErrorCode::invalid_config, "unknown mode '" + std::string(text) + "'");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_config:
    case ErrorCode::unsupported_criterion:
    case ErrorCode::empty_aggregate:
    case ErrorCode::train_test_overlap:
      return kExitConfig;
    case ErrorCode::worker_timeout:
    case ErrorCode::agent_timeout:
    case ErrorCode::protocol_error:
    case ErrorCode::trace_invalid:
    case ErrorCode::report_invalid:
    case ErrorCode::harness_invalid:
    case ErrorCode::blueprint_invalid:
      return kExitAgent;
    case ErrorCode::resume_mismatch:
      return kExitResume;
    case ErrorCode::io_error:
      return kExitIo;
  }
  return kExitIo;
}

// ---------------------------------------------------------------------------
// Configuration

RunConfig config_from_json(const Json& j, RunConfig c) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::invalid_config, "config: " + m); };
  if (!j.is_object()) bad("must be an object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "mode") {
        c.mode = parse_mode(v.get<std::string>());
      } else if (k == "task") {
        c.task = v.get<std::string>();
      } else if (k == "tasks") {
        c.tasks = v.get<std::string>();
      } else if (k == "blueprint") {
        c.blueprint = v.get<std::string>();
      } else if (k == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (k == "K") {
        c.K = v.get<std::int64_t>();
      } else if (k == "J") {
        c.J = v.get<std::int64_t>();
      } else if (k == "out") {
        c.out = v.get<std::string>();
      } else if (k == "parallelism") {
        c.parallelism = v.get<std::int64_t>();
      } else if (k == "threshold") {
        c.threshold = v.is_string() ? parse_rational(v.get<std::string>()) : parse_rational(v.dump());
      } else if (k == "resume") {
        c.resume = v.get<bool>();
      } else if (k == "space") {
        c.space = v.get<std::string>();
      } else if (k == "meta_space") {
        c.meta_space = v.get<std::string>();
      } else if (k == "meta_strategy") {
        c.meta_strategy = v.get<std::string>();
      } else if (k == "meta_agent") {
        c.meta_agent = v.get<std::string>();
      } else if (k == "agent") {
        c.agent = v.get<std::string>();
      } else if (k == "role") {
        c.role = v.get<std::string>();
      } else {
        bad("unknown key '" + k + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_config) throw;
    bad(e.detail());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Inputs

namespace {

Json read_json_file(const std::string& path, const char* what) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::invalid_config, std::string(what) + " '" + path + "': " + e.detail());
  }
  return parse_json(text, ErrorCode::invalid_config, std::string(what) + " '" + path + "'");
}

template <typename T>
T convert(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const Error& e) {
    throw Error(ErrorCode::invalid_config, what + ": " + e.detail());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, what + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Task> bundled_subset(const std::string& ids) {
  auto corpus = simkit::bundled_corpus();
  if (ids.empty()) return corpus;
  std::vector<Task> out;
  for (const auto& id : split_list(ids)) {
    auto it = std::find_if(corpus.begin(), corpus.end(), [&](const Task& t) { return t.id == id; });
    if (it == corpus.end()) throw Error(ErrorCode::invalid_config, "no bundled task '" + id + "'");
    out.push_back(*it);
  }
  return out;
}

}  // namespace

std::vector<Task> load_tasks(const std::string& spec) {
  if (spec.empty()) throw Error(ErrorCode::invalid_config, "no task set given (--tasks)");
  if (spec == "bundled") return simkit::bundled_corpus();
  if (spec.rfind("bundled:", 0) == 0) return bundled_subset(spec.substr(8));
  Json j = read_json_file(spec, "task file");
  std::vector<Task> tasks;
  if (j.is_array()) {
    tasks = convert<std::vector<Task>>(j, "task file '" + spec + "'");
  } else {
    tasks.push_back(convert<Task>(j, "task file '" + spec + "'"));
  }
  for (const auto& t : tasks) {
    if (auto v = validate_task(t); !v.ok()) throw Error(ErrorCode::invalid_config, "task '" + t.id + "': " + v.describe());
  }
  return tasks;
}

Task load_task(const std::string& spec) {
  if (spec.empty()) throw Error(ErrorCode::invalid_config, "no task given (--task)");
  auto tasks = load_tasks(spec);
  if (tasks.size() != 1) throw Error(ErrorCode::invalid_config, "expected exactly one task in '" + spec + "'");
  return tasks.front();
}

LoadedBlueprint load_blueprint(const std::string& spec) {
  if (spec.empty()) throw Error(ErrorCode::invalid_config, "no blueprint given (--blueprint)");
  LoadedBlueprint out;
  if (spec.rfind("default:", 0) == 0) {
    StrategyKind kind;
    try {
      kind = parse_strategy_kind(spec.substr(8));
    } catch (const Error& e) {
      throw Error(ErrorCode::invalid_config, e.detail());
    }
    if (kind == StrategyKind::external) throw Error(ErrorCode::invalid_config, "default blueprints use builtin strategies");
    out.blueprint = simkit::default_blueprint(kind, 20);
    return out;
  }
  Json j = read_json_file(spec, "blueprint file");
  if (j.is_object() && j.contains("blueprint") && j.contains("provenance")) {
    out.blueprint = convert<Blueprint>(j.at("blueprint"), "blueprint file '" + spec + "'");
    const Json& prov = j.at("provenance");
    if (prov.is_object() && prov.contains("train_task_ids")) {
      out.train_task_ids = convert<std::vector<std::string>>(prov.at("train_task_ids"), "provenance");
    }
  } else {
    out.blueprint = convert<Blueprint>(j, "blueprint file '" + spec + "'");
  }
  if (auto v = validate_blueprint(out.blueprint); !v.ok()) throw Error(ErrorCode::invalid_config, "blueprint: " + v.describe());
  return out;
}

std::vector<std::string> split_command(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

// ---------------------------------------------------------------------------
// Run directories

namespace {

class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) {
    fd_ = ::open((dir / "LOCK").c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::io_error, "cannot open lock file in " + dir.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      fd_ = -1;
      locked_ = true;
    }
  }
  ~DirectoryLock() {
    if (fd_ >= 0) ::close(fd_);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;
  bool held_elsewhere() const { return locked_; }

 private:
  int fd_ = -1;
  bool locked_ = false;
};

class LineAppender {
 public:
  LineAppender(const fs::path& path, bool truncate) : out_(path, truncate ? std::ios::trunc : std::ios::app) {
    if (!out_) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  }
  void operator()(const std::string& line) {
    out_ << line << '\n';
    out_.flush();
    if (!out_) throw Error(ErrorCode::io_error, "write failed");
  }

 private:
  std::ofstream out_;
};

std::string short_digest(const Json& j) { return hex64(fnv1a64(canonical(j))); }

std::string safe_component(const std::string& s) {
  std::string out;
  for (char c : s) {
    out.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_');
  }
  return out.empty() ? "_" : out;
}

Json task_ids_json(const std::vector<Task>& tasks) {
  Json ids = Json::array();
  for (const auto& t : tasks) ids.push_back(t.id);
  return ids;
}

// Everything a command needs, loaded and validated before any agent starts.
struct Prepared {
  fs::path dir;
  std::vector<Task> tasks;
  LoadedBlueprint blueprint;
  std::optional<simkit::HarnessSpace> space;
  std::optional<simkit::MetaSpace> meta_space;
  Rational threshold{0};
};

simkit::HarnessSpace load_space(const std::string& spec) {
  if (spec == "restricted" || spec == "full") return simkit::HarnessSpace::named(spec);
  return simkit::HarnessSpace::from_json(read_json_file(spec, "space file"));
}

Prepared prepare(const RunConfig& config) {
  Prepared p;
  switch (config.mode) {
    case Mode::inner: {
      p.tasks.push_back(load_task(config.task));
      p.blueprint = load_blueprint(config.blueprint);
      Blueprint& b = p.blueprint.blueprint;
      if (config.K) b.loop.K = *config.K;
      if (config.threshold) b.loop.early_stop = *config.threshold;
      if (auto v = validate_blueprint(b); !v.ok()) throw Error(ErrorCode::invalid_config, "blueprint: " + v.describe());
      p.dir = config.out / ("inner-" + safe_component(p.tasks[0].id) + "-" + blueprint_digest(b) + "-s" + std::to_string(config.seed));
      break;
    }
    case Mode::meta: {
      p.tasks = load_tasks(config.tasks);
      validate_task_set(p.tasks);
      if (!config.J) throw Error(ErrorCode::invalid_config, "meta runs need a round budget (-J)");
      if (*config.J < 1) throw Error(ErrorCode::invalid_config, "-J must be positive");
      Json strategy;
      if (config.meta_strategy == "external") {
        if (split_command(config.meta_agent).empty()) throw Error(ErrorCode::invalid_config, "external meta strategy needs --meta-agent");
        strategy = Json{{"external", config.meta_agent}};
      } else {
        if (config.meta_strategy != "exhaustive" && config.meta_strategy != "hill_climb") {
          throw Error(ErrorCode::invalid_config, "unknown meta strategy '" + config.meta_strategy + "'");
        }
        if (config.meta_space.empty()) throw Error(ErrorCode::invalid_config, "builtin meta strategies need --meta-space");
        p.meta_space = simkit::MetaSpace::from_json(read_json_file(config.meta_space, "meta space file"));
        strategy = Json{{config.meta_strategy, p.meta_space->to_json()}};
      }
      if (!config.blueprint.empty()) {
        p.blueprint = load_blueprint(config.blueprint);
      } else if (p.meta_space) {
        p.blueprint.blueprint = p.meta_space->at(0);
      } else {
        throw Error(ErrorCode::invalid_config, "no initial blueprint (--blueprint)");
      }
      Json key{{"tasks", p.tasks}, {"blueprint0", p.blueprint.blueprint}, {"J", *config.J}, {"strategy", strategy}};
      p.dir = config.out / ("meta-" + short_digest(key) + "-s" + std::to_string(config.seed));
      break;
    }
    case Mode::report: {
      p.tasks = load_tasks(config.tasks);
      p.blueprint = load_blueprint(config.blueprint);
      if (!config.threshold) throw Error(ErrorCode::invalid_config, "reports need an explicit --threshold");
      p.threshold = *config.threshold;
      Blueprint& b = p.blueprint.blueprint;
      if (config.K) b.loop.K = *config.K;
      Json key{{"tasks", p.tasks}, {"blueprint", b}, {"threshold", to_string(p.threshold)}, {"train", p.blueprint.train_task_ids}};
      p.dir = config.out / ("report-" + short_digest(key) + "-s" + std::to_string(config.seed));
      break;
    }
    case Mode::oracle: {
      p.tasks = config.task.empty() ? load_tasks(config.tasks) : std::vector<Task>{load_task(config.task)};
      validate_task_set(p.tasks);
      p.space = load_space(config.space);
      Json key{{"tasks", p.tasks}, {"space", p.space->to_json()}};
      p.dir = config.out / ("oracle-" + short_digest(key));
      break;
    }
    case Mode::conformance:
      break;
  }
  return p;
}

void log(CommandContext& ctx, LogLevel level, const std::string& message) {
  if (ctx.log) ctx.log(level, message);
}

void open_run_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) { write_file(path, text); }

std::string verdict_counts(const std::vector<HistoryEntry>& history) {
  std::int64_t improved = 0;
  for (const auto& e : history) improved += e.verdict == Verdict::improved;
  return "improved=" + std::to_string(improved) + " regressed=" + std::to_string(static_cast<std::int64_t>(history.size()) - improved);
}

}  // namespace

fs::path run_directory(const RunConfig& config) { return prepare(config).dir; }

// ---------------------------------------------------------------------------
// Commands

int cmd_run_inner(const RunConfig& config, CommandContext& ctx) {
  Prepared p = prepare(config);
  const Task& task = p.tasks.front();
  const Blueprint& blueprint = p.blueprint.blueprint;
  open_run_dir(p.dir);
  DirectoryLock lock(p.dir);
  if (lock.held_elsewhere()) {
    log(ctx, LogLevel::error, "run directory " + p.dir.string() + " is locked by another process");
    return kExitLocked;
  }

  const fs::path log_path = p.dir / "run.log";
  const fs::path result_path = p.dir / "result.json";
  const fs::path done_path = p.dir / "DONE";

  InnerRunResult result;
  if (config.resume && fs::exists(done_path)) {
    log(ctx, LogLevel::info, "run already complete; nothing to resume");
    result = decode<InnerRunResult>(read_file(result_path), ErrorCode::resume_mismatch);
  } else {
    fs::remove(done_path);
    InnerLoopOptions options;
    std::size_t iteration = 0;
    std::string text = config.resume && fs::exists(log_path) ? read_file(log_path) : std::string();
    if (text.find('\n') != std::string::npos) {
      RunLog prior = parse_run_log(text);
      // Rewrite the verified-complete prefix so a torn trailing line is gone.
      std::string prefix = canonical_of(prior.header) + "\n";
      for (const auto& line : prior.entry_lines) prefix += line + "\n";
      iteration = prior.entry_lines.size();
      log(ctx, LogLevel::info, "resuming after " + std::to_string(iteration) + " logged iterations");
      write_text(log_path, prefix);
      auto sink = std::make_shared<LineAppender>(log_path, false);
      options.log = [&, sink](const std::string& line) {
        (*sink)(line);
        log(ctx, LogLevel::debug, "iteration " + std::to_string(++iteration) + " logged");
      };
      result = resume_inner_loop(text, blueprint, task, config.seed, options);
    } else {
      auto sink = std::make_shared<LineAppender>(log_path, true);
      bool header = true;
      options.log = [&, sink](const std::string& line) {
        (*sink)(line);
        if (!header) log(ctx, LogLevel::debug, "iteration " + std::to_string(++iteration) + " logged");
        header = false;
      };
      result = run_inner_loop(task, blueprint, config.seed, options);
    }
    write_text(result_path, canonical_of(result) + "\n");
    write_text(done_path, "");
  }

  ctx.out << "task=" << task.id << " best_score=" << canonical_of(result.best_score) << " iterations=" << result.history.size() << " "
          << verdict_counts(result.history) << " stopped_early=" << (result.stopped_early ? "true" : "false") << " dir=" << p.dir.string()
          << "\n";
  return kExitOk;
}

int cmd_run_meta(const RunConfig& config, CommandContext& ctx) {
  Prepared p = prepare(config);
  open_run_dir(p.dir);
  DirectoryLock lock(p.dir);
  if (lock.held_elsewhere()) {
    log(ctx, LogLevel::error, "run directory " + p.dir.string() + " is locked by another process");
    return kExitLocked;
  }
  const fs::path done_path = p.dir / "DONE";
  const fs::path result_path = p.dir / "result.json";

  Json result_doc;
  if (config.resume && fs::exists(done_path)) {
    log(ctx, LogLevel::info, "run already complete; nothing to resume");
    result_doc = parse_json(read_file(result_path), ErrorCode::resume_mismatch, "meta result");
  } else {
    fs::remove(done_path);
    if (config.resume) log(ctx, LogLevel::info, "meta runs resume by re-running every round");

    std::unique_ptr<MetaEvolutionAgent> agent;
    if (p.meta_space) {
      agent = std::make_unique<simkit::BuiltinMetaEvolution>(parse_strategy_kind(config.meta_strategy), *p.meta_space);
    } else {
      auto words = split_command(config.meta_agent);
      std::vector<std::string> args(words.begin() + 1, words.end());
      agent = std::make_unique<ExternalMetaEvolution>(external_binding(words.front(), args, AgentBinding{}.timeout_ms));
    }

    auto sink = std::make_shared<LineAppender>(p.dir / "meta.log", true);
    MetaLoopOptions options;
    options.parallelism = config.parallelism;
    options.log = [sink](const std::string& line) { (*sink)(line); };
    options.inner_log = [&](const std::string& path, const std::string& text) { write_text(p.dir / path, text); };
    std::int64_t round = 0;
    options.on_evolve = [&](const std::vector<MetaHistoryEntry>& history, const Blueprint&) {
      log(ctx, LogLevel::info, "round " + std::to_string(round++) + " meta_score=" + to_fixed6(history.back().meta_score));
    };
    MetaRunResult result = run_meta_loop(p.tasks, *agent, p.blueprint.blueprint, *config.J, config.seed, options);
    result_doc = Json(result);

    Json provenance{{"train_task_ids", task_ids_json(p.tasks)},
                    {"best_meta_score", to_string(result.best_meta_score)},
                    {"blueprint0_digest", blueprint_digest(p.blueprint.blueprint)},
                    {"seed", config.seed},
                    {"J", *config.J},
                    {"engine_version", std::string(engine_version())}};
    write_text(p.dir / "best_blueprint.json", canonical(Json{{"blueprint", result.best_blueprint}, {"provenance", provenance}}) + "\n");
    write_text(result_path, canonical(result_doc) + "\n");
    write_text(done_path, "");
  }

  const Json& history = result_doc.at("meta_history");
  ctx.out << "tasks=" << p.tasks.size() << " rounds=" << history.size() << " best_meta_score=" << result_doc.at("best_meta_score").get<std::string>()
          << " (" << to_fixed6(parse_rational(result_doc.at("best_meta_score").get<std::string>())) << ")"
          << " best_blueprint=" << blueprint_digest(result_doc.at("best_blueprint").get<Blueprint>()) << " dir=" << p.dir.string() << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& config, CommandContext& ctx) {
  Prepared p = prepare(config);
  const Blueprint& b = p.blueprint.blueprint;
  open_run_dir(p.dir);
  DirectoryLock lock(p.dir);
  if (lock.held_elsewhere()) {
    log(ctx, LogLevel::error, "run directory " + p.dir.string() + " is locked by another process");
    return kExitLocked;
  }
  fs::remove(p.dir / "DONE");
  MetaTestReport report = meta_test_report(b, p.blueprint.train_task_ids, p.tasks, b.loop.K, config.seed, p.threshold,
                                           config.parallelism.value_or(b.loop.parallelism));
  for (std::size_t i = 0; i < report.task_ids.size(); ++i) {
    const std::string name = safe_component(report.task_ids[i]);
    write_text(p.dir / "logs" / (name + ".log"), report.run_logs[i]);
    write_text(p.dir / "series" / (name + ".tsv"), series_text(report.records[i].best_scalar_by_iteration));
  }
  write_text(p.dir / "report.json", canonical(report.document) + "\n");
  write_text(p.dir / "DONE", "");

  const Json& m = report.document.at("metrics");
  ctx.out << "tasks=" << report.task_ids.size() << " final_performance=" << m.at("final_performance").get<std::string>()
          << " variance=" << m.at("robustness").at("variance").get<std::string>() << " not_reached=" << m.at("robustness").at("not_reached")
          << " dir=" << p.dir.string() << "\n";
  return kExitOk;
}

int cmd_oracle(const RunConfig& config, CommandContext& ctx) {
  Prepared p = prepare(config);
  open_run_dir(p.dir);
  DirectoryLock lock(p.dir);
  if (lock.held_elsewhere()) {
    log(ctx, LogLevel::error, "run directory " + p.dir.string() + " is locked by another process");
    return kExitLocked;
  }
  fs::remove(p.dir / "DONE");
  Json results = Json::array();
  for (const auto& task : p.tasks) {
    auto r = simkit::brute_force_oracle(task, *p.space);
    results.push_back(Json{{"task_id", task.id}, {"index", r.index}, {"harness", r.harness}, {"score", r.score}});
    ctx.out << "task=" << task.id << " index=" << r.index << " score=" << canonical_of(r.score) << "\n";
  }
  write_text(p.dir / "oracle.json", canonical(Json{{"space", p.space->to_json()}, {"results", results}}) + "\n");
  write_text(p.dir / "DONE", "");
  ctx.out << "dir=" << p.dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Conformance

namespace {

struct ConformanceSession {
  std::unique_ptr<Subprocess> process;
  std::chrono::milliseconds timeout{5000};

  std::optional<std::string> exchange(const std::string& line) {
    process->write_line(line);
    return process->read_line(std::chrono::steady_clock::now() + timeout);
  }
};

Json sample_request(AgentRole role) {
  Task task = simkit::bundled_corpus().front();
  Harness harness = simkit::baseline_harness();
  switch (role) {
    case AgentRole::worker: return Json{{"harness", harness}, {"task", task}};
    case AgentRole::evaluator: return Json{{"task", task}, {"trace", simkit::sim_execute(harness, task)}};
    case AgentRole::evolution: {
      Evaluation e = simkit::sim_evaluate(simkit::sim_execute(harness, task), task);
      HistoryEntry entry{1, harness, e.report, e.score, Verdict::improved};
      return Json{{"best", harness}, {"history", Json::array({entry})}, {"seed", 7}, {"task_id", task.id}};
    }
    case AgentRole::meta_evolution:
      return Json{{"best", simkit::default_blueprint(StrategyKind::hill_climb, 4)}, {"meta_history", Json::array()}, {"seed", 7}};
  }
  return Json::object();
}

// Empty string when the response payload is acceptable for the role.
std::string check_payload(AgentRole role, const Json& payload) {
  try {
    switch (role) {
      case AgentRole::worker: {
        auto v = validate_trace(payload.at("trace").get<Trace>());
        return v.ok() ? "" : v.describe();
      }
      case AgentRole::evaluator: {
        auto report = payload.at("report").get<EvaluationReport>();
        auto score = payload.at("score").get<Score>();
        auto v = validate_report(report);
        if (!v.ok()) return v.describe();
        return score == report.score ? "" : "score differs from report.score";
      }
      case AgentRole::evolution:
        if (payload.contains("space_exhausted")) return payload.at("space_exhausted") == true ? "" : "space_exhausted must be true";
        payload.at("harness").get<Harness>();
        return "";
      case AgentRole::meta_evolution:
        if (payload.contains("space_exhausted")) return payload.at("space_exhausted") == true ? "" : "space_exhausted must be true";
        payload.at("blueprint").get<Blueprint>();
        return "";
    }
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

int cmd_conformance(const RunConfig& config, CommandContext& ctx) {
  auto words = split_command(config.agent);
  if (words.empty()) throw Error(ErrorCode::invalid_config, "conformance needs --agent");
  if (config.role.empty()) throw Error(ErrorCode::invalid_config, "conformance needs --role");
  AgentRole role;
  try {
    role = parse_agent_role(config.role);
  } catch (const Error& e) {
    throw Error(ErrorCode::invalid_config, e.detail());
  }
  std::vector<std::string> args(words.begin() + 1, words.end());

  int failures = 0;
  auto report = [&](const std::string& name, const std::string& problem) {
    if (problem.empty()) {
      ctx.out << "PASS " << name << "\n";
    } else {
      ++failures;
      ctx.out << "FAIL " << name << ": " << problem << "\n";
    }
  };

  ConformanceSession s;
  const MessageType req_type = request_type_for(role);
  const MessageType resp_type = response_type_for(req_type);
  auto request_line = [&](std::int64_t seq) {
    ProtocolMessage m;
    m.type = req_type;
    m.seq = seq;
    m.payload = sample_request(role);
    return encode(m);
  };
  // Checks a reply to a well-formed request with the given seq.
  auto check_reply = [&](const std::optional<std::string>& line, std::int64_t seq) -> std::string {
    if (!line) return "no response before the deadline";
    try {
      ProtocolMessage r = decode_message(*line);
      if (r.type != resp_type) return "expected " + std::string(to_string(resp_type)) + ", got " + std::string(to_string(r.type));
      if (r.seq != seq) return "seq " + std::to_string(r.seq) + " does not echo " + std::to_string(seq);
      if (encode(r) != *line) return "response is not in canonical form";
      return check_payload(role, r.payload);
    } catch (const std::exception& e) {
      return e.what();
    }
  };
  auto check_error = [&](const std::optional<std::string>& line, std::optional<std::int64_t> seq) -> std::string {
    if (!line) return "no response before the deadline";
    try {
      ProtocolMessage r = decode_message(*line);
      if (r.type != MessageType::error) return "expected an error response, got " + std::string(to_string(r.type));
      if (seq && r.seq != *seq) return "error response does not echo seq " + std::to_string(*seq);
      return "";
    } catch (const std::exception& e) {
      return e.what();
    }
  };

  try {
    s.process = std::make_unique<Subprocess>(words.front(), args);
    ProtocolMessage hello;
    hello.type = MessageType::hello;
    hello.role = role;
    auto ack = s.exchange(encode(hello));
    std::string problem;
    if (!ack) {
      problem = "no hello_ack before the deadline";
    } else {
      ProtocolMessage expected;
      expected.type = MessageType::hello_ack;
      if (*ack != encode(expected)) problem = "expected " + encode(expected) + ", got " + *ack;
    }
    report("handshake", problem);
    if (!problem.empty()) {
      ctx.out << "conformance: " << failures << " failure(s)\n";
      return kExitConformance;
    }

    report("request_response", check_reply(s.exchange(request_line(1)), 1));
    report("seq_echo_nonconsecutive", check_reply(s.exchange(request_line(41)), 41));
    report("unknown_type_error", check_error(s.exchange(R"({"payload":{},"seq":42,"type":"bogus_req"})"), 42));
    report("malformed_line_error", check_error(s.exchange("this is not json"), std::nullopt));
    {
      MessageType wrong = role == AgentRole::worker ? MessageType::evaluate_req : MessageType::execute_req;
      ProtocolMessage m;
      m.type = wrong;
      m.seq = 43;
      m.payload = sample_request(role == AgentRole::worker ? AgentRole::evaluator : AgentRole::worker);
      report("wrong_role_error", check_error(s.exchange(encode(m)), 43));
    }
    {
      ProtocolMessage m;
      m.type = req_type;
      m.seq = 44;
      m.payload = Json{{"unexpected", true}};
      report("bad_payload_error", check_error(s.exchange(encode(m)), 44));
    }
    report("alive_after_errors", check_reply(s.exchange(request_line(45)), 45));
  } catch (const Error& e) {
    report("session", e.what());
  }
  ctx.out << "conformance: " << failures << " failure(s)\n";
  return failures == 0 ? kExitOk : kExitConformance;
}

// ---------------------------------------------------------------------------

int run_command(const RunConfig& config, CommandContext& ctx) {
  try {
    switch (config.mode) {
      case Mode::inner: return cmd_run_inner(config, ctx);
      case Mode::meta: return cmd_run_meta(config, ctx);
      case Mode::report: return cmd_report(config, ctx);
      case Mode::oracle: return cmd_oracle(config, ctx);
      case Mode::conformance: return cmd_conformance(config, ctx);
    }
  } catch (const Error& e) {
    log(ctx, LogLevel::error, e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    log(ctx, LogLevel::error, std::string("internal error: ") + e.what());
    return kExitIo;
  }
  return kExitIo;
}

}  // namespace hevo
