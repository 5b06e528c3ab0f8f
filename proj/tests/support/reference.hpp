#pragma once

// Reference StringForge model written from the environment's definition,
// sharing no code with the engine: its own tool table, edit distance,
// planner, replay check and score ordering. Engine types appear only as
// inputs and outputs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <boost/rational.hpp>

#include "hevo/model.hpp"

namespace ref {

using Q = boost::rational<std::int64_t>;

inline const std::map<std::string, std::function<std::string(const std::string&)>>& tools() {
  static const std::map<std::string, std::function<std::string(const std::string&)>> table = {
      {"append_a", [](const std::string& s) { return s + "a"; }},
      {"append_b", [](const std::string& s) { return s + "b"; }},
      {"drop_last", [](const std::string& s) { return s.empty() ? s : s.substr(0, s.size() - 1); }},
      {"reverse", [](const std::string& s) { return std::string(s.rbegin(), s.rend()); }},
      {"swapcase",
       [](const std::string& s) {
         std::string out;
         for (char c : s) {
           if (c >= 'a' && c <= 'z') {
             out += static_cast<char>(c - 'a' + 'A');
           } else if (c >= 'A' && c <= 'Z') {
             out += static_cast<char>(c - 'A' + 'a');
           } else {
             out += c;
           }
         }
         return out;
       }},
  };
  return table;
}

inline std::string step(const std::string& tool, const std::string& state) { return tools().at(tool)(state); }

// Memoized recursion on suffixes.
inline std::size_t distance(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = std::min(go(i + 1, j) + 1, go(i, j + 1) + 1);
    best = std::min(best, go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1));
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

struct Config {
  std::vector<std::string> tools;
  std::int64_t depth = 1;
  bool smart = false;
  bool verbose = false;
  std::int64_t max_steps = 8;
};

struct Run {
  std::vector<std::string> actions;
  std::vector<std::string> observations;
  std::int64_t llm_ms = 0;
  std::int64_t tool_ms = 0;
  std::string final_state;
};

// All sequences of length 1..depth, sorted lexicographically; the first of
// minimal resulting distance wins.
inline std::string choose(const Config& c, const std::string& state, const std::string& target) {
  std::vector<std::vector<std::string>> seqs{{}};
  std::vector<std::vector<std::string>> all;
  const std::int64_t depth = c.smart ? c.depth : 1;
  for (std::int64_t len = 1; len <= depth; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& s : seqs) {
      for (const auto& t : c.tools) {
        auto e = s;
        e.push_back(t);
        next.push_back(e);
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    seqs = next;
  }
  std::sort(all.begin(), all.end());
  std::optional<std::pair<std::size_t, std::vector<std::string>>> best;
  for (const auto& s : all) {
    std::string x = state;
    for (const auto& t : s) x = step(t, x);
    std::size_t d = distance(x, target);
    if (!best || d < best->first) best = std::make_pair(d, s);
  }
  return best->second.front();
}

inline Run simulate(const Config& c, const std::string& start, const std::string& target) {
  Run r;
  std::string state = start;
  const std::int64_t llm = (c.smart ? 20 : 5) + (c.verbose ? 2 : 0);
  while (state != target && static_cast<std::int64_t>(r.actions.size()) < c.max_steps) {
    std::string t = choose(c, state, target);
    state = step(t, state);
    r.actions.push_back(t);
    r.observations.push_back(state);
    r.llm_ms += llm;
    r.tool_ms += 3;
  }
  r.final_state = state;
  return r;
}

// (passed, fraction, time)
struct Outcome {
  bool passed = false;
  Q fraction{0};
  std::int64_t time_ms = 0;
  bool verified = true;
  std::optional<std::int64_t> divergence;
};

// Replays the actions of a trace, compares observations, then grades the two
// standard criteria (reach target, step budget) on the replayed state.
inline Outcome grade(const std::vector<std::string>& actions, const std::vector<std::string>& observations,
                     const std::string& claimed_final, const std::string& start, const std::string& target, std::int64_t budget,
                     std::int64_t time_ms, bool strict = true) {
  Outcome o;
  std::string state = start;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    state = step(actions[i], state);
    if (o.verified && observations[i] != state) {
      o.verified = false;
      o.divergence = static_cast<std::int64_t>(i + 1);
    }
  }
  if (strict && o.verified && claimed_final != state) {
    o.verified = false;
    o.divergence = static_cast<std::int64_t>(actions.size() + 1);
  }
  int ok = (state == target ? 1 : 0) + (static_cast<std::int64_t>(actions.size()) <= budget ? 1 : 0);
  o.fraction = o.verified ? Q(ok, 2) : Q(ok, 3);
  o.passed = o.verified && ok == 2;
  o.time_ms = time_ms;
  return o;
}

inline Outcome grade(const hevo::Trace& t, const hevo::Task& task, bool strict = true) {
  std::vector<std::string> actions, observations;
  for (const auto& s : t.steps) {
    actions.push_back(s.action.name);
    observations.push_back(s.observation);
  }
  return grade(actions, observations, t.claimed_final_state, task.start, task.target, task.max_steps,
               t.totals.llm_time_ms + t.totals.tool_time_ms, strict);
}

// Larger key is better.
inline std::tuple<bool, Q, std::int64_t> key(const Outcome& o) { return {o.passed, o.fraction, -o.time_ms}; }

// Enumeration of a harness grid: mask ascending, then depth, tier, style.
inline std::vector<Config> enumerate(const std::vector<std::string>& space_tools, std::int64_t max_steps = 8) {
  std::vector<Config> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << space_tools.size()); ++mask) {
    for (std::int64_t depth = 1; depth <= 3; ++depth) {
      for (bool smart : {false, true}) {
        for (bool verbose : {false, true}) {
          Config c;
          for (std::size_t i = 0; i < space_tools.size(); ++i) {
            if (mask & (std::size_t{1} << i)) c.tools.push_back(space_tools[i]);
          }
          std::sort(c.tools.begin(), c.tools.end());
          c.depth = depth;
          c.smart = smart;
          c.verbose = verbose;
          c.max_steps = max_steps;
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

inline const std::vector<std::string>& restricted_tools() {
  static const std::vector<std::string> t{"append_a", "append_b", "drop_last"};
  return t;
}

inline const std::vector<std::string>& full_tools() {
  static const std::vector<std::string> t{"append_a", "append_b", "drop_last", "reverse", "swapcase"};
  return t;
}

struct OracleAnswer {
  std::size_t index = 0;
  Outcome outcome;
};

inline Outcome run_and_grade(const Config& c, const hevo::Task& task) {
  Run r = simulate(c, task.start, task.target);
  return grade(r.actions, r.observations, r.final_state, task.start, task.target, task.max_steps, r.llm_ms + r.tool_ms);
}

inline OracleAnswer oracle(const hevo::Task& task, const std::vector<std::string>& space_tools) {
  auto configs = enumerate(space_tools);
  OracleAnswer best;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    Outcome o = run_and_grade(configs[i], task);
    if (i == 0 || key(o) > key(best.outcome)) best = {i, o};
  }
  return best;
}

inline Q scalar(bool passed, Q fraction, std::int64_t time_ms, std::int64_t budget) {
  Q bonus{0};
  if (passed) {
    bonus = Q(1) - Q(time_ms, budget);
    if (bonus < Q(0)) bonus = Q(0);
  }
  return Q(9, 10) * fraction + Q(1, 10) * bonus;
}

inline Q scalar(const Outcome& o, std::int64_t budget) { return scalar(o.passed, o.fraction, o.time_ms, budget); }

}  // namespace ref
