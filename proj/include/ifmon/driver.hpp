/*
 * Copyright (c) 2026, The ifmon authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifmon/ast.hpp"
#include "ifmon/ideal.hpp"
#include "ifmon/lattice.hpp"
#include "ifmon/monitors.hpp"
#include "ifmon/oracle.hpp"
#include "ifmon/parser.hpp"
#include "ifmon/report.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  exit_pass = 0,
  exit_fault = 1,
  exit_budget = 2,
  exit_usage = 3,
  exit_runtime = 4, // arithmetic overflow in the monitored program
};

/// Bad input: unreadable file, syntax error, malformed state or option.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct CommandResult {
  Json report;
  int exit_code = exit_pass;
};

struct RunRequest {
  std::string program_path;
  MonitorKind kind = MonitorKind::D;
  std::string state;      // name=value,...
  std::string state_file; // one name=value per line
  std::string delta;      // initial formula set, comma separated
  std::uint64_t fuel = Fuel{}.max_steps;
  unsigned widen_after = IntervalConfig{}.widen_after;
  bool trace = false;
  bool timing = false;
};

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline Cmd load_program(const std::string &path) {
  const std::string text = read_file(path);
  try {
    return parse_program(text);
  } catch (const ParseError &e) {
    throw UsageError(path + ":" + e.what());
  }
}

/// The initial state: the state file first, then `--state` on top. Every
/// program variable is bound; missing ones default to 0. Extra names are
/// kept as variables the program never reads.
inline State load_state(const Cmd &c, const RunRequest &req) {
  std::vector<State::Binding> given;
  try {
    if (!req.state_file.empty())
      given = parse_state_file(read_file(req.state_file));
    auto more = parse_bindings(req.state);
    given.insert(given.end(), more.begin(), more.end());
  } catch (const StateSyntaxError &e) {
    throw UsageError(std::string("invalid state: ") + e.what());
  }
  VarSet domain = program_vars(c);
  for (const auto &b : given)
    domain.insert(b.first);
  // Later bindings win.
  std::vector<State::Binding> last;
  for (auto it = given.rbegin(); it != given.rend(); ++it) {
    bool seen = false;
    for (const auto &b : last)
      seen = seen || b.first == it->first;
    if (!seen)
      last.push_back(*it);
  }
  return State::over(domain, last);
}

inline FormulaSet load_delta(const std::string &text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    return FormulaSet();
  try {
    return to_formula_set(parse_formula(text));
  } catch (const ParseError &e) {
    throw UsageError(std::string("invalid formula set: ") + e.what());
  }
}

/// L for a run: the program's lattice extended by the initial formulas
/// and every variable of the initial state.
inline Lattice run_lattice(const Cmd &c, const FormulaSet &D, const State &s) {
  Cmd scope = c;
  if (!D.is_fault() && !D.items().empty())
    scope = Cmd::seq(Cmd::assume(Formula(D.items().begin(), D.items().end())),
                     c);
  return collect_lattice(scope, s.domain());
}

inline void check_limits(std::uint64_t fuel, unsigned widen_after) {
  if (fuel < 1)
    throw UsageError("--fuel must be at least 1");
  if (widen_after < 1)
    throw UsageError("--widen-after must be at least 1");
}

inline int exit_for(const MonitorOutcome &o) {
  if (o.budget_exhausted())
    return exit_budget;
  return o.fault() ? exit_fault : exit_pass;
}

inline CommandResult cmd_run(const RunRequest &req) {
  check_limits(req.fuel, req.widen_after);
  const Cmd c = load_program(req.program_path);
  const State s = load_state(c, req);
  const FormulaSet D = load_delta(req.delta);
  const Lattice L = run_lattice(c, D, s);

  MonitorOptions opts;
  opts.fuel = Fuel{req.fuel};
  opts.intervals.widen_after = req.widen_after;
  opts.trace = req.trace;
  const auto start = std::chrono::steady_clock::now();
  const MonitorOutcome o = monitor(req.kind, c, s, D, L, opts);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  Json out = Json::object();
  out["schema_version"] = kSchemaVersion;
  out["command"] = "run";
  out["program"] = req.program_path;
  out["monitor"] = kind_name(req.kind);
  out["initial_state"] = to_json(s);
  out["initial_formulas"] = to_json(D);
  const Json outcome = outcome_json(o);
  for (const auto &[k, v] : outcome.items())
    out[k] = v;
  if (req.trace)
    out["trace"] = trace_json(o.trace);
  if (req.timing)
    out["timing"] = {{"seconds", seconds}};
  return {std::move(out), exit_for(o)};
}

/// Runs the three monitors on identical inputs. The exit code is 0 unless
/// the input is unusable.
inline CommandResult cmd_compare(const RunRequest &req) {
  check_limits(req.fuel, req.widen_after);
  const Cmd c = load_program(req.program_path);
  const State s = load_state(c, req);
  const FormulaSet D = load_delta(req.delta);
  const Lattice L = run_lattice(c, D, s);

  MonitorOptions opts;
  opts.fuel = Fuel{req.fuel};
  opts.intervals.widen_after = req.widen_after;
  opts.trace = false;

  Json out = Json::object();
  out["schema_version"] = kSchemaVersion;
  out["command"] = "compare";
  out["program"] = req.program_path;
  out["initial_state"] = to_json(s);
  out["initial_formulas"] = to_json(D);
  Json mons = Json::object();
  for (MonitorKind k : {MonitorKind::D, MonitorKind::M, MonitorKind::I})
    mons[kind_name(k)] = outcome_json(monitor(k, c, s, D, L, opts));
  out["monitors"] = std::move(mons);
  return {std::move(out), exit_pass};
}

struct IdealRequest {
  RunRequest run;
  std::string tracking; // "x=0,y=1; x=1,y=1" or empty for gamma(delta)
  Value lo = 0;
  Value hi = 2;
};

inline StateSet parse_tracking(const std::string &text, const VarSet &domain) {
  std::size_t start = 0;
  std::set<State> states;
  while (start <= text.size()) {
    auto semi = text.find(';', start);
    std::string item = text.substr(start, semi == std::string::npos
                                              ? std::string::npos
                                              : semi - start);
    if (item.find_first_not_of(" \t") != std::string::npos) {
      try {
        states.insert(State::over(domain, parse_bindings(item)));
      } catch (const std::exception &e) {
        throw UsageError(std::string("invalid tracking state: ") + e.what());
      }
    }
    if (semi == std::string::npos)
      break;
    start = semi + 1;
  }
  return StateSet(std::move(states));
}

/// Replays the ideal monitor. The tracking set is given explicitly, or is
/// the set of states over [lo, hi] related to the initial state by the
/// initial formulas.
inline CommandResult cmd_ideal(const IdealRequest &req) {
  check_limits(req.run.fuel, req.run.widen_after);
  if (req.hi < req.lo)
    throw UsageError("empty value range");
  const Cmd c = load_program(req.run.program_path);
  const State s = load_state(c, req.run);
  const FormulaSet D = load_delta(req.run.delta);
  const Lattice L = run_lattice(c, D, s);
  const StateSet S =
      req.tracking.empty()
          ? gamma(s, D, universe(s.domain(), req.lo, req.hi))
          : parse_tracking(req.tracking, s.domain());
  const IdealResult r = ideal_monitor(c, s, S, Fuel{req.run.fuel});

  Json out = Json::object();
  out["schema_version"] = kSchemaVersion;
  out["command"] = "ideal";
  out["program"] = req.run.program_path;
  out["initial_state"] = to_json(s);
  out["initial_tracking"] = to_json(S);
  int code = exit_pass;
  if (r.indeterminate()) {
    out["verdict"] = "budget-exhausted";
    code = exit_budget;
  } else {
    out["verdict"] = r.fault() ? "fault" : "pass";
    code = r.fault() ? exit_fault : exit_pass;
  }
  out["final_state"] = to_json(r.major.state);
  out["tracking"] = r.tracking ? to_json(*r.tracking) : Json(nullptr);
  out["formulas"] = r.tracking && r.major.state
                        ? to_json(alpha(*r.major.state, *r.tracking, L))
                        : Json(nullptr);
  return {std::move(out), code};
}

inline CommandResult cmd_oracle(const std::string &suite,
                                const OracleConfig &cfg, bool timing) {
  try {
    const SuiteReport r = run_suite(suite, cfg);
    return {suite_json(r, timing), r.passed() ? exit_pass : exit_fault};
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
}

/// Parses `LO..HI`.
inline std::pair<Value, Value> parse_range(const std::string &text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos)
    throw UsageError("range must look like LO..HI, got '" + text + "'");
  try {
    std::size_t n1 = 0, n2 = 0;
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const Value lo = std::stoll(a, &n1), hi = std::stoll(b, &n2);
    if (n1 != a.size() || n2 != b.size())
      throw std::invalid_argument("trailing characters");
    if (hi < lo)
      throw UsageError("empty range '" + text + "'");
    return {lo, hi};
  } catch (const std::logic_error &) {
    throw UsageError("range must look like LO..HI, got '" + text + "'");
  }
}

} // namespace ifmon
