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

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ifmon/ideal.hpp"
#include "ifmon/intervals.hpp"
#include "ifmon/monitors.hpp"
#include "ifmon/oracle.hpp"
#include "ifmon/relform.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json to_json(const State &s) {
  Json out = Json::object();
  for (const auto &[x, v] : s.bindings())
    out[x] = v;
  return out;
}

inline Json to_json(const std::optional<State> &s) {
  return s ? to_json(*s) : Json(nullptr);
}

/// A formula set is an array of formulas in concrete syntax, or "fault".
inline Json to_json(const FormulaSet &D) {
  if (D.is_fault())
    return "fault";
  Json out = Json::array();
  for (const auto &f : D.items())
    out.push_back(pretty(f));
  return out;
}

inline Json to_json(const StateSet &S) {
  if (S.is_fault())
    return "fault";
  Json out = Json::array();
  for (const auto &s : S.states())
    out.push_back(to_json(s));
  return out;
}

/// Bounds of `vars` as "[lo, hi]" strings, or "bottom" / "fault".
inline Json to_json(const IntervalEnv &env, const VarSet &vars) {
  if (env.is_bottom())
    return "bottom";
  if (env.is_fault())
    return "fault";
  VarSet all = vars;
  for (const auto &kv : env.bounds())
    all.insert(kv.first);
  Json out = Json::object();
  for (const auto &x : all)
    out[x] = env.get(x).to_string();
  return out;
}

inline const char *verdict_name(const MonitorOutcome &o) {
  if (o.budget_exhausted())
    return "budget-exhausted";
  return o.fault() ? "fault" : "pass";
}

inline Json trace_json(const std::vector<TraceEntry> &trace) {
  Json out = Json::array();
  for (const auto &t : trace) {
    Json e = Json::object();
    e["event"] = t.event;
    e["label"] = t.label;
    if (!t.note.empty())
      e["note"] = t.note;
    e["state"] = to_json(t.state);
    e["formulas"] = to_json(t.formulas);
    if (t.env)
      e["intervals"] = to_json(*t.env, t.state.domain());
    out.push_back(std::move(e));
  }
  return out;
}

/// The outcome of one monitored run, without trace or timing.
inline Json outcome_json(const MonitorOutcome &o) {
  Json out = Json::object();
  out["verdict"] = verdict_name(o);
  out["final_state"] = to_json(o.major.state);
  out["formulas"] = o.formulas ? to_json(*o.formulas) : Json(nullptr);
  return out;
}

inline Json suite_json(const SuiteReport &r, bool timing) {
  Json cfg = Json::object();
  cfg["vars"] = r.config.vars;
  cfg["range"] = {r.config.lo, r.config.hi};
  cfg["depth"] = r.config.depth;
  cfg["samples"] = r.config.samples;
  cfg["seed"] = r.config.seed;
  cfg["fuel"] = r.config.fuel.max_steps;
  cfg["widen_after"] = r.config.widen_after;

  Json out = Json::object();
  out["schema_version"] = kSchemaVersion;
  out["command"] = "oracle";
  out["suite"] = r.suite;
  out["verdict"] = r.passed() ? "pass" : "fail";
  out["config"] = std::move(cfg);
  out["units"] = r.units;
  out["checks"] = r.checks;
  out["skipped"] = {{"budget", r.skipped_budget},
                    {"overflow", r.skipped_overflow}};
  out["violations"] = r.violations;
  Json stats = Json::object();
  for (const auto &[k, v] : r.stats)
    stats[k] = v;
  out["stats"] = std::move(stats);
  Json cxs = Json::array();
  for (const auto &cx : r.counterexamples) {
    Json c = Json::object();
    c["unit"] = cx.unit;
    c["property"] = cx.property;
    for (const auto &[k, v] : cx.fields)
      c[k] = v;
    cxs.push_back(std::move(c));
  }
  out["counterexamples"] = std::move(cxs);
  if (timing)
    out["timing"] = {{"seconds", r.seconds}};
  return out;
}

/// Fixed-width table rendered from a compare report.
inline std::string compare_table(const Json &report) {
  std::ostringstream os;
  os << std::left << std::setw(9) << "monitor" << std::setw(18) << "verdict"
     << "formulas\n";
  for (const auto &[kind, entry] : report.at("monitors").items()) {
    std::string formulas;
    const Json &f = entry.at("formulas");
    if (f.is_string()) {
      formulas = f.get<std::string>();
    } else if (f.is_null()) {
      formulas = "-";
    } else {
      formulas = "{";
      bool first = true;
      for (const auto &x : f) {
        if (!first)
          formulas += ", ";
        first = false;
        formulas += x.get<std::string>();
      }
      formulas += "}";
    }
    os << std::setw(9) << kind << std::setw(18)
       << entry.at("verdict").get<std::string>() << formulas << "\n";
  }
  return os.str();
}

} // namespace ifmon
