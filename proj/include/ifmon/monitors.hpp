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

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ifmon/ast.hpp"
#include "ifmon/intervals.hpp"
#include "ifmon/lattice.hpp"
#include "ifmon/pretty.hpp"
#include "ifmon/relform.hpp"
#include "ifmon/semantics.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

enum class MonitorKind { D, M, I };

inline const char *kind_name(MonitorKind k) {
  switch (k) {
  case MonitorKind::D:
    return "d";
  case MonitorKind::M:
    return "m";
  default:
    return "i";
  }
}

inline MonitorKind parse_kind(const std::string &s) {
  if (s == "d" || s == "D")
    return MonitorKind::D;
  if (s == "m" || s == "M")
    return MonitorKind::M;
  if (s == "i" || s == "I")
    return MonitorKind::I;
  throw std::invalid_argument("unknown monitor '" + s + "' (expected d, m or i)");
}

/// Assignment targets anywhere in c.
inline VarSet mod_vars(const Cmd &c) {
  VarSet out;
  if (auto *a = c.as<cmd::Assign>()) {
    out.insert(a->target);
  } else if (auto *s = c.as<cmd::Seq>()) {
    out = mod_vars(s->first);
    out.merge(mod_vars(s->second));
  } else if (auto *i = c.as<cmd::If>()) {
    out = mod_vars(i->then_branch);
    out.merge(mod_vars(i->else_branch));
  } else if (auto *w = c.as<cmd::While>()) {
    out = mod_vars(w->body);
  }
  return out;
}

/// Formulas of D that mention none of `vars`.
inline FormulaSet untouched_by(const FormulaSet &D, const VarSet &vars) {
  if (D.is_fault())
    return D;
  std::set<BasicFormula> out;
  for (const auto &f : D.items()) {
    bool clash = false;
    for (const auto &x : free_vars(f))
      if (vars.count(x)) {
        clash = true;
        break;
      }
    if (!clash)
      out.insert(f);
  }
  return FormulaSet(std::move(out));
}

//
// Reduced product between intervals and relational formulas
//

/// Strengthens an interval environment with what D says about the minor
/// states relative to the major state s.
inline IntervalEnv toint(const IntervalEnv &env, const FormulaSet &D,
                         const State &s) {
  if (D.is_fault())
    return env;
  IntervalEnv out = env;
  for (const auto &f : D.items()) {
    if (!out.is_env())
      break;
    if (auto *a = f.as<formula::Agree>()) {
      Value v;
      try {
        v = eval_expr(a->expr, s);
      } catch (const ArithmeticOverflow &) {
        continue;
      }
      out = guard_int(BoolExpr::equal(a->expr, Expr::constant(v)), out);
    } else if (auto *b = f.as<formula::Both>()) {
      out = guard_int(b->cond, out);
    }
  }
  return out;
}

/// Adds A x for every variable the environment pins to its value in s.
/// The unreachable environment yields the bottom element L.
inline FormulaSet toform(const IntervalEnv &env, const FormulaSet &D,
                         const State &s, const Lattice &L) {
  if (env.is_fault() || D.is_fault())
    return D;
  if (env.is_bottom())
    return FormulaSet(L);
  FormulaSet out = D;
  for (const auto &[x, v] : s.bindings()) {
    const Interval i = env.get(x);
    if (i.is_singleton() && *i.lo() == v)
      out = out.with(BasicFormula::agree_var(x));
  }
  return out;
}

//
// Static transfers used for untaken paths
//

inline FormulaSet static_d(const FormulaSet &D, const Lattice &L) {
  if (D.is_fault())
    return D;
  if (contradictory(D))
    return FormulaSet(L);
  return FormulaSet();
}

/// c is analysed statically while the major state runs c_major.
inline FormulaSet static_m(const Cmd &c, const Cmd &c_major,
                           const FormulaSet &D, const Lattice &L) {
  if (D.is_fault())
    return D;
  if (contradictory(D))
    return FormulaSet(L);
  VarSet mod = mod_vars(c);
  mod.merge(mod_vars(c_major));
  return untouched_by(D, mod);
}

/// c is analysed over intervals from the states related to s by D; the
/// result is read back against s_after, the major state after its own
/// command.
inline FormulaSet static_i(const Cmd &c, const State &s, const State &s_after,
                           const FormulaSet &D, const Lattice &L,
                           IntervalConfig cfg = {}) {
  if (D.is_fault())
    return D;
  if (contradictory(D))
    return FormulaSet(L);
  IntervalEnv env = interval_exec(c, toint(IntervalEnv::top(), D, s), cfg);
  return toform(env, FormulaSet(), s_after, L);
}

//
// Monitors
//

struct TraceEntry {
  std::string event; // step | branch | merge | loop-exit | untaken | violation
  std::string label;
  std::string note; // "low" or "high" for branch points, empty otherwise
  State state;
  FormulaSet formulas;
  std::optional<IntervalEnv> env;
};

struct MonitorOutcome {
  Outcome major;
  std::optional<FormulaSet> formulas; // absent when the budget ran out
  std::vector<TraceEntry> trace;

  bool budget_exhausted() const { return !formulas.has_value(); }
  bool fault() const { return formulas && formulas->is_fault(); }
};

struct MonitorOptions {
  Fuel fuel{};
  IntervalConfig intervals{};
  bool trace = true;
};

namespace detail {

class AbstractMonitor {
public:
  AbstractMonitor(MonitorKind kind, const Lattice &L, const MonitorOptions &o)
      : kind_(kind), lattice_(L), opts_(o), fuel_(o.fuel) {}

  std::pair<State, FormulaSet> step(const Cmd &c, const State &s,
                                    const FormulaSet &D) {
    if (D.is_fault())
      return {run_with(c, s, fuel_), D};
    if (auto *q = c.as<cmd::Seq>()) {
      auto [s1, D1] = step(q->first, s, D);
      return step(q->second, s1, D1);
    }
    if (auto *i = c.as<cmd::If>())
      return conditional(c, *i, s, D);
    if (auto *w = c.as<cmd::While>())
      return loop(*w, s, D);

    State s1 = s;
    FormulaSet out = D;
    if (auto *a = c.as<cmd::Assign>()) {
      const bool agreed = entails(D, BasicFormula::agree(a->value));
      out = untouched_by(D, VarSet{a->target});
      if (agreed)
        out = out.with(BasicFormula::agree_var(a->target));
      s1 = s.with(a->target, eval_expr(a->value, s));
    } else if (auto *as = c.as<cmd::Assume>()) {
      out = fs_meet(D, to_formula_set(as->formula));
    } else if (auto *at = c.as<cmd::Assert>()) {
      if (entails(D, at->formula)) {
        out = fs_meet(D, to_formula_set(at->formula));
      } else {
        out = FormulaSet::fault();
        record("violation", headline(c), "", s1, out);
      }
    }
    record("step", headline(c), "", s1, out);
    return {s1, out};
  }

  std::vector<TraceEntry> take_trace() { return std::move(trace_); }
  FuelGauge &fuel() { return fuel_; }

private:
  void record(const char *event, std::string label, std::string note,
              const State &s, const FormulaSet &D,
              std::optional<IntervalEnv> env = std::nullopt) {
    if (opts_.trace)
      trace_.push_back(
          {event, std::move(label), std::move(note), s, D, std::move(env)});
  }

  bool low(const FormulaSet &D, const BoolExpr &b) const {
    return entails(D, BasicFormula::agree(Expr::embed(b)));
  }

  std::pair<State, FormulaSet> conditional(const Cmd &c, const cmd::If &i,
                                           const State &s,
                                           const FormulaSet &D) {
    const bool go_then = eval_bool(i.cond, s);
    const BoolExpr taken_guard = go_then ? i.cond : negate(i.cond);
    const Cmd &taken = go_then ? i.then_branch : i.else_branch;
    const Cmd &other = go_then ? i.else_branch : i.then_branch;
    const bool is_low = low(D, i.cond);
    const std::string label = headline(c);
    const char *note = is_low ? "low" : "high";

    FormulaSet entry = D.with(BasicFormula::both(taken_guard));
    record("branch", label + (go_then ? " [then]" : " [else]"), note, s, entry);
    auto [s1, R] = step(taken, s, entry);

    FormulaSet out = R;
    if (!is_low) {
      switch (kind_) {
      case MonitorKind::D:
        // Only the fault element survives a high merge.
        out = R.is_fault() ? R : FormulaSet();
        break;
      case MonitorKind::M: {
        VarSet mod = mod_vars(i.then_branch);
        mod.merge(mod_vars(i.else_branch));
        out = fs_join(R, untouched_by(D, mod));
        break;
      }
      case MonitorKind::I:
        out = fs_join(R, untaken_intervals(other, negate(taken_guard), s, s1,
                                           D, go_then ? "[else]" : "[then]",
                                           label));
        break;
      }
    }
    record("merge", label, note, s1, out);
    return {s1, out};
  }

  FormulaSet untaken_intervals(const Cmd &other, const BoolExpr &other_guard,
                               const State &s, const State &s_after,
                               const FormulaSet &D, const char *side,
                               const std::string &label) {
    IntervalEnv start =
        guard_int(other_guard, toint(IntervalEnv::top(), D, s));
    const std::string where = label + " " + side;
    record("untaken", where + " entry", "", s, D, start);
    IntervalObserver obs;
    if (opts_.trace)
      obs = [&](const Cmd &cmd, const IntervalEnv &env) {
        record("untaken", where + " " + headline(cmd), "", s, D, env);
      };
    IntervalEnv end = interval_exec(other, start, opts_.intervals, obs);
    return toform(end, FormulaSet(), s_after, lattice_);
  }

  std::pair<State, FormulaSet> loop(const cmd::While &w, const State &s,
                                    const FormulaSet &D) {
    const Cmd one = Cmd::if_then_else(w.cond, w.body, Cmd::skip());
    State cur = s;
    FormulaSet acc = D;
    while (eval_bool(w.cond, cur)) {
      fuel_.consume();
      auto [s1, D1] = step(one, cur, acc);
      cur = std::move(s1);
      acc = std::move(D1);
    }
    const std::string label = "while " + pretty(w.cond);
    if (acc.is_fault()) {
      record("loop-exit", label, "", cur, acc);
      return {cur, acc};
    }
    const BasicFormula exit_guard = BasicFormula::both(negate(w.cond));
    const bool is_low = low(acc, w.cond);
    FormulaSet out;
    if (is_low) {
      out = acc.with(exit_guard);
    } else {
      switch (kind_) {
      case MonitorKind::D:
        out = FormulaSet{exit_guard};
        break;
      case MonitorKind::M:
        out = untouched_by(acc, mod_vars(w.body)).with(exit_guard);
        break;
      case MonitorKind::I: {
        const Cmd whole = Cmd::while_do(w.cond, w.body);
        IntervalEnv env = interval_exec(
            whole, toint(IntervalEnv::top(), acc, cur), opts_.intervals);
        out = fs_join(acc, toform(env, FormulaSet(), cur, lattice_))
                  .with(exit_guard);
        break;
      }
      }
    }
    record("loop-exit", label, is_low ? "low" : "high", cur, out);
    return {cur, out};
  }

  MonitorKind kind_;
  const Lattice &lattice_;
  MonitorOptions opts_;
  FuelGauge fuel_;
  std::vector<TraceEntry> trace_;
};

} // namespace detail

/// Runs one of the abstract monitors alongside the major execution.
inline MonitorOutcome monitor(MonitorKind kind, const Cmd &c, const State &s,
                              const FormulaSet &D, const Lattice &L,
                              const MonitorOptions &opts = {}) {
  detail::AbstractMonitor m(kind, L, opts);
  MonitorOutcome out;
  try {
    auto [s1, R] = m.step(c, s, D);
    out.major = Outcome::terminated(std::move(s1));
    out.formulas = std::move(R);
  } catch (const BudgetExhausted &) {
    out.major = Outcome::exhausted();
  }
  out.trace = m.take_trace();
  return out;
}

} // namespace ifmon
