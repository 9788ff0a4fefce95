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
#include <utility>

#include "ifmon/ast.hpp"
#include "ifmon/relform.hpp"
#include "ifmon/semantics.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

/// Major outcome paired with the tracking set. When the major run runs out
/// of fuel the tracking set is indeterminate and left empty.
struct IdealResult {
  Outcome major;
  std::optional<StateSet> tracking;

  bool indeterminate() const { return !tracking.has_value(); }
  bool fault() const { return tracking && tracking->is_fault(); }
};

namespace detail {

using Step = std::pair<State, StateSet>;

inline StateSet assume_filter(const Formula &f, const State &s,
                              const StateSet &S) {
  std::set<State> out;
  for (const auto &t : S.states())
    if (holds(f, s, t))
      out.insert(t);
  return StateSet(std::move(out));
}

inline bool all_hold(const Formula &f, const State &s, const StateSet &S) {
  for (const auto &t : S.states())
    if (!holds(f, s, t))
      return false;
  return true;
}

inline Step ideal_step(const Cmd &c, const State &s, const StateSet &S,
                       FuelGauge &fuel) {
  if (S.is_fault())
    return {run_with(c, s, fuel), S};
  if (auto *a = c.as<cmd::Assign>()) {
    std::set<State> out;
    for (const auto &t : S.states())
      out.insert(t.with(a->target, eval_expr(a->value, t)));
    return {s.with(a->target, eval_expr(a->value, s)),
            StateSet(std::move(out))};
  }
  if (auto *q = c.as<cmd::Seq>()) {
    auto [s1, S1] = ideal_step(q->first, s, S, fuel);
    return ideal_step(q->second, s1, S1, fuel);
  }
  if (auto *i = c.as<cmd::If>()) {
    const BoolExpr nb = negate(i->cond);
    if (eval_bool(i->cond, s)) {
      auto [s1, T] = ideal_step(i->then_branch, s, guard(i->cond, S), fuel);
      return {s1, join(T, collecting_with(i->else_branch, guard(nb, S), fuel))};
    }
    auto [s1, T] = ideal_step(i->else_branch, s, guard(nb, S), fuel);
    return {s1, join(collecting_with(i->then_branch, guard(i->cond, S), fuel),
                     T)};
  }
  if (auto *w = c.as<cmd::While>()) {
    // One monitored `if b then body else skip` per major iteration; at the
    // major exit the remaining minor states finish via the collecting
    // semantics of the whole loop.
    const Cmd step = Cmd::if_then_else(w->cond, w->body, Cmd::skip());
    State cur = s;
    StateSet T = S;
    while (eval_bool(w->cond, cur)) {
      fuel.consume();
      auto [s1, T1] = ideal_step(step, cur, T, fuel);
      cur = std::move(s1);
      T = std::move(T1);
    }
    return {cur, collecting_with(c, T, fuel)};
  }
  if (auto *as = c.as<cmd::Assume>())
    return {s, assume_filter(as->formula, s, S)};
  if (auto *at = c.as<cmd::Assert>())
    return {s, all_hold(at->formula, s, S) ? S : StateSet::fault()};
  return {s, S};
}

//
// Alternative collecting semantics: annotations are forbidden when the
// flag is false and produce the fault element.
//

inline StateSet collect_alt(const Cmd &c, const StateSet &S, bool allowed,
                            FuelGauge &fuel);

inline StateSet collect_alt_while(const cmd::While &w, const StateSet &S,
                                  bool allowed, FuelGauge &fuel) {
  std::set<State> acc;
  std::set<State> frontier = S.states();
  while (!frontier.empty()) {
    fuel.consume();
    acc.insert(frontier.begin(), frontier.end());
    std::set<State> entering;
    for (const auto &t : frontier)
      if (eval_bool(w.cond, t))
        entering.insert(t);
    StateSet stepped =
        collect_alt(w.body, StateSet(std::move(entering)), allowed, fuel);
    if (stepped.is_fault())
      return stepped;
    std::set<State> next;
    for (const auto &t : stepped.states())
      if (!acc.count(t))
        next.insert(t);
    frontier = std::move(next);
  }
  std::set<State> out;
  for (const auto &t : acc)
    if (!eval_bool(w.cond, t))
      out.insert(t);
  return StateSet(std::move(out));
}

inline StateSet collect_alt(const Cmd &c, const StateSet &S, bool allowed,
                            FuelGauge &fuel) {
  if (S.is_fault())
    return S;
  if (c.as<cmd::Assume>() || c.as<cmd::Assert>())
    return allowed ? S : StateSet::fault();
  if (auto *q = c.as<cmd::Seq>())
    return collect_alt(q->second, collect_alt(q->first, S, allowed, fuel),
                       allowed, fuel);
  if (auto *i = c.as<cmd::If>())
    return join(
        collect_alt(i->then_branch, guard(i->cond, S), allowed, fuel),
        collect_alt(i->else_branch, guard(negate(i->cond), S), allowed, fuel));
  if (auto *w = c.as<cmd::While>()) {
    // The loop body is always analysed, even from an empty set, so that a
    // forbidden annotation is reported whether or not a state reaches it.
    if (!allowed && has_annotations(w->body))
      return StateSet::fault();
    return collect_alt_while(*w, S, allowed, fuel);
  }
  return collect(c, S, fuel);
}

inline Step ideal_alt_step(const Cmd &c, const State &s, const StateSet &S,
                           bool allowed, FuelGauge &fuel) {
  if (S.is_fault())
    return {run_with(c, s, fuel), S};
  if (auto *q = c.as<cmd::Seq>()) {
    auto [s1, S1] = ideal_alt_step(q->first, s, S, allowed, fuel);
    return ideal_alt_step(q->second, s1, S1, allowed, fuel);
  }
  if (auto *i = c.as<cmd::If>()) {
    const BoolExpr nb = negate(i->cond);
    const StateSet taken_in =
        eval_bool(i->cond, s) ? guard(i->cond, S) : guard(nb, S);
    const StateSet other_in =
        eval_bool(i->cond, s) ? guard(nb, S) : guard(i->cond, S);
    const bool flag = allowed && other_in.empty();
    if (eval_bool(i->cond, s)) {
      auto [s1, T] = ideal_alt_step(i->then_branch, s, taken_in, flag, fuel);
      return {s1, join(T, collect_alt(i->else_branch, other_in, flag, fuel))};
    }
    auto [s1, T] = ideal_alt_step(i->else_branch, s, taken_in, flag, fuel);
    return {s1, join(collect_alt(i->then_branch, other_in, flag, fuel), T)};
  }
  if (auto *w = c.as<cmd::While>()) {
    const Cmd step = Cmd::if_then_else(w->cond, w->body, Cmd::skip());
    State cur = s;
    StateSet T = S;
    while (eval_bool(w->cond, cur)) {
      fuel.consume();
      auto [s1, T1] = ideal_alt_step(step, cur, T, allowed, fuel);
      cur = std::move(s1);
      T = std::move(T1);
    }
    return {cur, collect_alt(c, T, allowed, fuel)};
  }
  if ((c.as<cmd::Assume>() || c.as<cmd::Assert>()) && !allowed)
    return {s, StateSet::fault()};
  return ideal_step(c, s, S, fuel);
}

template <typename F> IdealResult run_ideal(Fuel fuel, F &&body) {
  FuelGauge gauge(fuel);
  try {
    auto [s1, T] = body(gauge);
    return IdealResult{Outcome::terminated(std::move(s1)), std::move(T)};
  } catch (const BudgetExhausted &) {
    return IdealResult{Outcome::exhausted(), std::nullopt};
  }
}

} // namespace detail

/// The ideal monitor over an explicit tracking set.
inline IdealResult ideal_monitor(const Cmd &c, const State &s,
                                 const StateSet &S, Fuel fuel = {}) {
  return detail::run_ideal(fuel, [&](FuelGauge &g) {
    return detail::ideal_step(c, s, S, g);
  });
}

/// The variant in which annotations are only permitted while no minor
/// state has left the major control path.
inline IdealResult ideal_monitor_alt(const Cmd &c, const State &s,
                                     const StateSet &S, bool allowed = true,
                                     Fuel fuel = {}) {
  return detail::run_ideal(fuel, [&](FuelGauge &g) {
    return detail::ideal_alt_step(c, s, S, allowed, g);
  });
}

//
// Termination-insensitive noninterference
//

struct PolicySpec {
  VarSet in_vars;
  VarSet out_vars;
};

/// Value domain [lo, hi] used to enumerate alternative initial states.
struct ValueRange {
  Value lo = 0;
  Value hi = 2;
};

/// True iff every terminating run from a state agreeing with s1 on the
/// inputs ends agreeing with the run from s1 on the outputs. Throws
/// BudgetExhausted if the run from s1 itself does not finish.
inline bool tini_holds(const Cmd &c, const PolicySpec &policy, const State &s1,
                       ValueRange domain, Fuel fuel = {}) {
  Outcome o1 = run(c, s1, fuel);
  if (!o1.terminated())
    throw BudgetExhausted();
  for (const auto &s2 : enumerate_states(s1.domain(), domain.lo, domain.hi)) {
    if (!s1.agrees_on(s2, policy.in_vars))
      continue;
    Outcome o2 = run(c, s2, fuel);
    if (!o2.terminated())
      continue;
    if (!o1.state->agrees_on(*o2.state, policy.out_vars))
      return false;
  }
  return true;
}

inline Formula agree_all(const VarSet &vars) {
  Formula f;
  for (const auto &x : vars)
    f.push_back(BasicFormula::agree_var(x));
  return f;
}

/// assume A in; c; assert A out. Empty annotation lists are left out since
/// a formula is a nonempty conjunction.
inline Cmd wrap_policy(const Cmd &c, const PolicySpec &policy) {
  Cmd out = c;
  if (!policy.out_vars.empty())
    out = Cmd::seq(out, Cmd::assert_(agree_all(policy.out_vars)));
  if (!policy.in_vars.empty())
    out = Cmd::seq(Cmd::assume(agree_all(policy.in_vars)), out);
  return out;
}

/// Outcome of comparing the ideal monitor with the noninterference oracle.
struct TiniCheck {
  bool monitor_secure = false;
  bool tini = false;
  bool agree() const { return monitor_secure == tini; }
};

/// Runs the wrapped program through the ideal monitor on the full
/// universe and compares with tini_holds. Throws BudgetExhausted when
/// either side cannot be decided within the budget.
inline TiniCheck check_monitor_tini_detail(const Cmd &c,
                                           const PolicySpec &policy,
                                           const State &s1, ValueRange domain,
                                           Fuel fuel = {}) {
  TiniCheck out;
  out.tini = tini_holds(c, policy, s1, domain, fuel);
  const Cmd wrapped = wrap_policy(c, policy);
  IdealResult r = ideal_monitor(wrapped, s1,
                                universe(s1.domain(), domain.lo, domain.hi),
                                fuel);
  if (r.indeterminate())
    throw BudgetExhausted();
  out.monitor_secure = !r.fault();
  return out;
}

inline bool check_monitor_tini(const Cmd &c, const PolicySpec &policy,
                           const State &s1, ValueRange domain,
                           Fuel fuel = {}) {
  return check_monitor_tini_detail(c, policy, s1, domain, fuel).agree();
}

} // namespace ifmon
