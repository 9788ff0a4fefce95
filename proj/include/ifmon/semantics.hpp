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

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "ifmon/ast.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

/// Raised when a concrete operation leaves the 64-bit range. The language
/// is defined over unbounded integers; we refuse to wrap silently.
class ArithmeticOverflow : public std::overflow_error {
public:
  ArithmeticOverflow() : std::overflow_error("integer overflow") {}
};

/// Raised internally when a computation runs out of fuel.
class BudgetExhausted : public std::runtime_error {
public:
  BudgetExhausted() : std::runtime_error("step budget exhausted") {}
};

struct Fuel {
  std::uint64_t max_steps = 10000;
};

/// Mutable counter shared by every sub-computation of one top-level call.
class FuelGauge {
public:
  explicit FuelGauge(Fuel f) : left_(f.max_steps) {}

  void consume() {
    if (left_ == 0)
      throw BudgetExhausted();
    --left_;
  }

  std::uint64_t left() const { return left_; }

private:
  std::uint64_t left_;
};

inline Value checked_arith(ArithOp op, Value a, Value b) {
  Value r;
  bool bad;
  switch (op) {
  case ArithOp::add:
    bad = __builtin_add_overflow(a, b, &r);
    break;
  case ArithOp::sub:
    bad = __builtin_sub_overflow(a, b, &r);
    break;
  default:
    bad = __builtin_mul_overflow(a, b, &r);
    break;
  }
  if (bad)
    throw ArithmeticOverflow();
  return r;
}

inline bool eval_bool(const BoolExpr &b, const State &s);

inline Value eval_expr(const Expr &e, const State &s) {
  if (auto *c = e.as<expr::Const>())
    return c->value;
  if (auto *v = e.as<expr::Var>())
    return s.get(v->name);
  if (auto *bin = e.as<expr::Binary>())
    return checked_arith(bin->op, eval_expr(bin->lhs, s),
                         eval_expr(bin->rhs, s));
  return eval_bool(e.as<expr::Embed>()->cond, s) ? 1 : 0;
}

inline bool eval_bool(const BoolExpr &b, const State &s) {
  if (auto *l = b.as<cond::Less>())
    return eval_expr(l->lhs, s) < eval_expr(l->rhs, s);
  if (auto *q = b.as<cond::Equal>())
    return eval_expr(q->lhs, s) == eval_expr(q->rhs, s);
  if (auto *n = b.as<cond::Not>())
    return !eval_bool(n->operand, s);
  auto *a = b.as<cond::And>();
  // Both operands are evaluated so that overflow is never masked by
  // short-circuiting; the language has no side effects in expressions.
  bool l = eval_bool(a->lhs, s);
  bool r = eval_bool(a->rhs, s);
  return l && r;
}

/// Result of running a command: a final state or an exhausted budget.
struct Outcome {
  std::optional<State> state;

  static Outcome terminated(State s) { return Outcome{std::move(s)}; }
  static Outcome exhausted() { return Outcome{std::nullopt}; }

  bool terminated() const { return state.has_value(); }
  bool budget_exhausted() const { return !state.has_value(); }
};

namespace detail {

inline State exec(const Cmd &c, State s, FuelGauge &fuel) {
  if (auto *a = c.as<cmd::Assign>()) {
    Value v = eval_expr(a->value, s);
    return s.with(a->target, v);
  }
  if (auto *q = c.as<cmd::Seq>())
    return exec(q->second, exec(q->first, std::move(s), fuel), fuel);
  if (auto *i = c.as<cmd::If>())
    return eval_bool(i->cond, s) ? exec(i->then_branch, std::move(s), fuel)
                                 : exec(i->else_branch, std::move(s), fuel);
  if (auto *w = c.as<cmd::While>()) {
    while (eval_bool(w->cond, s)) {
      fuel.consume();
      s = exec(w->body, std::move(s), fuel);
    }
    return s;
  }
  // skip, assume and assert leave the state untouched
  return s;
}

} // namespace detail

/// Runs `c` with a gauge shared with the caller. Throws BudgetExhausted.
inline State run_with(const Cmd &c, const State &s, FuelGauge &fuel) {
  return detail::exec(c, s, fuel);
}

inline Outcome run(const Cmd &c, const State &s, Fuel fuel = {}) {
  FuelGauge gauge(fuel);
  try {
    return Outcome::terminated(detail::exec(c, s, gauge));
  } catch (const BudgetExhausted &) {
    return Outcome::exhausted();
  }
}

/// grd_b: keeps the states satisfying b. Fault stays Fault.
inline StateSet guard(const BoolExpr &b, const StateSet &S) {
  if (S.is_fault())
    return S;
  std::set<State> out;
  for (const auto &s : S.states())
    if (eval_bool(b, s))
      out.insert(s);
  return StateSet(std::move(out));
}

namespace detail {

inline StateSet collect(const Cmd &c, const StateSet &S, FuelGauge &fuel);

// Least fixpoint of X = S u F(X) from the empty set. F (the collecting
// semantics of `if b then body else skip`) distributes over union, so
// each round only needs to push the states discovered in the previous
// round; the limit is the same as the plain Kleene iteration.
inline StateSet collect_while(const cmd::While &w, const StateSet &S,
                              FuelGauge &fuel) {
  std::set<State> acc;
  std::set<State> frontier = S.states();
  while (!frontier.empty()) {
    fuel.consume();
    acc.insert(frontier.begin(), frontier.end());
    std::set<State> entering;
    std::set<State> next;
    for (const auto &s : frontier) {
      if (eval_bool(w.cond, s))
        entering.insert(s);
    }
    StateSet stepped = collect(w.body, StateSet(std::move(entering)), fuel);
    if (stepped.is_fault())
      return stepped;
    for (const auto &s : stepped.states())
      if (!acc.count(s))
        next.insert(s);
    frontier = std::move(next);
  }
  std::set<State> out;
  for (const auto &s : acc)
    if (!eval_bool(w.cond, s))
      out.insert(s);
  return StateSet(std::move(out));
}

inline StateSet collect(const Cmd &c, const StateSet &S, FuelGauge &fuel) {
  if (S.is_fault())
    return S;
  if (auto *a = c.as<cmd::Assign>()) {
    std::set<State> out;
    for (const auto &s : S.states())
      out.insert(s.with(a->target, eval_expr(a->value, s)));
    return StateSet(std::move(out));
  }
  if (auto *q = c.as<cmd::Seq>())
    return collect(q->second, collect(q->first, S, fuel), fuel);
  if (auto *i = c.as<cmd::If>())
    return join(collect(i->then_branch, guard(i->cond, S), fuel),
                collect(i->else_branch, guard(negate(i->cond), S), fuel));
  if (auto *w = c.as<cmd::While>())
    return collect_while(*w, S, fuel);
  return S;
}

} // namespace detail

/// Collecting semantics with a caller-provided gauge.
inline StateSet collecting_with(const Cmd &c, const StateSet &S,
                                FuelGauge &fuel) {
  return detail::collect(c, S, fuel);
}

/// Collecting semantics. Throws BudgetExhausted if a loop fixpoint does
/// not stabilise within the budget.
inline StateSet collecting(const Cmd &c, const StateSet &S, Fuel fuel = {}) {
  FuelGauge gauge(fuel);
  return detail::collect(c, S, gauge);
}

} // namespace ifmon
