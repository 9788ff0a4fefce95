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

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "ifmon/ast.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

/// Integer interval with optional infinite bounds, or the empty interval.
class Interval {
public:
  using Bound = std::optional<Value>; // nullopt on the lower side is -inf,
                                      // on the upper side +inf

  static Interval top() { return Interval(std::nullopt, std::nullopt); }
  static Interval empty_set() {
    Interval i = top();
    i.empty_ = true;
    return i;
  }
  static Interval constant(Value v) { return Interval(v, v); }
  /// [lo, hi]; yields the empty interval when lo > hi.
  static Interval range(Bound lo, Bound hi) {
    if (lo && hi && *lo > *hi)
      return empty_set();
    return Interval(lo, hi);
  }

  bool is_empty() const { return empty_; }
  bool is_top() const { return !empty_ && !lo_ && !hi_; }
  const Bound &lo() const { return lo_; }
  const Bound &hi() const { return hi_; }

  bool is_singleton() const { return !empty_ && lo_ && hi_ && *lo_ == *hi_; }

  bool contains(Value v) const {
    return !empty_ && (!lo_ || *lo_ <= v) && (!hi_ || v <= *hi_);
  }

  /// Inclusion order.
  bool leq(const Interval &o) const {
    if (empty_)
      return true;
    if (o.empty_)
      return false;
    bool lo_ok = !o.lo_ || (lo_ && *o.lo_ <= *lo_);
    bool hi_ok = !o.hi_ || (hi_ && *hi_ <= *o.hi_);
    return lo_ok && hi_ok;
  }

  friend Interval hull(const Interval &a, const Interval &b) {
    if (a.empty_)
      return b;
    if (b.empty_)
      return a;
    Bound lo = (a.lo_ && b.lo_) ? Bound(std::min(*a.lo_, *b.lo_)) : Bound();
    Bound hi = (a.hi_ && b.hi_) ? Bound(std::max(*a.hi_, *b.hi_)) : Bound();
    return Interval(lo, hi);
  }

  friend Interval intersect(const Interval &a, const Interval &b) {
    if (a.empty_ || b.empty_)
      return empty_set();
    Bound lo = !a.lo_ ? b.lo_ : !b.lo_ ? a.lo_ : Bound(std::max(*a.lo_, *b.lo_));
    Bound hi = !a.hi_ ? b.hi_ : !b.hi_ ? a.hi_ : Bound(std::min(*a.hi_, *b.hi_));
    return range(lo, hi);
  }

  /// Standard widening: bounds that grew jump to infinity.
  friend Interval widen(const Interval &prev, const Interval &next) {
    if (prev.empty_)
      return next;
    if (next.empty_)
      return prev;
    Bound lo = (prev.lo_ && next.lo_ && *next.lo_ >= *prev.lo_) ? prev.lo_
                                                               : Bound();
    Bound hi = (prev.hi_ && next.hi_ && *next.hi_ <= *prev.hi_) ? prev.hi_
                                                               : Bound();
    return Interval(lo, hi);
  }

  friend bool operator==(const Interval &a, const Interval &b) {
    if (a.empty_ || b.empty_)
      return a.empty_ == b.empty_;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  std::string to_string() const {
    if (empty_)
      return "empty";
    return "[" + (lo_ ? std::to_string(*lo_) : std::string("-inf")) + ", " +
           (hi_ ? std::to_string(*hi_) : std::string("+inf")) + "]";
  }

private:
  Interval(Bound lo, Bound hi) : lo_(lo), hi_(hi) {}
  Bound lo_;
  Bound hi_;
  bool empty_ = false;
};

namespace detail {

__extension__ using Wide = __int128;
constexpr Wide kInf = Wide(1) << 100;

inline Wide lo_wide(const Interval &i) { return i.lo() ? Wide(*i.lo()) : -kInf; }
inline Wide hi_wide(const Interval &i) { return i.hi() ? Wide(*i.hi()) : kInf; }

// Products where an infinite factor meets zero are zero, by convention.
inline Wide mul_wide(Wide a, Wide b) {
  if (a == 0 || b == 0)
    return 0;
  const bool inf = a >= kInf || a <= -kInf || b >= kInf || b <= -kInf;
  if (inf)
    return ((a > 0) == (b > 0)) ? kInf : -kInf;
  return a * b;
}

inline Wide add_wide(Wide a, Wide b) {
  if (a >= kInf || b >= kInf)
    return kInf;
  if (a <= -kInf || b <= -kInf)
    return -kInf;
  return a + b;
}

// Finite results outside the 64-bit range saturate to the nearest sound
// bound: infinity on the side that grew, the extreme value on the other.
inline Interval::Bound to_lo(Wide v) {
  constexpr Wide min = std::numeric_limits<Value>::min();
  constexpr Wide max = std::numeric_limits<Value>::max();
  if (v < min)
    return std::nullopt;
  return static_cast<Value>(std::min(v, max));
}

inline Interval::Bound to_hi(Wide v) {
  constexpr Wide min = std::numeric_limits<Value>::min();
  constexpr Wide max = std::numeric_limits<Value>::max();
  if (v > max)
    return std::nullopt;
  return static_cast<Value>(std::max(v, min));
}

} // namespace detail

inline Interval ivl_arith(ArithOp op, const Interval &a, const Interval &b) {
  using namespace detail;
  if (a.is_empty() || b.is_empty())
    return Interval::empty_set();
  Wide lo, hi;
  switch (op) {
  case ArithOp::add:
    // -inf + inf cannot arise: lower bounds are never +inf.
    lo = add_wide(lo_wide(a), lo_wide(b));
    hi = add_wide(hi_wide(a), hi_wide(b));
    break;
  case ArithOp::sub:
    lo = add_wide(lo_wide(a), -hi_wide(b));
    hi = add_wide(hi_wide(a), -lo_wide(b));
    break;
  default: {
    const Wide p[4] = {mul_wide(lo_wide(a), lo_wide(b)),
                       mul_wide(lo_wide(a), hi_wide(b)),
                       mul_wide(hi_wide(a), lo_wide(b)),
                       mul_wide(hi_wide(a), hi_wide(b))};
    lo = *std::min_element(p, p + 4);
    hi = *std::max_element(p, p + 4);
    break;
  }
  }
  return Interval::range(to_lo(lo), to_hi(hi));
}

/// Abstract environment: unreachable, a map to intervals (absent entries
/// are unconstrained), or the fault element.
class IntervalEnv {
public:
  enum class Kind { bottom, env, fault };

  static IntervalEnv top() { return IntervalEnv(Kind::env); }
  static IntervalEnv bottom() { return IntervalEnv(Kind::bottom); }
  static IntervalEnv fault() { return IntervalEnv(Kind::fault); }

  /// The singleton environment describing exactly `s`.
  static IntervalEnv of_state(const State &s) {
    IntervalEnv e = top();
    for (const auto &[x, v] : s.bindings())
      e = e.set(x, Interval::constant(v));
    return e;
  }

  Kind kind() const { return kind_; }
  bool is_bottom() const { return kind_ == Kind::bottom; }
  bool is_fault() const { return kind_ == Kind::fault; }
  bool is_env() const { return kind_ == Kind::env; }

  /// Bound for x; unconstrained when absent. Empty on bottom.
  Interval get(const std::string &x) const {
    if (kind_ == Kind::bottom)
      return Interval::empty_set();
    if (kind_ == Kind::fault)
      return Interval::top();
    auto it = map_.find(x);
    return it == map_.end() ? Interval::top() : it->second;
  }

  /// Replaces the bound of x. An empty interval collapses to bottom.
  IntervalEnv set(const std::string &x, const Interval &i) const {
    if (kind_ != Kind::env)
      return *this;
    if (i.is_empty())
      return bottom();
    IntervalEnv out = *this;
    if (i.is_top())
      out.map_.erase(x);
    else
      out.map_.insert_or_assign(x, i);
    return out;
  }

  const std::map<std::string, Interval> &bounds() const { return map_; }

  friend IntervalEnv meet(const IntervalEnv &a, const IntervalEnv &b) {
    if (a.is_fault())
      return b;
    if (b.is_fault())
      return a;
    if (a.is_bottom() || b.is_bottom())
      return bottom();
    IntervalEnv out = a;
    for (const auto &[x, i] : b.map_) {
      out = out.set(x, intersect(out.get(x), i));
      if (out.is_bottom())
        return out;
    }
    return out;
  }

  friend IntervalEnv join(const IntervalEnv &a, const IntervalEnv &b) {
    if (a.is_fault() || b.is_fault())
      return fault();
    if (a.is_bottom())
      return b;
    if (b.is_bottom())
      return a;
    IntervalEnv out = top();
    for (const auto &[x, i] : a.map_) {
      auto it = b.map_.find(x);
      if (it != b.map_.end())
        out = out.set(x, hull(i, it->second));
    }
    return out;
  }

  friend IntervalEnv widen(const IntervalEnv &prev, const IntervalEnv &next) {
    if (prev.is_fault() || next.is_fault())
      return fault();
    if (prev.is_bottom())
      return next;
    if (next.is_bottom())
      return prev;
    IntervalEnv out = top();
    for (const auto &[x, i] : prev.map_) {
      auto it = next.map_.find(x);
      if (it != next.map_.end())
        out = out.set(x, widen(i, it->second));
    }
    return out;
  }

  friend bool leq(const IntervalEnv &a, const IntervalEnv &b) {
    if (b.is_fault() || a.is_bottom())
      return true;
    if (a.is_fault() || b.is_bottom())
      return false;
    for (const auto &[x, i] : b.map_)
      if (!a.get(x).leq(i))
        return false;
    return true;
  }

  friend bool operator==(const IntervalEnv &a, const IntervalEnv &b) {
    return a.kind_ == b.kind_ && a.map_ == b.map_;
  }

  /// Renders every variable of `vars` (and any other bound variable).
  std::string to_string(const VarSet &vars = {}) const {
    if (is_bottom())
      return "bottom";
    if (is_fault())
      return "fault";
    VarSet all = vars;
    for (const auto &kv : map_)
      all.insert(kv.first);
    std::string out = "{";
    bool first = true;
    for (const auto &x : all) {
      if (!first)
        out += ", ";
      first = false;
      out += x + " -> " + get(x).to_string();
    }
    return out + "}";
  }

private:
  explicit IntervalEnv(Kind k) : kind_(k) {}
  Kind kind_;
  std::map<std::string, Interval> map_;
};

/// Membership of a concrete state in the concretisation of an environment.
inline bool contains(const IntervalEnv &env, const State &s) {
  if (env.is_fault())
    return true;
  if (env.is_bottom())
    return false;
  for (const auto &[x, i] : env.bounds())
    if (!i.contains(s.get(x)))
      return false;
  return true;
}

inline IntervalEnv guard_int(const BoolExpr &b, const IntervalEnv &env);

inline Interval eval_interval(const Expr &e, const IntervalEnv &env) {
  if (env.is_bottom())
    return Interval::empty_set();
  if (env.is_fault())
    return Interval::top();
  if (auto *c = e.as<expr::Const>())
    return Interval::constant(c->value);
  if (auto *v = e.as<expr::Var>())
    return env.get(v->name);
  if (auto *bin = e.as<expr::Binary>())
    return ivl_arith(bin->op, eval_interval(bin->lhs, env),
                     eval_interval(bin->rhs, env));
  const BoolExpr &b = e.as<expr::Embed>()->cond;
  const bool can_hold = !guard_int(b, env).is_bottom();
  const bool can_fail = !guard_int(negate(b), env).is_bottom();
  if (can_hold && can_fail)
    return Interval::range(0, 1);
  if (can_hold)
    return Interval::constant(1);
  if (can_fail)
    return Interval::constant(0);
  return Interval::empty_set();
}

namespace detail {

inline Interval below(const Interval &i) {
  return i.is_empty() ? i : Interval::range(std::nullopt, i.hi());
}
inline Interval above(const Interval &i) {
  return i.is_empty() ? i : Interval::range(i.lo(), std::nullopt);
}
inline Interval shift(const Interval &i, Value d) {
  return ivl_arith(ArithOp::add, i, Interval::constant(d));
}

} // namespace detail

/// Backward refinement: narrows `env` under the constraint that e has a
/// value in i.
inline IntervalEnv app(const Expr &e, const Interval &i,
                       const IntervalEnv &env) {
  if (!env.is_env())
    return env;
  if (i.is_empty())
    return IntervalEnv::bottom();
  if (auto *v = e.as<expr::Var>())
    return env.set(v->name, intersect(env.get(v->name), i));
  if (auto *c = e.as<expr::Const>())
    return i.contains(c->value) ? env : IntervalEnv::bottom();
  if (auto *bin = e.as<expr::Binary>()) {
    const Interval l = eval_interval(bin->lhs, env);
    const Interval r = eval_interval(bin->rhs, env);
    switch (bin->op) {
    case ArithOp::add:
      return meet(app(bin->lhs, ivl_arith(ArithOp::sub, i, r), env),
                  app(bin->rhs, ivl_arith(ArithOp::sub, i, l), env));
    case ArithOp::sub:
      return meet(app(bin->lhs, ivl_arith(ArithOp::add, i, r), env),
                  app(bin->rhs, ivl_arith(ArithOp::sub, l, i), env));
    default:
      return env;
    }
  }
  return env;
}

namespace detail {

// e1 < e2
inline IntervalEnv guard_less(const Expr &a, const Expr &b,
                              const IntervalEnv &env) {
  const Interval ia = eval_interval(a, env);
  const Interval ib = eval_interval(b, env);
  return meet(app(a, below(shift(ib, -1)), env),
              app(b, above(shift(ia, 1)), env));
}

// e1 <= e2
inline IntervalEnv guard_less_eq(const Expr &a, const Expr &b,
                                 const IntervalEnv &env) {
  const Interval ia = eval_interval(a, env);
  const Interval ib = eval_interval(b, env);
  return meet(app(a, below(ib), env), app(b, above(ia), env));
}

// Negation is pushed inward: !(a < b) is b <= a, !(a = b) is
// (a < b) || (b < a), and De Morgan for conjunctions.
inline IntervalEnv guard_signed(const BoolExpr &b, bool positive,
                                const IntervalEnv &env) {
  if (!env.is_env())
    return env;
  if (auto *l = b.as<cond::Less>())
    return positive ? guard_less(l->lhs, l->rhs, env)
                    : guard_less_eq(l->rhs, l->lhs, env);
  if (auto *q = b.as<cond::Equal>()) {
    if (positive) {
      const Interval ia = eval_interval(q->lhs, env);
      const Interval ib = eval_interval(q->rhs, env);
      return meet(app(q->lhs, ib, env), app(q->rhs, ia, env));
    }
    return join(guard_less(q->lhs, q->rhs, env),
                guard_less(q->rhs, q->lhs, env));
  }
  if (auto *n = b.as<cond::Not>())
    return guard_signed(n->operand, !positive, env);
  auto *a = b.as<cond::And>();
  if (positive)
    return meet(guard_signed(a->lhs, true, env),
                guard_signed(a->rhs, true, env));
  return join(guard_signed(a->lhs, false, env),
              guard_signed(a->rhs, false, env));
}

} // namespace detail

/// Refines `env` to the states that may satisfy b.
inline IntervalEnv guard_int(const BoolExpr &b, const IntervalEnv &env) {
  return detail::guard_signed(b, true, env);
}

/// Called with each top-level command of the analysed program and the
/// environment reached after it.
using IntervalObserver =
    std::function<void(const Cmd &, const IntervalEnv &)>;

struct IntervalConfig {
  unsigned widen_after = 3;
};

namespace detail {

inline IntervalEnv iexec(const Cmd &c, const IntervalEnv &env,
                         const IntervalConfig &cfg,
                         const IntervalObserver *observer);

// Loop-head fixpoint X = env | body(grd_b(X)), computed with delayed
// widening, refined by one decreasing step, then filtered by !b.
inline IntervalEnv iexec_while(const cmd::While &w, const IntervalEnv &env,
                               const IntervalConfig &cfg) {
  IntervalEnv x = env;
  unsigned rounds = 0;
  for (;;) {
    IntervalEnv y = join(env, iexec(w.body, guard_int(w.cond, x), cfg, nullptr));
    if (leq(y, x))
      break;
    IntervalEnv grown = join(x, y);
    x = rounds < cfg.widen_after ? grown : widen(x, grown);
    ++rounds;
  }
  IntervalEnv narrowed =
      join(env, iexec(w.body, guard_int(w.cond, x), cfg, nullptr));
  return guard_int(negate(w.cond), narrowed);
}

inline IntervalEnv iexec(const Cmd &c, const IntervalEnv &env,
                         const IntervalConfig &cfg,
                         const IntervalObserver *observer) {
  if (!env.is_env())
    return env;
  if (auto *q = c.as<cmd::Seq>()) {
    IntervalEnv mid = iexec(q->first, env, cfg, observer);
    return iexec(q->second, mid, cfg, observer);
  }
  IntervalEnv out = env;
  if (auto *a = c.as<cmd::Assign>()) {
    out = env.set(a->target, eval_interval(a->value, env));
  } else if (auto *i = c.as<cmd::If>()) {
    out = join(iexec(i->then_branch, guard_int(i->cond, env), cfg, nullptr),
               iexec(i->else_branch, guard_int(negate(i->cond), env), cfg,
                     nullptr));
  } else if (auto *w = c.as<cmd::While>()) {
    out = iexec_while(*w, env, cfg);
  }
  if (observer)
    (*observer)(c, out);
  return out;
}

} // namespace detail

/// Abstract execution over intervals. Annotations are no-ops.
inline IntervalEnv interval_exec(const Cmd &c, const IntervalEnv &env,
                                 IntervalConfig cfg = {},
                                 const IntervalObserver &observer = {}) {
  return detail::iexec(c, env, cfg, observer ? &observer : nullptr);
}

} // namespace ifmon
