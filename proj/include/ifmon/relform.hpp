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
#include <set>
#include <string>
#include <utility>

#include "ifmon/ast.hpp"
#include "ifmon/lattice.hpp"
#include "ifmon/pretty.hpp"
#include "ifmon/semantics.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

//
// Two-state satisfaction
//

inline bool holds(const BasicFormula &f, const State &s, const State &t) {
  if (auto *a = f.as<formula::Agree>())
    return eval_expr(a->expr, s) == eval_expr(a->expr, t);
  if (auto *b = f.as<formula::Both>())
    return eval_bool(b->cond, s) && eval_bool(b->cond, t);
  auto *ca = f.as<formula::CondAgree>();
  if (!(eval_bool(ca->cond, s) && eval_bool(ca->cond, t)))
    return true;
  return eval_expr(ca->expr, s) == eval_expr(ca->expr, t);
}

inline bool holds(const Formula &f, const State &s, const State &t) {
  return std::all_of(f.begin(), f.end(),
                     [&](const BasicFormula &b) { return holds(b, s, t); });
}

//
// The lattice P(L) + fault, ordered by reverse inclusion
//

class FormulaSet {
public:
  FormulaSet() = default;
  FormulaSet(std::set<BasicFormula> fs) : items_(std::move(fs)) {}
  FormulaSet(std::initializer_list<BasicFormula> fs) : items_(fs) {}

  static FormulaSet fault() {
    FormulaSet f;
    f.fault_ = true;
    return f;
  }

  bool is_fault() const { return fault_; }
  const std::set<BasicFormula> &items() const {
    if (fault_)
      throw std::logic_error("fault formula set has no members");
    return items_;
  }
  bool contains(const BasicFormula &f) const {
    return !fault_ && items_.count(f) > 0;
  }
  bool empty() const { return !fault_ && items_.empty(); }

  FormulaSet with(const BasicFormula &f) const {
    if (fault_)
      return *this;
    FormulaSet out = *this;
    out.items_.insert(f);
    return out;
  }

  friend bool operator==(const FormulaSet &a, const FormulaSet &b) {
    return a.fault_ == b.fault_ && (a.fault_ || a.items_ == b.items_);
  }

  std::string to_string() const {
    if (fault_)
      return "fault";
    std::string out = "{";
    bool first = true;
    for (const auto &f : items_) {
      if (!first)
        out += ", ";
      first = false;
      out += pretty(f);
    }
    return out + "}";
  }

private:
  bool fault_ = false;
  std::set<BasicFormula> items_;
};

/// Join: intersection, with fault on top.
inline FormulaSet fs_join(const FormulaSet &a, const FormulaSet &b) {
  if (a.is_fault() || b.is_fault())
    return FormulaSet::fault();
  std::set<BasicFormula> out;
  std::set_intersection(a.items().begin(), a.items().end(), b.items().begin(),
                        b.items().end(), std::inserter(out, out.end()));
  return FormulaSet(std::move(out));
}

/// Meet: union. Fault is the top element, so it is neutral here.
inline FormulaSet fs_meet(const FormulaSet &a, const FormulaSet &b) {
  if (a.is_fault())
    return b;
  if (b.is_fault())
    return a;
  std::set<BasicFormula> out = a.items();
  out.insert(b.items().begin(), b.items().end());
  return FormulaSet(std::move(out));
}

inline bool fs_leq(const FormulaSet &a, const FormulaSet &b) {
  if (b.is_fault())
    return true;
  if (a.is_fault())
    return false;
  return std::includes(a.items().begin(), a.items().end(), b.items().begin(),
                       b.items().end());
}

inline FormulaSet to_formula_set(const Formula &f) {
  return FormulaSet(std::set<BasicFormula>(f.begin(), f.end()));
}

inline FormulaSet to_formula_set(const Lattice &L) { return FormulaSet(L); }

//
// Galois connection, parametrised by the major state
//

inline FormulaSet alpha(const State &s, const StateSet &S, const Lattice &L) {
  if (S.is_fault())
    return FormulaSet::fault();
  std::set<BasicFormula> out;
  for (const auto &f : L) {
    bool all = true;
    for (const auto &t : S.states()) {
      if (!holds(f, s, t)) {
        all = false;
        break;
      }
    }
    if (all)
      out.insert(f);
  }
  return FormulaSet(std::move(out));
}

inline StateSet gamma(const State &s, const FormulaSet &D,
                      const StateSet &universe) {
  if (D.is_fault())
    return StateSet::fault();
  std::set<State> out;
  for (const auto &t : universe.states()) {
    bool all = true;
    for (const auto &f : D.items()) {
      if (!holds(f, s, t)) {
        all = false;
        break;
      }
    }
    if (all)
      out.insert(t);
  }
  return StateSet(std::move(out));
}

//
// Approximate entailment
//
// Goal-directed and purely syntactic. The derivation rules:
//   - membership;
//   - a set holding both B b and B !b entails everything (it describes no
//     pair of states);
//   - B (b1 && b2) gives B b1 and B b2;
//   - constants are always agreed on;
//   - agreement is a congruence: agreeing operands give agreeing results,
//     for arithmetic, comparisons, negation and conjunction;
//   - B b together with B b => A e gives A e;
//   - B b gives A b, and so does B !b; A b and A !b are interchangeable;
//   - B !b1 gives A (b1 && b2) and A (b2 && b1) since both sides are false;
//   - A e gives B b => A e, and so does B !b.
// Every rule is semantically valid for each pair of states, so the
// relation is sound. Soundness is also checked by exhaustive enumeration
// in the test suite.
//

namespace detail {

class Entailer {
public:
  explicit Entailer(const std::set<BasicFormula> &delta) : delta_(delta) {}

  bool contradictory() const {
    for (const auto &f : delta_)
      if (auto *b = f.as<formula::Both>())
        if (both(negate(b->cond)))
          return true;
    return false;
  }

  bool agree(const Expr &e) const {
    if (e.as<expr::Const>())
      return true;
    if (has(BasicFormula::agree(e)))
      return true;
    if (auto *bin = e.as<expr::Binary>())
      if (agree(bin->lhs) && agree(bin->rhs))
        return true;
    if (auto *em = e.as<expr::Embed>())
      if (agree_bool(em->cond))
        return true;
    for (const auto &f : delta_)
      if (auto *ca = f.as<formula::CondAgree>())
        if (ca->expr == e && both(ca->cond))
          return true;
    return false;
  }

  /// Both states give b the same truth value.
  bool agree_bool(const BoolExpr &b) const {
    const BoolExpr nb = negate(b);
    if (has(BasicFormula::agree(Expr::embed(b))) ||
        has(BasicFormula::agree(Expr::embed(nb))))
      return true;
    for (const auto &f : delta_)
      if (auto *ca = f.as<formula::CondAgree>())
        if ((ca->expr == Expr::embed(b) || ca->expr == Expr::embed(nb)) &&
            both(ca->cond))
          return true;
    if (both(b) || both(nb))
      return true;
    if (auto *l = b.as<cond::Less>())
      return agree(l->lhs) && agree(l->rhs);
    if (auto *q = b.as<cond::Equal>())
      return agree(q->lhs) && agree(q->rhs);
    if (auto *n = b.as<cond::Not>())
      return agree_bool(n->operand);
    auto *a = b.as<cond::And>();
    if (both(negate(a->lhs)) || both(negate(a->rhs)))
      return true;
    return agree_bool(a->lhs) && agree_bool(a->rhs);
  }

  /// Both states satisfy b.
  bool both(const BoolExpr &b) const {
    if (auto *n = b.as<cond::Not>())
      if (auto *nn = n->operand.as<cond::Not>())
        return both(nn->operand);
    if (has(BasicFormula::both(b)))
      return true;
    if (auto *a = b.as<cond::And>())
      if (both(a->lhs) && both(a->rhs))
        return true;
    for (const auto &f : delta_)
      if (auto *fb = f.as<formula::Both>())
        if (conjunct_of(b, fb->cond))
          return true;
    return false;
  }

  bool cond_agree(const BoolExpr &b, const Expr &e) const {
    return has(BasicFormula::cond_agree(b, e)) || agree(e) || both(negate(b));
  }

  bool entails(const BasicFormula &f) const {
    if (contradictory())
      return true;
    if (auto *a = f.as<formula::Agree>())
      return agree(a->expr);
    if (auto *b = f.as<formula::Both>())
      return both(b->cond);
    auto *ca = f.as<formula::CondAgree>();
    return cond_agree(ca->cond, ca->expr);
  }

private:
  bool has(const BasicFormula &f) const { return delta_.count(f) > 0; }

  // True iff b is a conjunct (at any depth) of the strict conjunction c.
  static bool conjunct_of(const BoolExpr &b, const BoolExpr &c) {
    auto *a = c.as<cond::And>();
    if (!a)
      return false;
    return a->lhs == b || a->rhs == b || conjunct_of(b, a->lhs) ||
           conjunct_of(b, a->rhs);
  }

  const std::set<BasicFormula> &delta_;
};

} // namespace detail

/// Sound, incomplete entailment between a formula set and a basic formula.
/// Callers handle Fault before asking.
inline bool entails(const FormulaSet &D, const BasicFormula &f) {
  if (D.is_fault())
    throw std::logic_error("entailment queried on the fault element");
  return detail::Entailer(D.items()).entails(f);
}

inline bool entails(const FormulaSet &D, const Formula &f) {
  return std::all_of(f.begin(), f.end(),
                     [&](const BasicFormula &b) { return entails(D, b); });
}

/// True when the set contains a complementary pair B b, B !b, so that no
/// pair of states satisfies it.
inline bool contradictory(const FormulaSet &D) {
  return !D.is_fault() && detail::Entailer(D.items()).contradictory();
}

} // namespace ifmon
