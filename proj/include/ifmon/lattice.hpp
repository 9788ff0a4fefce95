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

#include <set>

#include "ifmon/ast.hpp"

namespace ifmon {

/// The finite carrier L of basic formulas a monitor may manipulate.
using Lattice = std::set<BasicFormula>;

namespace detail {

struct Atoms {
  std::set<Expr> exprs;
  std::set<BoolExpr> bools;
};

inline void gather(const BoolExpr &b, Atoms &out);

inline void gather(const Expr &e, Atoms &out) {
  out.exprs.insert(e);
  if (auto *bin = e.as<expr::Binary>()) {
    gather(bin->lhs, out);
    gather(bin->rhs, out);
  } else if (auto *em = e.as<expr::Embed>()) {
    gather(em->cond, out);
  }
}

inline void gather(const BoolExpr &b, Atoms &out) {
  out.bools.insert(b);
  out.exprs.insert(Expr::embed(b));
  if (auto *l = b.as<cond::Less>()) {
    gather(l->lhs, out);
    gather(l->rhs, out);
  } else if (auto *q = b.as<cond::Equal>()) {
    gather(q->lhs, out);
    gather(q->rhs, out);
  } else if (auto *n = b.as<cond::Not>()) {
    gather(n->operand, out);
  } else {
    auto *a = b.as<cond::And>();
    gather(a->lhs, out);
    gather(a->rhs, out);
  }
}

inline void gather(const BasicFormula &f, Atoms &out) {
  if (auto *a = f.as<formula::Agree>()) {
    gather(a->expr, out);
  } else if (auto *b = f.as<formula::Both>()) {
    gather(b->cond, out);
  } else {
    auto *ca = f.as<formula::CondAgree>();
    gather(ca->cond, out);
    gather(ca->expr, out);
  }
}

inline void gather(const Cmd &c, Atoms &out, Lattice &annotations) {
  if (auto *a = c.as<cmd::Assign>()) {
    out.exprs.insert(Expr::var(a->target));
    gather(a->value, out);
  } else if (auto *s = c.as<cmd::Seq>()) {
    gather(s->first, out, annotations);
    gather(s->second, out, annotations);
  } else if (auto *i = c.as<cmd::If>()) {
    gather(i->cond, out);
    gather(i->then_branch, out, annotations);
    gather(i->else_branch, out, annotations);
  } else if (auto *w = c.as<cmd::While>()) {
    gather(w->cond, out);
    gather(w->body, out, annotations);
  } else if (auto *as = c.as<cmd::Assume>()) {
    for (const auto &f : as->formula) {
      annotations.insert(f);
      gather(f, out);
    }
  } else if (auto *at = c.as<cmd::Assert>()) {
    for (const auto &f : at->formula) {
      annotations.insert(f);
      gather(f, out);
    }
  }
}

} // namespace detail

/// Builds L for a program: A e, B b and B b => A e for every expression e
/// and boolean b occurring in `c` (guards, right-hand sides, annotations,
/// and all their subterms), closed under negation of booleans, plus every
/// annotation formula and A x for every variable of `c` and of `extra_vars`.
inline Lattice collect_lattice(const Cmd &c, const VarSet &extra_vars = {}) {
  detail::Atoms atoms;
  Lattice out;
  detail::gather(c, atoms, out);
  for (const auto &x : program_vars(c))
    atoms.exprs.insert(Expr::var(x));
  for (const auto &x : extra_vars)
    atoms.exprs.insert(Expr::var(x));

  std::set<BoolExpr> bools;
  for (const auto &b : atoms.bools) {
    bools.insert(b);
    bools.insert(negate(b));
  }
  for (const auto &e : atoms.exprs)
    out.insert(BasicFormula::agree(e));
  for (const auto &b : bools) {
    out.insert(BasicFormula::both(b));
    for (const auto &e : atoms.exprs)
      out.insert(BasicFormula::cond_agree(b, e));
  }
  // Annotation formulas may mention a negation in non-canonical form;
  // close those under negation as well.
  Lattice extra;
  for (const auto &f : out) {
    if (auto *b = f.as<formula::Both>())
      extra.insert(BasicFormula::both(negate(b->cond)));
    else if (auto *ca = f.as<formula::CondAgree>())
      extra.insert(BasicFormula::cond_agree(negate(ca->cond), ca->expr));
  }
  out.insert(extra.begin(), extra.end());
  return out;
}

/// Checks both closure conditions required of a lattice.
inline bool closed_under_negation(const Lattice &L) {
  for (const auto &f : L) {
    if (auto *b = f.as<formula::Both>()) {
      if (!L.count(BasicFormula::both(negate(b->cond))))
        return false;
    } else if (auto *ca = f.as<formula::CondAgree>()) {
      if (!L.count(BasicFormula::cond_agree(negate(ca->cond), ca->expr)))
        return false;
    }
  }
  return true;
}

} // namespace ifmon
