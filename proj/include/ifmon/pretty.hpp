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

#include <string>

#include "ifmon/ast.hpp"

namespace ifmon {

// Printing never relies on sugar: '>' and friends are expanded by the
// parser, so the output uses only '<', '=', '!' and '&&'. Parentheses are
// emitted only where the grammar needs them, which makes parse(pretty(x))
// structurally equal to x.

namespace detail {

// Precedence levels for arithmetic: sum = 1, product = 2, atom = 3.
inline int expr_level(const Expr &e) {
  if (auto *b = e.as<expr::Binary>())
    return b->op == ArithOp::mul ? 2 : 1;
  if (auto *c = e.as<expr::Const>())
    return c->value < 0 ? 2 : 3;
  return 3;
}

inline void print_bool(const BoolExpr &b, std::string &out);

inline void print_expr(const Expr &e, int min_level, std::string &out) {
  const bool paren = expr_level(e) < min_level;
  if (paren)
    out += '(';
  if (auto *c = e.as<expr::Const>()) {
    out += std::to_string(c->value);
  } else if (auto *v = e.as<expr::Var>()) {
    out += v->name;
  } else if (auto *bin = e.as<expr::Binary>()) {
    const int level = expr_level(e);
    print_expr(bin->lhs, level, out);
    out += bin->op == ArithOp::add ? " + " : bin->op == ArithOp::sub ? " - "
                                                                     : " * ";
    print_expr(bin->rhs, level + 1, out);
  } else {
    out += '(';
    print_bool(e.as<expr::Embed>()->cond, out);
    out += ')';
  }
  if (paren)
    out += ')';
}

inline void print_conjunct(const BoolExpr &b, std::string &out) {
  if (b.as<cond::And>()) {
    out += '(';
    print_bool(b, out);
    out += ')';
  } else {
    print_bool(b, out);
  }
}

inline void print_bool(const BoolExpr &b, std::string &out) {
  if (auto *l = b.as<cond::Less>()) {
    print_expr(l->lhs, 1, out);
    out += " < ";
    print_expr(l->rhs, 1, out);
  } else if (auto *q = b.as<cond::Equal>()) {
    print_expr(q->lhs, 1, out);
    out += " = ";
    print_expr(q->rhs, 1, out);
  } else if (auto *n = b.as<cond::Not>()) {
    out += "!(";
    print_bool(n->operand, out);
    out += ')';
  } else {
    auto *a = b.as<cond::And>();
    print_bool(a->lhs, out);
    out += " && ";
    print_conjunct(a->rhs, out);
  }
}

inline void indent(int depth, std::string &out) { out.append(2 * depth, ' '); }

inline void print_cmd(const Cmd &c, int depth, std::string &out);

inline void print_block(const Cmd &c, int depth, std::string &out) {
  out += "{\n";
  print_cmd(c, depth + 1, out);
  out += '\n';
  indent(depth, out);
  out += '}';
}

} // namespace detail

inline std::string pretty(const Expr &e) {
  std::string out;
  detail::print_expr(e, 1, out);
  return out;
}

inline std::string pretty(const BoolExpr &b) {
  std::string out;
  detail::print_bool(b, out);
  return out;
}

inline std::string pretty(const BasicFormula &f) {
  if (auto *a = f.as<formula::Agree>())
    return "A " + pretty(a->expr);
  if (auto *b = f.as<formula::Both>())
    return "B " + pretty(b->cond);
  auto *ca = f.as<formula::CondAgree>();
  return "B " + pretty(ca->cond) + " => A " + pretty(ca->expr);
}

inline std::string pretty(const Formula &f) {
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i)
      out += ", ";
    out += pretty(f[i]);
  }
  return out;
}

namespace detail {

inline void print_cmd(const Cmd &c, int depth, std::string &out) {
  if (auto *s = c.as<cmd::Seq>()) {
    print_cmd(s->first, depth, out);
    out += ";\n";
    print_cmd(s->second, depth, out);
    return;
  }
  indent(depth, out);
  if (c.as<cmd::Skip>()) {
    out += "skip";
  } else if (auto *a = c.as<cmd::Assign>()) {
    out += a->target + " := " + pretty(a->value);
  } else if (auto *i = c.as<cmd::If>()) {
    out += "if " + pretty(i->cond) + " then ";
    print_block(i->then_branch, depth, out);
    out += " else ";
    print_block(i->else_branch, depth, out);
  } else if (auto *w = c.as<cmd::While>()) {
    out += "while " + pretty(w->cond) + " do ";
    print_block(w->body, depth, out);
  } else if (auto *as = c.as<cmd::Assume>()) {
    out += "assume " + pretty(as->formula);
  } else {
    out += "assert " + pretty(c.as<cmd::Assert>()->formula);
  }
}

} // namespace detail

inline std::string pretty(const Cmd &c) {
  std::string out;
  detail::print_cmd(c, 0, out);
  return out;
}

/// One-line rendering of a command head, used as a trace label.
inline std::string headline(const Cmd &c) {
  if (auto *i = c.as<cmd::If>())
    return "if " + pretty(i->cond);
  if (auto *w = c.as<cmd::While>())
    return "while " + pretty(w->cond);
  if (auto *s = c.as<cmd::Seq>())
    return headline(s->first) + "; ...";
  return pretty(c);
}

} // namespace ifmon
