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

/**************************************************************************
 * Abstract syntax of the annotated while-language.
 *
 *   e ::= n | id | e1 (+|-|*) e2 | b
 *   b ::= e1 < e2 | e1 = e2 | !b | b1 && b2
 *   c ::= id := e | c1; c2 | if b then c1 else c2 | while b do c
 *       | skip | assume F | assert F
 *   F ::= A e | B b | B b => A e   (comma separated, conjunctive)
 *
 * All nodes are immutable and shared; copying an Expr/BoolExpr/Cmd is a
 * reference count bump. Structural ordering is total so that formulas
 * can live in ordered sets.
 **************************************************************************/

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ifmon {

using Value = std::int64_t;
using VarSet = std::set<std::string>;

enum class ArithOp { add, sub, mul };

struct ExprNode;
struct BoolNode;
struct CmdNode;

class Expr {
public:
  static Expr constant(Value v);
  static Expr var(std::string name);
  static Expr binary(ArithOp op, Expr lhs, Expr rhs);
  static Expr embed(class BoolExpr cond);

  const ExprNode &node() const { return *node_; }
  template <typename T> const T *as() const;

  friend std::strong_ordering operator<=>(const Expr &a, const Expr &b);
  friend bool operator==(const Expr &a, const Expr &b) {
    return (a <=> b) == 0;
  }

private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

class BoolExpr {
public:
  static BoolExpr less(Expr lhs, Expr rhs);
  static BoolExpr equal(Expr lhs, Expr rhs);
  // Raw negation node. Use negate() for the canonical form.
  static BoolExpr logical_not(BoolExpr operand);
  static BoolExpr logical_and(BoolExpr lhs, BoolExpr rhs);

  const BoolNode &node() const { return *node_; }
  template <typename T> const T *as() const;

  friend std::strong_ordering operator<=>(const BoolExpr &a,
                                          const BoolExpr &b);
  friend bool operator==(const BoolExpr &a, const BoolExpr &b) {
    return (a <=> b) == 0;
  }

private:
  explicit BoolExpr(std::shared_ptr<const BoolNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const BoolNode> node_;
};

namespace expr {
struct Const {
  Value value;
};
struct Var {
  std::string name;
};
struct Binary {
  ArithOp op;
  Expr lhs;
  Expr rhs;
};
struct Embed {
  BoolExpr cond;
};
} // namespace expr

namespace cond {
struct Less {
  Expr lhs;
  Expr rhs;
};
struct Equal {
  Expr lhs;
  Expr rhs;
};
struct Not {
  BoolExpr operand;
};
struct And {
  BoolExpr lhs;
  BoolExpr rhs;
};
} // namespace cond

struct ExprNode {
  std::variant<expr::Const, expr::Var, expr::Binary, expr::Embed> v;
};

struct BoolNode {
  std::variant<cond::Less, cond::Equal, cond::Not, cond::And> v;
};

template <typename T> const T *Expr::as() const {
  return std::get_if<T>(&node_->v);
}
template <typename T> const T *BoolExpr::as() const {
  return std::get_if<T>(&node_->v);
}

inline Expr Expr::constant(Value v) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{expr::Const{v}}));
}
inline Expr Expr::var(std::string name) {
  return Expr(std::make_shared<const ExprNode>(
      ExprNode{expr::Var{std::move(name)}}));
}
inline Expr Expr::binary(ArithOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const ExprNode>(
      ExprNode{expr::Binary{op, std::move(lhs), std::move(rhs)}}));
}
inline Expr Expr::embed(BoolExpr cond) {
  return Expr(
      std::make_shared<const ExprNode>(ExprNode{expr::Embed{std::move(cond)}}));
}

inline BoolExpr BoolExpr::less(Expr lhs, Expr rhs) {
  return BoolExpr(std::make_shared<const BoolNode>(
      BoolNode{cond::Less{std::move(lhs), std::move(rhs)}}));
}
inline BoolExpr BoolExpr::equal(Expr lhs, Expr rhs) {
  return BoolExpr(std::make_shared<const BoolNode>(
      BoolNode{cond::Equal{std::move(lhs), std::move(rhs)}}));
}
inline BoolExpr BoolExpr::logical_not(BoolExpr operand) {
  return BoolExpr(std::make_shared<const BoolNode>(
      BoolNode{cond::Not{std::move(operand)}}));
}
inline BoolExpr BoolExpr::logical_and(BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(std::make_shared<const BoolNode>(
      BoolNode{cond::And{std::move(lhs), std::move(rhs)}}));
}

inline std::strong_ordering operator<=>(const Expr &a, const Expr &b) {
  if (a.node_ == b.node_)
    return std::strong_ordering::equal;
  const auto &va = a.node_->v;
  const auto &vb = b.node_->v;
  if (auto c = va.index() <=> vb.index(); c != 0)
    return c;
  if (auto *x = std::get_if<expr::Const>(&va))
    return x->value <=> std::get<expr::Const>(vb).value;
  if (auto *x = std::get_if<expr::Var>(&va))
    return x->name <=> std::get<expr::Var>(vb).name;
  if (auto *x = std::get_if<expr::Binary>(&va)) {
    const auto &y = std::get<expr::Binary>(vb);
    if (auto c = x->op <=> y.op; c != 0)
      return c;
    if (auto c = x->lhs <=> y.lhs; c != 0)
      return c;
    return x->rhs <=> y.rhs;
  }
  return std::get<expr::Embed>(va).cond <=> std::get<expr::Embed>(vb).cond;
}

inline std::strong_ordering operator<=>(const BoolExpr &a, const BoolExpr &b) {
  if (a.node_ == b.node_)
    return std::strong_ordering::equal;
  const auto &va = a.node_->v;
  const auto &vb = b.node_->v;
  if (auto c = va.index() <=> vb.index(); c != 0)
    return c;
  if (auto *x = std::get_if<cond::Less>(&va)) {
    const auto &y = std::get<cond::Less>(vb);
    if (auto c = x->lhs <=> y.lhs; c != 0)
      return c;
    return x->rhs <=> y.rhs;
  }
  if (auto *x = std::get_if<cond::Equal>(&va)) {
    const auto &y = std::get<cond::Equal>(vb);
    if (auto c = x->lhs <=> y.lhs; c != 0)
      return c;
    return x->rhs <=> y.rhs;
  }
  if (auto *x = std::get_if<cond::Not>(&va))
    return x->operand <=> std::get<cond::Not>(vb).operand;
  const auto &x = std::get<cond::And>(va);
  const auto &y = std::get<cond::And>(vb);
  if (auto c = x.lhs <=> y.lhs; c != 0)
    return c;
  return x.rhs <=> y.rhs;
}

/// Canonical negation: strips one negation if present, otherwise adds one.
/// negate(negate(b)) == b for every b.
inline BoolExpr negate(const BoolExpr &b) {
  if (auto *n = b.as<cond::Not>())
    return n->operand;
  return BoolExpr::logical_not(b);
}

//
// Relational formulas
//

namespace formula {
/// A e: both states give e the same value.
struct Agree {
  Expr expr;
  friend auto operator<=>(const Agree &, const Agree &) = default;
};
/// B b: both states satisfy b.
struct Both {
  BoolExpr cond;
  friend auto operator<=>(const Both &, const Both &) = default;
};
/// B b => A e
struct CondAgree {
  BoolExpr cond;
  Expr expr;
  friend auto operator<=>(const CondAgree &, const CondAgree &) = default;
};
} // namespace formula

class BasicFormula {
public:
  using Variant = std::variant<formula::Agree, formula::Both, formula::CondAgree>;

  BasicFormula(formula::Agree f) : v_(std::move(f)) {}
  BasicFormula(formula::Both f) : v_(std::move(f)) {}
  BasicFormula(formula::CondAgree f) : v_(std::move(f)) {}

  static BasicFormula agree(Expr e) { return formula::Agree{std::move(e)}; }
  static BasicFormula agree_var(std::string x) {
    return formula::Agree{Expr::var(std::move(x))};
  }
  static BasicFormula both(BoolExpr b) { return formula::Both{std::move(b)}; }
  static BasicFormula cond_agree(BoolExpr b, Expr e) {
    return formula::CondAgree{std::move(b), std::move(e)};
  }

  const Variant &v() const { return v_; }
  template <typename T> const T *as() const { return std::get_if<T>(&v_); }

  friend std::strong_ordering operator<=>(const BasicFormula &a,
                                          const BasicFormula &b) {
    return a.v_ <=> b.v_;
  }
  friend bool operator==(const BasicFormula &a, const BasicFormula &b) {
    return (a <=> b) == 0;
  }

private:
  Variant v_;
};

/// Nonempty conjunction of basic formulas.
using Formula = std::vector<BasicFormula>;

//
// Commands
//

class Cmd {
public:
  static Cmd skip();
  static Cmd assign(std::string target, Expr value);
  /// Right-associating sequence: seq(seq(a, b), c) == seq(a, seq(b, c)).
  static Cmd seq(Cmd first, Cmd second);
  static Cmd if_then_else(BoolExpr cond, Cmd then_branch, Cmd else_branch);
  static Cmd while_do(BoolExpr cond, Cmd body);
  static Cmd assume(Formula f);
  static Cmd assert_(Formula f);

  const CmdNode &node() const { return *node_; }
  template <typename T> const T *as() const;

  friend std::strong_ordering operator<=>(const Cmd &a, const Cmd &b);
  friend bool operator==(const Cmd &a, const Cmd &b) { return (a <=> b) == 0; }

private:
  explicit Cmd(std::shared_ptr<const CmdNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const CmdNode> node_;
};

namespace cmd {
struct Skip {
  friend auto operator<=>(const Skip &, const Skip &) = default;
};
struct Assign {
  std::string target;
  Expr value;
};
struct Seq {
  Cmd first;
  Cmd second;
};
struct If {
  BoolExpr cond;
  Cmd then_branch;
  Cmd else_branch;
};
struct While {
  BoolExpr cond;
  Cmd body;
};
struct Assume {
  Formula formula;
};
struct Assert {
  Formula formula;
};
} // namespace cmd

struct CmdNode {
  std::variant<cmd::Skip, cmd::Assign, cmd::Seq, cmd::If, cmd::While,
               cmd::Assume, cmd::Assert>
      v;
};

template <typename T> const T *Cmd::as() const {
  return std::get_if<T>(&node_->v);
}

inline Cmd Cmd::skip() {
  static const Cmd instance(
      std::make_shared<const CmdNode>(CmdNode{cmd::Skip{}}));
  return instance;
}
inline Cmd Cmd::assign(std::string target, Expr value) {
  return Cmd(std::make_shared<const CmdNode>(
      CmdNode{cmd::Assign{std::move(target), std::move(value)}}));
}
inline Cmd Cmd::seq(Cmd first, Cmd second) {
  if (auto *s = first.as<cmd::Seq>())
    return seq(s->first, seq(s->second, std::move(second)));
  return Cmd(std::make_shared<const CmdNode>(
      CmdNode{cmd::Seq{std::move(first), std::move(second)}}));
}
inline Cmd Cmd::if_then_else(BoolExpr cond, Cmd then_branch, Cmd else_branch) {
  return Cmd(std::make_shared<const CmdNode>(CmdNode{cmd::If{
      std::move(cond), std::move(then_branch), std::move(else_branch)}}));
}
inline Cmd Cmd::while_do(BoolExpr cond, Cmd body) {
  return Cmd(std::make_shared<const CmdNode>(
      CmdNode{cmd::While{std::move(cond), std::move(body)}}));
}
inline Cmd Cmd::assume(Formula f) {
  return Cmd(
      std::make_shared<const CmdNode>(CmdNode{cmd::Assume{std::move(f)}}));
}
inline Cmd Cmd::assert_(Formula f) {
  return Cmd(
      std::make_shared<const CmdNode>(CmdNode{cmd::Assert{std::move(f)}}));
}

inline std::strong_ordering operator<=>(const Cmd &a, const Cmd &b) {
  if (a.node_ == b.node_)
    return std::strong_ordering::equal;
  const auto &va = a.node_->v;
  const auto &vb = b.node_->v;
  if (auto c = va.index() <=> vb.index(); c != 0)
    return c;
  return std::visit(
      [&](const auto &x) -> std::strong_ordering {
        using T = std::decay_t<decltype(x)>;
        const auto &y = std::get<T>(vb);
        if constexpr (std::is_same_v<T, cmd::Skip>) {
          return std::strong_ordering::equal;
        } else if constexpr (std::is_same_v<T, cmd::Assign>) {
          if (auto c = x.target <=> y.target; c != 0)
            return c;
          return x.value <=> y.value;
        } else if constexpr (std::is_same_v<T, cmd::Seq>) {
          if (auto c = x.first <=> y.first; c != 0)
            return c;
          return x.second <=> y.second;
        } else if constexpr (std::is_same_v<T, cmd::If>) {
          if (auto c = x.cond <=> y.cond; c != 0)
            return c;
          if (auto c = x.then_branch <=> y.then_branch; c != 0)
            return c;
          return x.else_branch <=> y.else_branch;
        } else if constexpr (std::is_same_v<T, cmd::While>) {
          if (auto c = x.cond <=> y.cond; c != 0)
            return c;
          return x.body <=> y.body;
        } else {
          return x.formula <=> y.formula;
        }
      },
      va);
}

//
// Syntactic queries
//

inline void collect_vars(const Expr &e, VarSet &out);
inline void collect_vars(const BoolExpr &b, VarSet &out);

inline void collect_vars(const Expr &e, VarSet &out) {
  std::visit(
      [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, expr::Var>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, expr::Binary>) {
          collect_vars(n.lhs, out);
          collect_vars(n.rhs, out);
        } else if constexpr (std::is_same_v<T, expr::Embed>) {
          collect_vars(n.cond, out);
        }
      },
      e.node().v);
}

inline void collect_vars(const BoolExpr &b, VarSet &out) {
  std::visit(
      [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, cond::Not>) {
          collect_vars(n.operand, out);
        } else {
          collect_vars(n.lhs, out);
          collect_vars(n.rhs, out);
        }
      },
      b.node().v);
}

inline void collect_vars(const BasicFormula &f, VarSet &out) {
  std::visit(
      [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, formula::Agree>) {
          collect_vars(n.expr, out);
        } else if constexpr (std::is_same_v<T, formula::Both>) {
          collect_vars(n.cond, out);
        } else {
          collect_vars(n.cond, out);
          collect_vars(n.expr, out);
        }
      },
      f.v());
}

template <typename T> VarSet free_vars(const T &x) {
  VarSet out;
  collect_vars(x, out);
  return out;
}

/// Every identifier occurring in the program, annotations included.
inline void collect_vars(const Cmd &c, VarSet &out) {
  std::visit(
      [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, cmd::Assign>) {
          out.insert(n.target);
          collect_vars(n.value, out);
        } else if constexpr (std::is_same_v<T, cmd::Seq>) {
          collect_vars(n.first, out);
          collect_vars(n.second, out);
        } else if constexpr (std::is_same_v<T, cmd::If>) {
          collect_vars(n.cond, out);
          collect_vars(n.then_branch, out);
          collect_vars(n.else_branch, out);
        } else if constexpr (std::is_same_v<T, cmd::While>) {
          collect_vars(n.cond, out);
          collect_vars(n.body, out);
        } else if constexpr (std::is_same_v<T, cmd::Assume> ||
                             std::is_same_v<T, cmd::Assert>) {
          for (const auto &f : n.formula)
            collect_vars(f, out);
        }
      },
      c.node().v);
}

inline VarSet program_vars(const Cmd &c) { return free_vars(c); }

inline bool has_annotations(const Cmd &c) {
  return std::visit(
      [](const auto &n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, cmd::Seq>)
          return has_annotations(n.first) || has_annotations(n.second);
        else if constexpr (std::is_same_v<T, cmd::If>)
          return has_annotations(n.then_branch) ||
                 has_annotations(n.else_branch);
        else if constexpr (std::is_same_v<T, cmd::While>)
          return has_annotations(n.body);
        else
          return std::is_same_v<T, cmd::Assume> ||
                 std::is_same_v<T, cmd::Assert>;
      },
      c.node().v);
}

inline bool has_asserts(const Cmd &c) {
  return std::visit(
      [](const auto &n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, cmd::Seq>)
          return has_asserts(n.first) || has_asserts(n.second);
        else if constexpr (std::is_same_v<T, cmd::If>)
          return has_asserts(n.then_branch) || has_asserts(n.else_branch);
        else if constexpr (std::is_same_v<T, cmd::While>)
          return has_asserts(n.body);
        else
          return std::is_same_v<T, cmd::Assert>;
      },
      c.node().v);
}

} // namespace ifmon
