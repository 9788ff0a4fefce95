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

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifmon/ast.hpp"
#include "ifmon/ideal.hpp"
#include "ifmon/lattice.hpp"
#include "ifmon/relform.hpp"
#include "ifmon/semantics.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

using Rng = std::mt19937_64;

struct OracleConfig {
  unsigned vars = 3;
  Value lo = 0;
  Value hi = 2;
  unsigned depth = 4;
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  unsigned threads = 0; // 0 picks the hardware concurrency
  Fuel fuel{2000};
  unsigned widen_after = 3;

  void validate() const {
    if (vars < 1 || vars > 3)
      throw std::invalid_argument("--vars must be between 1 and 3");
    if (hi < lo)
      throw std::invalid_argument("empty value range");
    const double width = static_cast<double>(hi) - static_cast<double>(lo) + 1;
    if (std::pow(width, vars) > 1000.0)
      throw std::invalid_argument(
          "universe too large: |range|^vars must not exceed 1000");
    if (fuel.max_steps < 1)
      throw std::invalid_argument("fuel must be at least 1");
    if (widen_after < 1)
      throw std::invalid_argument("widen-after must be at least 1");
  }

  VarSet var_set() const {
    static const char *names[] = {"x", "y", "z"};
    VarSet out;
    for (unsigned i = 0; i < vars; ++i)
      out.insert(names[i]);
    return out;
  }

  ValueRange range() const { return {lo, hi}; }
};

/// Independent, replayable generator for sample `index`.
inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

struct GenOptions {
  bool annotations = true;
  bool asserts = true;
  /// Chance that a loop is an arbitrary `while b do c` rather than a
  /// counter-bounded one.
  double free_loop = 0.05;
};

class ProgramGenerator {
public:
  ProgramGenerator(const OracleConfig &cfg, Rng &rng, GenOptions opts = {})
      : cfg_(cfg), rng_(rng), opts_(opts) {
    for (const auto &x : cfg.var_set())
      vars_.push_back(x);
  }

  Cmd command(unsigned depth) { return cmd(depth, {}); }

  Expr expr(unsigned depth) {
    const int pick = uniform(0, 9);
    if (depth == 0 || pick < 4)
      return pick % 2 == 0 ? constant() : variable();
    if (pick == 9)
      return Expr::embed(boolean(depth - 1));
    const ArithOp op = pick < 6 ? ArithOp::add
                       : pick < 8 ? ArithOp::sub
                                  : ArithOp::mul;
    return Expr::binary(op, expr(depth - 1), expr(depth - 1));
  }

  BoolExpr boolean(unsigned depth) {
    const int pick = uniform(0, 9);
    if (depth > 0 && pick == 0)
      return BoolExpr::logical_not(boolean(depth - 1));
    if (depth > 0 && pick == 1)
      return BoolExpr::logical_and(boolean(depth - 1), boolean(depth - 1));
    const unsigned sub = depth > 0 ? 1 : 0;
    if (pick < 7)
      return BoolExpr::less(expr(sub), expr(sub));
    return BoolExpr::equal(expr(sub), expr(sub));
  }

  BasicFormula basic_formula() {
    switch (uniform(0, 5)) {
    case 0:
    case 1:
      return BasicFormula::agree(variable());
    case 2:
      return BasicFormula::agree(expr(1));
    case 3:
      return BasicFormula::both(boolean(0));
    default:
      return BasicFormula::cond_agree(boolean(0), expr(1));
    }
  }

  Formula formula() {
    Formula f{basic_formula()};
    if (uniform(0, 2) == 0)
      f.push_back(basic_formula());
    return f;
  }

private:
  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  Expr constant() {
    return Expr::constant(
        std::uniform_int_distribution<Value>(cfg_.lo - 1, cfg_.hi + 1)(rng_));
  }

  Expr variable() {
    return Expr::var(vars_[static_cast<std::size_t>(
        uniform(0, static_cast<int>(vars_.size()) - 1))]);
  }

  std::vector<std::string> free_of(const VarSet &blocked) const {
    std::vector<std::string> out;
    for (const auto &x : vars_)
      if (!blocked.count(x))
        out.push_back(x);
    return out;
  }

  Cmd assign(const VarSet &blocked) {
    auto targets = free_of(blocked);
    if (targets.empty())
      return Cmd::skip();
    const auto &x = targets[static_cast<std::size_t>(
        uniform(0, static_cast<int>(targets.size()) - 1))];
    return Cmd::assign(x, expr(2));
  }

  Cmd annotation() {
    if (opts_.asserts && uniform(0, 1) == 0)
      return Cmd::assert_(formula());
    return Cmd::assume(formula());
  }

  // `blocked` holds counters of enclosing bounded loops; the body never
  // assigns them, so every bounded loop terminates.
  Cmd cmd(unsigned depth, const VarSet &blocked) {
    if (depth == 0)
      return uniform(0, 9) == 0 ? Cmd::skip() : assign(blocked);
    const int pick = uniform(0, 99);
    if (pick < 20)
      return assign(blocked);
    if (pick < 50)
      return Cmd::seq(cmd(depth - 1, blocked), cmd(depth - 1, blocked));
    if (pick < 70)
      return Cmd::if_then_else(boolean(1), cmd(depth - 1, blocked),
                               cmd(depth - 1, blocked));
    if (pick < 85 || !opts_.annotations)
      return loop(depth, blocked);
    return annotation();
  }

  Cmd loop(unsigned depth, const VarSet &blocked) {
    std::bernoulli_distribution free_loop(opts_.free_loop);
    if (free_loop(rng_))
      return Cmd::while_do(boolean(1), cmd(depth - 1, blocked));
    auto counters = free_of(blocked);
    if (counters.empty())
      return assign(blocked);
    const std::string k = counters[static_cast<std::size_t>(
        uniform(0, static_cast<int>(counters.size()) - 1))];
    VarSet inner = blocked;
    inner.insert(k);
    const Value bound =
        std::uniform_int_distribution<Value>(cfg_.lo, cfg_.hi + 1)(rng_);
    Cmd body = Cmd::seq(
        cmd(depth - 1, inner),
        Cmd::assign(k, Expr::binary(ArithOp::add, Expr::var(k),
                                    Expr::constant(1))));
    return Cmd::while_do(BoolExpr::less(Expr::var(k), Expr::constant(bound)),
                         std::move(body));
  }

  const OracleConfig &cfg_;
  Rng &rng_;
  GenOptions opts_;
  std::vector<std::string> vars_;
};

/// Random program within the configured depth and variables.
inline Cmd gen_program(const OracleConfig &cfg, Rng &rng,
                       GenOptions opts = {}) {
  return ProgramGenerator(cfg, rng, opts).command(cfg.depth);
}

inline State random_state(const OracleConfig &cfg, Rng &rng) {
  std::vector<State::Binding> b;
  std::uniform_int_distribution<Value> v(cfg.lo, cfg.hi);
  for (const auto &x : cfg.var_set())
    b.emplace_back(x, v(rng));
  return State::over(cfg.var_set(), b);
}

/// Each member of `from` kept independently with probability p.
inline std::set<State> random_subset(const std::set<State> &from, double p,
                                     Rng &rng) {
  std::bernoulli_distribution keep(p);
  std::set<State> out;
  for (const auto &s : from)
    if (keep(rng))
      out.insert(s);
  return out;
}

/// A small random subset of L (up to `max_size` formulas).
inline FormulaSet random_delta(const Lattice &L, Rng &rng,
                               std::size_t max_size = 3) {
  std::vector<BasicFormula> pool(L.begin(), L.end());
  std::set<BasicFormula> out;
  if (pool.empty())
    return FormulaSet();
  const auto n = std::uniform_int_distribution<std::size_t>(0, max_size)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (std::size_t i = 0; i < n; ++i)
    out.insert(pool[pick(rng)]);
  return FormulaSet(std::move(out));
}

} // namespace ifmon
