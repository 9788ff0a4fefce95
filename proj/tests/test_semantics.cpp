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

#include <limits>

#include <gtest/gtest.h>

#include "ifmon/ifmon.hpp"

using namespace ifmon;

namespace {

State st(std::initializer_list<State::Binding> b) {
  VarSet d;
  for (const auto &[x, _] : b)
    d.insert(x);
  return State::over(d, std::vector<State::Binding>(b));
}

StateSet xs(std::initializer_list<Value> vals) {
  std::set<State> out;
  for (Value v : vals)
    out.insert(st({{"x", v}}));
  return StateSet(std::move(out));
}

} // namespace

TEST(State, MissingVariablesDefaultToZero) {
  State s = State::over({"a", "b"}, {{"b", 4}});
  EXPECT_EQ(s.get("a"), 0);
  EXPECT_EQ(s.get("b"), 4);
  EXPECT_THROW(s.get("c"), UnboundVariable);
}

TEST(State, UnknownBindingIsRejected) {
  EXPECT_THROW(State::over({"a"}, {{"z", 1}}), UnboundVariable);
}

TEST(State, ParsesArgumentAndFileForms) {
  auto b = parse_bindings("secret=1, public=-2");
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[1], (State::Binding{"public", -2}));
  auto f = parse_state_file("# comment\nsecret=1\n\n  public = 0 // trailing\n");
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0], (State::Binding{"secret", 1}));
  EXPECT_THROW(parse_bindings("x"), StateSyntaxError);
  EXPECT_THROW(parse_bindings("x=1y"), StateSyntaxError);
  EXPECT_THROW(parse_bindings("1x=1"), StateSyntaxError);
}

TEST(State, EnumeratesUniverse) {
  auto all = enumerate_states({"x", "y"}, 0, 2);
  EXPECT_EQ(all.size(), 9u);
  EXPECT_EQ(universe({"x", "y", "z"}, 0, 1).size(), 8u);
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval_expr(Expr::var("x"), st({{"x", 7}})), 7);
  State s0 = st({{"secret", 1}, {"public", 0}});
  EXPECT_EQ(eval_expr(Expr::embed(negate(parse_bool("0 < secret"))), s0), 0);
  EXPECT_EQ(eval_expr(parse_expr("seed * a * 42"), st({{"seed", 3}, {"a", 2}})),
            252);
  EXPECT_EQ(eval_expr(parse_expr("(1 < 2) + (2 = 2) + (1 = 2)"), st({})), 2);
}

TEST(Eval, OverflowIsReported) {
  State s = st({{"x", std::numeric_limits<Value>::max()}});
  EXPECT_THROW(eval_expr(parse_expr("x + 1"), s), ArithmeticOverflow);
  EXPECT_THROW(eval_expr(parse_expr("x * 2"), s), ArithmeticOverflow);
  EXPECT_THROW(eval_expr(parse_expr("0 - x - 2"), s), ArithmeticOverflow);
}

TEST(Run, SkipTerminates) {
  State s = st({{"x", 3}});
  EXPECT_EQ(run(Cmd::skip(), s).state, s);
}

TEST(Run, BranchCounter) {
  Cmd c = parse_program(R"(assume A public;
if (secret > 0) then { public := public + 1; } else { skip; }
y := 0;
assert A y)");
  Outcome o = run(c, st({{"secret", 1}, {"public", 0}, {"y", 0}}));
  ASSERT_TRUE(o.terminated());
  EXPECT_EQ(*o.state, st({{"secret", 1}, {"public", 1}, {"y", 0}}));
}

TEST(Run, DivergenceExhaustsFuel) {
  Outcome o = run(parse_program("while 0 < 1 do skip"), st({}), Fuel{100});
  EXPECT_TRUE(o.budget_exhausted());
}

TEST(Run, LoopComputesSum) {
  Cmd c = parse_program("s := 0; i := 0; while i < 5 do { i := i + 1; s := s + i }");
  Outcome o = run(c, st({{"s", 0}, {"i", 0}}));
  ASSERT_TRUE(o.terminated());
  EXPECT_EQ(o.state->get("s"), 15);
}

TEST(Guard, Examples) {
  BoolExpr b = parse_bool("0 < x");
  EXPECT_EQ(guard(b, StateSet()), StateSet());
  EXPECT_TRUE(guard(b, StateSet::fault()).is_fault());
  EXPECT_EQ(guard(b, xs({0, 1, 2})), xs({1, 2}));
}

TEST(Collecting, Examples) {
  EXPECT_EQ(collecting(Cmd::skip(), xs({0, 5})), xs({0, 5}));
  EXPECT_EQ(collecting(parse_program("x := x + 1"), xs({0, 2})), xs({1, 3}));
  EXPECT_TRUE(collecting(Cmd::skip(), StateSet::fault()).is_fault());
}

TEST(Collecting, WhileExitsAtGuard) {
  Cmd c = parse_program("while x < 3 do { x := x + 1 }");
  EXPECT_EQ(collecting(c, xs({0, 1, 5})), xs({3, 5}));
}

TEST(Collecting, DivergingStatesDisappear) {
  // x = 0 cycles forever between 0 and 1; x = 2 exits at once.
  Cmd c = parse_program("while x < 2 do { x := 1 - x }");
  EXPECT_EQ(collecting(c, xs({0, 2})), xs({2}));
}

TEST(Collecting, UnboundedGrowthExhaustsFuel) {
  Cmd c = parse_program("while 0 < x do { x := x + 1 }");
  EXPECT_THROW(collecting(c, xs({1}), Fuel{50}), BudgetExhausted);
}

TEST(Collecting, AnnotationsActLikeSkip) {
  EXPECT_EQ(collecting(parse_program("assume A x; assert B 0 < x"), xs({0, 1})),
            xs({0, 1}));
}

TEST(Collecting, SingletonMatchesRun) {
  OracleConfig cfg;
  GenOptions plain;
  plain.annotations = false;
  int compared = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = sample_rng(17, i);
    Cmd c = gen_program(cfg, rng, plain);
    State s = random_state(cfg, rng);
    try {
      Outcome o = run(c, s, cfg.fuel);
      if (!o.terminated())
        continue;
      EXPECT_EQ(collecting(c, StateSet{s}, cfg.fuel), StateSet{*o.state})
          << pretty(c);
      ++compared;
    } catch (const ArithmeticOverflow &) {
    }
  }
  EXPECT_GT(compared, 150);
}

TEST(Collecting, IsMonotone) {
  OracleConfig cfg;
  StateSet U = universe(cfg.var_set(), 0, 2);
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = sample_rng(19, i);
    Cmd c = gen_program(cfg, rng);
    auto small = random_subset(U.states(), 0.3, rng);
    auto big = small;
    auto extra = random_subset(U.states(), 0.3, rng);
    big.insert(extra.begin(), extra.end());
    try {
      EXPECT_TRUE(leq(collecting(c, StateSet(small), cfg.fuel),
                      collecting(c, StateSet(big), cfg.fuel)));
    } catch (const BudgetExhausted &) {
    } catch (const ArithmeticOverflow &) {
    }
  }
}

TEST(CollectingSuite, MatchesLiftedRuns) {
  OracleConfig cfg;
  cfg.samples = 300;
  SuiteReport r = run_suite("lemma1", cfg);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LT(r.skip_rate(), 0.2);
}
