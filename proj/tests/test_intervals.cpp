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

Interval R(Value lo, Value hi) { return Interval::range(lo, hi); }

IntervalEnv env(std::initializer_list<std::pair<const char *, Interval>> b) {
  IntervalEnv e = IntervalEnv::top();
  for (const auto &[x, i] : b)
    e = e.set(x, i);
  return e;
}

} // namespace

TEST(Interval, Arithmetic) {
  EXPECT_EQ(ivl_arith(ArithOp::add, R(1, 2), R(3, 4)), R(4, 6));
  EXPECT_EQ(ivl_arith(ArithOp::mul, R(3, 3), Interval::top()), Interval::top());
  EXPECT_EQ(ivl_arith(ArithOp::sub, R(0, 5), R(2, 3)), R(-3, 3));
  EXPECT_EQ(ivl_arith(ArithOp::mul, R(-2, 3), R(-1, 4)), R(-8, 12));
  EXPECT_EQ(ivl_arith(ArithOp::mul, R(0, 0), Interval::top()), R(0, 0));
  EXPECT_TRUE(ivl_arith(ArithOp::add, Interval::empty_set(), R(1, 1)).is_empty());
}

TEST(Interval, ArithmeticSaturatesAtMachineRange) {
  constexpr Value big = std::numeric_limits<Value>::max();
  Interval r = ivl_arith(ArithOp::add, R(big - 1, big), R(0, 5));
  EXPECT_EQ(r.lo(), Interval::Bound(big - 1));
  EXPECT_FALSE(r.hi().has_value());
}

TEST(Interval, ArithmeticMatchesBruteForce) {
  for (ArithOp op : {ArithOp::add, ArithOp::sub, ArithOp::mul})
    for (Value a = -2; a <= 2; ++a)
      for (Value b = a; b <= 2; ++b)
        for (Value c = -2; c <= 2; ++c)
          for (Value d = c; d <= 2; ++d) {
            Value lo = std::numeric_limits<Value>::max();
            Value hi = std::numeric_limits<Value>::min();
            for (Value x = a; x <= b; ++x)
              for (Value y = c; y <= d; ++y) {
                Value v = checked_arith(op, x, y);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
              }
            EXPECT_EQ(ivl_arith(op, R(a, b), R(c, d)), R(lo, hi));
          }
}

TEST(Interval, LatticeOperations) {
  EXPECT_EQ(hull(R(0, 1), R(5, 6)), R(0, 6));
  EXPECT_TRUE(intersect(R(0, 1), R(5, 6)).is_empty());
  EXPECT_EQ(widen(R(0, 1), R(0, 2)), Interval::range(0, std::nullopt));
  EXPECT_EQ(widen(R(0, 1), R(0, 1)), R(0, 1));
  EXPECT_TRUE(R(1, 2).leq(R(0, 3)));
  EXPECT_FALSE(R(0, 3).leq(R(1, 2)));
  EXPECT_TRUE(Interval::empty_set().leq(R(1, 1)));
}

TEST(IntervalEnv, BottomAndFault) {
  EXPECT_TRUE(env({{"x", Interval::empty_set()}}).is_bottom());
  EXPECT_TRUE(leq(IntervalEnv::bottom(), env({{"x", R(0, 0)}})));
  EXPECT_TRUE(leq(env({{"x", R(0, 0)}}), IntervalEnv::fault()));
  EXPECT_EQ(join(IntervalEnv::bottom(), env({{"x", R(0, 0)}})),
            env({{"x", R(0, 0)}}));
  EXPECT_TRUE(meet(env({{"x", R(0, 1)}}), env({{"x", R(3, 4)}})).is_bottom());
  EXPECT_EQ(meet(IntervalEnv::fault(), env({{"x", R(0, 1)}})),
            env({{"x", R(0, 1)}}));
}

TEST(IntervalEnv, Contains) {
  State s = State::over({"x", "y"}, {{"x", 3}, {"y", 0}});
  EXPECT_TRUE(contains(env({{"x", R(0, 5)}}), s));
  EXPECT_FALSE(contains(env({{"x", R(4, 5)}}), s));
  EXPECT_TRUE(contains(IntervalEnv::top(), s));
  EXPECT_FALSE(contains(IntervalEnv::bottom(), s));
  EXPECT_TRUE(contains(IntervalEnv::fault(), s));
}

TEST(EvalInterval, Examples) {
  IntervalEnv e = env({{"x", R(0, 2)}, {"y", R(1, 1)}});
  EXPECT_EQ(eval_interval(parse_expr("x + y"), e), R(1, 3));
  EXPECT_EQ(eval_interval(parse_expr("z"), e), Interval::top());
  EXPECT_EQ(eval_interval(parse_expr("x < 5"), e), R(1, 1));
  EXPECT_EQ(eval_interval(parse_expr("x < 1"), e), R(0, 1));
  EXPECT_EQ(eval_interval(parse_expr("y = 1"), e), R(1, 1));
  EXPECT_EQ(eval_interval(parse_expr("seed * 42"), env({{"seed", R(3, 3)}})),
            R(126, 126));
}

TEST(App, RefinesVariable) {
  EXPECT_EQ(app(parse_expr("x"), R(0, 4), env({{"x", R(2, 9)}})),
            env({{"x", R(2, 4)}}));
}

TEST(App, RefinesSum) {
  IntervalEnv start = env({{"x", R(0, 5)}, {"y", R(0, 5)}});
  IntervalEnv got = app(parse_expr("x + y"), R(10, 10), start);
  EXPECT_EQ(got, env({{"x", R(5, 5)}, {"y", R(5, 5)}}));
  // Every concrete solution survives.
  for (Value x = 0; x <= 5; ++x)
    for (Value y = 0; y <= 5; ++y) {
      if (x + y == 10) {
        EXPECT_TRUE(contains(got, State::over({"x", "y"}, {{"x", x}, {"y", y}})));
      }
    }
}

TEST(App, ImpossibleConstantIsBottom) {
  EXPECT_TRUE(app(parse_expr("5"), R(7, 9), env({{"x", R(0, 1)}})).is_bottom());
  EXPECT_EQ(app(parse_expr("5"), R(0, 9), env({{"x", R(0, 1)}})),
            env({{"x", R(0, 1)}}));
}

TEST(GuardInt, Examples) {
  EXPECT_EQ(guard_int(parse_bool("x < 5"), env({{"x", R(0, 10)}})),
            env({{"x", R(0, 4)}}));
  EXPECT_EQ(guard_int(parse_bool("x = y"), env({{"x", R(2, 2)}, {"y", R(0, 9)}})),
            env({{"x", R(2, 2)}, {"y", R(2, 2)}}));
  EXPECT_TRUE(guard_int(parse_bool("x < 5"), IntervalEnv::bottom()).is_bottom());
  EXPECT_TRUE(guard_int(parse_bool("x < 5"), IntervalEnv::fault()).is_fault());
  EXPECT_TRUE(guard_int(parse_bool("x < 0"), env({{"x", R(0, 3)}})).is_bottom());
  EXPECT_EQ(guard_int(parse_bool("!(x < 2)"), env({{"x", R(0, 3)}})),
            env({{"x", R(2, 3)}}));
  EXPECT_EQ(guard_int(parse_bool("(1 < x) && (x < 3)"), env({{"x", R(0, 9)}})),
            env({{"x", R(2, 2)}}));
}

TEST(IntervalExec, UntakenBranchOfSeedHash) {
  IntervalEnv start = env({{"seed", R(3, 3)}});
  IntervalEnv after = interval_exec(parse_program("seed := 1 + seed"), start);
  EXPECT_EQ(after.get("seed"), R(4, 4));
}

TEST(IntervalExec, LoopReachesExitValue) {
  Cmd c = parse_program("while x < 10 do { x := x + 1 }");
  EXPECT_EQ(interval_exec(c, env({{"x", R(0, 0)}})).get("x"), R(10, 10));
}

TEST(IntervalExec, ConditionalJoinsBranches) {
  Cmd c = parse_program("if x < 1 then { y := 5 } else { y := x }");
  IntervalEnv out = interval_exec(c, env({{"x", R(0, 3)}}));
  EXPECT_EQ(out.get("y"), R(1, 5));
}

TEST(IntervalExec, ObserverSeesEveryNonSequenceCommand) {
  Cmd c = parse_program("x := 1; y := x + 1");
  int seen = 0;
  interval_exec(c, IntervalEnv::top(), IntervalConfig{},
                [&](const Cmd &, const IntervalEnv &) { ++seen; });
  EXPECT_EQ(seen, 2);
}

TEST(IntervalSuite, SoundOnRandomPrograms) {
  OracleConfig cfg;
  cfg.samples = 1000;
  SuiteReport r = run_suite("interval-sound", cfg);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LT(r.skip_rate(), 0.2);
}
