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

#include <gtest/gtest.h>

#include "ifmon/ifmon.hpp"

using namespace ifmon;

namespace {

const char *kBranchCounter = R"(assume A public;
if (secret > 0) then { public := public + 1; } else { skip; }
y := 0;
assert A y)";

const char *kSeedHash = R"(assume A seed;
a := secret_base;
if 0 < secret_conf then {
  b := secret_number;
  r := seed * a * b;
  seed := 1 + seed
} else {
  r := seed * a * 42;
  seed := 1 + seed
};
assert A seed)";

BasicFormula F(const char *text) { return parse_basic_formula(text); }

struct Case {
  Cmd c;
  State s;
  Lattice L;
};

Case make_case(const char *program, std::vector<State::Binding> bindings) {
  Cmd c = parse_program(program);
  State s = State::over(program_vars(c), bindings);
  return {c, s, collect_lattice(c, s.domain())};
}

MonitorOutcome go(MonitorKind k, const Case &u, bool trace = false) {
  MonitorOptions opts;
  opts.trace = trace;
  return monitor(k, u.c, u.s, FormulaSet(), u.L, opts);
}

IntervalEnv env(std::initializer_list<std::pair<const char *, Interval>> b) {
  IntervalEnv e = IntervalEnv::top();
  for (const auto &[x, i] : b)
    e = e.set(x, i);
  return e;
}

} // namespace

TEST(ModVars, Examples) {
  EXPECT_TRUE(mod_vars(Cmd::skip()).empty());
  EXPECT_EQ(mod_vars(parse_program(kBranchCounter)), (VarSet{"public", "y"}));
  EXPECT_EQ(mod_vars(parse_program("while x < 1 do { x := 1; assume A y }")),
            VarSet{"x"});
}

TEST(UntouchedBy, DropsMentionedVariables) {
  FormulaSet D{F("A x"), F("A y"), F("B x < y"), F("B 0 < z => A z")};
  EXPECT_EQ(untouched_by(D, {"x"}), (FormulaSet{F("A y"), F("B 0 < z => A z")}));
  EXPECT_TRUE(untouched_by(FormulaSet::fault(), {"x"}).is_fault());
}

TEST(MonitorD, BranchCounterTrace) {
  Case u = make_case(kBranchCounter, {{"secret", 1}, {"public", 0}});
  MonitorOutcome o = go(MonitorKind::D, u, true);
  ASSERT_FALSE(o.fault());
  EXPECT_EQ(o.major.state->get("public"), 1);

  struct Row {
    const char *event;
    const char *note;
    FormulaSet D;
  };
  const FormulaSet inside{F("A public"), F("B 0 < secret")};
  const std::vector<Row> want = {
      {"step", "", FormulaSet{F("A public")}},
      {"branch", "high", inside},
      {"step", "", inside},
      {"merge", "high", FormulaSet()},
      {"step", "", FormulaSet{F("A y")}},
      {"step", "", FormulaSet{F("A y")}},
  };
  ASSERT_EQ(o.trace.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(o.trace[i].event, want[i].event) << i;
    EXPECT_EQ(o.trace[i].note, want[i].note) << i;
    EXPECT_EQ(o.trace[i].formulas, want[i].D) << i;
  }
  EXPECT_EQ(o.trace.back().label, "assert A y");
}

TEST(MonitorD, AssertOnUpdatedPublicFaults) {
  std::string text = kBranchCounter;
  text.replace(text.find("assert A y"), 10, "assert A public");
  Case u = make_case(text.c_str(), {{"secret", 1}, {"public", 0}});
  EXPECT_TRUE(go(MonitorKind::D, u).fault());
}

TEST(MonitorD, FaultInsideHighBranchSurvivesMerge) {
  Case u = make_case("assume A public; if 0 < secret then { assert A secret } "
                  "else { skip }; public := 0",
                  {{"secret", 1}});
  MonitorOutcome o = go(MonitorKind::D, u, true);
  EXPECT_TRUE(o.fault());
  ASSERT_TRUE(o.major.terminated());
  EXPECT_EQ(o.major.state->get("public"), 0);
  // Tracing stops once the formula set is the fault element.
  EXPECT_EQ(o.trace.back().event, "merge");
  EXPECT_TRUE(o.trace.back().formulas.is_fault());
}

TEST(MonitorD, LowBranchKeepsFormulas) {
  Case u = make_case("assume A x, A y; if x < 1 then { y := y + 1 } else { skip }; "
                  "assert A y",
                  {{"x", 0}});
  MonitorOutcome o = go(MonitorKind::D, u, true);
  EXPECT_FALSE(o.fault());
  EXPECT_EQ(o.trace[1].note, "low");
}

TEST(MonitorD, BudgetExhaustion) {
  Case u = make_case("while 0 < 1 do skip", {});
  MonitorOptions opts;
  opts.fuel = Fuel{50};
  MonitorOutcome o = monitor(MonitorKind::D, u.c, u.s, FormulaSet(), u.L, opts);
  EXPECT_TRUE(o.budget_exhausted());
  EXPECT_FALSE(o.fault());
}

TEST(MonitorM, SeedHashStillFaults) {
  // Both branches assign seed, so the modified-variable analysis drops it.
  Case u = make_case(kSeedHash, {{"seed", 3}, {"secret_conf", 1}});
  EXPECT_TRUE(go(MonitorKind::M, u).fault());
  EXPECT_TRUE(go(MonitorKind::D, u).fault());
}

TEST(MonitorM, UntouchedFormulasSurviveHighBranch) {
  Case u = make_case("assume A x; if 0 < h then { y := 1 } else { y := 2 }; "
                  "assert A x",
                  {{"h", 1}});
  EXPECT_FALSE(go(MonitorKind::M, u).fault());
  EXPECT_TRUE(go(MonitorKind::D, u).fault());
}

TEST(MonitorI, SeedHashPasses) {
  Case u = make_case(kSeedHash, {{"seed", 3}, {"secret_conf", 1}});
  MonitorOutcome o = go(MonitorKind::I, u, true);
  ASSERT_FALSE(o.fault());
  EXPECT_EQ(*o.formulas, FormulaSet{F("A seed")});
  EXPECT_EQ(o.major.state->get("seed"), 4);

  std::vector<const TraceEntry *> untaken;
  for (const auto &e : o.trace)
    if (e.event == "untaken")
      untaken.push_back(&e);
  ASSERT_EQ(untaken.size(), 3u);
  ASSERT_TRUE(untaken.front()->env);
  EXPECT_EQ(untaken.front()->env->get("seed"), Interval::constant(3));
  EXPECT_EQ(untaken.front()->env->get("secret_conf"),
            Interval::range(std::nullopt, 0));
  ASSERT_TRUE(untaken.back()->env);
  EXPECT_EQ(untaken.back()->env->get("seed"), Interval::constant(4));
}

TEST(MonitorI, ImplicitFlowStillFaults) {
  Case u = make_case("assume A inlo; if 0 < inhi then { outlo := 1 } else "
                  "{ outlo := 0 }; assert A outlo",
                  {{"inhi", 1}});
  EXPECT_TRUE(go(MonitorKind::I, u).fault());
}

TEST(ReducedProduct, ToIntExamples) {
  State s = State::over({"seed", "x"}, {{"seed", 3}, {"x", 0}});
  EXPECT_EQ(toint(IntervalEnv::top(), FormulaSet{F("A seed")}, s).get("seed"),
            Interval::constant(3));
  EXPECT_EQ(toint(env({{"x", Interval::range(0, 9)}}), FormulaSet{F("B x < 5")}, s)
                .get("x"),
            Interval::range(0, 4));
  EXPECT_EQ(toint(IntervalEnv::top(), FormulaSet::fault(), s), IntervalEnv::top());
  EXPECT_TRUE(toint(env({{"seed", Interval::range(5, 6)}}),
                    FormulaSet{F("A seed")}, s)
                  .is_bottom());
}

TEST(ReducedProduct, ToFormExamples) {
  State s = State::over({"seed", "x"}, {{"seed", 4}, {"x", 0}});
  Lattice L{F("A seed"), F("A x")};
  EXPECT_EQ(toform(env({{"seed", Interval::constant(4)}}), FormulaSet(), s, L),
            FormulaSet{F("A seed")});
  EXPECT_EQ(toform(env({{"seed", Interval::range(3, 5)}}), FormulaSet(), s, L),
            FormulaSet());
  // A singleton at the wrong value says nothing about agreement with s.
  EXPECT_EQ(toform(env({{"seed", Interval::constant(5)}}), FormulaSet(), s, L),
            FormulaSet());
  EXPECT_EQ(toform(IntervalEnv::bottom(), FormulaSet(), s, L), FormulaSet(L));
  EXPECT_EQ(toform(IntervalEnv::fault(), FormulaSet{F("A x")}, s, L),
            FormulaSet{F("A x")});
  EXPECT_TRUE(toform(IntervalEnv::top(), FormulaSet::fault(), s, L).is_fault());
}

TEST(StaticTransfers, Examples) {
  Lattice L{F("A x"), F("A y")};
  FormulaSet D{F("A x"), F("A y")};
  EXPECT_EQ(static_d(D, L), FormulaSet());
  EXPECT_EQ(static_d(FormulaSet{F("B x < 1"), F("B !(x < 1)")}, L), FormulaSet(L));
  EXPECT_EQ(static_m(parse_program("x := 1"), Cmd::skip(), D, L),
            FormulaSet{F("A y")});
  EXPECT_EQ(static_m(Cmd::skip(), parse_program("y := 1"), D, L),
            FormulaSet{F("A x")});
  State s = State::over({"x", "y"}, {{"x", 1}, {"y", 2}});
  EXPECT_EQ(static_i(parse_program("x := 1"), s, s, FormulaSet(), L),
            FormulaSet{F("A x")});
  EXPECT_TRUE(static_i(Cmd::skip(), s, s, FormulaSet::fault(), L).is_fault());
}

TEST(KindNames, RoundTrip) {
  for (MonitorKind k : {MonitorKind::D, MonitorKind::M, MonitorKind::I})
    EXPECT_EQ(parse_kind(kind_name(k)), k);
  EXPECT_THROW(parse_kind("x"), std::invalid_argument);
}

class MonitorSuites : public ::testing::TestWithParam<std::string> {};

TEST_P(MonitorSuites, NoCounterexamples) {
  SuiteReport r = run_suite(GetParam(), OracleConfig{});
  EXPECT_EQ(r.violations, 0u) << GetParam();
  EXPECT_LT(r.skip_rate(), 0.2) << GetParam();
}

INSTANTIATE_TEST_SUITE_P(All, MonitorSuites,
                         ::testing::Values("soundness-d", "soundness-m",
                                           "soundness-i", "static-d", "static-m",
                                           "static-i", "granger"),
                         [](const auto &info) {
                           std::string n = info.param;
                           for (auto &ch : n)
                             if (ch == '-')
                               ch = '_';
                           return n;
                         });
