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

const VarSet kIo{"inhi", "inlo", "outlo"};

State io(Value inhi, Value inlo, Value outlo) {
  return State::over(kIo, {{"inhi", inhi}, {"inlo", inlo}, {"outlo", outlo}});
}

const PolicySpec kPolicy{{"inlo"}, {"outlo"}};

StateSet io_universe() { return universe(kIo, 0, 1); }

} // namespace

TEST(IdealMonitor, AssertOnPublicInputPasses) {
  Cmd c = parse_program("assume A inlo; outlo := inlo; assert A outlo");
  IdealResult r = ideal_monitor(c, io(1, 0, 0), io_universe());
  ASSERT_FALSE(r.indeterminate());
  EXPECT_FALSE(r.fault());
  EXPECT_EQ(r.major.state->get("outlo"), 0);
  for (const auto &t : r.tracking->states())
    EXPECT_EQ(t.get("outlo"), 0);
}

TEST(IdealMonitor, ExplicitFlowFaults) {
  Cmd c = parse_program("assume A inlo; outlo := inhi; assert A outlo");
  IdealResult r = ideal_monitor(c, io(1, 0, 0), io_universe());
  EXPECT_TRUE(r.fault());
}

TEST(IdealMonitor, AssumeFiltersTracking) {
  Cmd c = parse_program("assume A inlo");
  IdealResult r = ideal_monitor(c, io(1, 0, 0), io_universe());
  ASSERT_TRUE(r.tracking);
  EXPECT_EQ(r.tracking->size(), 4u);
  for (const auto &t : r.tracking->states())
    EXPECT_EQ(t.get("inlo"), 0);
}

TEST(IdealMonitor, FaultIsSticky) {
  Cmd c = parse_program("outlo := 7");
  IdealResult r = ideal_monitor(c, io(0, 0, 0), StateSet::fault());
  EXPECT_TRUE(r.fault());
  EXPECT_EQ(r.major.state->get("outlo"), 7);
}

TEST(IdealMonitor, MajorExhaustionIsIndeterminate) {
  Cmd c = parse_program("while 0 < 1 do skip");
  IdealResult r = ideal_monitor(c, io(0, 0, 0), io_universe(), Fuel{100});
  EXPECT_TRUE(r.indeterminate());
  EXPECT_FALSE(r.fault());
}

TEST(IdealMonitor, ConstantBranchIsAccepted) {
  // Both branches write the same constant, so the secret guard does not
  // reach outlo.
  Cmd c = parse_program(
      "assume A inlo; if 0 < inhi then { outlo := 0 } else { outlo := 0 }; "
      "assert A outlo");
  const StateSet U = io_universe();
  for (const auto &s : U.states())
    EXPECT_FALSE(ideal_monitor(c, s, io_universe()).fault()) << s.to_string();
}

TEST(IdealMonitor, ImplicitFlowFaults) {
  Cmd c = parse_program(
      "assume A inlo; if 0 < inhi then { outlo := 1 } else { outlo := 0 }; "
      "assert A outlo");
  EXPECT_TRUE(ideal_monitor(c, io(1, 0, 0), io_universe()).fault());
}

TEST(IdealMonitor, EqualsCollectingWithoutAnnotations) {
  OracleConfig cfg;
  cfg.samples = 300;
  SuiteReport r = run_suite("monstatic", cfg);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LT(r.skip_rate(), 0.2);
}

TEST(IdealMonitorAlt, AnnotationWhenForbiddenFaults) {
  Cmd c = parse_program("assume A inlo");
  EXPECT_TRUE(ideal_monitor_alt(c, io(0, 0, 0), io_universe(), false).fault());
  EXPECT_FALSE(ideal_monitor_alt(c, io(0, 0, 0), io_universe(), true).fault());
}

TEST(IdealMonitorAlt, AssertUnderHighBranchDiffers) {
  // Tracked states split on inhi, so the alternative monitor forbids the
  // assertion inside the branch while the plain monitor checks it.
  Cmd c = parse_program("if 0 < inhi then { assert A inlo } else { skip }");
  StateSet S = gamma(io(1, 0, 0),
                     FormulaSet{BasicFormula::agree_var("inlo")}, io_universe());
  EXPECT_FALSE(ideal_monitor(c, io(1, 0, 0), S).fault());
  EXPECT_TRUE(ideal_monitor_alt(c, io(1, 0, 0), S).fault());
}

TEST(IdealMonitorAlt, AgreesWhenNoBranchSplits) {
  Cmd c = parse_program("if 0 < inlo then { assert A inlo } else { skip }");
  StateSet S = gamma(io(1, 1, 0),
                     FormulaSet{BasicFormula::agree_var("inlo")}, io_universe());
  EXPECT_FALSE(ideal_monitor_alt(c, io(1, 1, 0), S).fault());
}

TEST(Tini, Examples) {
  ValueRange r{0, 1};
  EXPECT_TRUE(tini_holds(parse_program("outlo := 0"), kPolicy, io(1, 0, 0), r));
  EXPECT_TRUE(tini_holds(parse_program("outlo := inlo"), kPolicy, io(1, 0, 0), r));
  EXPECT_FALSE(tini_holds(parse_program("outlo := inhi"), kPolicy, io(1, 0, 0), r));
  EXPECT_TRUE(tini_holds(
      parse_program("if 0 < inhi then { outlo := 0 } else { outlo := 0 }"),
      kPolicy, io(1, 0, 0), r));
}

TEST(Tini, DivergingAlternativesAreIgnored) {
  // Runs with inhi = 0 never finish, so only the inhi = 1 runs matter.
  Cmd c = parse_program("while inhi < 1 do skip; outlo := inhi");
  EXPECT_TRUE(tini_holds(c, kPolicy, io(1, 0, 0), ValueRange{0, 1}, Fuel{200}));
  EXPECT_THROW(tini_holds(c, kPolicy, io(0, 0, 0), ValueRange{0, 1}, Fuel{200}),
               BudgetExhausted);
}

TEST(Tini, WrapPolicyAddsAnnotations) {
  Cmd w = wrap_policy(Cmd::skip(), kPolicy);
  EXPECT_EQ(w, parse_program("assume A inlo; skip; assert A outlo"));
  EXPECT_EQ(wrap_policy(Cmd::skip(), PolicySpec{}), Cmd::skip());
}

TEST(MonitorVsTini, ImplicitFlowBothInsecure) {
  Cmd c = parse_program("if 0 < inhi then { outlo := 1 } else { outlo := 0 }");
  TiniCheck r =
      check_monitor_tini_detail(c, kPolicy, io(1, 0, 0), ValueRange{0, 1});
  EXPECT_FALSE(r.tini);
  EXPECT_FALSE(r.monitor_secure);
  EXPECT_TRUE(r.agree());
}

TEST(MonitorVsTini, ExhaustiveOverSmallPrograms) {
  const char *programs[] = {
      "outlo := inlo",
      "outlo := inhi - inhi",
      "if inlo < inhi then { outlo := 1 } else { outlo := 0 }",
      "outlo := inhi; outlo := inlo",
      "while inhi < 1 do { inhi := inhi + 1 }; outlo := inhi",
  };
  for (const char *p : programs) {
    Cmd c = parse_program(p);
    const StateSet U = io_universe();
    for (const auto &s : U.states())
      EXPECT_TRUE(check_monitor_tini(c, kPolicy, s, ValueRange{0, 1}))
          << p << " at " << s.to_string();
  }
}

TEST(PropertySuites, CollectingMatchesLiftedRuns) {
  OracleConfig cfg;
  cfg.samples = 300;
  SuiteReport r = run_suite("lemma1", cfg);
  EXPECT_EQ(r.violations, 0u);
}

TEST(PropertySuites, MonitorMatchesNoninterference) {
  SuiteReport r = run_suite("theorem1", OracleConfig{});
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LT(r.skip_rate(), 0.2);
  // Both verdicts must actually occur for the check to mean anything.
  EXPECT_GT(r.stats["tini_secure"], 0u);
  EXPECT_GT(r.stats["tini_insecure"], 0u);
}

TEST(PropertySuites, Monotone) {
  SuiteReport r = run_suite("monotone", OracleConfig{});
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LT(r.skip_rate(), 0.2);
}
