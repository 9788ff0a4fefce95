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

Expr v(const char *x) { return Expr::var(x); }
Expr k(Value n) { return Expr::constant(n); }

} // namespace

TEST(Parser, SkipIsSkipNode) {
  EXPECT_NE(parse_program("skip").as<cmd::Skip>(), nullptr);
}

TEST(Parser, BranchOnSecretBuildsIfNode) {
  Cmd c = parse_program(
      "if (secret > 0) then { public := public + 1; } else { skip; }");
  auto *i = c.as<cmd::If>();
  ASSERT_NE(i, nullptr);
  // `a > b` is sugar for `b < a`.
  EXPECT_EQ(i->cond, BoolExpr::less(k(0), v("secret")));
  EXPECT_EQ(i->then_branch,
            Cmd::assign("public", Expr::binary(ArithOp::add, v("public"), k(1))));
  EXPECT_EQ(i->else_branch, Cmd::skip());
}

TEST(Parser, WhileRoundTripsThroughPretty) {
  Cmd c = parse_program("while x < 3 do { x := x + 1; }");
  ASSERT_NE(c.as<cmd::While>(), nullptr);
  EXPECT_EQ(parse_program(pretty(c)), c);
  EXPECT_EQ(pretty(parse_program(pretty(c))), pretty(c));
}

TEST(Parser, ComparisonSugar) {
  EXPECT_EQ(parse_bool("x <= y"),
            BoolExpr::logical_not(BoolExpr::less(v("y"), v("x"))));
  EXPECT_EQ(parse_bool("x >= y"),
            BoolExpr::logical_not(BoolExpr::less(v("x"), v("y"))));
  EXPECT_EQ(parse_bool("x != y"),
            BoolExpr::logical_not(BoolExpr::equal(v("x"), v("y"))));
}

TEST(Parser, PrecedenceOfArithmetic) {
  EXPECT_EQ(parse_expr("1 + 2 * x"),
            Expr::binary(ArithOp::add, k(1),
                         Expr::binary(ArithOp::mul, k(2), v("x"))));
  EXPECT_EQ(parse_expr("a - b - c"),
            Expr::binary(ArithOp::sub,
                         Expr::binary(ArithOp::sub, v("a"), v("b")), v("c")));
  EXPECT_EQ(parse_expr("-3"), k(-3));
}

TEST(Parser, EmbeddedBooleanInArithmetic) {
  EXPECT_EQ(parse_expr("x - (y < 2)"),
            Expr::binary(ArithOp::sub, v("x"),
                         Expr::embed(BoolExpr::less(v("y"), k(2)))));
}

TEST(Parser, FormulaForms) {
  Formula f = parse_formula("A x + 1, B 0 < y, B x = 1 => A y");
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], BasicFormula::agree(Expr::binary(ArithOp::add, v("x"), k(1))));
  EXPECT_EQ(f[1], BasicFormula::both(BoolExpr::less(k(0), v("y"))));
  EXPECT_EQ(f[2], BasicFormula::cond_agree(BoolExpr::equal(v("x"), k(1)), v("y")));
}

TEST(Parser, ElseIsOptionalAndTrailingSemicolonAllowed) {
  Cmd c = parse_program("if x < 1 then { x := 1 };");
  auto *i = c.as<cmd::If>();
  ASSERT_NE(i, nullptr);
  EXPECT_EQ(i->else_branch, Cmd::skip());
}

TEST(Parser, CommentsAreIgnored) {
  EXPECT_EQ(parse_program("// leading\nx := 1 // trailing\n"),
            Cmd::assign("x", k(1)));
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse_program("x := 1;\ny := ;");
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 6);
    EXPECT_NE(std::string(e.what()).find("expected expression"),
              std::string::npos);
  }
}

TEST(Parser, GuardMustBeBoolean) {
  EXPECT_THROW(parse_program("if x then { skip }"), ParseError);
  EXPECT_THROW(parse_program("while 1 + 1 do { skip }"), ParseError);
}

TEST(Parser, KeywordsAreNotVariables) {
  EXPECT_THROW(parse_program("while := 1"), ParseError);
}

TEST(Pretty, Basics) {
  EXPECT_EQ(pretty(Cmd::skip()), "skip");
  EXPECT_EQ(pretty(Cmd::assign("y", k(0))), "y := 0");
  EXPECT_EQ(pretty(BasicFormula::agree_var("public")), "A public");
  EXPECT_EQ(pretty(BasicFormula::cond_agree(BoolExpr::less(v("x"), v("y")), v("y"))),
            "B x < y => A y");
}

TEST(Pretty, NestedCommandsRoundTrip) {
  const char *text = R"(x := 0;
while x < 3 do {
  if (x = 1) && !(y < x) then { y := y * (x - 1) } else { assume A y, B 0 < x };
  x := x + 1
};
assert B !(x = 0) => A y + (x < y))";
  Cmd c = parse_program(text);
  EXPECT_EQ(parse_program(pretty(c)), c);
}

TEST(Pretty, RandomProgramsRoundTrip) {
  OracleConfig cfg;
  for (std::uint64_t i = 0; i < 300; ++i) {
    Rng rng = sample_rng(42, i);
    Cmd c = gen_program(cfg, rng);
    ASSERT_EQ(parse_program(pretty(c)), c) << pretty(c);
  }
}

TEST(FreeVars, Examples) {
  EXPECT_TRUE(free_vars(k(5)).empty());
  EXPECT_EQ(free_vars(BasicFormula::agree_var("public")), VarSet{"public"});
  EXPECT_EQ(free_vars(BasicFormula::cond_agree(
                BoolExpr::less(k(0), v("secret")),
                Expr::binary(ArithOp::mul, v("seed"), v("a")))),
            (VarSet{"a", "secret", "seed"}));
}

TEST(Negate, IsAnInvolution) {
  BoolExpr lt = BoolExpr::less(v("x"), v("y"));
  BoolExpr eq = BoolExpr::equal(v("x"), v("y"));
  EXPECT_EQ(negate(lt), BoolExpr::logical_not(lt));
  EXPECT_EQ(negate(BoolExpr::logical_not(eq)), eq);
  EXPECT_EQ(negate(negate(lt)), lt);
}

TEST(Negate, FlipsTruthValue) {
  BoolExpr g = BoolExpr::less(k(0), v("secret"));
  for (Value s = 0; s <= 2; ++s)
    for (Value x = 0; x <= 2; ++x) {
      State st = State::over({"secret", "x"}, {{"secret", s}, {"x", x}});
      EXPECT_NE(eval_bool(g, st), eval_bool(negate(g), st));
    }
}

TEST(Lattice, EmptyForSkip) { EXPECT_TRUE(collect_lattice(Cmd::skip()).empty()); }

TEST(Lattice, BranchCounterContents) {
  Lattice L = collect_lattice(parse_program(kBranchCounter));
  BoolExpr g = BoolExpr::less(k(0), v("secret"));
  EXPECT_TRUE(L.count(BasicFormula::agree_var("public")));
  EXPECT_TRUE(L.count(BasicFormula::agree_var("y")));
  EXPECT_TRUE(L.count(BasicFormula::both(g)));
  EXPECT_TRUE(L.count(BasicFormula::both(negate(g))));
  EXPECT_TRUE(L.count(BasicFormula::agree(Expr::embed(g))));
  EXPECT_TRUE(L.count(
      BasicFormula::agree(Expr::binary(ArithOp::add, v("public"), k(1)))));
  EXPECT_TRUE(closed_under_negation(L));
  // Counted by hand: seven expressions (0, 1, secret, public, y, public + 1
  // and the embedded guard) and two guards give 7 + 2 + 2 * 7 formulas.
  EXPECT_EQ(L.size(), 23u);
}

TEST(Lattice, GuardsAppearWithNegation) {
  Lattice L = collect_lattice(parse_program("while !(x = 1) do { x := 1 }"));
  BoolExpr eq = BoolExpr::equal(v("x"), k(1));
  EXPECT_TRUE(L.count(BasicFormula::both(eq)));
  EXPECT_TRUE(L.count(BasicFormula::both(negate(eq))));
}

TEST(Lattice, GeneratedProgramsAreClosed) {
  OracleConfig cfg;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = sample_rng(7, i);
    Cmd c = gen_program(cfg, rng);
    Lattice L = collect_lattice(c, cfg.var_set());
    ASSERT_TRUE(closed_under_negation(L)) << pretty(c);
    for (const auto &x : cfg.var_set())
      ASSERT_TRUE(L.count(BasicFormula::agree_var(x)));
  }
}

TEST(Generator, DepthZeroIsSkipOrAssign) {
  OracleConfig cfg;
  cfg.depth = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = sample_rng(3, i);
    Cmd c = gen_program(cfg, rng);
    EXPECT_TRUE(c.as<cmd::Skip>() || c.as<cmd::Assign>()) << pretty(c);
  }
}

TEST(Generator, SeededGenerationIsReplayable) {
  OracleConfig cfg;
  cfg.depth = 3;
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng a = sample_rng(99, i), b = sample_rng(99, i);
    EXPECT_EQ(gen_program(cfg, a), gen_program(cfg, b));
  }
  Rng a = sample_rng(99, 0), b = sample_rng(100, 0);
  bool any_differ = false;
  for (int i = 0; i < 20; ++i)
    any_differ = any_differ || !(gen_program(cfg, a) == gen_program(cfg, b));
  EXPECT_TRUE(any_differ);
}

TEST(Generator, OptionsAreRespected) {
  OracleConfig cfg;
  GenOptions plain;
  plain.annotations = false;
  GenOptions assumes;
  assumes.asserts = false;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = sample_rng(5, i);
    EXPECT_FALSE(has_annotations(gen_program(cfg, rng, plain)));
    EXPECT_FALSE(has_asserts(gen_program(cfg, rng, assumes)));
  }
}

TEST(Generator, UsesOnlyConfiguredVariables) {
  OracleConfig cfg;
  cfg.vars = 2;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = sample_rng(11, i);
    for (const auto &x : program_vars(gen_program(cfg, rng)))
      EXPECT_TRUE(x == "x" || x == "y") << x;
  }
}
