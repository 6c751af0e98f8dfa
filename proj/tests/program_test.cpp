#include <gtest/gtest.h>

#include <random>

#include "data.hpp"
#include "dps/error.hpp"
#include "dps/program.hpp"
#include "dps/unify.hpp"
#include "gen.hpp"
#include "universe.hpp"

using namespace dps;

namespace {

ProgramDef target() {
  ProgramDef p = parse_program(testdata::read("unify.target"));
  p.decrease = "u-rel";
  return p;
}

Subst run(const ProgramDef& p, const Subst& env, const Expr& e1, const Expr& e2, bool check = true) {
  InterpretOptions options;
  options.check_decrease = check;
  return interpret(p, {Value::of_subst(env), Value::of_expr(e1), Value::of_expr(e2)}, options).subst;
}

}  // namespace

TEST(Program, ParseInfersParameterSorts) {
  ProgramDef p = target();
  ASSERT_EQ(p.params.size(), 3u);
  EXPECT_EQ(p.params[0].second, Sort::Subst);
  EXPECT_EQ(p.params[1].second, Sort::Expr);
  EXPECT_EQ(p.params[2].second, Sort::Expr);
  EXPECT_EQ(p.result, Sort::Subst);
}

TEST(Program, ExplicitParameterSorts) {
  ProgramDef p = parse_program("(define (f x:expr) (cons x x))");
  EXPECT_EQ(p.params[0].second, Sort::Expr);
  Value v = interpret(p, {Value::of_expr(parse_expr("a"))});
  EXPECT_EQ(to_string(v), "(a . a)");
}

TEST(Program, EmitMatchesGolden) { EXPECT_EQ(emit(target()), testdata::read("unify.golden")); }

TEST(Program, EmitParseRoundTrip) {
  ProgramDef p = target();
  ProgramDef q = parse_program(emit(p));
  EXPECT_TRUE(structurally_equal(p, q));
  EXPECT_EQ(emit(q), emit(p));
}

TEST(Program, WorkedExamples) {
  ProgramDef p = target();
  EXPECT_EQ(to_string(run(p, Subst::empty(), parse_expr("(X . b)"), parse_expr("(a . Y)"))), "{X -> a, Y -> b}");
  EXPECT_EQ(to_string(run(p, parse_subst("{X -> Y}"), parse_expr("Y"), parse_expr("Z"))), "{X -> Z, Y -> Z}");
  EXPECT_TRUE(run(p, Subst::empty(), parse_expr("X"), parse_expr("(a . X)")).is_failure());
  EXPECT_TRUE(run(p, Subst::failure(), parse_expr("a"), parse_expr("a")).is_failure());
}

TEST(Program, AgreesWithReferenceOnUniverse) {
  ProgramDef p = target();
  auto exprs = universe::expressions_up_to(3);
  for (const auto& env : universe::environments()) {
    for (const auto& e1 : exprs) {
      for (const auto& e2 : exprs) {
        ASSERT_EQ(run(p, env, e1, e2), reference_unify(env, e1, e2)) << to_string(env) << " " << to_string(e1) << " "
                                                                     << to_string(e2);
      }
    }
  }
}

TEST(Program, AgreesWithReferenceOnRandomTriples) {
  ProgramDef p = target();
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Subst env = gen::random_idempotent(rng, 2);
    Expr e1 = gen::random_expr(rng, 4), e2 = gen::random_expr(rng, 4);
    ASSERT_EQ(run(p, env, e1, e2), reference_unify(env, e1, e2));
  }
}

TEST(Program, ObserverSeesEveryCall) {
  ProgramDef p = target();
  int calls = 0;
  InterpretOptions options;
  options.observer = [&](const std::vector<Value>& parent, const std::vector<Value>& child) {
    ++calls;
    EXPECT_TRUE(u_less({child[0].subst, child[1].expr, child[2].expr}, {parent[0].subst, parent[1].expr, parent[2].expr}));
  };
  interpret(p, {Value::of_subst(Subst::empty()), Value::of_expr(parse_expr("(X . (Y . a))")),
                Value::of_expr(parse_expr("(a . (b . Z))"))},
            options);
  EXPECT_GT(calls, 0);
}

TEST(Program, FuelExhaustion) {
  ProgramDef p = target();
  InterpretOptions options;
  options.fuel = 1;
  try {
    interpret(p, {Value::of_subst(Subst::empty()), Value::of_expr(parse_expr("(X . (Y . a))")),
                  Value::of_expr(parse_expr("(a . (b . Z))"))},
              options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FuelExhausted);
  }
}

TEST(Program, DecreaseViolationDetected) {
  ProgramDef p = parse_program("(define (loop th0 e1 e2) (if (is-proper th0) (loop th0 e2 e1) bot))");
  p.decrease = "u-rel";
  InterpretOptions options;
  options.check_decrease = true;
  try {
    interpret(p, {Value::of_subst(Subst::empty()), Value::of_expr(parse_expr("a")), Value::of_expr(parse_expr("b"))},
              options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DecreaseViolation);
  }
}

TEST(Program, PrimitiveErrors) {
  ProgramDef p = parse_program("(define (f x:expr) (left x))");
  EXPECT_THROW(interpret(p, {Value::of_expr(parse_expr("a"))}), Error);
  ProgramDef q = parse_program("(define (g x:expr y:expr) (replace x y))");
  try {
    interpret(q, {Value::of_expr(parse_expr("a")), Value::of_expr(parse_expr("b"))});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PrimitiveError);
  }
}

TEST(Program, SimplifyRemovesRedundancy) {
  ProgramDef p = parse_program(
      "(define (f th0 e1) (if (is-var e1) (if (is-var e1) (compose th0 th0) bot) (if (is-const e1) th0 th0)))");
  ProgramDef s = simplify_program(p);
  EXPECT_EQ(to_string(s.body), "(if (is-var e1) (compose th0 th0) th0)");
}

TEST(Program, StructuralEqualityIgnoresMetavarNames) {
  Signature sig;
  ProgramDef a, b;
  a.name = b.name = "f";
  a.body = parse_term("(compose X Y)", sig);
  b.body = parse_term("(compose P Q)", sig);
  EXPECT_TRUE(structurally_equal(a, b));
  b.body = parse_term("(compose P P)", sig);
  EXPECT_FALSE(structurally_equal(a, b));
}

TEST(Program, ParseErrors) {
  EXPECT_THROW(parse_program("(defun (f x) x)"), Error);
  EXPECT_THROW(parse_program("(define (f x) (frob x))"), Error);
  EXPECT_THROW(parse_program("(define (f x) x) junk"), Error);
}

TEST(Program, SwapCallsShrinkTheFirstExpression) {
  ProgramDef p = target();
  int swaps = 0;
  InterpretOptions options;
  options.observer = [&](const std::vector<Value>& parent, const std::vector<Value>& child) {
    if (child[0] == parent[0] && child[1] == parent[2] && child[2] == parent[1] && parent[1] != parent[2]) {
      ++swaps;
      EXPECT_LT(child[1].expr.size(), parent[1].expr.size())
          << to_string(parent[1]) << " " << to_string(parent[2]);
    }
  };
  for (const auto& env : universe::environments()) {
    for (const auto& e1 : universe::expressions_up_to(2)) {
      for (const auto& e2 : universe::expressions_up_to(2)) {
        interpret(p, {Value::of_subst(env), Value::of_expr(e1), Value::of_expr(e2)}, options);
      }
    }
  }
  EXPECT_GT(swaps, 100);
}

namespace {

std::string random_test(std::mt19937& rng, int depth) {
  static const std::vector<std::string> atoms{"(is-var e1)",   "(is-const e1)",       "(is-var e2)",
                                              "(is-const e2)", "(= e1 e2)",           "(misses th0 e1)",
                                              "(is-proper th0)", "(occurs-proper e1 e2)"};
  if (depth <= 0 || rng() % 3 == 0) return atoms[rng() % atoms.size()];
  switch (rng() % 3) {
    case 0: return "(not " + random_test(rng, depth - 1) + ")";
    case 1: return "(and " + random_test(rng, depth - 1) + " " + random_test(rng, depth - 1) + ")";
    default: return "(or " + random_test(rng, depth - 1) + " " + random_test(rng, depth - 1) + ")";
  }
}

std::string random_body(std::mt19937& rng, int depth) {
  static const std::vector<std::string> leaves{"th0", "bot", "(compose th0 th0)", "(compose th0 (quote-subst {X -> b}))"};
  if (depth <= 0 || rng() % 4 == 0) return leaves[rng() % leaves.size()];
  return "(if " + random_test(rng, 1) + " " + random_body(rng, depth - 1) + " " + random_body(rng, depth - 1) + ")";
}

}  // namespace

TEST(Program, SimplificationPreservesMeaning) {
  std::mt19937 rng(17);
  auto exprs = universe::expressions_up_to(2);
  std::vector<Subst> envs = universe::environments();
  envs.push_back(Subst::failure());
  envs.push_back(parse_subst("{X -> (Y . a), Y -> b}"));
  int changed = 0;
  for (int i = 0; i < 300; ++i) {
    ProgramDef p = parse_program("(define (f th0:subst e1:expr e2:expr) " + random_body(rng, 5) + ")");
    ProgramDef s = simplify_program(p);
    if (to_string(s.body) != to_string(p.body)) ++changed;
    for (const auto& env : envs) {
      for (const auto& e1 : exprs) {
        for (const auto& e2 : exprs) {
          std::vector<Value> args{Value::of_subst(env), Value::of_expr(e1), Value::of_expr(e2)};
          ASSERT_EQ(interpret(p, args), interpret(s, args)) << emit(p) << emit(s);
        }
      }
    }
  }
  EXPECT_GT(changed, 100);
}
