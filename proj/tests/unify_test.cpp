#include <gtest/gtest.h>

#include <random>

#include "dps/error.hpp"
#include "dps/unify.hpp"
#include "gen.hpp"
#include "universe.hpp"

using namespace dps;

namespace {

Expr E(const char* text) { return parse_expr(text); }
Subst S(const char* text) { return parse_subst(text); }

bool mutually_general(const Subst& a, const Subst& b) { return more_general(a, b) && more_general(b, a); }

}  // namespace

TEST(ReferenceUnify, examples) {
  EXPECT_EQ(reference_unify(S("{}"), E("(X . b)"), E("(a . Y)")), S("{X -> a, Y -> b}"));
  EXPECT_EQ(reference_unify(S("{X -> Y}"), E("Y"), E("Z")), S("{X -> Z, Y -> Z}"));
  EXPECT_EQ(reference_unify(S("{}"), E("X"), E("(X . a)")), Subst::failure());
  EXPECT_EQ(reference_unify(Subst::failure(), E("a"), E("a")), Subst::failure());
  EXPECT_EQ(reference_unify(S("{}"), E("a"), E("a")), Subst::empty());
  EXPECT_EQ(reference_unify(S("{}"), E("(X . a)"), E("X")), Subst::failure());
  EXPECT_EQ(reference_unify(S("{}"), E("a"), E("X")), S("{X -> a}"));
  EXPECT_EQ(reference_unify(S("{}"), E("a"), E("(a . b)")), Subst::failure());
}

TEST(ReferenceUnify, non_idempotent_env_runs_out_of_fuel) {
  try {
    reference_unify(S("{X -> (a . X)}"), E("X"), E("Y"), 50);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FuelExhausted);
  }
}

TEST(OracleUnify, examples) {
  EXPECT_EQ(oracle_unify(S("{}"), E("(X . b)"), E("(a . Y)")), S("{X -> a, Y -> b}"));
  EXPECT_TRUE(mutually_general(oracle_unify(S("{X -> Y}"), E("Y"), E("Z")), S("{X -> Z, Y -> Z}")));
  EXPECT_EQ(oracle_unify(S("{}"), E("a"), E("b")), Subst::failure());
  EXPECT_EQ(oracle_unify(S("{}"), E("X"), E("(a . X)")), Subst::failure());
}

TEST(UnifierPredicates, is_unifier) {
  EXPECT_TRUE(is_unifier(S("{X -> a, Y -> b}"), E("(X . b)"), E("(a . Y)")));
  EXPECT_TRUE(is_unifier(Subst::failure(), E("a"), E("(b . X)")));
  EXPECT_FALSE(is_unifier(S("{}"), E("a"), E("b")));
}

TEST(UnifierPredicates, reduce) {
  EXPECT_TRUE(reduce_holds(S("{X -> Y}"), {"Y"}, S("{X -> Y}")));
  EXPECT_FALSE(reduce_holds(S("{X -> Y}"), {"Y"}, S("{Y -> X}")));
  EXPECT_TRUE(reduce_holds(S("{X -> Y}"), {}, Subst::failure()));
}

TEST(UnifierPredicates, mgi) {
  EXPECT_TRUE(mgi_decide(S("{X -> Y}"), E("Y"), E("Z"), S("{X -> Z, Y -> Z}")));
  EXPECT_TRUE(mgi_decide(S("{}"), E("a"), E("b"), S("{W -> c}")));
  EXPECT_FALSE(mgi_decide(S("{}"), E("X"), E("Y"), Subst::failure()));
}

TEST(UnifierPredicates, mgiu_check) {
  MgiuReport good = mgiu_check(S("{X -> Y}"), E("Y"), E("Z"), S("{X -> Z, Y -> Z}"));
  EXPECT_TRUE(good.unifier_ok && good.extension_ok && good.reduce_ok && good.most_general_ok);
  MgiuReport bad = mgiu_check(S("{X -> Y}"), E("Y"), E("Z"), S("{Y -> Z}"));
  EXPECT_FALSE(bad.extension_ok);
  EXPECT_FALSE(bad.ok());
  EXPECT_TRUE(mgiu_check(S("{X -> Y}"), E("Y"), E("Z"), S("{X -> Y, Z -> Y}")).ok());
  EXPECT_TRUE(mgiu_check(S("{}"), E("a"), E("b"), Subst::failure()).ok());
}

TEST(UnifierPredicates, refute_witness) {
  auto w = mgi_refute_witness(S("{}"), E("X"), E("Y"), Subst::failure(), {S("{X -> Y}")});
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, S("{X -> Y}"));
  EXPECT_FALSE(mgi_refute_witness(S("{X -> Y}"), E("Y"), E("Z"), S("{X -> Z, Y -> Z}"), {S("{X -> a, Y -> a, Z -> a}")}));
  EXPECT_FALSE(mgi_refute_witness(S("{}"), E("a"), E("b"), S("{}"), {}));
}

TEST(UnifyProperty, exhaustive_oracle_agreement) {
  auto exprs = universe::expressions_up_to(3);
  std::size_t disagreements = 0;
  for (const auto& env : universe::environments()) {
    for (const auto& e1 : exprs) {
      for (const auto& e2 : exprs) {
        Subst r = reference_unify(env, e1, e2), o = oracle_unify(env, e1, e2);
        if (r.is_proper() != o.is_proper() || (r.is_proper() && !mutually_general(r, o))) ++disagreements;
      }
    }
  }
  EXPECT_EQ(disagreements, 0u);
}

class UnifyRandom : public ::testing::Test {
 protected:
  std::mt19937 rng{1234};
};

TEST_F(UnifyRandom, soundness_symmetry_instance) {
  for (int i = 0; i < 3000; ++i) {
    Subst env = gen::random_idempotent(rng, 2);
    Expr e1 = gen::random_expr(rng, 4), e2 = gen::random_expr(rng, 4);
    Subst s = reference_unify(env, e1, e2);
    ASSERT_TRUE(mgiu_check(env, e1, e2, s).ok()) << to_string(env) << " " << e1 << " " << e2;
    if (s.is_proper()) EXPECT_TRUE(is_idempotent(s));
    Subst t = reference_unify(env, e2, e1);
    EXPECT_EQ(s.is_proper(), t.is_proper());
    if (s.is_proper()) EXPECT_TRUE(mutually_general(s, t));
    Expr i1 = apply(e1, env), i2 = apply(e2, env);
    EXPECT_EQ(mgiu_check(env, e1, e2, s).ok(), mgiu_check(env, i1, i2, s).ok());
    EXPECT_EQ(mgiu_check(env, e1, e2, t).ok(), mgiu_check(env, i1, i2, t).ok());
  }
}

TEST_F(UnifyRandom, mgi_decide_agrees_with_sampled_witnesses) {
  for (int i = 0; i < 2000; ++i) {
    Subst env = gen::random_idempotent(rng, 2);
    Expr e1 = gen::random_expr(rng, 3), e2 = gen::random_expr(rng, 3);
    Subst candidate = gen::random_subst_or_bot(rng, 2);
    std::vector<Subst> witnesses;
    Subst best = oracle_unify(env, e1, e2);
    if (best.is_proper()) {
      for (int k = 0; k < 5; ++k) witnesses.push_back(compose(best, gen::random_subst(rng, 2)));
      witnesses.push_back(best);
    }
    // A refuting witness proves mgi false.
    if (mgi_refute_witness(env, e1, e2, candidate, witnesses)) EXPECT_FALSE(mgi_decide(env, e1, e2, candidate));
    // A decided-true candidate survives every sampled extension.
    if (mgi_decide(env, e1, e2, candidate)) EXPECT_FALSE(mgi_refute_witness(env, e1, e2, candidate, witnesses));
  }
}

TEST_F(UnifyRandom, mgi_transitivity_and_replacement) {
  for (int i = 0; i < 2000; ++i) {
    Subst env = gen::random_idempotent(rng, 2);
    Expr e1 = Expr::cons(gen::random_expr(rng, 2), gen::random_expr(rng, 2));
    Expr e2 = Expr::cons(gen::random_expr(rng, 2), gen::random_expr(rng, 2));
    Subst t1 = reference_unify(env, e1.left(), e2.left());
    Subst t2 = reference_unify(t1, e1.right(), e2.right());
    if (mgi_decide(env, e1.left(), e2.left(), t1) && t1.is_proper() && mgi_decide(t1, e1.right(), e2.right(), t2)) {
      EXPECT_TRUE(mgi_decide(env, e1, e2, t2));
    }
    Expr x = Expr::var("X");
    Expr e = gen::random_expr(rng, 3);
    if (!occurs_in(x, e, Occurrence::Reflexive) && misses(env, x) && misses(env, e)) {
      EXPECT_TRUE(mgi_decide(env, x, e, compose(env, replacement("X", e))));
    }
  }
}
