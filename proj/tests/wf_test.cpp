#include <gtest/gtest.h>

#include <random>

#include "dps/error.hpp"
#include "dps/unify.hpp"
#include "dps/wf.hpp"
#include "gen.hpp"

using namespace dps;

namespace {

Expr E(const char* text) { return parse_expr(text); }
Subst S(const char* text) { return parse_subst(text); }
WfValue V(const char* text) { return WfValue::of_expr(E(text)); }
InputTriple T(const char* env, const char* e1, const char* e2) { return {S(env), E(e1), E(e2)}; }
WfValue TV(const InputTriple& t) { return WfValue::triple(t.env, t.e1, t.e2); }

RelPtr size_rel() { return RelSpec::make_base(BaseRel::SizeLt); }
RelPtr vars_rel() { return RelSpec::make_base(BaseRel::VarsSubset); }

}  // namespace

TEST(RelLess, base_examples) {
  EXPECT_TRUE(rel_less(*size_rel(), V("X"), V("a")));
  EXPECT_FALSE(rel_less(*size_rel(), V("a"), V("X")));
  EXPECT_TRUE(rel_less(*vars_rel(), V("a"), V("X")));
  RelPtr lex = RelSpec::lex({vars_rel(), size_rel()});
  EXPECT_TRUE(rel_less(*lex, V("a"), V("X")));
  EXPECT_TRUE(rel_less(*lex, V("(a . X)"), V("((a . b) . X)")));
  EXPECT_FALSE(rel_less(*lex, V("(a . (b . c))"), V("X")) && rel_less(*lex, V("X"), V("(a . (b . c))")));
}

TEST(RelLess, sort_mismatch) {
  try {
    rel_less(*vars_rel(), WfValue::of_nat(1), WfValue::of_nat(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SortMismatch);
  }
  EXPECT_THROW(RelSpec::lex({size_rel()}), Error);
  EXPECT_THROW(rel_less(*parse_relspec("(range-vars)"), V("a"), V("b")), Error);
}

TEST(ULess, examples) {
  EXPECT_TRUE(u_less(T("{}", "X", "a"), T("{}", "(X . b)", "(a . Y)")));
  EXPECT_TRUE(u_less(T("{}", "X", "(a . X)"), T("{}", "(a . X)", "X")));
  InputTriple t = T("{X -> Y}", "(a . Z)", "W");
  EXPECT_FALSE(u_less(t, t));
  EXPECT_TRUE(rel_less(*u_relation(), TV(T("{}", "X", "a")), TV(T("{}", "(X . b)", "(a . Y)"))));
}

TEST(RelSpecText, parse_and_print) {
  RelPtr r = parse_relspec("(lex (induced (component 2) (size-lt)) (refl (vars-subset)) (subset-int-lex))");
  EXPECT_EQ(to_string(*r), "(lex (induced (component 2) (size-lt)) (refl (vars-subset)) (subset-int-lex))");
  EXPECT_EQ(to_string(*parse_relspec(to_string(*u_relation()))), to_string(*u_relation()));
  for (const char* bad : {"(lex (size-lt))", "(nope)", "(induced wat (size-lt))", "(size-lt) x", "(induced (component 0) (size-lt))"}) {
    EXPECT_THROW(parse_relspec(bad), Error) << bad;
  }
}

TEST(Registry, builtin_and_unknown) {
  RelationRegistry registry;
  EXPECT_TRUE(registry.contains("u-rel"));
  registry.add("size", size_rel());
  EXPECT_EQ(to_string(*registry.get("size")), "(size-lt)");
  try {
    registry.get("missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownRelation);
  }
}

class WfProperty : public ::testing::Test {
 protected:
  std::mt19937 rng{99};
  InputTriple random_triple() {
    return {gen::random_idempotent(rng, 2), gen::random_expr(rng, 3), gen::random_expr(rng, 3)};
  }
};

TEST_F(WfProperty, u_relation_matches_definition_and_is_strict) {
  std::vector<std::pair<WfValue, WfValue>> samples;
  for (int i = 0; i < 1000; ++i) {
    InputTriple a = random_triple(), b = random_triple();
    EXPECT_EQ(u_less(a, b), rel_less(*u_relation(), TV(a), TV(b)));
    EXPECT_EQ(rel_less(*u_relation(), TV(a), TV(b)), rel_less_plain(*u_relation(), TV(a), TV(b)));
    samples.emplace_back(TV(a), TV(b));
  }
  StrictnessReport report = strictness_probe(*u_relation(), samples);
  EXPECT_EQ(report.pairs_checked, 1000u);
  EXPECT_TRUE(report.ok());
}

TEST_F(WfProperty, size_relation_is_strict) {
  std::vector<std::pair<WfValue, WfValue>> samples;
  for (int i = 0; i < 1000; ++i) {
    samples.emplace_back(WfValue::of_expr(gen::random_expr(rng, 4)), WfValue::of_expr(gen::random_expr(rng, 4)));
  }
  EXPECT_TRUE(strictness_probe(*size_rel(), samples).ok());
  // Child order swapped: still a strict order.
  RelPtr swapped = parse_relspec("(lex (size-first) (range-vars))");
  std::vector<std::pair<WfValue, WfValue>> triples;
  for (int i = 0; i < 500; ++i) triples.emplace_back(TV(random_triple()), TV(random_triple()));
  EXPECT_TRUE(strictness_probe(*swapped, triples).ok());
}

TEST_F(WfProperty, induced_and_lex_laws) {
  RelPtr lex_vars_size = RelSpec::lex({RelSpec::induced(Projection::Vars, vars_rel()), RelSpec::induced(Projection::Size, size_rel())});
  RelPtr via_pair = RelSpec::induced(
      Projection::VarsSize,
      RelSpec::lex({RelSpec::induced(Projection::Component, vars_rel(), 1), RelSpec::induced(Projection::Component, size_rel(), 2)}));
  RelPtr base_pair = RelSpec::induced(Projection::VarsSize, RelSpec::make_base(BaseRel::SubsetIntLex));
  for (int i = 0; i < 1000; ++i) {
    WfValue a = WfValue::of_expr(gen::random_expr(rng, 3)), b = WfValue::of_expr(gen::random_expr(rng, 3));
    RelPtr induced = RelSpec::induced(Projection::Size, size_rel());
    EXPECT_EQ(rel_less(*induced, a, b), rel_less(*size_rel(), project(Projection::Size, 0, a), project(Projection::Size, 0, b)));
    EXPECT_EQ(rel_less(*lex_vars_size, a, b), rel_less(*via_pair, a, b));
    EXPECT_EQ(rel_less(*lex_vars_size, a, b), rel_less(*base_pair, a, b));
    EXPECT_EQ(rel_less(*lex_vars_size, a, b), rel_less_plain(*lex_vars_size, a, b));
  }
}

TEST_F(WfProperty, weakly_decreasing_chains_without_strict_steps_are_constant) {
  RelPtr refl = RelSpec::refl(u_relation());
  for (int i = 0; i < 300; ++i) {
    std::vector<InputTriple> chain{random_triple()};
    for (int k = 0; k < 5; ++k) chain.push_back(random_triple());
    bool weak = true, strict = false;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      weak = weak && rel_less(*refl, TV(chain[k + 1]), TV(chain[k]));
      strict = strict || u_less(chain[k + 1], chain[k]);
    }
    if (weak && !strict) {
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        EXPECT_TRUE(rel_key_equal(*u_relation(), TV(chain[k]), TV(chain[k + 1])));
      }
    }
    // A chain of identical triples is weakly decreasing and never strict.
    std::vector<InputTriple> flat(4, chain[0]);
    for (std::size_t k = 0; k + 1 < flat.size(); ++k) {
      EXPECT_TRUE(rel_less(*refl, TV(flat[k + 1]), TV(flat[k])));
      EXPECT_FALSE(u_less(flat[k + 1], flat[k]));
    }
  }
}

TEST_F(WfProperty, recursive_calls_decrease) {
  // The reference algorithm's self-calls strictly decrease under the
  // unification relation for idempotent environments.
  for (int i = 0; i < 500; ++i) {
    InputTriple t = random_triple();
    if (!t.e1.is_var() || (misses(t.env, t.e1) && misses(t.env, t.e2)) || occurs_in(t.e1, t.e2, Occurrence::Proper) || t.e1 == t.e2) continue;
    InputTriple child{t.env, apply(t.e1, t.env), apply(t.e2, t.env)};
    EXPECT_TRUE(u_less(child, t));
  }
}
