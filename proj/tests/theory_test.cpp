#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>

#include "data.hpp"
#include "dps/error.hpp"
#include "dps/program.hpp"
#include "dps/tableau.hpp"
#include "dps/unify.hpp"
#include "gen.hpp"

using namespace dps;

namespace {

// Lemmas are checked on a small alphabet so that their antecedents hold
// often enough to matter.
const gen::Alphabet kAlphabet{{"a", "b"}, {"X", "Y", "Z"}};

// Metavariable sorts, taking unconstrained ones from their argument
// positions and defaulting to expressions.
std::map<std::string, Sort> metavar_sorts(const NodePtr& f, const Signature& sig) {
  std::map<std::string, Sort> out;
  std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
    const SymbolSig* s = nullptr;
    if (n->kind == NodeKind::Atom) s = sig.predicate(n->name);
    if (n->kind == NodeKind::Apply) s = sig.function(n->name);
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      const NodePtr& k = n->kids[i];
      if (k->kind == NodeKind::MetaVar) {
        Sort sort = k->sort;
        if (sort == Sort::Any && s && !s->args.empty()) sort = s->args[s->variadic ? 0 : i];
        if (sort == Sort::Any && n->kind == NodeKind::Eq) sort = n->kids[1 - i]->sort;
        if (sort != Sort::Any || !out.count(k->name)) out[k->name] = sort;
      }
      walk(k);
    }
  };
  walk(f);
  for (auto& [name, sort] : out) {
    if (sort == Sort::Any) sort = Sort::Expr;
  }
  return out;
}

Value random_value(Sort sort, std::mt19937& rng) {
  switch (sort) {
    case Sort::Expr: {
      // Variables a third of the time; the variable lemmas need them.
      if (rng() % 3 == 0) return Value::of_expr(Expr::var(kAlphabet.vars[rng() % kAlphabet.vars.size()]));
      return Value::of_expr(gen::random_expr(rng, 2, kAlphabet));
    }
    case Sort::Subst:
      return Value::of_subst(rng() % 8 == 0 ? Subst::failure() : gen::random_idempotent(rng, 1, kAlphabet));
    case Sort::VarSet: {
      VarSet s;
      for (const auto& v : kAlphabet.vars) {
        if (rng() % 2) s.insert(v);
      }
      return Value::of_set(s);
    }
    case Sort::Nat: return Value::of_nat(rng() % 6);
    default: throw std::logic_error(std::string("no generator for sort ") + sort_name(sort));
  }
}

// Half the time, binds unifier-valued metavariables to actual unifiers so
// that mgiu antecedents hold often.
void bind_witnesses(Bindings& b, std::mt19937& rng) {
  auto subst = [&](const char* n) { return b.count(n) && b.at(n).sort == Sort::Subst; };
  auto expr = [&](const char* n) { return b.count(n) && b.at(n).sort == Sort::Expr; };
  if (rng() % 2 || !subst("T0") || !expr("E1") || !expr("E2")) return;
  const Subst& t0 = b.at("T0").subst;
  const Expr& e1 = b.at("E1").expr;
  const Expr& e2 = b.at("E2").expr;
  if (subst("TH")) b["TH"] = Value::of_subst(reference_unify(t0, e1, e2));
  if (subst("TL") && subst("TR") && e1.is_cons() && e2.is_cons()) {
    Subst tl = reference_unify(t0, e1.left(), e2.left());
    b["TL"] = Value::of_subst(tl);
    b["TR"] = Value::of_subst(reference_unify(tl, e1.right(), e2.right()));
  }
}

struct LemmaTally {
  int true_cases = 0;
  int undefined = 0;
  int antecedent_held = 0;
};

}  // namespace

TEST(TheoryLemmas, HoldOnSampledInstances) {
  Theory theory = parse_theory(testdata::read("unify.thy"));
  std::mt19937 rng(41);
  for (const auto& lemma : theory.lemmas) {
    std::map<std::string, Sort> sorts = metavar_sorts(lemma.formula, theory.signature);
    LemmaTally tally;
    for (int i = 0; i < 3000; ++i) {
      EvalContext ctx;
      ctx.relations = &theory.relations;
      for (const auto& [name, sort] : sorts) ctx.bindings[name] = random_value(sort, rng);
      bind_witnesses(ctx.bindings, rng);
      try {
        bool holds = eval_formula(lemma.formula, ctx);
        ASSERT_TRUE(holds) << lemma.name << " fails at " << [&] {
          std::string s;
          for (const auto& [name, v] : ctx.bindings) s += name + "=" + to_string(v) + " ";
          return s;
        }();
        ++tally.true_cases;
        if (lemma.formula->kind == NodeKind::Implies && eval_formula(lemma.formula->kids[0], ctx)) {
          ++tally.antecedent_held;
        }
      } catch (const Error& e) {
        ASSERT_EQ(e.kind(), ErrorKind::PrimitiveError) << lemma.name << ": " << e.what();
        ++tally.undefined;
      }
    }
    EXPECT_GT(tally.true_cases, 1000) << lemma.name << " undefined " << tally.undefined;
    if (lemma.formula->kind == NodeKind::Implies) {
      EXPECT_GE(tally.antecedent_held, 20) << lemma.name;
    }
  }
}
