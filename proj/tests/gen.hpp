#pragma once

// Hand-rolled random generators for property tests.

#include <random>
#include <string>
#include <vector>

#include "dps/subst.hpp"
#include "dps/term.hpp"

namespace dps::gen {

struct Alphabet {
  std::vector<std::string> consts{"a", "b", "c"};
  std::vector<std::string> vars{"X", "Y", "Z", "W"};
};

inline Expr random_expr(std::mt19937& rng, int depth, const Alphabet& alpha = {}) {
  std::uniform_int_distribution<int> pick(0, 9);
  int roll = pick(rng);
  if (depth <= 0 || roll < 4) {
    if (roll % 2 == 0) {
      std::uniform_int_distribution<std::size_t> c(0, alpha.consts.size() - 1);
      return Expr::constant(alpha.consts[c(rng)]);
    }
    std::uniform_int_distribution<std::size_t> v(0, alpha.vars.size() - 1);
    return Expr::var(alpha.vars[v(rng)]);
  }
  Expr l = random_expr(rng, depth - 1, alpha);
  Expr r = random_expr(rng, depth - 1, alpha);
  return Expr::cons(l, r);
}

// Arbitrary proper substitution; may be non-idempotent.
inline Subst random_subst(std::mt19937& rng, int depth, const Alphabet& alpha = {}) {
  Subst::Bindings bindings;
  std::bernoulli_distribution coin(0.4);
  for (const auto& v : alpha.vars) {
    if (coin(rng)) bindings.emplace(v, random_expr(rng, depth, alpha));
  }
  return Subst::from_map(std::move(bindings));
}

// Proper idempotent substitution: domain variables never reappear in images.
inline Subst random_idempotent(std::mt19937& rng, int depth, const Alphabet& alpha = {}) {
  std::vector<std::string> dom, rest;
  std::bernoulli_distribution coin(0.35);
  for (const auto& v : alpha.vars) (coin(rng) ? dom : rest).push_back(v);
  if (rest.empty()) {
    rest.push_back(dom.back());
    dom.pop_back();
  }
  Alphabet image_alpha{alpha.consts, rest};
  Subst::Bindings bindings;
  for (const auto& v : dom) bindings.emplace(v, random_expr(rng, depth, image_alpha));
  return Subst::from_map(std::move(bindings));
}

// Random substitution, occasionally bot.
inline Subst random_subst_or_bot(std::mt19937& rng, int depth, const Alphabet& alpha = {}) {
  std::bernoulli_distribution bot(0.1);
  if (bot(rng)) return Subst::failure();
  return random_subst(rng, depth, alpha);
}

}  // namespace dps::gen
