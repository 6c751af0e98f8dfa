#pragma once

// Ground propositional helpers over nullary atoms p, q, r, s.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "dps/logic.hpp"

namespace dps::prop {

inline const std::vector<std::string>& atom_names() {
  static const std::vector<std::string> names{"p", "q", "r", "s"};
  return names;
}

inline Signature signature() {
  Signature sig;
  for (const auto& a : atom_names()) sig.add_predicate(a, {{}});
  return sig;
}

using Valuation = std::map<std::string, bool>;

inline std::vector<Valuation> all_valuations() {
  std::vector<Valuation> out;
  const auto& names = atom_names();
  for (unsigned bits = 0; bits < (1u << names.size()); ++bits) {
    Valuation v;
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = (bits >> i) & 1u;
    out.push_back(v);
  }
  return out;
}

inline bool eval(const NodePtr& f, const Valuation& v) {
  switch (f->kind) {
    case NodeKind::True: return true;
    case NodeKind::False: return false;
    case NodeKind::Atom: return v.at(f->name);
    case NodeKind::Not: return !eval(f->kids[0], v);
    case NodeKind::And:
      for (const auto& k : f->kids) {
        if (!eval(k, v)) return false;
      }
      return true;
    case NodeKind::Or:
      for (const auto& k : f->kids) {
        if (eval(k, v)) return true;
      }
      return false;
    case NodeKind::Implies: return !eval(f->kids[0], v) || eval(f->kids[1], v);
    case NodeKind::Iff: return eval(f->kids[0], v) == eval(f->kids[1], v);
    default: throw std::logic_error("not propositional: " + to_string(f));
  }
}

// Ground output terms are expression literals or conditionals over atoms.
inline std::string eval_term(const NodePtr& t, const Valuation& v) {
  if (t->kind == NodeKind::Cond) return eval(t->kids[0], v) ? eval_term(t->kids[1], v) : eval_term(t->kids[2], v);
  return to_string(t);
}

inline NodePtr random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  int roll = pick(rng);
  const auto& names = atom_names();
  if (depth <= 0 || roll < 3) {
    if (roll == 0) return mk_bool(rng() % 2);
    return mk_atom(names[rng() % names.size()], {});
  }
  switch (roll) {
    case 3: return mk_not(random_formula(rng, depth - 1));
    case 4:
    case 5: return mk_and({random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
    case 6:
    case 7: return mk_or({random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
    case 8: return mk_implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return mk_iff(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

}  // namespace dps::prop
