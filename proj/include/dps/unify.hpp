#pragma once

// The three-argument environment-carrying unification algorithm, an
// independent occurs-check unifier used as an oracle, and decision
// procedures for the unifier predicates.

#include <optional>
#include <string>
#include <vector>

#include "dps/subst.hpp"
#include "dps/term.hpp"

namespace dps {

constexpr long default_fuel = 10000;

// Follows the final program's decision tree exactly. Each recursive call
// consumes one unit of fuel; throws FuelExhausted when it runs out.
Subst reference_unify(const Subst& env, const Expr& e1, const Expr& e2, long fuel = default_fuel);

// Robinson-style unification of e1 and e2 under env, composed as env then
// the solved form. Returns bot when env is bot or no unifier exists.
Subst oracle_unify(const Subst& env, const Expr& e1, const Expr& e2);

bool is_unifier(const Subst& s, const Expr& e1, const Expr& e2);
bool reduce_holds(const Subst& env, const VarSet& v, const Subst& s);
// The variable set reduce is checked against: vars of the pair under env.
VarSet reduce_vars(const Subst& env, const Expr& e1, const Expr& e2);
bool mgi_decide(const Subst& env, const Expr& e1, const Expr& e2, const Subst& s);

struct MgiuReport {
  bool unifier_ok = false;
  bool extension_ok = false;
  bool reduce_ok = false;
  bool most_general_ok = false;
  Subst oracle_used;

  bool ok() const { return unifier_ok && extension_ok && reduce_ok && most_general_ok; }
};

MgiuReport mgiu_check(const Subst& env, const Expr& e1, const Expr& e2, const Subst& s);

std::optional<Subst> mgi_refute_witness(const Subst& env, const Expr& e1, const Expr& e2, const Subst& s,
                                        const std::vector<Subst>& witnesses);

}  // namespace dps
