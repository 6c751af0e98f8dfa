#pragma once

// Substitutions: proper finite maps from variables to expressions, or the
// failure substitution bot.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dps/term.hpp"

namespace dps {

class Subst {
 public:
  using Bindings = std::map<std::string, Expr>;

  // The empty substitution.
  Subst() = default;

  static Subst empty() { return Subst(); }
  static Subst failure();
  // Drops identity pairs; throws DuplicateVariable if a variable repeats.
  static Subst make(const std::vector<std::pair<std::string, Expr>>& pairs);
  // Trusted construction from a map; identity bindings are dropped.
  static Subst from_map(Bindings bindings);

  bool is_proper() const { return proper_; }
  bool is_failure() const { return !proper_; }
  bool is_empty() const { return proper_ && bindings_.empty(); }
  const Bindings& bindings() const { return bindings_; }
  // Image of a variable; the variable itself when unbound.
  Expr lookup(const std::string& var) const;

  bool operator==(const Subst& other) const { return proper_ == other.proper_ && bindings_ == other.bindings_; }
  bool operator!=(const Subst& other) const { return !(*this == other); }
  bool operator<(const Subst& other) const;

 private:
  bool proper_ = true;
  Bindings bindings_;
};

Expr apply(const Expr& e, const Subst& s);
Subst compose(const Subst& s1, const Subst& s2);
// Parallel addition; bindings of s1 win. Throws ImproperOperand on bot.
Subst add(const Subst& s1, const Subst& s2);
Subst replacement(const std::string& var, const Expr& e);

struct Support {
  VarSet dom;
  VarSet range;
  VarSet vars;
};
Support support(const Subst& s);
VarSet dom_of(const Subst& s);
VarSet range_of(const Subst& s);

bool misses(const Subst& s, const Expr& e);
bool is_idempotent(const Subst& s);
// Strong generality: compose(s1, s2) == s2.
bool more_general(const Subst& s1, const Subst& s2);
// Returns delta with compose(s1, delta) == s2 when one exists.
std::optional<Subst> weakly_more_general(const Subst& s1, const Subst& s2);
// One-way matching of pattern against target, extending delta.
bool match_expr(const Expr& pattern, const Expr& target, Subst::Bindings& delta);

struct Renaming {
  Expr renamed;
  Subst permutation;
};
// Renames every variable of e2 to a fresh name#k, in first-occurrence order.
Renaming standardize_apart(const Expr& e1, const Expr& e2, FreshSupply& supply);
Renaming standardize_apart(const Expr& e1, const Expr& e2);

// Extends a fresh renaming {X -> X#k} with the reverse bindings
// {X#k -> X}, giving a true permutation with the same effect on the
// renamed expression.
Subst complete_permutation(const Subst& renaming);

bool is_permutation(const Subst& s);
// Throws NotAPermutation.
Subst permutation_inverse(const Subst& s);

Subst parse_subst(std::string_view text);
std::string to_string(const Subst& s);
std::ostream& operator<<(std::ostream& os, const Subst& s);

}  // namespace dps
