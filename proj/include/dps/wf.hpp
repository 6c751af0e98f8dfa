#pragma once

// Well-founded relation combinators and the unification relation.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dps/subst.hpp"
#include "dps/term.hpp"

namespace dps {

enum class WfKind { Expr, Set, Nat, Subst, Tuple };

// A value compared by a relation. Tuples hold pairs and input triples.
struct WfValue {
  WfKind kind = WfKind::Nat;
  Expr expr;
  VarSet set;
  std::size_t nat = 0;
  Subst subst;
  std::vector<WfValue> items;

  static WfValue of_expr(Expr e);
  static WfValue of_set(VarSet s);
  static WfValue of_nat(std::size_t n);
  static WfValue of_subst(Subst s);
  static WfValue pair(WfValue a, WfValue b);
  static WfValue triple(const Subst& env, const Expr& e1, const Expr& e2);

  bool operator==(const WfValue& other) const;
  bool operator!=(const WfValue& other) const { return !(*this == other); }
};

std::string to_string(const WfValue& v);

struct InputTriple {
  Subst env;
  Expr e1;
  Expr e2;
};

enum class BaseRel { SizeLt, VarsSubset, SubsetIntLex };

enum class Projection { First, Vars, Size, Range, RangeVars, VarsSize, Component };

struct RelSpec;
using RelPtr = std::shared_ptr<const RelSpec>;

struct RelSpec {
  enum class Kind { Base, InducedBy, Lex, Refl };
  Kind kind = Kind::Base;
  BaseRel base = BaseRel::SizeLt;
  Projection projection = Projection::First;
  std::size_t component = 0;  // 1-based, for Projection::Component
  std::vector<RelPtr> children;

  static RelPtr make_base(BaseRel base);
  static RelPtr induced(Projection projection, RelPtr child, std::size_t component = 0);
  // Throws SortMismatch when fewer than two children are given.
  static RelPtr lex(std::vector<RelPtr> children);
  static RelPtr refl(RelPtr child);
};

WfValue project(Projection projection, std::size_t component, const WfValue& v);

// Strict comparison; Lex uses the reflexive lexicographic form.
bool rel_less(const RelSpec& spec, const WfValue& a, const WfValue& b);
// Lex in its plain form: strict, or equal keys and strictly smaller next.
bool rel_less_plain(const RelSpec& spec, const WfValue& a, const WfValue& b);
// Reflexive closure on the relation's key: strictly less or key-equal.
bool rel_leq(const RelSpec& spec, const WfValue& a, const WfValue& b);
bool rel_key_equal(const RelSpec& spec, const WfValue& a, const WfValue& b);

// range(env) ∪ vars(<e1, e2>).
VarSet range_vars(const InputTriple& t);
// Direct definition of the unification relation.
bool u_less(const InputTriple& t1, const InputTriple& t2);
// The same relation as a combinator tree: (lex (range-vars) (size-first)).
RelPtr u_relation();

struct StrictnessReport {
  std::size_t pairs_checked = 0;
  std::size_t reflexive_violations = 0;
  std::size_t antisymmetry_violations = 0;
  bool ok() const { return reflexive_violations == 0 && antisymmetry_violations == 0; }
};

StrictnessReport strictness_probe(const RelSpec& spec, const std::vector<std::pair<WfValue, WfValue>>& samples);

RelPtr parse_relspec(std::string_view text);
std::string to_string(const RelSpec& spec);

// Named relations; starts with the builtin u-rel.
class RelationRegistry {
 public:
  RelationRegistry();
  void add(const std::string& name, RelPtr spec);
  bool contains(const std::string& name) const { return relations_.count(name) != 0; }
  // Throws UnknownRelation.
  RelPtr get(const std::string& name) const;

 private:
  std::map<std::string, RelPtr> relations_;
};

}  // namespace dps
