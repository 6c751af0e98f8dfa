#pragma once

// Sorted quantifier-free formulas and terms over the expression and
// substitution signature, with syntactic unification over metavariables.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dps/subst.hpp"
#include "dps/term.hpp"

namespace dps {

enum class Sort { Any, Bool, Expr, Subst, VarSet, Nat, Triple, Rel };

const char* sort_name(Sort sort);
// Throws SortError on unknown names.
Sort parse_sort(std::string_view name);

enum class NodeKind {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Eq,
  MetaVar,
  Const,
  Literal,
  Apply,
  Cond,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// Formulas and terms share one immutable node type. Formula nodes have
// sort Bool.
struct Node {
  NodeKind kind = NodeKind::True;
  std::string name;  // predicate, function, metavariable or constant name
  Sort sort = Sort::Bool;
  std::vector<NodePtr> kids;
  Expr expr;    // Literal of sort Expr
  Subst subst;  // Literal of sort Subst
  std::size_t hash = 0;

  bool is_formula() const { return sort == Sort::Bool; }
};

NodePtr mk_true();
NodePtr mk_false();
NodePtr mk_bool(bool value);
NodePtr mk_atom(std::string pred, std::vector<NodePtr> args);
NodePtr mk_not(NodePtr f);
NodePtr mk_and(std::vector<NodePtr> fs);
NodePtr mk_or(std::vector<NodePtr> fs);
NodePtr mk_implies(NodePtr a, NodePtr b);
NodePtr mk_iff(NodePtr a, NodePtr b);
NodePtr mk_eq(NodePtr a, NodePtr b);
NodePtr mk_metavar(std::string name, Sort sort);
NodePtr mk_const(std::string name, Sort sort);
NodePtr mk_expr_lit(Expr e);
NodePtr mk_subst_lit(Subst s);
NodePtr mk_apply(std::string fn, std::vector<NodePtr> args, Sort sort);
NodePtr mk_cond(NodePtr test, NodePtr then_term, NodePtr else_term);
// Same kind, name and payload with new children.
NodePtr with_kids(const NodePtr& n, std::vector<NodePtr> kids);

bool node_equal(const NodePtr& a, const NodePtr& b);
bool node_less(const NodePtr& a, const NodePtr& b);

std::string to_string(const NodePtr& n);

// Signature of predicates, functions and sorted constants.
struct SymbolSig {
  std::vector<Sort> args;  // Sort::Any marks an unconstrained position
  Sort result = Sort::Bool;
  bool variadic = false;   // every argument has sort args[0]
};

class Signature {
 public:
  // Builtin symbols of the expression and substitution theory.
  Signature();

  void add_predicate(const std::string& name, SymbolSig sig);
  void add_function(const std::string& name, SymbolSig sig);
  // A constant declared with Sort::Any takes its sort from its uses.
  void add_constant(const std::string& name, Sort sort);

  const SymbolSig* predicate(const std::string& name) const;
  const SymbolSig* function(const std::string& name) const;
  std::optional<Sort> constant(const std::string& name) const;
  const std::map<std::string, Sort>& constants() const { return constants_; }

 private:
  std::map<std::string, SymbolSig> predicates_;
  std::map<std::string, SymbolSig> functions_;
  std::map<std::string, Sort> constants_;
};

bool is_metavar_name(std::string_view name);

// Parses a formula or term and infers metavariable sorts from their
// argument positions. Throws Syntax or SortError.
NodePtr parse_node(std::string_view text, const Signature& sig);
NodePtr parse_formula(std::string_view text, const Signature& sig);
NodePtr parse_term(std::string_view text, const Signature& sig);

using MetaSubst = std::map<std::string, NodePtr>;

std::string to_string(const MetaSubst& s);
NodePtr apply_subst(const NodePtr& n, const MetaSubst& s);
// Applying the result equals applying a then b.
MetaSubst compose_meta(const MetaSubst& a, const MetaSubst& b);
void collect_metavars(const NodePtr& n, std::set<std::string>& out);
std::set<std::string> metavars_of(const NodePtr& n);
bool occurs_metavar(const std::string& name, const NodePtr& n);

// Most general unifier with occurs check and sort compatibility.
std::optional<MetaSubst> term_unify(const NodePtr& a, const NodePtr& b, MetaSubst start = {});

// Propositional simplification: constant folding, double negation,
// negation pushed through and/or/implies, flattening and deduplication of
// and/or, and conditional-term collapse. Iff and atoms are kept intact.
NodePtr simplify(const NodePtr& n);
// Negation normal form; with implies_to_or, implications become
// disjunctions. Iff stays intact.
NodePtr normalize(const NodePtr& f, bool implies_to_or = false);
// Conditional-term rewrites: same branch, constant test and redundant
// nested tests.
NodePtr simplify_cond(const NodePtr& t);

// 1-based child indices; the empty path addresses the root.
using Path = std::vector<std::size_t>;
// "0" denotes the root; otherwise dot-separated indices like "2.1".
Path parse_path(std::string_view text);
std::string to_string(const Path& p);
// Throws BadPath.
NodePtr at_path(const NodePtr& n, const Path& p);
NodePtr replace_at(const NodePtr& n, const Path& p, const NodePtr& replacement);
NodePtr replace_all(const NodePtr& n, const NodePtr& target, const NodePtr& replacement);
std::size_t symbol_count(const NodePtr& n);

enum Polarity : unsigned { PolNone = 0, PolPos = 1, PolNeg = 2, PolBoth = 3 };
// Polarity of the subformula at p inside f, which itself has polarity start.
unsigned polarity_at(const NodePtr& f, const Path& p, unsigned start = PolPos);

}  // namespace dps
