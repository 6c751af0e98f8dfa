#pragma once

// Symbolic expressions: constants, variables and cons pairs.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dps {

enum class ExprKind { Const, Var, Cons };

class Expr {
 public:
  // Defaults to the constant nil so Expr can live in standard containers.
  Expr();

  static Expr constant(std::string name);
  static Expr var(std::string name);
  static Expr cons(Expr left, Expr right);
  static Expr nil();
  static Expr black_hole();

  ExprKind kind() const;
  bool is_const() const { return kind() == ExprKind::Const; }
  bool is_var() const { return kind() == ExprKind::Var; }
  bool is_cons() const { return kind() == ExprKind::Cons; }
  bool is_atom() const { return kind() != ExprKind::Cons; }

  // Name of a constant or variable; empty for cons pairs.
  const std::string& name() const;
  // Throws AtomicExpression on atoms.
  Expr left() const;
  Expr right() const;

  std::size_t size() const;
  std::size_t hash() const;

  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }
  bool operator<(const Expr& other) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

using VarSet = std::set<std::string>;

bool is_identifier(std::string_view text);
bool is_variable_name(std::string_view text);

Expr parse_expr(std::string_view text);
// Parses one expression starting at pos and advances pos past it.
Expr parse_expr_prefix(std::string_view text, std::size_t& pos);

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

std::pair<Expr, Expr> destructure(const Expr& e);
ExprKind classify(const Expr& e);
const char* kind_name(ExprKind kind);
std::size_t size_of(const Expr& e);
VarSet vars_of(const Expr& e);
void collect_vars(const Expr& e, VarSet& out);
// Variables in left-to-right first-occurrence order, without repeats.
std::vector<std::string> vars_in_order(const Expr& e);

enum class Occurrence { Proper, Reflexive };
bool occurs_in(const Expr& d, const Expr& e, Occurrence mode);

Expr encode_tuple(const std::vector<Expr>& items);
std::vector<Expr> decode_tuple(const Expr& e);

// Every expression built from the atoms with size at most max_size, ordered
// by number of cons cells.
std::vector<Expr> expressions_up_to(const std::vector<Expr>& atoms, std::size_t max_size);

VarSet set_union(const VarSet& a, const VarSet& b);
bool is_subset(const VarSet& a, const VarSet& b);
bool is_proper_subset(const VarSet& a, const VarSet& b);
std::string to_string(const VarSet& s);

// Supply of fresh variable names of the form base#k.
class FreshSupply {
 public:
  explicit FreshSupply(unsigned long start = 1) : next_(start) {}
  std::string fresh(std::string_view base);
  unsigned long peek() const { return next_; }

 private:
  unsigned long next_;
};

FreshSupply& global_fresh_supply();

// Strips a trailing #k suffix so renamed variables do not accumulate suffixes.
std::string base_name(std::string_view name);

}  // namespace dps
