#pragma once

// Ground evaluation of terms and formulas, and extracted programs:
// interpretation with termination checking, simplification and emission.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dps/logic.hpp"
#include "dps/subst.hpp"
#include "dps/term.hpp"
#include "dps/wf.hpp"

namespace dps {

struct Value {
  Sort sort = Sort::Bool;
  bool truth = false;
  Expr expr;
  Subst subst;
  VarSet set;
  std::size_t nat = 0;
  InputTriple triple;
  RelPtr rel;

  static Value of_bool(bool b);
  static Value of_expr(Expr e);
  static Value of_subst(Subst s);
  static Value of_set(VarSet s);
  static Value of_nat(std::size_t n);
  static Value of_triple(InputTriple t);
  static Value of_rel(RelPtr r);

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }
};

std::string to_string(const Value& v);
WfValue to_wf_value(const Value& v);
// Parses a value of the given sort from text (expressions and substitutions).
Value parse_value(std::string_view text, Sort sort);

struct ProgramDef {
  std::string name;
  std::vector<std::pair<std::string, Sort>> params;
  Sort result = Sort::Any;
  NodePtr body;
  std::optional<std::string> decrease;
};

using Bindings = std::map<std::string, Value>;
using CallObserver = std::function<void(const std::vector<Value>& parent, const std::vector<Value>& child)>;

struct EvalContext {
  Bindings bindings;  // constants and metavariables
  const ProgramDef* program = nullptr;
  const RelationRegistry* relations = nullptr;
  long* fuel = nullptr;
  bool check_decrease = false;
  std::vector<Value> current_args;
  CallObserver observer;
};

// Evaluates a ground term or formula. Throws PrimitiveError on
// undefined primitive applications and on unbound symbols.
Value eval_node(const NodePtr& n, EvalContext& ctx);
bool eval_formula(const NodePtr& f, EvalContext& ctx);

struct InterpretOptions {
  long fuel = 10000;
  bool check_decrease = false;
  CallObserver observer;
  const RelationRegistry* relations = nullptr;
};

// Strict primitives, lazy conditionals. Throws FuelExhausted,
// DecreaseViolation or PrimitiveError.
Value interpret(const ProgramDef& p, const std::vector<Value>& args, const InterpretOptions& options = {});

// Conditional rewrites applied to a fixpoint.
NodePtr simplify_program_body(const NodePtr& body);
ProgramDef simplify_program(const ProgramDef& p);

std::string emit(const ProgramDef& p);
// Parses `(define (name p1 ... pn) body)`. Parameters may carry sorts as
// `name:sort`; otherwise sorts are inferred from their uses.
ProgramDef parse_program(std::string_view text);
// Equal up to metavariable renaming.
bool structurally_equal(const ProgramDef& a, const ProgramDef& b);

}  // namespace dps
