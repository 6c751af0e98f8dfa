#include "dps/program.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "dps/error.hpp"
#include "dps/unify.hpp"

namespace dps {

Value Value::of_bool(bool b) {
  Value v;
  v.sort = Sort::Bool;
  v.truth = b;
  return v;
}

Value Value::of_expr(Expr e) {
  Value v;
  v.sort = Sort::Expr;
  v.expr = std::move(e);
  return v;
}

Value Value::of_subst(Subst s) {
  Value v;
  v.sort = Sort::Subst;
  v.subst = std::move(s);
  return v;
}

Value Value::of_set(VarSet s) {
  Value v;
  v.sort = Sort::VarSet;
  v.set = std::move(s);
  return v;
}

Value Value::of_nat(std::size_t n) {
  Value v;
  v.sort = Sort::Nat;
  v.nat = n;
  return v;
}

Value Value::of_triple(InputTriple t) {
  Value v;
  v.sort = Sort::Triple;
  v.triple = std::move(t);
  return v;
}

Value Value::of_rel(RelPtr r) {
  Value v;
  v.sort = Sort::Rel;
  v.rel = std::move(r);
  return v;
}

bool Value::operator==(const Value& other) const {
  if (sort != other.sort) return false;
  switch (sort) {
    case Sort::Bool: return truth == other.truth;
    case Sort::Expr: return expr == other.expr;
    case Sort::Subst: return subst == other.subst;
    case Sort::VarSet: return set == other.set;
    case Sort::Nat: return nat == other.nat;
    case Sort::Triple:
      return triple.env == other.triple.env && triple.e1 == other.triple.e1 && triple.e2 == other.triple.e2;
    case Sort::Rel: return rel == other.rel || (rel && other.rel && to_string(*rel) == to_string(*other.rel));
    case Sort::Any: return true;
  }
  return false;
}

std::string to_string(const Value& v) {
  switch (v.sort) {
    case Sort::Bool: return v.truth ? "true" : "false";
    case Sort::Expr: return to_string(v.expr);
    case Sort::Subst: return to_string(v.subst);
    case Sort::VarSet: return to_string(v.set);
    case Sort::Nat: return std::to_string(v.nat);
    case Sort::Triple:
      return "<" + to_string(v.triple.env) + ", " + to_string(v.triple.e1) + ", " + to_string(v.triple.e2) + ">";
    case Sort::Rel: return v.rel ? to_string(*v.rel) : "?";
    case Sort::Any: return "?";
  }
  return "?";
}

WfValue to_wf_value(const Value& v) {
  switch (v.sort) {
    case Sort::Expr: return WfValue::of_expr(v.expr);
    case Sort::Subst: return WfValue::of_subst(v.subst);
    case Sort::VarSet: return WfValue::of_set(v.set);
    case Sort::Nat: return WfValue::of_nat(v.nat);
    case Sort::Triple: return WfValue::triple(v.triple.env, v.triple.e1, v.triple.e2);
    default: throw Error(ErrorKind::SortMismatch, "no ordering value for " + to_string(v));
  }
}

Value parse_value(std::string_view text, Sort sort) {
  switch (sort) {
    case Sort::Expr: return Value::of_expr(parse_expr(text));
    case Sort::Subst: return Value::of_subst(parse_subst(text));
    default: throw Error(ErrorKind::SortError, std::string("cannot read a value of sort ") + sort_name(sort));
  }
}

namespace {

[[noreturn]] void primitive_error(const std::string& what) { throw Error(ErrorKind::PrimitiveError, what); }

const Value& expect(const Value& v, Sort sort, const std::string& where) {
  if (v.sort != sort) {
    primitive_error(where + " expects " + sort_name(sort) + " but got " + sort_name(v.sort) + " " + to_string(v));
  }
  return v;
}

const RelationRegistry& default_registry() {
  static const RelationRegistry registry;
  return registry;
}

WfValue args_to_wf(const std::vector<Value>& args) {
  if (args.size() == 3 && args[0].sort == Sort::Subst && args[1].sort == Sort::Expr && args[2].sort == Sort::Expr) {
    return WfValue::triple(args[0].subst, args[1].expr, args[2].expr);
  }
  if (args.size() == 1) return to_wf_value(args[0]);
  WfValue t;
  t.kind = WfKind::Tuple;
  for (const auto& a : args) t.items.push_back(to_wf_value(a));
  return t;
}

std::string args_text(const std::vector<Value>& args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(args[i]);
  }
  return out + ")";
}

Value self_call(const std::vector<Value>& args, EvalContext& ctx) {
  const ProgramDef& p = *ctx.program;
  if (args.size() != p.params.size()) primitive_error("wrong number of arguments to " + p.name);
  if (ctx.fuel && --*ctx.fuel < 0) throw Error(ErrorKind::FuelExhausted, p.name + " ran out of fuel");
  if (ctx.check_decrease && p.decrease && !ctx.current_args.empty()) {
    const RelationRegistry& registry = ctx.relations ? *ctx.relations : default_registry();
    RelPtr rel = registry.get(*p.decrease);
    if (!rel_less(*rel, args_to_wf(args), args_to_wf(ctx.current_args))) {
      throw Error(ErrorKind::DecreaseViolation,
                  "call " + args_text(args) + " does not decrease from " + args_text(ctx.current_args));
    }
  }
  if (ctx.observer && !ctx.current_args.empty()) ctx.observer(ctx.current_args, args);
  EvalContext inner;
  for (std::size_t i = 0; i < args.size(); ++i) inner.bindings[p.params[i].first] = args[i];
  inner.program = ctx.program;
  inner.relations = ctx.relations;
  inner.fuel = ctx.fuel;
  inner.check_decrease = ctx.check_decrease;
  inner.current_args = args;
  inner.observer = ctx.observer;
  return eval_node(p.body, inner);
}

Value eval_apply(const NodePtr& n, EvalContext& ctx) {
  std::vector<Value> args;
  for (const auto& k : n->kids) args.push_back(eval_node(k, ctx));
  const std::string& f = n->name;
  auto E = [&](std::size_t i) -> const Expr& { return expect(args[i], Sort::Expr, f).expr; };
  auto S = [&](std::size_t i) -> const Subst& { return expect(args[i], Sort::Subst, f).subst; };
  if (f == "cons") return Value::of_expr(Expr::cons(E(0), E(1)));
  if (f == "left" || f == "right") {
    if (E(0).is_atom()) primitive_error(f + " of atom " + to_string(E(0)));
    return Value::of_expr(f == "left" ? E(0).left() : E(0).right());
  }
  if (f == "apply") return Value::of_expr(apply(E(0), S(1)));
  if (f == "compose") return Value::of_subst(compose(S(0), S(1)));
  if (f == "replace") {
    if (!E(0).is_var()) primitive_error("replace of non-variable " + to_string(E(0)));
    return Value::of_subst(replacement(E(0).name(), E(1)));
  }
  if (f == "vars") return Value::of_set(vars_of(E(0)));
  if (f == "dom") return Value::of_set(dom_of(S(0)));
  if (f == "range") return Value::of_set(range_of(S(0)));
  if (f == "size") return Value::of_nat(E(0).size());
  if (f == "union") {
    return Value::of_set(set_union(expect(args[0], Sort::VarSet, f).set, expect(args[1], Sort::VarSet, f).set));
  }
  if (f == "tuple") {
    std::vector<Expr> items;
    for (std::size_t i = 0; i < args.size(); ++i) items.push_back(E(i));
    return Value::of_expr(encode_tuple(items));
  }
  if (f == "triple") return Value::of_triple({S(0), E(1), E(2)});
  if (ctx.program && f == ctx.program->name) return self_call(args, ctx);
  primitive_error("no interpretation for function " + f);
}

bool eval_atom(const NodePtr& n, EvalContext& ctx) {
  std::vector<Value> args;
  for (const auto& k : n->kids) args.push_back(eval_node(k, ctx));
  const std::string& p = n->name;
  auto E = [&](std::size_t i) -> const Expr& { return expect(args[i], Sort::Expr, p).expr; };
  auto S = [&](std::size_t i) -> const Subst& { return expect(args[i], Sort::Subst, p).subst; };
  auto V = [&](std::size_t i) -> const VarSet& { return expect(args[i], Sort::VarSet, p).set; };
  auto N = [&](std::size_t i) { return expect(args[i], Sort::Nat, p).nat; };
  if (p == "is-atom") return E(0).is_atom();
  if (p == "is-const") return E(0).is_const();
  if (p == "is-var") return E(0).is_var();
  if (p == "is-proper") return S(0).is_proper();
  if (p == "idem") return is_idempotent(S(0));
  if (p == "occurs-proper") return occurs_in(E(0), E(1), Occurrence::Proper);
  if (p == "occurs-refl") return occurs_in(E(0), E(1), Occurrence::Reflexive);
  if (p == "misses") return misses(S(0), E(1));
  if (p == "more-genid") return more_general(S(0), S(1));
  if (p == "mgi") return mgi_decide(S(0), E(1), E(2), S(3));
  if (p == "mgiu") return mgiu_check(S(0), E(1), E(2), S(3)).ok();
  if (p == "reduce") return reduce_holds(S(0), V(1), S(2));
  if (p == "subset") return is_subset(V(0), V(1));
  if (p == "proper-subset") return is_proper_subset(V(0), V(1));
  if (p == "size-lt") return N(0) < N(1);
  if (p == "wf-ordered") {
    const RelPtr& rel = expect(args[0], Sort::Rel, p).rel;
    return rel_less(*rel, to_wf_value(args[1]), to_wf_value(args[2]));
  }
  primitive_error("no interpretation for predicate " + p);
}

Value lookup_symbol(const NodePtr& n, EvalContext& ctx) {
  auto it = ctx.bindings.find(n->name);
  if (it != ctx.bindings.end()) return it->second;
  if (n->kind == NodeKind::Const) {
    if (n->name == "bot") return Value::of_subst(Subst::failure());
    if (n->name == "empty") return Value::of_subst(Subst::empty());
    const RelationRegistry& registry = ctx.relations ? *ctx.relations : default_registry();
    if (registry.contains(n->name)) return Value::of_rel(registry.get(n->name));
  }
  primitive_error("unbound symbol " + n->name);
}

}  // namespace

Value eval_node(const NodePtr& n, EvalContext& ctx) {
  switch (n->kind) {
    case NodeKind::True: return Value::of_bool(true);
    case NodeKind::False: return Value::of_bool(false);
    case NodeKind::Atom: return Value::of_bool(eval_atom(n, ctx));
    case NodeKind::Not: return Value::of_bool(!eval_formula(n->kids[0], ctx));
    case NodeKind::And:
      for (const auto& k : n->kids) {
        if (!eval_formula(k, ctx)) return Value::of_bool(false);
      }
      return Value::of_bool(true);
    case NodeKind::Or:
      for (const auto& k : n->kids) {
        if (eval_formula(k, ctx)) return Value::of_bool(true);
      }
      return Value::of_bool(false);
    case NodeKind::Implies: return Value::of_bool(!eval_formula(n->kids[0], ctx) || eval_formula(n->kids[1], ctx));
    case NodeKind::Iff: return Value::of_bool(eval_formula(n->kids[0], ctx) == eval_formula(n->kids[1], ctx));
    case NodeKind::Eq: return Value::of_bool(eval_node(n->kids[0], ctx) == eval_node(n->kids[1], ctx));
    case NodeKind::MetaVar:
    case NodeKind::Const: return lookup_symbol(n, ctx);
    case NodeKind::Literal: return n->sort == Sort::Expr ? Value::of_expr(n->expr) : Value::of_subst(n->subst);
    case NodeKind::Apply: return eval_apply(n, ctx);
    case NodeKind::Cond: return eval_formula(n->kids[0], ctx) ? eval_node(n->kids[1], ctx) : eval_node(n->kids[2], ctx);
  }
  primitive_error("cannot evaluate " + to_string(n));
}

bool eval_formula(const NodePtr& f, EvalContext& ctx) { return expect(eval_node(f, ctx), Sort::Bool, "connective").truth; }

Value interpret(const ProgramDef& p, const std::vector<Value>& args, const InterpretOptions& options) {
  if (args.size() != p.params.size()) primitive_error("wrong number of arguments to " + p.name);
  for (std::size_t i = 0; i < args.size(); ++i) {
    Sort want = p.params[i].second;
    if (want != Sort::Any && args[i].sort != want) {
      primitive_error("argument " + p.params[i].first + " expects " + sort_name(want));
    }
  }
  long fuel = options.fuel;
  EvalContext ctx;
  for (std::size_t i = 0; i < args.size(); ++i) ctx.bindings[p.params[i].first] = args[i];
  ctx.program = &p;
  ctx.relations = options.relations;
  ctx.fuel = &fuel;
  ctx.check_decrease = options.check_decrease;
  ctx.current_args = args;
  ctx.observer = options.observer;
  return eval_node(p.body, ctx);
}

NodePtr simplify_program_body(const NodePtr& body) {
  NodePtr cur = body;
  for (int round = 0; round < 64; ++round) {
    NodePtr next = simplify_cond(cur);
    if (node_equal(next, cur)) return next;
    cur = next;
  }
  return cur;
}

ProgramDef simplify_program(const ProgramDef& p) {
  ProgramDef out = p;
  out.body = simplify_program_body(p.body);
  return out;
}

namespace {

constexpr std::size_t line_width = 100;

void layout(const NodePtr& n, std::size_t indent, std::string& out) {
  std::string flat = to_string(n);
  if (n->kind != NodeKind::Cond || indent + flat.size() <= line_width) {
    out += flat;
    return;
  }
  std::string pad(indent + 2, ' ');
  out += "(if " + to_string(n->kids[0]) + "\n" + pad;
  layout(n->kids[1], indent + 2, out);
  out += "\n" + pad;
  layout(n->kids[2], indent + 2, out);
  out += ")";
}

void collect_param_sorts(const NodePtr& n, std::map<std::string, Sort>& sorts) {
  if (n->kind == NodeKind::Const && n->sort != Sort::Any) sorts.emplace(n->name, n->sort);
  for (const auto& k : n->kids) collect_param_sorts(k, sorts);
}

[[noreturn]] void program_syntax(const std::string& what) { throw Error(ErrorKind::Syntax, "program: " + what); }

}  // namespace

std::string emit(const ProgramDef& p) {
  std::string out = "(define (" + p.name;
  for (const auto& param : p.params) out += " " + param.first;
  out += ")\n  ";
  layout(p.body, 2, out);
  out += ")\n";
  return out;
}

ProgramDef parse_program(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto word = [&] {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' &&
           text[pos] != ')') {
      ++pos;
    }
    return std::string(text.substr(start, pos - start));
  };
  skip();
  if (pos >= text.size() || text[pos] != '(') program_syntax("expected '(define'");
  ++pos;
  if (word() != "define") program_syntax("expected 'define'");
  skip();
  if (pos >= text.size() || text[pos] != '(') program_syntax("expected parameter list");
  ++pos;
  ProgramDef p;
  p.name = word();
  if (p.name.empty()) program_syntax("missing program name");
  while (true) {
    skip();
    if (pos >= text.size()) program_syntax("unterminated parameter list");
    if (text[pos] == ')') {
      ++pos;
      break;
    }
    std::string param = word();
    Sort sort = Sort::Any;
    if (auto colon = param.find(':'); colon != std::string::npos) {
      sort = parse_sort(param.substr(colon + 1));
      param = param.substr(0, colon);
    }
    if (param.empty() || !std::islower(static_cast<unsigned char>(param[0]))) program_syntax("bad parameter '" + param + "'");
    p.params.emplace_back(param, sort);
  }
  std::size_t end = text.find_last_of(')');
  if (end == std::string_view::npos || end < pos) program_syntax("missing ')'");
  std::string_view rest = text.substr(end + 1);
  if (!std::all_of(rest.begin(), rest.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
    program_syntax("trailing input");
  }
  std::string_view body_text = text.substr(pos, end - pos);

  auto signature_for = [&](Sort result) {
    Signature sig;
    std::vector<Sort> arg_sorts;
    for (const auto& [name, sort] : p.params) {
      sig.add_constant(name, sort);
      arg_sorts.push_back(sort);
    }
    sig.add_function(p.name, {arg_sorts, result});
    return sig;
  };
  NodePtr first = parse_term(body_text, signature_for(Sort::Any));
  std::map<std::string, Sort> inferred;
  collect_param_sorts(first, inferred);
  for (auto& [name, sort] : p.params) {
    if (sort == Sort::Any && inferred.count(name)) sort = inferred[name];
  }
  p.result = first->sort;
  p.body = parse_term(body_text, signature_for(p.result));
  p.result = p.body->sort;
  return p;
}

bool structurally_equal(const ProgramDef& a, const ProgramDef& b) {
  auto canonical = [](const NodePtr& body) {
    std::vector<std::string> order;
    std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
      if (n->kind == NodeKind::MetaVar && std::find(order.begin(), order.end(), n->name) == order.end()) {
        order.push_back(n->name);
      }
      for (const auto& k : n->kids) walk(k);
    };
    walk(body);
    MetaSubst rename;
    for (std::size_t i = 0; i < order.size(); ++i) rename[order[i]] = mk_metavar("V" + std::to_string(i + 1), Sort::Any);
    return to_string(apply_subst(body, rename));
  };
  if (a.name != b.name || a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].first != b.params[i].first) return false;
  }
  return canonical(a.body) == canonical(b.body);
}

}  // namespace dps
