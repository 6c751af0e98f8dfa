#include "dps/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "dps/error.hpp"

namespace dps {

const char* sort_name(Sort sort) {
  switch (sort) {
    case Sort::Any: return "any";
    case Sort::Bool: return "bool";
    case Sort::Expr: return "expr";
    case Sort::Subst: return "subst";
    case Sort::VarSet: return "varset";
    case Sort::Nat: return "nat";
    case Sort::Triple: return "triple";
    case Sort::Rel: return "rel";
  }
  return "?";
}

Sort parse_sort(std::string_view name) {
  for (Sort s : {Sort::Any, Sort::Bool, Sort::Expr, Sort::Subst, Sort::VarSet, Sort::Nat, Sort::Triple, Sort::Rel}) {
    if (name == sort_name(s)) return s;
  }
  throw Error(ErrorKind::SortError, "unknown sort " + std::string(name));
}

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

NodePtr finish(Node n) {
  std::size_t h = mix(static_cast<std::size_t>(n.kind) + 17, std::hash<std::string>{}(n.name));
  h = mix(h, static_cast<std::size_t>(n.sort));
  for (const auto& k : n.kids) h = mix(h, k->hash);
  if (n.kind == NodeKind::Literal) h = mix(h, n.sort == Sort::Expr ? n.expr.hash() : std::hash<std::string>{}(to_string(n.subst)));
  n.hash = h;
  return std::make_shared<const Node>(std::move(n));
}

NodePtr make(NodeKind kind, std::string name, Sort sort, std::vector<NodePtr> kids) {
  Node n;
  n.kind = kind;
  n.name = std::move(name);
  n.sort = sort;
  n.kids = std::move(kids);
  return finish(std::move(n));
}

}  // namespace

NodePtr mk_true() {
  static const NodePtr t = make(NodeKind::True, "", Sort::Bool, {});
  return t;
}

NodePtr mk_false() {
  static const NodePtr f = make(NodeKind::False, "", Sort::Bool, {});
  return f;
}

NodePtr mk_bool(bool value) { return value ? mk_true() : mk_false(); }

NodePtr mk_atom(std::string pred, std::vector<NodePtr> args) {
  return make(NodeKind::Atom, std::move(pred), Sort::Bool, std::move(args));
}

NodePtr mk_not(NodePtr f) { return make(NodeKind::Not, "", Sort::Bool, {std::move(f)}); }

NodePtr mk_and(std::vector<NodePtr> fs) { return make(NodeKind::And, "", Sort::Bool, std::move(fs)); }

NodePtr mk_or(std::vector<NodePtr> fs) { return make(NodeKind::Or, "", Sort::Bool, std::move(fs)); }

NodePtr mk_implies(NodePtr a, NodePtr b) { return make(NodeKind::Implies, "", Sort::Bool, {std::move(a), std::move(b)}); }

NodePtr mk_iff(NodePtr a, NodePtr b) { return make(NodeKind::Iff, "", Sort::Bool, {std::move(a), std::move(b)}); }

NodePtr mk_eq(NodePtr a, NodePtr b) { return make(NodeKind::Eq, "", Sort::Bool, {std::move(a), std::move(b)}); }

NodePtr mk_metavar(std::string name, Sort sort) { return make(NodeKind::MetaVar, std::move(name), sort, {}); }

NodePtr mk_const(std::string name, Sort sort) { return make(NodeKind::Const, std::move(name), sort, {}); }

NodePtr mk_expr_lit(Expr e) {
  Node n;
  n.kind = NodeKind::Literal;
  n.sort = Sort::Expr;
  n.expr = std::move(e);
  return finish(std::move(n));
}

NodePtr mk_subst_lit(Subst s) {
  Node n;
  n.kind = NodeKind::Literal;
  n.sort = Sort::Subst;
  n.subst = std::move(s);
  return finish(std::move(n));
}

NodePtr mk_apply(std::string fn, std::vector<NodePtr> args, Sort sort) {
  return make(NodeKind::Apply, std::move(fn), sort, std::move(args));
}

NodePtr mk_cond(NodePtr test, NodePtr then_term, NodePtr else_term) {
  Sort sort = then_term->sort != Sort::Any ? then_term->sort : else_term->sort;
  return make(NodeKind::Cond, "", sort, {std::move(test), std::move(then_term), std::move(else_term)});
}

NodePtr with_kids(const NodePtr& n, std::vector<NodePtr> kids) {
  if (n->kind == NodeKind::Cond) return mk_cond(kids[0], kids[1], kids[2]);
  Node copy = *n;
  copy.kids = std::move(kids);
  return finish(std::move(copy));
}

bool node_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->name != b->name || a->kids.size() != b->kids.size()) return false;
  if (a->kind == NodeKind::Literal) {
    if (a->sort != b->sort) return false;
    return a->sort == Sort::Expr ? a->expr == b->expr : a->subst == b->subst;
  }
  for (std::size_t i = 0; i < a->kids.size(); ++i) {
    if (!node_equal(a->kids[i], b->kids[i])) return false;
  }
  return true;
}

bool node_less(const NodePtr& a, const NodePtr& b) {
  if (node_equal(a, b)) return false;
  if (a->kind != b->kind) return a->kind < b->kind;
  if (a->name != b->name) return a->name < b->name;
  if (a->kind == NodeKind::Literal) {
    if (a->sort != b->sort) return a->sort < b->sort;
    return a->sort == Sort::Expr ? a->expr < b->expr : a->subst < b->subst;
  }
  for (std::size_t i = 0; i < a->kids.size() && i < b->kids.size(); ++i) {
    if (!node_equal(a->kids[i], b->kids[i])) return node_less(a->kids[i], b->kids[i]);
  }
  return a->kids.size() < b->kids.size();
}

namespace {

bool bare_literal_ok(const Expr& e) {
  if (!e.is_const()) return false;
  const std::string& n = e.name();
  if (n == "true" || n == "false" || n == "bot" || n == "empty" || n == "*") return false;
  return std::islower(static_cast<unsigned char>(n[0])) != 0;
}

void print(const NodePtr& n, std::string& out) {
  auto list = [&](const std::string& head) {
    out += '(';
    out += head;
    for (const auto& k : n->kids) {
      out += ' ';
      print(k, out);
    }
    out += ')';
  };
  switch (n->kind) {
    case NodeKind::True: out += "true"; return;
    case NodeKind::False: out += "false"; return;
    case NodeKind::Atom: list(n->name); return;
    case NodeKind::Not: list("not"); return;
    case NodeKind::And: list("and"); return;
    case NodeKind::Or: list("or"); return;
    case NodeKind::Implies: list("implies"); return;
    case NodeKind::Iff: list("iff"); return;
    case NodeKind::Eq: list("="); return;
    case NodeKind::MetaVar:
    case NodeKind::Const: out += n->name; return;
    case NodeKind::Literal:
      if (n->sort == Sort::Expr) {
        out += bare_literal_ok(n->expr) ? n->expr.name() : "(quote " + to_string(n->expr) + ")";
      } else {
        out += "(quote-subst " + to_string(n->subst) + ")";
      }
      return;
    case NodeKind::Apply: list(n->name); return;
    case NodeKind::Cond: list("if"); return;
  }
}

}  // namespace

std::string to_string(const NodePtr& n) {
  std::string out;
  print(n, out);
  return out;
}

Signature::Signature() {
  const Sort E = Sort::Expr, S = Sort::Subst, V = Sort::VarSet, N = Sort::Nat;
  for (const char* p : {"is-atom", "is-const", "is-var"}) add_predicate(p, {{E}});
  for (const char* p : {"is-proper", "idem"}) add_predicate(p, {{S}});
  for (const char* p : {"occurs-proper", "occurs-refl"}) add_predicate(p, {{E, E}});
  add_predicate("misses", {{S, E}});
  add_predicate("more-genid", {{S, S}});
  add_predicate("mgi", {{S, E, E, S}});
  add_predicate("mgiu", {{S, E, E, S}});
  add_predicate("reduce", {{S, V, S}});
  add_predicate("subset", {{V, V}});
  add_predicate("proper-subset", {{V, V}});
  add_predicate("size-lt", {{N, N}});
  add_predicate("wf-ordered", {{Sort::Rel, Sort::Any, Sort::Any}});

  add_function("cons", {{E, E}, E});
  add_function("left", {{E}, E});
  add_function("right", {{E}, E});
  add_function("apply", {{E, S}, E});
  add_function("compose", {{S, S}, S});
  add_function("replace", {{E, E}, S});
  add_function("vars", {{E}, V});
  add_function("dom", {{S}, V});
  add_function("range", {{S}, V});
  add_function("size", {{E}, N});
  add_function("union", {{V, V}, V});
  add_function("tuple", {{E}, E, true});
  add_function("triple", {{S, E, E}, Sort::Triple});

  add_constant("bot", S);
  add_constant("empty", S);
}

void Signature::add_predicate(const std::string& name, SymbolSig sig) {
  sig.result = Sort::Bool;
  predicates_[name] = std::move(sig);
}

void Signature::add_function(const std::string& name, SymbolSig sig) { functions_[name] = std::move(sig); }

void Signature::add_constant(const std::string& name, Sort sort) { constants_[name] = sort; }

const SymbolSig* Signature::predicate(const std::string& name) const {
  auto it = predicates_.find(name);
  return it == predicates_.end() ? nullptr : &it->second;
}

const SymbolSig* Signature::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

std::optional<Sort> Signature::constant(const std::string& name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

bool is_metavar_name(std::string_view name) {
  if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '\'' && c != '#' && c != '_') return false;
  }
  return true;
}

namespace {

// Parsed tree before sort inference.
struct Raw {
  NodeKind kind;
  std::string name;
  std::vector<Raw> kids;
  Expr expr;
  Subst subst;
  Sort lit_sort = Sort::Expr;
  std::size_t pos = 0;
};

class NodeReader {
 public:
  NodeReader(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Raw read() {
    char c = peek();
    if (c == '\0') fail("unexpected end of input");
    if (c == ')') fail("unexpected ')'");
    Raw r;
    r.pos = pos_;
    if (c != '(') {
      std::string w = word();
      if (w.empty()) fail("expected symbol");
      if (w == "true" || w == "false") {
        r.kind = w == "true" ? NodeKind::True : NodeKind::False;
      } else if (is_metavar_name(w)) {
        r.kind = NodeKind::MetaVar;
        r.name = w;
      } else if (sig_.constant(w)) {
        r.kind = NodeKind::Const;
        r.name = w;
      } else if (is_identifier(w)) {
        r.kind = NodeKind::Literal;
        r.expr = Expr::constant(w);
      } else {
        pos_ = r.pos;
        fail("invalid symbol '" + w + "'");
      }
      return r;
    }
    ++pos_;
    std::string head = word();
    if (head.empty()) fail("expected operator");
    if (head == "quote") {
      r.kind = NodeKind::Literal;
      r.expr = parse_expr_prefix(text_, pos_);
      expect_close();
      return r;
    }
    if (head == "quote-subst") {
      peek();
      std::size_t start = pos_;
      if (text_.substr(pos_, 3) == "bot") {
        pos_ += 3;
      } else {
        auto close = text_.find('}', pos_);
        if (close == std::string_view::npos) fail("unterminated substitution");
        pos_ = close + 1;
      }
      r.kind = NodeKind::Literal;
      r.lit_sort = Sort::Subst;
      r.subst = parse_subst(text_.substr(start, pos_ - start));
      expect_close();
      return r;
    }
    std::vector<Raw> kids;
    while (peek() != ')') {
      if (peek() == '\0') fail("unterminated list");
      kids.push_back(read());
    }
    ++pos_;
    r.kids = std::move(kids);
    r.name = head;
    auto arity = [&](std::size_t n) {
      if (r.kids.size() != n) {
        pos_ = r.pos;
        fail("'" + head + "' expects " + std::to_string(n) + " arguments");
      }
    };
    if (head == "and" || head == "or") {
      r.kind = head == "and" ? NodeKind::And : NodeKind::Or;
      r.name.clear();
      if (r.kids.empty()) fail("'" + head + "' needs arguments");
    } else if (head == "not") {
      r.kind = NodeKind::Not;
      r.name.clear();
      arity(1);
    } else if (head == "implies" || head == "iff") {
      r.kind = head == "implies" ? NodeKind::Implies : NodeKind::Iff;
      r.name.clear();
      arity(2);
    } else if (head == "=") {
      r.kind = NodeKind::Eq;
      r.name.clear();
      arity(2);
    } else if (head == "if") {
      r.kind = NodeKind::Cond;
      r.name.clear();
      arity(3);
    } else if (const SymbolSig* p = sig_.predicate(head)) {
      r.kind = NodeKind::Atom;
      if (!p->variadic) arity(p->args.size());
    } else if (const SymbolSig* f = sig_.function(head)) {
      r.kind = NodeKind::Apply;
      if (!f->variadic) arity(f->args.size());
    } else {
      pos_ = r.pos;
      fail("unknown symbol '" + head + "'");
    }
    return r;
  }

  void finish() {
    if (peek() != '\0') fail("trailing input");
  }

 private:
  char peek() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::string word() {
    peek();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect_close() {
    if (peek() != ')') fail("expected ')'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::Syntax, what + " at position " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

bool is_formula_kind(NodeKind k) {
  switch (k) {
    case NodeKind::True:
    case NodeKind::False:
    case NodeKind::Atom:
    case NodeKind::Not:
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
    case NodeKind::Iff:
    case NodeKind::Eq: return true;
    default: return false;
  }
}

std::string raw_label(const Raw& r) {
  if (!r.name.empty()) return "'" + r.name + "'";
  if (r.kind == NodeKind::Literal) return r.lit_sort == Sort::Expr ? "'" + to_string(r.expr) + "'" : "substitution literal";
  return "subterm";
}

class SortInference {
 public:
  explicit SortInference(const Signature& sig) : sig_(sig) {}

  Sort synth(const Raw& r) const {
    if (is_formula_kind(r.kind)) return Sort::Bool;
    switch (r.kind) {
      case NodeKind::MetaVar: {
        auto it = sorts_.find(r.name);
        return it == sorts_.end() ? Sort::Any : it->second;
      }
      case NodeKind::Const: {
        Sort declared = *sig_.constant(r.name);
        if (declared != Sort::Any) return declared;
        auto it = sorts_.find(r.name);
        return it == sorts_.end() ? Sort::Any : it->second;
      }
      case NodeKind::Literal: return r.lit_sort;
      case NodeKind::Apply: return sig_.function(r.name)->result;
      case NodeKind::Cond: {
        Sort s = synth(r.kids[1]);
        return s != Sort::Any ? s : synth(r.kids[2]);
      }
      default: return Sort::Any;
    }
  }

  void check(const Raw& r, Sort expected) {
    bool formula = is_formula_kind(r.kind);
    if (expected == Sort::Bool && !formula) fail(r, "expected a formula but found a term");
    if (expected != Sort::Bool && expected != Sort::Any && formula) fail(r, "expected a term but found a formula");
    switch (r.kind) {
      case NodeKind::True:
      case NodeKind::False: return;
      case NodeKind::Not:
      case NodeKind::And:
      case NodeKind::Or:
      case NodeKind::Implies:
      case NodeKind::Iff:
        for (const auto& k : r.kids) check(k, Sort::Bool);
        return;
      case NodeKind::Eq: {
        Sort a = synth(r.kids[0]), b = synth(r.kids[1]);
        if (a == Sort::Bool || b == Sort::Bool) fail(r, "equality between formulas");
        if (a != Sort::Any && b != Sort::Any && a != b) {
          fail(r, std::string("equality between ") + sort_name(a) + " and " + sort_name(b));
        }
        Sort s = a != Sort::Any ? a : b;
        check(r.kids[0], s);
        check(r.kids[1], s);
        return;
      }
      case NodeKind::Atom: {
        const SymbolSig* p = sig_.predicate(r.name);
        for (std::size_t i = 0; i < r.kids.size(); ++i) {
          check_term(r.kids[i], p->variadic ? p->args[0] : p->args[i]);
        }
        return;
      }
      default: check_term(r, expected == Sort::Bool ? Sort::Any : expected); return;
    }
  }

  bool changed() const { return changed_; }
  void reset() { changed_ = false; }
  const std::map<std::string, Sort>& sorts() const { return sorts_; }

 private:
  void check_term(const Raw& r, Sort expected) {
    if (is_formula_kind(r.kind)) fail(r, "expected a term but found a formula");
    bool inferred = r.kind == NodeKind::MetaVar || (r.kind == NodeKind::Const && *sig_.constant(r.name) == Sort::Any);
    switch (inferred ? NodeKind::MetaVar : r.kind) {
      case NodeKind::MetaVar: {
        if (expected == Sort::Any) return;
        auto [it, inserted] = sorts_.emplace(r.name, expected);
        if (inserted) {
          changed_ = true;
        } else if (it->second != expected) {
          fail(r, std::string("symbol used at sorts ") + sort_name(it->second) + " and " + sort_name(expected));
        }
        return;
      }
      case NodeKind::Cond: {
        check(r.kids[0], Sort::Bool);
        Sort s = expected != Sort::Any ? expected : synth(r);
        check_term(r.kids[1], s);
        check_term(r.kids[2], s);
        Sort a = synth(r.kids[1]), b = synth(r.kids[2]);
        if (a != Sort::Any && b != Sort::Any && a != b) fail(r, "conditional branches differ in sort");
        return;
      }
      case NodeKind::Apply: {
        const SymbolSig* f = sig_.function(r.name);
        for (std::size_t i = 0; i < r.kids.size(); ++i) check_term(r.kids[i], f->variadic ? f->args[0] : f->args[i]);
        break;
      }
      default: break;
    }
    Sort actual = synth(r);
    if (expected != Sort::Any && actual != Sort::Any && actual != expected) {
      fail(r, std::string("expected ") + sort_name(expected) + " but found " + sort_name(actual));
    }
  }

  [[noreturn]] void fail(const Raw& r, const std::string& what) const {
    throw Error(ErrorKind::SortError, what + " at " + raw_label(r) + " (position " + std::to_string(r.pos) + ")");
  }

  const Signature& sig_;
  std::map<std::string, Sort> sorts_;
  bool changed_ = false;
};

NodePtr build(const Raw& r, const SortInference& inf) {
  std::vector<NodePtr> kids;
  for (const auto& k : r.kids) kids.push_back(build(k, inf));
  switch (r.kind) {
    case NodeKind::True: return mk_true();
    case NodeKind::False: return mk_false();
    case NodeKind::Atom: return mk_atom(r.name, std::move(kids));
    case NodeKind::Not: return mk_not(kids[0]);
    case NodeKind::And: return mk_and(std::move(kids));
    case NodeKind::Or: return mk_or(std::move(kids));
    case NodeKind::Implies: return mk_implies(kids[0], kids[1]);
    case NodeKind::Iff: return mk_iff(kids[0], kids[1]);
    case NodeKind::Eq: return mk_eq(kids[0], kids[1]);
    case NodeKind::MetaVar: return mk_metavar(r.name, inf.synth(r));
    case NodeKind::Const: return mk_const(r.name, inf.synth(r));
    case NodeKind::Literal: return r.lit_sort == Sort::Expr ? mk_expr_lit(r.expr) : mk_subst_lit(r.subst);
    case NodeKind::Apply: return mk_apply(r.name, std::move(kids), inf.synth(r));
    case NodeKind::Cond: return mk_cond(kids[0], kids[1], kids[2]);
  }
  return mk_true();
}

NodePtr parse_with(std::string_view text, const Signature& sig, std::optional<bool> want_formula) {
  NodeReader reader(text, sig);
  Raw raw = reader.read();
  reader.finish();
  bool formula = is_formula_kind(raw.kind);
  if (want_formula && *want_formula != formula) {
    throw Error(ErrorKind::SortError, formula ? "expected a term but found a formula" : "expected a formula but found a term");
  }
  SortInference inf(sig);
  Sort top = formula ? Sort::Bool : Sort::Any;
  for (int round = 0; round < 16; ++round) {
    inf.reset();
    inf.check(raw, top);
    if (!inf.changed()) break;
  }
  return build(raw, inf);
}

}  // namespace

NodePtr parse_node(std::string_view text, const Signature& sig) { return parse_with(text, sig, std::nullopt); }

NodePtr parse_formula(std::string_view text, const Signature& sig) { return parse_with(text, sig, true); }

NodePtr parse_term(std::string_view text, const Signature& sig) { return parse_with(text, sig, false); }

std::string to_string(const MetaSubst& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : s) {
    if (!first) out += ", ";
    out += name + " -> " + to_string(value);
    first = false;
  }
  return out + "}";
}

NodePtr apply_subst(const NodePtr& n, const MetaSubst& s) {
  if (s.empty()) return n;
  if (n->kind == NodeKind::MetaVar) {
    auto it = s.find(n->name);
    return it == s.end() ? n : it->second;
  }
  if (n->kids.empty()) return n;
  std::vector<NodePtr> kids;
  kids.reserve(n->kids.size());
  bool changed = false;
  for (const auto& k : n->kids) {
    kids.push_back(apply_subst(k, s));
    changed = changed || kids.back() != k;
  }
  return changed ? with_kids(n, std::move(kids)) : n;
}

MetaSubst compose_meta(const MetaSubst& a, const MetaSubst& b) {
  MetaSubst out;
  for (const auto& [name, value] : a) {
    NodePtr v = apply_subst(value, b);
    if (!(v->kind == NodeKind::MetaVar && v->name == name)) out.emplace(name, v);
  }
  for (const auto& [name, value] : b) {
    if (!(value->kind == NodeKind::MetaVar && value->name == name)) out.emplace(name, value);
  }
  return out;
}

void collect_metavars(const NodePtr& n, std::set<std::string>& out) {
  if (n->kind == NodeKind::MetaVar) out.insert(n->name);
  for (const auto& k : n->kids) collect_metavars(k, out);
}

std::set<std::string> metavars_of(const NodePtr& n) {
  std::set<std::string> out;
  collect_metavars(n, out);
  return out;
}

bool occurs_metavar(const std::string& name, const NodePtr& n) {
  if (n->kind == NodeKind::MetaVar) return n->name == name;
  for (const auto& k : n->kids) {
    if (occurs_metavar(name, k)) return true;
  }
  return false;
}

namespace {

bool sorts_compatible(Sort a, Sort b) { return a == Sort::Any || b == Sort::Any || a == b; }

bool same_head(const NodePtr& a, const NodePtr& b) {
  if (a->kind != b->kind || a->name != b->name || a->kids.size() != b->kids.size()) return false;
  if (a->kind == NodeKind::Literal) return node_equal(a, b);
  return true;
}

}  // namespace

std::optional<MetaSubst> term_unify(const NodePtr& a, const NodePtr& b, MetaSubst start) {
  MetaSubst s = std::move(start);
  std::vector<std::pair<NodePtr, NodePtr>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    x = apply_subst(x, s);
    y = apply_subst(y, s);
    if (node_equal(x, y)) continue;
    bool bind_x = x->kind == NodeKind::MetaVar &&
                  (y->kind != NodeKind::MetaVar || x->sort == Sort::Any || y->sort != Sort::Any);
    if (bind_x || y->kind == NodeKind::MetaVar) {
      const NodePtr& var = bind_x ? x : y;
      const NodePtr& value = bind_x ? y : x;
      if (!sorts_compatible(var->sort, value->sort)) return std::nullopt;
      if (occurs_metavar(var->name, value)) return std::nullopt;
      s = compose_meta(s, MetaSubst{{var->name, value}});
      continue;
    }
    if (!same_head(x, y)) return std::nullopt;
    for (std::size_t i = x->kids.size(); i-- > 0;) work.emplace_back(x->kids[i], y->kids[i]);
  }
  return s;
}

namespace {

NodePtr negate(const NodePtr& s);

NodePtr and_of(const std::vector<NodePtr>& kids) {
  std::vector<NodePtr> flat;
  for (const auto& k : kids) {
    if (k->kind == NodeKind::False) return mk_false();
    if (k->kind == NodeKind::True) continue;
    const std::vector<NodePtr>& parts = k->kind == NodeKind::And ? k->kids : std::vector<NodePtr>{k};
    for (const auto& p : parts) {
      bool dup = false;
      for (const auto& f : flat) dup = dup || node_equal(f, p);
      if (!dup) flat.push_back(p);
    }
  }
  if (flat.empty()) return mk_true();
  if (flat.size() == 1) return flat[0];
  return mk_and(std::move(flat));
}

NodePtr or_of(const std::vector<NodePtr>& kids) {
  std::vector<NodePtr> flat;
  for (const auto& k : kids) {
    if (k->kind == NodeKind::True) return mk_true();
    if (k->kind == NodeKind::False) continue;
    const std::vector<NodePtr>& parts = k->kind == NodeKind::Or ? k->kids : std::vector<NodePtr>{k};
    for (const auto& p : parts) {
      bool dup = false;
      for (const auto& f : flat) dup = dup || node_equal(f, p);
      if (!dup) flat.push_back(p);
    }
  }
  if (flat.empty()) return mk_false();
  if (flat.size() == 1) return flat[0];
  return mk_or(std::move(flat));
}

NodePtr implies_of(const NodePtr& a, const NodePtr& b) {
  if (a->kind == NodeKind::True) return b;
  if (a->kind == NodeKind::False || b->kind == NodeKind::True) return mk_true();
  if (b->kind == NodeKind::False) return negate(a);
  return mk_implies(a, b);
}

NodePtr iff_of(const NodePtr& a, const NodePtr& b) {
  if (a->kind == NodeKind::True) return b;
  if (b->kind == NodeKind::True) return a;
  if (a->kind == NodeKind::False) return negate(b);
  if (b->kind == NodeKind::False) return negate(a);
  if (node_equal(a, b)) return mk_true();
  return mk_iff(a, b);
}

// Negation of an already simplified formula, pushed inward.
NodePtr negate(const NodePtr& s) {
  switch (s->kind) {
    case NodeKind::True: return mk_false();
    case NodeKind::False: return mk_true();
    case NodeKind::Not: return s->kids[0];
    case NodeKind::And: {
      std::vector<NodePtr> kids;
      for (const auto& k : s->kids) kids.push_back(negate(k));
      return or_of(kids);
    }
    case NodeKind::Or: {
      std::vector<NodePtr> kids;
      for (const auto& k : s->kids) kids.push_back(negate(k));
      return and_of(kids);
    }
    case NodeKind::Implies: return and_of({s->kids[0], negate(s->kids[1])});
    default: return mk_not(s);
  }
}

NodePtr simplify_kids(const NodePtr& n) {
  if (n->kids.empty()) return n;
  std::vector<NodePtr> kids;
  bool changed = false;
  for (const auto& k : n->kids) {
    kids.push_back(simplify(k));
    changed = changed || kids.back() != k;
  }
  return changed ? with_kids(n, std::move(kids)) : n;
}

// Rewrites conditionals whose test is `test` under the assumption that the
// test has the given value.
NodePtr assume_test(const NodePtr& t, const NodePtr& test, bool value) {
  if (t->kind == NodeKind::Cond && node_equal(t->kids[0], test)) return assume_test(t->kids[value ? 1 : 2], test, value);
  if (t->kind != NodeKind::Cond && t->kind != NodeKind::Apply) return t;
  std::vector<NodePtr> kids;
  bool changed = false;
  for (const auto& k : t->kids) {
    kids.push_back(k->is_formula() ? k : assume_test(k, test, value));
    changed = changed || kids.back() != k;
  }
  return changed ? with_kids(t, std::move(kids)) : t;
}

}  // namespace

NodePtr simplify(const NodePtr& n) {
  if (!n->is_formula()) return simplify_cond(n);
  switch (n->kind) {
    case NodeKind::True:
    case NodeKind::False: return n;
    case NodeKind::Atom:
    case NodeKind::Eq: return simplify_kids(n);
    case NodeKind::Not: return negate(simplify(n->kids[0]));
    case NodeKind::And: {
      std::vector<NodePtr> kids;
      for (const auto& k : n->kids) kids.push_back(simplify(k));
      return and_of(kids);
    }
    case NodeKind::Or: {
      std::vector<NodePtr> kids;
      for (const auto& k : n->kids) kids.push_back(simplify(k));
      return or_of(kids);
    }
    case NodeKind::Implies: return implies_of(simplify(n->kids[0]), simplify(n->kids[1]));
    case NodeKind::Iff: return iff_of(simplify(n->kids[0]), simplify(n->kids[1]));
    default: return n;
  }
}

NodePtr simplify_cond(const NodePtr& t) {
  if (t->is_formula()) return simplify(t);
  if (t->kind == NodeKind::Apply) return simplify_kids(t);
  if (t->kind != NodeKind::Cond) return t;
  NodePtr test = simplify(t->kids[0]);
  if (test->kind == NodeKind::True) return simplify_cond(t->kids[1]);
  if (test->kind == NodeKind::False) return simplify_cond(t->kids[2]);
  NodePtr a = simplify_cond(assume_test(t->kids[1], test, true));
  NodePtr b = simplify_cond(assume_test(t->kids[2], test, false));
  if (node_equal(a, b)) return a;
  return mk_cond(test, a, b);
}

NodePtr normalize(const NodePtr& f, bool implies_to_or) {
  NodePtr s = simplify(f);
  if (!implies_to_or) return s;
  std::function<NodePtr(const NodePtr&)> rewrite = [&](const NodePtr& n) -> NodePtr {
    switch (n->kind) {
      case NodeKind::Implies: return or_of({negate(rewrite(n->kids[0])), rewrite(n->kids[1])});
      case NodeKind::Not: return negate(rewrite(n->kids[0]));
      case NodeKind::And:
      case NodeKind::Or: {
        std::vector<NodePtr> kids;
        for (const auto& k : n->kids) kids.push_back(rewrite(k));
        return n->kind == NodeKind::And ? and_of(kids) : or_of(kids);
      }
      default: return n;
    }
  };
  return rewrite(s);
}

Path parse_path(std::string_view text) {
  Path p;
  if (text == "0") return p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string_view part = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    if (part.empty() || part.size() > 6 ||
        !std::all_of(part.begin(), part.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw Error(ErrorKind::BadPath, "malformed path '" + std::string(text) + "'");
    }
    std::size_t index = std::stoul(std::string(part));
    if (index == 0) throw Error(ErrorKind::BadPath, "path indices start at 1 in '" + std::string(text) + "'");
    p.push_back(index);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return p;
}

std::string to_string(const Path& p) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

NodePtr at_path(const NodePtr& n, const Path& p) {
  NodePtr cur = n;
  for (std::size_t step = 0; step < p.size(); ++step) {
    std::size_t i = p[step];
    if (i == 0 || i > cur->kids.size()) {
      throw Error(ErrorKind::BadPath, "path " + to_string(p) + " leaves " + to_string(n));
    }
    cur = cur->kids[i - 1];
  }
  return cur;
}

NodePtr replace_at(const NodePtr& n, const Path& p, const NodePtr& replacement) {
  std::function<NodePtr(const NodePtr&, std::size_t)> go = [&](const NodePtr& cur, std::size_t step) -> NodePtr {
    if (step == p.size()) return replacement;
    std::size_t i = p[step];
    if (i == 0 || i > cur->kids.size()) throw Error(ErrorKind::BadPath, "path " + to_string(p) + " leaves " + to_string(n));
    std::vector<NodePtr> kids = cur->kids;
    kids[i - 1] = go(kids[i - 1], step + 1);
    return with_kids(cur, std::move(kids));
  };
  return go(n, 0);
}

NodePtr replace_all(const NodePtr& n, const NodePtr& target, const NodePtr& replacement) {
  if (node_equal(n, target)) return replacement;
  if (n->kids.empty()) return n;
  std::vector<NodePtr> kids;
  bool changed = false;
  for (const auto& k : n->kids) {
    kids.push_back(replace_all(k, target, replacement));
    changed = changed || kids.back() != k;
  }
  return changed ? with_kids(n, std::move(kids)) : n;
}

std::size_t symbol_count(const NodePtr& n) {
  std::size_t count = 1;
  for (const auto& k : n->kids) count += symbol_count(k);
  return count;
}

unsigned polarity_at(const NodePtr& f, const Path& p, unsigned start) {
  auto flip = [](unsigned pol) { return ((pol & PolPos) ? PolNeg : 0u) | ((pol & PolNeg) ? PolPos : 0u); };
  unsigned pol = start;
  NodePtr cur = f;
  for (std::size_t step = 0; step < p.size(); ++step) {
    std::size_t i = p[step];
    if (i == 0 || i > cur->kids.size()) throw Error(ErrorKind::BadPath, "path " + to_string(p) + " leaves " + to_string(f));
    switch (cur->kind) {
      case NodeKind::Not: pol = flip(pol); break;
      case NodeKind::Implies:
        if (i == 1) pol = flip(pol);
        break;
      case NodeKind::Iff: pol = pol ? PolBoth : PolNone; break;
      case NodeKind::Cond:
        if (i == 1) pol = pol ? PolBoth : PolNone;
        break;
      default: break;
    }
    cur = cur->kids[i - 1];
  }
  return pol;
}

}  // namespace dps
