#include "dps/wf.hpp"

#include <algorithm>
#include <cctype>

#include "dps/error.hpp"

namespace dps {

WfValue WfValue::of_expr(Expr e) {
  WfValue v;
  v.kind = WfKind::Expr;
  v.expr = std::move(e);
  return v;
}

WfValue WfValue::of_set(VarSet s) {
  WfValue v;
  v.kind = WfKind::Set;
  v.set = std::move(s);
  return v;
}

WfValue WfValue::of_nat(std::size_t n) {
  WfValue v;
  v.kind = WfKind::Nat;
  v.nat = n;
  return v;
}

WfValue WfValue::of_subst(Subst s) {
  WfValue v;
  v.kind = WfKind::Subst;
  v.subst = std::move(s);
  return v;
}

WfValue WfValue::pair(WfValue a, WfValue b) {
  WfValue v;
  v.kind = WfKind::Tuple;
  v.items = {std::move(a), std::move(b)};
  return v;
}

WfValue WfValue::triple(const Subst& env, const Expr& e1, const Expr& e2) {
  WfValue v;
  v.kind = WfKind::Tuple;
  v.items = {of_subst(env), of_expr(e1), of_expr(e2)};
  return v;
}

bool WfValue::operator==(const WfValue& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case WfKind::Expr: return expr == other.expr;
    case WfKind::Set: return set == other.set;
    case WfKind::Nat: return nat == other.nat;
    case WfKind::Subst: return subst == other.subst;
    case WfKind::Tuple: return items == other.items;
  }
  return false;
}

std::string to_string(const WfValue& v) {
  switch (v.kind) {
    case WfKind::Expr: return to_string(v.expr);
    case WfKind::Set: return to_string(v.set);
    case WfKind::Nat: return std::to_string(v.nat);
    case WfKind::Subst: return to_string(v.subst);
    case WfKind::Tuple: {
      std::string out = "<";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v.items[i]);
      }
      return out + ">";
    }
  }
  return "?";
}

RelPtr RelSpec::make_base(BaseRel base) {
  auto r = std::make_shared<RelSpec>();
  r->kind = Kind::Base;
  r->base = base;
  return r;
}

RelPtr RelSpec::induced(Projection projection, RelPtr child, std::size_t component) {
  auto r = std::make_shared<RelSpec>();
  r->kind = Kind::InducedBy;
  r->projection = projection;
  r->component = component;
  r->children = {std::move(child)};
  return r;
}

RelPtr RelSpec::lex(std::vector<RelPtr> children) {
  if (children.size() < 2) throw Error(ErrorKind::SortMismatch, "lex needs at least two relations");
  auto r = std::make_shared<RelSpec>();
  r->kind = Kind::Lex;
  r->children = std::move(children);
  return r;
}

RelPtr RelSpec::refl(RelPtr child) {
  auto r = std::make_shared<RelSpec>();
  r->kind = Kind::Refl;
  r->children = {std::move(child)};
  return r;
}

namespace {

[[noreturn]] void mismatch(const std::string& what, const WfValue& v) {
  throw Error(ErrorKind::SortMismatch, what + " cannot take " + to_string(v));
}

const char* projection_name(Projection p) {
  switch (p) {
    case Projection::First: return "first";
    case Projection::Vars: return "vars";
    case Projection::Size: return "size";
    case Projection::Range: return "range";
    case Projection::RangeVars: return "range-vars";
    case Projection::VarsSize: return "vars-size";
    case Projection::Component: return "component";
  }
  return "?";
}

const char* base_name_of(BaseRel b) {
  switch (b) {
    case BaseRel::SizeLt: return "size-lt";
    case BaseRel::VarsSubset: return "vars-subset";
    case BaseRel::SubsetIntLex: return "subset-int-lex";
  }
  return "?";
}

bool is_triple(const WfValue& v) {
  return v.kind == WfKind::Tuple && v.items.size() == 3 && v.items[0].kind == WfKind::Subst &&
         v.items[1].kind == WfKind::Expr && v.items[2].kind == WfKind::Expr;
}

VarSet pair_vars(const WfValue& t) { return vars_of(encode_tuple({t.items[1].expr, t.items[2].expr})); }

std::size_t nat_key(const WfValue& v) {
  if (v.kind == WfKind::Nat) return v.nat;
  if (v.kind == WfKind::Expr) return v.expr.size();
  mismatch("size-lt", v);
}

VarSet set_key(const WfValue& v) {
  if (v.kind == WfKind::Set) return v.set;
  if (v.kind == WfKind::Expr) return vars_of(v.expr);
  mismatch("vars-subset", v);
}

std::pair<VarSet, std::size_t> set_nat_key(const WfValue& v) {
  if (v.kind == WfKind::Tuple && v.items.size() == 2 && v.items[0].kind == WfKind::Set &&
      v.items[1].kind == WfKind::Nat) {
    return {v.items[0].set, v.items[1].nat};
  }
  if (v.kind == WfKind::Expr) return {vars_of(v.expr), v.expr.size()};
  mismatch("subset-int-lex", v);
}

bool base_less(BaseRel base, const WfValue& a, const WfValue& b) {
  switch (base) {
    case BaseRel::SizeLt: return nat_key(a) < nat_key(b);
    case BaseRel::VarsSubset: return is_proper_subset(set_key(a), set_key(b));
    case BaseRel::SubsetIntLex: {
      auto [sa, na] = set_nat_key(a);
      auto [sb, nb] = set_nat_key(b);
      return is_proper_subset(sa, sb) || (is_subset(sa, sb) && na < nb);
    }
  }
  return false;
}

bool base_key_equal(BaseRel base, const WfValue& a, const WfValue& b) {
  switch (base) {
    case BaseRel::SizeLt: return nat_key(a) == nat_key(b);
    case BaseRel::VarsSubset: return set_key(a) == set_key(b);
    case BaseRel::SubsetIntLex: return set_nat_key(a) == set_nat_key(b);
  }
  return false;
}

bool less_impl(const RelSpec& spec, const WfValue& a, const WfValue& b, bool plain);

bool lex_from(const RelSpec& spec, std::size_t i, const WfValue& a, const WfValue& b, bool plain) {
  const RelSpec& child = *spec.children[i];
  if (i + 1 == spec.children.size()) return less_impl(child, a, b, plain);
  if (less_impl(child, a, b, plain)) return true;
  bool weak = plain ? rel_key_equal(child, a, b) : rel_leq(child, a, b);
  return weak && lex_from(spec, i + 1, a, b, plain);
}

bool less_impl(const RelSpec& spec, const WfValue& a, const WfValue& b, bool plain) {
  switch (spec.kind) {
    case RelSpec::Kind::Base: return base_less(spec.base, a, b);
    case RelSpec::Kind::InducedBy:
      return less_impl(*spec.children[0], project(spec.projection, spec.component, a),
                       project(spec.projection, spec.component, b), plain);
    case RelSpec::Kind::Lex: return lex_from(spec, 0, a, b, plain);
    case RelSpec::Kind::Refl: return rel_leq(*spec.children[0], a, b);
  }
  return false;
}

}  // namespace

WfValue project(Projection projection, std::size_t component, const WfValue& v) {
  switch (projection) {
    case Projection::First:
      if (v.kind == WfKind::Tuple && !v.items.empty()) return v.items[0];
      break;
    case Projection::Component:
      if (v.kind == WfKind::Tuple && component >= 1 && component <= v.items.size()) return v.items[component - 1];
      break;
    case Projection::Vars:
      if (v.kind == WfKind::Expr) return WfValue::of_set(vars_of(v.expr));
      if (is_triple(v)) return WfValue::of_set(pair_vars(v));
      break;
    case Projection::Size:
      if (v.kind == WfKind::Expr) return WfValue::of_nat(v.expr.size());
      break;
    case Projection::Range:
      if (v.kind == WfKind::Subst) return WfValue::of_set(range_of(v.subst));
      if (is_triple(v)) return WfValue::of_set(range_of(v.items[0].subst));
      break;
    case Projection::RangeVars:
      if (is_triple(v)) return WfValue::of_set(set_union(range_of(v.items[0].subst), pair_vars(v)));
      break;
    case Projection::VarsSize:
      if (v.kind == WfKind::Expr) return WfValue::pair(WfValue::of_set(vars_of(v.expr)), WfValue::of_nat(v.expr.size()));
      break;
  }
  mismatch(std::string("projection ") + projection_name(projection), v);
}

bool rel_less(const RelSpec& spec, const WfValue& a, const WfValue& b) { return less_impl(spec, a, b, false); }

bool rel_less_plain(const RelSpec& spec, const WfValue& a, const WfValue& b) { return less_impl(spec, a, b, true); }

bool rel_key_equal(const RelSpec& spec, const WfValue& a, const WfValue& b) {
  switch (spec.kind) {
    case RelSpec::Kind::Base: return base_key_equal(spec.base, a, b);
    case RelSpec::Kind::InducedBy:
      return rel_key_equal(*spec.children[0], project(spec.projection, spec.component, a),
                           project(spec.projection, spec.component, b));
    case RelSpec::Kind::Lex:
      for (const auto& child : spec.children) {
        if (!rel_key_equal(*child, a, b)) return false;
      }
      return true;
    case RelSpec::Kind::Refl: return rel_key_equal(*spec.children[0], a, b);
  }
  return false;
}

bool rel_leq(const RelSpec& spec, const WfValue& a, const WfValue& b) {
  return rel_less(spec, a, b) || rel_key_equal(spec, a, b);
}

VarSet range_vars(const InputTriple& t) {
  return set_union(range_of(t.env), vars_of(encode_tuple({t.e1, t.e2})));
}

bool u_less(const InputTriple& t1, const InputTriple& t2) {
  VarSet a = range_vars(t1), b = range_vars(t2);
  if (is_proper_subset(a, b)) return true;
  return is_subset(a, b) && t1.e1.size() < t2.e1.size();
}

RelPtr u_relation() {
  static const RelPtr rel = parse_relspec("(lex (range-vars) (size-first))");
  return rel;
}

StrictnessReport strictness_probe(const RelSpec& spec, const std::vector<std::pair<WfValue, WfValue>>& samples) {
  StrictnessReport report;
  for (const auto& [a, b] : samples) {
    ++report.pairs_checked;
    if (rel_less(spec, a, a)) ++report.reflexive_violations;
    if (rel_less(spec, b, b)) ++report.reflexive_violations;
    if (rel_less(spec, a, b) && rel_less(spec, b, a)) ++report.antisymmetry_violations;
  }
  return report;
}

namespace {

class RelReader {
 public:
  explicit RelReader(std::string_view text) : text_(text) {}

  RelPtr read_rel() {
    expect('(');
    std::string head = word();
    RelPtr out;
    if (head == "size-lt") {
      out = RelSpec::make_base(BaseRel::SizeLt);
    } else if (head == "vars-subset") {
      out = RelSpec::make_base(BaseRel::VarsSubset);
    } else if (head == "subset-int-lex") {
      out = RelSpec::make_base(BaseRel::SubsetIntLex);
    } else if (head == "range-vars") {
      out = RelSpec::induced(Projection::RangeVars, RelSpec::make_base(BaseRel::VarsSubset));
    } else if (head == "size-first") {
      out = RelSpec::induced(Projection::Component, RelSpec::make_base(BaseRel::SizeLt), 2);
    } else if (head == "induced") {
      std::size_t component = 0;
      Projection p = read_projection(component);
      out = RelSpec::induced(p, read_rel(), component);
    } else if (head == "lex") {
      std::vector<RelPtr> children;
      while (peek() == '(') children.push_back(read_rel());
      if (children.size() < 2) fail("lex needs at least two relations");
      out = RelSpec::lex(std::move(children));
    } else if (head == "refl") {
      out = RelSpec::refl(read_rel());
    } else {
      fail("unknown relation '" + head + "'");
    }
    expect(')');
    return out;
  }

  void finish() {
    if (peek() != '\0') fail("trailing input");
  }

 private:
  Projection read_projection(std::size_t& component) {
    if (peek() == '(') {
      expect('(');
      if (word() != "component") fail("expected component");
      std::string n = word();
      if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        fail("expected component index");
      }
      component = std::stoul(n);
      if (component == 0) fail("component indices start at 1");
      expect(')');
      return Projection::Component;
    }
    std::string name = word();
    if (name == "first") return Projection::First;
    if (name == "vars") return Projection::Vars;
    if (name == "size") return Projection::Size;
    if (name == "range") return Projection::Range;
    if (name == "range-vars") return Projection::RangeVars;
    if (name == "vars-size") return Projection::VarsSize;
    fail("unknown projection '" + name + "'");
  }

  char peek() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
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

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::Syntax, "relation: " + what + " at position " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RelPtr parse_relspec(std::string_view text) {
  RelReader reader(text);
  RelPtr out = reader.read_rel();
  reader.finish();
  return out;
}

std::string to_string(const RelSpec& spec) {
  switch (spec.kind) {
    case RelSpec::Kind::Base: return std::string("(") + base_name_of(spec.base) + ")";
    case RelSpec::Kind::InducedBy: {
      std::string p = spec.projection == Projection::Component ? "(component " + std::to_string(spec.component) + ")"
                                                               : projection_name(spec.projection);
      return "(induced " + p + " " + to_string(*spec.children[0]) + ")";
    }
    case RelSpec::Kind::Lex: {
      std::string out = "(lex";
      for (const auto& c : spec.children) out += " " + to_string(*c);
      return out + ")";
    }
    case RelSpec::Kind::Refl: return "(refl " + to_string(*spec.children[0]) + ")";
  }
  return "?";
}

RelationRegistry::RelationRegistry() { relations_.emplace("u-rel", u_relation()); }

void RelationRegistry::add(const std::string& name, RelPtr spec) { relations_[name] = std::move(spec); }

RelPtr RelationRegistry::get(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw Error(ErrorKind::UnknownRelation, "unknown relation " + name);
  return it->second;
}

}  // namespace dps
