#include "dps/subst.hpp"

#include <cctype>
#include <ostream>

#include "dps/error.hpp"

namespace dps {

Subst Subst::failure() {
  Subst s;
  s.proper_ = false;
  return s;
}

Subst Subst::make(const std::vector<std::pair<std::string, Expr>>& pairs) {
  Bindings bindings;
  for (const auto& [var, image] : pairs) {
    if (!is_variable_name(var)) throw Error(ErrorKind::Syntax, "not a variable: " + var);
    if (!bindings.emplace(var, image).second) throw Error(ErrorKind::DuplicateVariable, "variable bound twice: " + var);
  }
  return from_map(std::move(bindings));
}

Subst Subst::from_map(Bindings bindings) {
  for (auto it = bindings.begin(); it != bindings.end();) {
    if (it->second.is_var() && it->second.name() == it->first) {
      it = bindings.erase(it);
    } else {
      ++it;
    }
  }
  Subst s;
  s.bindings_ = std::move(bindings);
  return s;
}

Expr Subst::lookup(const std::string& var) const {
  if (!proper_) return Expr::black_hole();
  auto it = bindings_.find(var);
  return it == bindings_.end() ? Expr::var(var) : it->second;
}

bool Subst::operator<(const Subst& other) const {
  if (proper_ != other.proper_) return !proper_;
  return bindings_ < other.bindings_;
}

Expr apply(const Expr& e, const Subst& s) {
  if (s.is_failure()) return Expr::black_hole();
  if (s.is_empty()) return e;
  switch (e.kind()) {
    case ExprKind::Const: return e;
    case ExprKind::Var: {
      auto it = s.bindings().find(e.name());
      return it == s.bindings().end() ? e : it->second;
    }
    case ExprKind::Cons: {
      Expr l = e.left(), r = e.right();
      Expr nl = apply(l, s), nr = apply(r, s);
      if (nl == l && nr == r) return e;
      return Expr::cons(nl, nr);
    }
  }
  return e;
}

Subst compose(const Subst& s1, const Subst& s2) {
  if (s1.is_failure() || s2.is_failure()) return Subst::failure();
  Subst::Bindings out;
  for (const auto& [var, image] : s1.bindings()) out.emplace(var, apply(image, s2));
  for (const auto& [var, image] : s2.bindings()) out.emplace(var, image);
  return Subst::from_map(std::move(out));
}

Subst add(const Subst& s1, const Subst& s2) {
  if (s1.is_failure() || s2.is_failure()) throw Error(ErrorKind::ImproperOperand, "addition of bot");
  Subst::Bindings out = s1.bindings();
  for (const auto& [var, image] : s2.bindings()) out.emplace(var, image);
  return Subst::from_map(std::move(out));
}

Subst replacement(const std::string& var, const Expr& e) { return Subst::make({{var, e}}); }

Support support(const Subst& s) {
  Support out;
  for (const auto& [var, image] : s.bindings()) {
    out.dom.insert(var);
    collect_vars(image, out.range);
  }
  out.vars = set_union(out.dom, out.range);
  return out;
}

VarSet dom_of(const Subst& s) { return support(s).dom; }

VarSet range_of(const Subst& s) { return support(s).range; }

bool misses(const Subst& s, const Expr& e) { return apply(e, s) == e; }

bool is_idempotent(const Subst& s) {
  if (s.is_failure()) return true;
  Support sup = support(s);
  for (const auto& x : sup.dom) {
    if (sup.range.count(x)) return false;
  }
  return true;
}

bool more_general(const Subst& s1, const Subst& s2) { return compose(s1, s2) == s2; }

bool match_expr(const Expr& pattern, const Expr& target, Subst::Bindings& delta) {
  switch (pattern.kind()) {
    case ExprKind::Const: return pattern == target;
    case ExprKind::Var: {
      auto [it, inserted] = delta.emplace(pattern.name(), target);
      return inserted || it->second == target;
    }
    case ExprKind::Cons:
      return target.is_cons() && match_expr(pattern.left(), target.left(), delta) &&
             match_expr(pattern.right(), target.right(), delta);
  }
  return false;
}

std::optional<Subst> weakly_more_general(const Subst& s1, const Subst& s2) {
  if (s2.is_failure()) return Subst::failure();
  if (s1.is_failure()) return std::nullopt;
  Support a = support(s1), b = support(s2);
  VarSet relevant = set_union(set_union(a.dom, b.dom), a.range);
  Subst::Bindings delta;
  for (const auto& x : relevant) {
    if (!match_expr(s1.lookup(x), s2.lookup(x), delta)) return std::nullopt;
  }
  Subst witness = Subst::from_map(std::move(delta));
  if (compose(s1, witness) != s2) return std::nullopt;
  return witness;
}

Renaming standardize_apart(const Expr& e1, const Expr& e2, FreshSupply& supply) {
  VarSet taken = vars_of(e1);
  collect_vars(e2, taken);
  Subst::Bindings perm;
  for (const auto& v : vars_in_order(e2)) {
    std::string name;
    do {
      name = supply.fresh(v);
    } while (taken.count(name));
    taken.insert(name);
    perm.emplace(v, Expr::var(name));
  }
  Subst permutation = Subst::from_map(std::move(perm));
  return {apply(e2, permutation), permutation};
}

Renaming standardize_apart(const Expr& e1, const Expr& e2) {
  return standardize_apart(e1, e2, global_fresh_supply());
}

Subst complete_permutation(const Subst& renaming) {
  Subst::Bindings out = renaming.bindings();
  for (const auto& [var, image] : renaming.bindings()) {
    if (!image.is_var()) throw Error(ErrorKind::NotAPermutation, to_string(renaming) + " is not a renaming");
    out.emplace(image.name(), Expr::var(var));
  }
  return Subst::from_map(std::move(out));
}

bool is_permutation(const Subst& s) {
  if (s.is_failure()) return false;
  VarSet images;
  for (const auto& [var, image] : s.bindings()) {
    if (!image.is_var() || !images.insert(image.name()).second) return false;
  }
  return images == dom_of(s);
}

Subst permutation_inverse(const Subst& s) {
  if (!is_permutation(s)) throw Error(ErrorKind::NotAPermutation, to_string(s) + " is not a permutation");
  Subst::Bindings inv;
  for (const auto& [var, image] : s.bindings()) inv.emplace(image.name(), Expr::var(var));
  return Subst::from_map(std::move(inv));
}

namespace {

void skip_space(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

[[noreturn]] void subst_syntax(const std::string& what, std::size_t pos) {
  throw Error(ErrorKind::Syntax, what + " at position " + std::to_string(pos));
}

}  // namespace

Subst parse_subst(std::string_view text) {
  std::size_t pos = 0;
  skip_space(text, pos);
  if (text.substr(pos, 3) == "bot") {
    pos += 3;
    skip_space(text, pos);
    if (pos != text.size()) subst_syntax("trailing input", pos);
    return Subst::failure();
  }
  if (pos >= text.size() || text[pos] != '{') subst_syntax("expected '{' or bot", pos);
  ++pos;
  std::vector<std::pair<std::string, Expr>> pairs;
  skip_space(text, pos);
  if (pos < text.size() && text[pos] == '}') {
    ++pos;
  } else {
    while (true) {
      skip_space(text, pos);
      std::size_t start = pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                                   text[pos] == '#')) {
        ++pos;
      }
      std::string var(text.substr(start, pos - start));
      if (!is_variable_name(var)) subst_syntax("expected variable", start);
      skip_space(text, pos);
      if (text.substr(pos, 2) != "->") subst_syntax("expected '->'", pos);
      pos += 2;
      Expr image = parse_expr_prefix(text, pos);
      pairs.emplace_back(var, image);
      skip_space(text, pos);
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == '}') {
        ++pos;
        break;
      }
      subst_syntax("expected ',' or '}'", pos);
    }
  }
  skip_space(text, pos);
  if (pos != text.size()) subst_syntax("trailing input", pos);
  return Subst::make(pairs);
}

std::string to_string(const Subst& s) {
  if (s.is_failure()) return "bot";
  std::string out = "{";
  bool first = true;
  for (const auto& [var, image] : s.bindings()) {
    if (!first) out += ", ";
    out += var + " -> " + to_string(image);
    first = false;
  }
  return out + "}";
}

std::ostream& operator<<(std::ostream& os, const Subst& s) { return os << to_string(s); }

}  // namespace dps
