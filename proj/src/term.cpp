#include "dps/term.hpp"

#include <cctype>
#include <functional>
#include <ostream>

#include "dps/error.hpp"

namespace dps {

struct Expr::Node {
  ExprKind kind;
  std::string name;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
  std::size_t size;
  std::size_t hash;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::string& empty_name() {
  static const std::string empty;
  return empty;
}

}  // namespace

Expr::Expr() : Expr(nil()) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(std::string name) {
  std::size_t h = mix(1, std::hash<std::string>{}(name));
  return Expr(std::make_shared<const Node>(Node{ExprKind::Const, std::move(name), nullptr, nullptr, 1, h}));
}

Expr Expr::var(std::string name) {
  std::size_t h = mix(2, std::hash<std::string>{}(name));
  return Expr(std::make_shared<const Node>(Node{ExprKind::Var, std::move(name), nullptr, nullptr, 0, h}));
}

Expr Expr::cons(Expr left, Expr right) {
  std::size_t size = 1 + left.node_->size + right.node_->size;
  std::size_t h = mix(mix(3, left.node_->hash), right.node_->hash);
  return Expr(std::make_shared<const Node>(
      Node{ExprKind::Cons, std::string(), std::move(left.node_), std::move(right.node_), size, h}));
}

Expr Expr::nil() {
  static const Expr value = constant("nil");
  return value;
}

Expr Expr::black_hole() {
  static const Expr value = constant("*");
  return value;
}

ExprKind Expr::kind() const { return node_->kind; }

const std::string& Expr::name() const { return node_->kind == ExprKind::Cons ? empty_name() : node_->name; }

Expr Expr::left() const {
  if (node_->kind != ExprKind::Cons) throw Error(ErrorKind::AtomicExpression, "left of atom " + to_string(*this));
  return Expr(node_->left);
}

Expr Expr::right() const {
  if (node_->kind != ExprKind::Cons) throw Error(ErrorKind::AtomicExpression, "right of atom " + to_string(*this));
  return Expr(node_->right);
}

std::size_t Expr::size() const { return node_->size; }

std::size_t Expr::hash() const { return node_->hash; }

bool Expr::operator==(const Expr& other) const {
  const Node* a = node_.get();
  const Node* b = other.node_.get();
  while (true) {
    if (a == b) return true;
    if (a->hash != b->hash || a->kind != b->kind || a->size != b->size) return false;
    if (a->kind != ExprKind::Cons) return a->name == b->name;
    if (!(Expr(a->left) == Expr(b->left))) return false;
    a = a->right.get();
    b = b->right.get();
  }
}

bool Expr::operator<(const Expr& other) const {
  if (node_ == other.node_) return false;
  if (kind() != other.kind()) return static_cast<int>(kind()) < static_cast<int>(other.kind());
  if (kind() != ExprKind::Cons) return name() < other.name();
  Expr l = left(), ol = other.left();
  if (l != ol) return l < ol;
  return right() < other.right();
}

bool is_identifier(std::string_view text) {
  if (text == "*") return true;
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text[0]))) return false;
  for (char c : text) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '#') return false;
  }
  return true;
}

bool is_variable_name(std::string_view text) {
  return is_identifier(text) && std::isupper(static_cast<unsigned char>(text[0]));
}

namespace {

class ExprReader {
 public:
  ExprReader(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  Expr read() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<Expr> items;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated list");
        char d = text_[pos_];
        if (d == ')') {
          ++pos_;
          if (items.empty()) fail("empty list");
          Expr out = Expr::nil();
          for (auto it = items.rbegin(); it != items.rend(); ++it) out = Expr::cons(*it, out);
          return out;
        }
        if (d == '.' && at_dot()) {
          if (items.size() != 1) fail("dotted pair needs exactly one expression before '.'");
          ++pos_;
          Expr rest = read();
          skip_space();
          if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')' after dotted pair");
          ++pos_;
          return Expr::cons(items.front(), rest);
        }
        items.push_back(read());
      }
    }
    if (c == ')') fail("unexpected ')'");
    std::size_t start = pos_;
    if (c == '*') {
      ++pos_;
      return Expr::black_hole();
    }
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    std::string_view word = text_.substr(start, pos_ - start);
    if (word.empty() || !is_identifier(word)) {
      pos_ = start;
      fail("invalid atom");
    }
    if (is_variable_name(word)) return Expr::var(std::string(word));
    return Expr::constant(std::string(word));
  }

  std::size_t pos() const { return pos_; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

 private:
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#';
  }

  bool at_dot() const {
    std::size_t next = pos_ + 1;
    return next >= text_.size() || !is_ident_char(text_[next]);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Syntax, what + " at position " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_;
};

void print_to(const Expr& e, std::string& out) {
  if (e.is_atom()) {
    out += e.name();
    return;
  }
  out += '(';
  print_to(e.left(), out);
  out += " . ";
  print_to(e.right(), out);
  out += ')';
}

}  // namespace

Expr parse_expr_prefix(std::string_view text, std::size_t& pos) {
  ExprReader reader(text, pos);
  Expr e = reader.read();
  pos = reader.pos();
  return e;
}

Expr parse_expr(std::string_view text) {
  ExprReader reader(text, 0);
  Expr e = reader.read();
  reader.skip_space();
  if (reader.pos() != text.size()) {
    throw Error(ErrorKind::Syntax, "trailing input at position " + std::to_string(reader.pos()));
  }
  return e;
}

std::string to_string(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

std::pair<Expr, Expr> destructure(const Expr& e) { return {e.left(), e.right()}; }

ExprKind classify(const Expr& e) { return e.kind(); }

const char* kind_name(ExprKind kind) {
  switch (kind) {
    case ExprKind::Const: return "const";
    case ExprKind::Var: return "var";
    case ExprKind::Cons: return "cons";
  }
  return "?";
}

std::size_t size_of(const Expr& e) { return e.size(); }

void collect_vars(const Expr& e, VarSet& out) {
  if (e.is_var()) {
    out.insert(e.name());
  } else if (e.is_cons()) {
    collect_vars(e.left(), out);
    collect_vars(e.right(), out);
  }
}

VarSet vars_of(const Expr& e) {
  VarSet out;
  collect_vars(e, out);
  return out;
}

std::vector<std::string> vars_in_order(const Expr& e) {
  std::vector<std::string> order;
  VarSet seen;
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (x.is_var()) {
      if (seen.insert(x.name()).second) order.push_back(x.name());
    } else if (x.is_cons()) {
      walk(x.left());
      walk(x.right());
    }
  };
  walk(e);
  return order;
}

bool occurs_in(const Expr& d, const Expr& e, Occurrence mode) {
  if (mode == Occurrence::Reflexive && d == e) return true;
  if (e.is_atom() || d.size() >= e.size()) return false;
  Expr l = e.left(), r = e.right();
  return l == d || r == d || occurs_in(d, l, Occurrence::Proper) || occurs_in(d, r, Occurrence::Proper);
}

Expr encode_tuple(const std::vector<Expr>& items) {
  Expr out = Expr::nil();
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = Expr::cons(*it, out);
  return out;
}

std::vector<Expr> decode_tuple(const Expr& e) {
  std::vector<Expr> items;
  Expr cur = e;
  while (cur.is_cons()) {
    items.push_back(cur.left());
    cur = cur.right();
  }
  if (cur != Expr::nil()) {
    throw Error(ErrorKind::NotATuple, "right spine of " + to_string(e) + " ends in " + to_string(cur));
  }
  return items;
}

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

bool is_subset(const VarSet& a, const VarSet& b) {
  for (const auto& x : a) {
    if (!b.count(x)) return false;
  }
  return true;
}

std::vector<Expr> expressions_up_to(const std::vector<Expr>& atoms, std::size_t max_size) {
  // by_conses[k] holds every expression with exactly k cons cells.
  std::vector<std::vector<Expr>> by_conses{atoms};
  for (std::size_t k = 1; k <= max_size; ++k) {
    std::vector<Expr> level;
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& l : by_conses[i]) {
        for (const auto& r : by_conses[k - 1 - i]) {
          Expr e = Expr::cons(l, r);
          if (e.size() <= max_size) level.push_back(e);
        }
      }
    }
    by_conses.push_back(level);
  }
  std::vector<Expr> out;
  for (const auto& level : by_conses) {
    for (const auto& e : level) {
      if (e.size() <= max_size) out.push_back(e);
    }
  }
  return out;
}

bool is_proper_subset(const VarSet& a, const VarSet& b) { return a.size() < b.size() && is_subset(a, b); }

std::string to_string(const VarSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& x : s) {
    if (!first) out += ", ";
    out += x;
    first = false;
  }
  return out + "}";
}

std::string base_name(std::string_view name) {
  auto hash = name.find('#');
  return std::string(hash == std::string_view::npos ? name : name.substr(0, hash));
}

std::string FreshSupply::fresh(std::string_view base) {
  return base_name(base) + "#" + std::to_string(next_++);
}

FreshSupply& global_fresh_supply() {
  static FreshSupply supply;
  return supply;
}

}  // namespace dps
