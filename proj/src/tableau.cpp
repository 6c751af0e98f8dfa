#include "dps/tableau.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dps/error.hpp"

namespace dps {

Theory::Theory() { signature.add_constant("u-rel", Sort::Rel); }

const Lemma& Theory::lemma(const std::string& name) const {
  for (const auto& l : lemmas) {
    if (l.name == name) return l;
  }
  throw Error(ErrorKind::UnknownLemma, "no lemma named " + name);
}

const Spec& Theory::spec(const std::string& name) const {
  for (const auto& s : specs) {
    if (s.name == name) return s;
  }
  throw Error(ErrorKind::IllFormedSpec, "no spec named " + name);
}

void Theory::add_relation(const std::string& name, RelPtr rel) {
  relations.add(name, std::move(rel));
  signature.add_constant(name, Sort::Rel);
}

namespace {

void find_metavar_sorts(const NodePtr& n, std::map<std::string, Sort>& out) {
  if (n->kind == NodeKind::MetaVar) out.emplace(n->name, n->sort);
  for (const auto& k : n->kids) find_metavar_sorts(k, out);
}

}  // namespace

void Theory::add_spec(Spec spec) {
  std::map<std::string, Sort> mvs;
  find_metavar_sorts(spec.condition, mvs);
  for (const auto& [name, sort] : mvs) {
    if (!spec.output || name != *spec.output) {
      throw Error(ErrorKind::IllFormedSpec, "spec " + spec.name + " mentions metavariable " + name + " besides its output");
    }
  }
  if (spec.output) {
    auto it = mvs.find(*spec.output);
    if (it == mvs.end()) throw Error(ErrorKind::IllFormedSpec, "spec " + spec.name + " never mentions its output");
    spec.output_sort = it->second;
    std::vector<Sort> arg_sorts;
    for (const auto& p : spec.params) arg_sorts.push_back(p.second);
    signature.add_function(spec.name, {arg_sorts, spec.output_sort});
  }
  for (const auto& [name, sort] : spec.params) signature.add_constant(name, sort);
  specs.push_back(std::move(spec));
}

void Theory::add_lemma(const std::string& name, std::string_view formula_text) {
  for (const auto& l : lemmas) {
    if (l.name == name) throw Error(ErrorKind::Syntax, "lemma " + name + " defined twice");
  }
  lemmas.push_back({name, parse_formula(formula_text, signature)});
}

namespace {

struct Entry {
  std::size_t line = 0;
  std::string text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<Entry> theory_entries(std::string_view text) {
  std::vector<Entry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto semi = line.find(';'); semi != std::string::npos) line.erase(semi);
    std::string_view body = trim(line);
    if (body.empty()) continue;
    bool continuation = std::isspace(static_cast<unsigned char>(line[0]));
    if (continuation && !entries.empty()) {
      entries.back().text += " ";
      entries.back().text += body;
    } else {
      entries.push_back({number, std::string(body)});
    }
  }
  return entries;
}

std::string next_word(std::string_view& s) {
  s = trim(s);
  std::size_t end = 0;
  while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end])) && s[end] != '(') ++end;
  std::string word(s.substr(0, end));
  s.remove_prefix(end);
  return word;
}

[[noreturn]] void theory_error(const Entry& e, const std::string& what) {
  throw Error(ErrorKind::Syntax, "theory line " + std::to_string(e.line) + ": " + what);
}

Spec parse_spec_entry(const Entry& e, std::string_view rest, Signature& sig) {
  Spec spec;
  spec.name = next_word(rest);
  if (spec.name.empty()) theory_error(e, "spec needs a name");
  rest = trim(rest);
  if (rest.empty() || rest.front() != '(') theory_error(e, "spec needs a parameter list");
  std::size_t close = rest.find(')');
  if (close == std::string_view::npos) theory_error(e, "unterminated parameter list");
  std::string_view params = rest.substr(1, close - 1);
  rest.remove_prefix(close + 1);
  while (!trim(params).empty()) {
    std::string param = next_word(params);
    auto colon = param.find(':');
    if (colon == std::string::npos) theory_error(e, "parameter " + param + " needs a sort");
    spec.params.emplace_back(param.substr(0, colon), parse_sort(param.substr(colon + 1)));
  }
  std::string_view probe = rest;
  if (next_word(probe) == "output") {
    rest = probe;
    spec.output = next_word(rest);
    if (!is_metavar_name(*spec.output)) theory_error(e, "output " + *spec.output + " is not a metavariable");
  }
  for (const auto& [name, sort] : spec.params) sig.add_constant(name, sort);
  spec.condition = parse_formula(rest, sig);
  return spec;
}

}  // namespace

Theory parse_theory(std::string_view text) {
  Theory theory;
  std::vector<Entry> entries = theory_entries(text);
  // Relations and specs first, so lemmas may mention them in any order.
  for (int pass = 0; pass < 3; ++pass) {
    for (const auto& e : entries) {
      std::string_view rest = e.text;
      std::string kind = next_word(rest);
      if (kind != "relation" && kind != "spec" && kind != "lemma") theory_error(e, "unknown entry '" + kind + "'");
      if (pass == 0 && kind == "relation") {
        std::string name = next_word(rest);
        theory.add_relation(name, parse_relspec(trim(rest)));
      } else if (pass == 1 && kind == "spec") {
        theory.add_spec(parse_spec_entry(e, rest, theory.signature));
      } else if (pass == 2 && kind == "lemma") {
        std::string name = next_word(rest);
        if (name.empty()) theory_error(e, "lemma needs a name");
        theory.add_lemma(name, rest);
      }
    }
  }
  return theory;
}

Theory load_theory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

bool Row::is_final() const {
  if (!output) return false;
  return (kind == RowKind::Goal && formula->kind == NodeKind::True) ||
         (kind == RowKind::Assertion && formula->kind == NodeKind::False);
}

std::string to_string(const Justification& j) {
  std::string out = j.rule;
  for (int p : j.parents) out += " #" + std::to_string(p);
  for (const auto& a : j.args) out += " " + a;
  if (!j.unifier.empty()) out += " " + to_string(j.unifier);
  return out;
}

std::string render(const Row& row) {
  return "#" + std::to_string(row.id) + (row.kind == RowKind::Assertion ? " [A] " : " [G] ") + to_string(row.formula) +
         " | " + (row.output ? to_string(row.output) : "-") + " | " + to_string(row.just);
}

Direction parse_direction(std::string_view text) {
  if (text == "ltr") return Direction::LeftToRight;
  if (text == "rtl") return Direction::RightToLeft;
  throw Error(ErrorKind::Syntax, "direction must be ltr or rtl, got '" + std::string(text) + "'");
}

const char* direction_name(Direction d) { return d == Direction::LeftToRight ? "ltr" : "rtl"; }

namespace {

void collect_metavar_nodes(const NodePtr& n, std::map<std::string, NodePtr>& out) {
  if (n->kind == NodeKind::MetaVar) out.emplace(n->name, n);
  for (const auto& k : n->kids) collect_metavar_nodes(k, out);
}

std::map<std::string, NodePtr> row_metavars(const Row& r) {
  std::map<std::string, NodePtr> out;
  collect_metavar_nodes(r.formula, out);
  if (r.output) collect_metavar_nodes(r.output, out);
  return out;
}

// Renames the metavariables of `other` that clash with those of `keep`
// to base#id, adding _k when that name is taken too.
Row rename_apart(const Row& keep, const Row& other, int id) {
  auto kept = row_metavars(keep);
  auto theirs = row_metavars(other);
  std::set<std::string> taken;
  for (const auto& [name, node] : kept) taken.insert(name);
  for (const auto& [name, node] : theirs) taken.insert(name);
  MetaSubst renaming;
  for (const auto& [name, node] : theirs) {
    if (!kept.count(name)) continue;
    std::string base = name.substr(0, name.find('#')) + "#" + std::to_string(id);
    std::string fresh = base;
    for (int k = 1; taken.count(fresh); ++k) fresh = base + "_" + std::to_string(k);
    taken.insert(fresh);
    renaming.emplace(name, mk_metavar(fresh, node->sort));
  }
  Row out = other;
  out.formula = apply_subst(other.formula, renaming);
  if (other.output) out.output = apply_subst(other.output, renaming);
  for (const auto& [name, node] : row_metavars(out)) {
    if (kept.count(name)) throw std::logic_error("rows share metavariable " + name + " after renaming");
  }
  return out;
}

NodePtr goal_form(const Row& r) { return r.kind == RowKind::Goal ? r.formula : mk_not(r.formula); }

unsigned goal_polarity(const Row& r, const Path& p) {
  return polarity_at(r.formula, p, r.kind == RowKind::Goal ? PolPos : PolNeg);
}

NodePtr subformula(const Row& r, const Path& p, int id) {
  NodePtr n = at_path(r.formula, p);
  if (!n->is_formula() || n->kind == NodeKind::True || n->kind == NodeKind::False) {
    throw Error(ErrorKind::BadPath, "path " + to_string(p) + " of row #" + std::to_string(r.id) +
                                        " does not select a subformula (new row #" + std::to_string(id) + ")");
  }
  return n;
}

NodePtr instantiate(const NodePtr& n, const MetaSubst& s) { return n ? apply_subst(n, s) : nullptr; }

// Combines the two goal-form residues into the new row.
Row combine(const Row& r1, const Row& r2, NodePtr residue1, NodePtr residue2, NodePtr test, NodePtr out_then,
            NodePtr out_else, int id) {
  Row row;
  row.id = id;
  NodePtr conj = simplify(mk_and({std::move(residue1), std::move(residue2)}));
  if (r1.kind == RowKind::Assertion && r2.kind == RowKind::Assertion) {
    row.kind = RowKind::Assertion;
    row.formula = simplify(mk_not(conj));
  } else {
    row.kind = RowKind::Goal;
    row.formula = conj;
  }
  if (out_then && out_else) {
    row.output = simplify_cond(mk_cond(test, out_then, out_else));
  } else if (out_then || out_else) {
    row.output = simplify_cond(out_then ? out_then : out_else);
  }
  return row;
}

Row derive_replace(bool equality, const Row& eq_row, const Path& eq_path, const Row& target_in,
                   const Path& target_path, Direction dir, int id) {
  const char* rule = equality ? "eqrepl" : "iffrepl";
  NodePtr lit = subformula(eq_row, eq_path, id);
  if (lit->kind != (equality ? NodeKind::Eq : NodeKind::Iff)) {
    throw Error(ErrorKind::BadPath, std::string(rule) + ": path " + to_string(eq_path) + " of row #" +
                                        std::to_string(eq_row.id) + " selects " + to_string(lit));
  }
  Row target = rename_apart(eq_row, target_in, id);
  NodePtr occ = at_path(target.formula, target_path);
  if (occ->is_formula() != !equality) {
    throw Error(ErrorKind::BadPath, std::string(rule) + ": path " + to_string(target_path) + " of row #" +
                                        std::to_string(target.id) + " selects " + to_string(occ));
  }
  const NodePtr& from = lit->kids[dir == Direction::LeftToRight ? 0 : 1];
  const NodePtr& to = lit->kids[dir == Direction::LeftToRight ? 1 : 0];
  auto theta = term_unify(from, occ);
  if (!theta) {
    throw Error(ErrorKind::NotUnifiable, std::string(rule) + ": cannot unify " + to_string(from) + " with " +
                                             to_string(occ));
  }
  NodePtr lit_i = apply_subst(lit, *theta);
  NodePtr occ_i = apply_subst(occ, *theta);
  NodePtr residue1 = replace_all(apply_subst(goal_form(eq_row), *theta), lit_i, mk_false());
  NodePtr residue2 = replace_all(apply_subst(goal_form(target), *theta), occ_i, apply_subst(to, *theta));
  Row row = combine(eq_row, target, residue1, residue2, lit_i, instantiate(target.output, *theta),
                    instantiate(eq_row.output, *theta), id);
  row.just = {rule, {eq_row.id, target_in.id}, {to_string(eq_path), to_string(target_path), direction_name(dir)},
              *theta};
  return row;
}

}  // namespace

Row derive_resolve(const Row& r1, const Path& p1, const Row& r2_in, const Path& p2, int id) {
  Row r2 = rename_apart(r1, r2_in, id);
  NodePtr l1 = subformula(r1, p1, id);
  NodePtr l2 = subformula(r2, p2, id);
  auto theta = term_unify(l1, l2);
  if (!theta && l1->kind == NodeKind::Eq && l2->kind == NodeKind::Eq) {
    theta = term_unify(l1, mk_eq(l2->kids[1], l2->kids[0]));
  }
  if (!theta) throw Error(ErrorKind::NotUnifiable, "resolve: cannot unify " + to_string(l1) + " with " + to_string(l2));
  bool first_true = !(goal_polarity(r1, p1) == PolNeg && (goal_polarity(r2, p2) & PolPos));
  NodePtr l1_i = apply_subst(l1, *theta);
  NodePtr l2_i = apply_subst(l2, *theta);
  NodePtr residue1 = replace_all(apply_subst(goal_form(r1), *theta), l1_i, mk_bool(first_true));
  NodePtr residue2 = replace_all(apply_subst(goal_form(r2), *theta), l2_i, mk_bool(!first_true));
  NodePtr o1 = instantiate(r1.output, *theta), o2 = instantiate(r2.output, *theta);
  Row row = first_true ? combine(r1, r2, residue1, residue2, l1_i, o1, o2, id)
                       : combine(r1, r2, residue1, residue2, l1_i, o2, o1, id);
  row.just = {"resolve", {r1.id, r2_in.id}, {to_string(p1), to_string(p2)}, *theta};
  return row;
}

Row derive_equality_replace(const Row& eq_row, const Path& eq_path, const Row& target, const Path& target_path,
                            Direction dir, int id) {
  return derive_replace(true, eq_row, eq_path, target, target_path, dir, id);
}

Row derive_equivalence_replace(const Row& iff_row, const Path& iff_path, const Row& target, const Path& target_path,
                               Direction dir, int id) {
  return derive_replace(false, iff_row, iff_path, target, target_path, dir, id);
}

std::vector<Row> derive_split(const Row& row, int first_id) {
  std::vector<std::pair<RowKind, NodePtr>> parts;
  const NodePtr& f = row.formula;
  if (row.kind == RowKind::Goal && f->kind == NodeKind::Implies) {
    parts = {{RowKind::Assertion, f->kids[0]}, {RowKind::Goal, f->kids[1]}};
  } else if (row.kind == RowKind::Assertion && f->kind == NodeKind::And) {
    for (const auto& k : f->kids) parts.emplace_back(RowKind::Assertion, k);
  } else if (row.kind == RowKind::Goal && f->kind == NodeKind::Or) {
    for (const auto& k : f->kids) parts.emplace_back(RowKind::Goal, k);
  } else {
    throw Error(ErrorKind::NotSplittable, "row #" + std::to_string(row.id) + " cannot be split");
  }
  std::vector<Row> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Row r;
    r.id = first_id + static_cast<int>(i);
    r.kind = parts[i].first;
    r.formula = simplify(parts[i].second);
    r.output = row.output;
    r.just = {"split", {row.id}, {std::to_string(i + 1)}, {}};
    out.push_back(std::move(r));
  }
  return out;
}

Row derive_dualize(const Row& row, int id) {
  Row r;
  r.id = id;
  r.kind = row.kind == RowKind::Goal ? RowKind::Assertion : RowKind::Goal;
  r.formula = simplify(mk_not(row.formula));
  r.output = row.output;
  r.just = {"dualize", {row.id}, {}, {}};
  return r;
}

Row derive_orphan(const Row& row, int id) {
  if (!row.output || row.output->kind != NodeKind::MetaVar || occurs_metavar(row.output->name, row.formula)) {
    throw Error(ErrorKind::NotOrphan, "row #" + std::to_string(row.id) + " has no orphaned output");
  }
  Row r;
  r.id = id;
  r.kind = row.kind;
  r.formula = row.formula;
  r.just = {"orphan", {row.id}, {}, {}};
  return r;
}

bool is_primitive_output(const NodePtr& t, const Spec& spec, bool allow_metavars) {
  static const std::set<std::string> functions{"left", "right", "apply", "compose", "replace", "cons"};
  static const std::set<std::string> predicates{"is-proper", "is-atom", "is-const", "is-var", "misses",
                                                "occurs-proper"};
  switch (t->kind) {
    case NodeKind::True:
    case NodeKind::False:
    case NodeKind::Literal: return true;
    case NodeKind::MetaVar: return allow_metavars;
    case NodeKind::Const:
      return t->name == "bot" || t->name == "empty" ||
             std::any_of(spec.params.begin(), spec.params.end(), [&](const auto& p) { return p.first == t->name; });
    case NodeKind::Atom:
      if (!predicates.count(t->name)) return false;
      break;
    case NodeKind::Apply:
      if (!functions.count(t->name) && t->name != spec.name) return false;
      break;
    case NodeKind::Not:
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Eq:
    case NodeKind::Cond: break;
    default: return false;
  }
  return std::all_of(t->kids.begin(), t->kids.end(), [&](const NodePtr& k) { return is_primitive_output(k, spec, allow_metavars); });
}

Tableau::Tableau(const Theory& theory, const Spec& spec) : theory_(&theory), spec_(spec) {
  Row r;
  r.id = 1;
  r.kind = RowKind::Goal;
  r.formula = simplify(spec.condition);
  if (spec.output) r.output = mk_metavar(*spec.output, spec.output_sort);
  r.just = {"spec", {}, {spec.name}, {}};
  rows_.push_back(std::move(r));
}

const Row& Tableau::row(int id) const {
  if (id < 1 || id > static_cast<int>(rows_.size())) throw Error(ErrorKind::BadPath, "no row #" + std::to_string(id));
  return rows_[static_cast<std::size_t>(id - 1)];
}

Row Tableau::append(Row row) {
  if (row.id != next_id()) throw std::logic_error("row id " + std::to_string(row.id) + " out of sequence");
  rows_.push_back(row);
  return row;
}

Row Tableau::add_lemma(const std::string& name) {
  Row r;
  r.id = next_id();
  r.kind = RowKind::Assertion;
  r.formula = theory_->lemma(name).formula;
  r.just = {"lemma", {}, {name}, {}};
  return append(std::move(r));
}

Row Tableau::assume(const NodePtr& formula, const NodePtr& output) {
  Row r;
  r.id = next_id();
  r.kind = RowKind::Assertion;
  r.formula = simplify(formula);
  r.output = output;
  r.just = {"assume", {}, {}, {}};
  return append(std::move(r));
}

Row Tableau::resolve(int r1, const Path& p1, int r2, const Path& p2) {
  return append(derive_resolve(row(r1), p1, row(r2), p2, next_id()));
}

Row Tableau::equality_replace(int eq_row, const Path& eq_path, int target, const Path& target_path, Direction dir) {
  return append(derive_equality_replace(row(eq_row), eq_path, row(target), target_path, dir, next_id()));
}

Row Tableau::equivalence_replace(int iff_row, const Path& iff_path, int target, const Path& target_path,
                                 Direction dir) {
  return append(derive_equivalence_replace(row(iff_row), iff_path, row(target), target_path, dir, next_id()));
}

std::vector<Row> Tableau::split(int id) {
  std::vector<Row> parts = derive_split(row(id), next_id());
  for (const auto& p : parts) append(p);
  return parts;
}

Row Tableau::dualize(int id) { return append(derive_dualize(row(id), next_id())); }

Row Tableau::drop_orphan_output(int id) { return append(derive_orphan(row(id), next_id())); }

NodePtr induction_hypothesis(const Theory& theory, const Spec& spec, const std::string& relation) {
  theory.relations.get(relation);
  std::vector<NodePtr> primed, actual;
  NodePtr condition = spec.condition;
  for (const auto& [name, sort] : spec.params) {
    std::string upper;
    for (char c : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    NodePtr p = mk_metavar(upper + "'", sort);
    NodePtr a = mk_const(name, sort);
    condition = replace_all(condition, a, p);
    primed.push_back(p);
    actual.push_back(a);
  }
  if (spec.output) {
    condition = apply_subst(condition, {{*spec.output, mk_apply(spec.name, primed, spec.output_sort)}});
  }
  auto pack = [&](const std::vector<NodePtr>& xs) -> NodePtr {
    if (xs.size() == 1) return xs[0];
    if (xs.size() == 3 && xs[0]->sort == Sort::Subst && xs[1]->sort == Sort::Expr && xs[2]->sort == Sort::Expr) {
      return mk_apply("triple", xs, Sort::Triple);
    }
    for (const auto& x : xs) {
      if (x->sort != Sort::Expr) throw Error(ErrorKind::IllFormedSpec, "cannot order the inputs of " + spec.name);
    }
    return mk_apply("tuple", xs, Sort::Expr);
  };
  NodePtr ordered = mk_atom("wf-ordered", {mk_const(relation, Sort::Rel), pack(primed), pack(actual)});
  return simplify(mk_implies(ordered, condition));
}

Row Tableau::insert_induction_hypothesis(const std::string& relation) {
  theory_->relations.get(relation);
  bool initial = !induction_ && std::all_of(rows_.begin(), rows_.end(), [](const Row& r) {
    return r.just.rule == "spec" || r.just.rule == "lemma" || r.just.rule == "assume";
  });
  if (!initial) throw Error(ErrorKind::NotInitial, "induction applies only to the initial tableau");
  Row r;
  r.id = next_id();
  r.kind = RowKind::Assertion;
  r.formula = induction_hypothesis(*theory_, spec_, relation);
  r.just = {"induct", {}, {relation}, {}};
  induction_ = relation;
  return append(std::move(r));
}

std::optional<ProgramDef> Tableau::extract_program() const {
  for (const auto& r : rows_) {
    if (!r.is_final() || !is_primitive_output(r.output, spec_)) continue;
    ProgramDef p;
    p.name = spec_.name;
    p.params = spec_.params;
    p.result = spec_.output_sort;
    p.body = simplify_program_body(r.output);
    p.decrease = induction_;
    return p;
  }
  return std::nullopt;
}

namespace {

bool same_row(const Row& a, const Row& b) {
  auto text = [](const NodePtr& n) { return n ? to_string(n) : std::string("-"); };
  return a.kind == b.kind && text(a.formula) == text(b.formula) && text(a.output) == text(b.output) &&
         to_string(a.just) == to_string(b.just);
}

}  // namespace

bool verify_row(const Tableau& t, const Row& row) {
  const Justification& j = row.just;
  for (int p : j.parents) {
    if (p < 1 || p >= row.id) return false;
  }
  try {
    if (j.rule == "spec") return row.id == 1 && same_row(row, Tableau(t.theory(), t.spec()).rows()[0]);
    if (j.rule == "lemma") {
      return row.kind == RowKind::Assertion && !row.output && node_equal(row.formula, t.theory().lemma(j.args.at(0)).formula);
    }
    if (j.rule == "assume") return row.kind == RowKind::Assertion;
    if (j.rule == "induct") {
      return row.kind == RowKind::Assertion && !row.output &&
             node_equal(row.formula, induction_hypothesis(t.theory(), t.spec(), j.args.at(0)));
    }
    if (j.rule == "resolve") {
      return same_row(row, derive_resolve(t.row(j.parents.at(0)), parse_path(j.args.at(0)), t.row(j.parents.at(1)),
                                          parse_path(j.args.at(1)), row.id));
    }
    if (j.rule == "eqrepl" || j.rule == "iffrepl") {
      auto derive = j.rule == "eqrepl" ? derive_equality_replace : derive_equivalence_replace;
      return same_row(row, derive(t.row(j.parents.at(0)), parse_path(j.args.at(0)), t.row(j.parents.at(1)),
                                  parse_path(j.args.at(1)), parse_direction(j.args.at(2)), row.id));
    }
    if (j.rule == "split") {
      std::size_t k = std::stoul(j.args.at(0));
      auto parts = derive_split(t.row(j.parents.at(0)), row.id - static_cast<int>(k) + 1);
      return k >= 1 && k <= parts.size() && same_row(row, parts[k - 1]);
    }
    if (j.rule == "dualize") return same_row(row, derive_dualize(t.row(j.parents.at(0)), row.id));
    if (j.rule == "orphan") return same_row(row, derive_orphan(t.row(j.parents.at(0)), row.id));
  } catch (const Error&) {
    return false;
  } catch (const std::out_of_range&) {
    return false;
  }
  return false;
}

}  // namespace dps
