#include "dps/engine.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <queue>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dps/error.hpp"

namespace dps {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Length of the leading s-expression or token of s.
std::size_t sexpr_length(std::string_view s) {
  if (s.empty()) return 0;
  if (s[0] != '(') {
    std::size_t end = 0;
    while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
    return end;
  }
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) return i + 1;
  }
  throw Error(ErrorKind::Syntax, "unbalanced parentheses in '" + std::string(s) + "'");
}

class ScriptRunner {
 public:
  ScriptRunner(const Theory& theory, const Spec& spec, const std::function<void(const std::string&)>& on_row)
      : tableau_(std::make_unique<Tableau>(theory, spec)), on_row_(on_row) {
    emit_line(render(tableau_->rows()[0]));
  }

  void run(std::string_view script) {
    static const std::regex labelled(R"(^([A-Za-z][\w\-']*(\s*,\s*[A-Za-z][\w\-']*)*)\s*=\s+(.*)$)");
    std::istringstream in{std::string(script)};
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
      if (auto semi = line.find(';'); semi != std::string::npos) line.erase(semi);
      std::string text(trim(line));
      if (text.empty()) continue;
      ++index;
      std::vector<std::string> labels;
      std::smatch m;
      if (std::regex_match(text, m, labelled)) {
        std::string names = m[1];
        for (char& c : names) {
          if (c == ',') c = ' ';
        }
        labels = words(names);
        text = m[3];
      }
      try {
        execute(text, labels);
      } catch (const Error& e) {
        throw StepFailed(index, e.kind(), "`" + text + "`: " + e.what());
      }
      if (done_) break;
    }
    if (!done_) extract();
  }

  ReplayResult finish() { return {std::move(tableau_), std::move(program_), std::move(log_)}; }

 private:
  int ref(const std::string& token) {
    if (!token.empty() && token[0] == '@') {
      auto it = labels_.find(token.substr(1));
      if (it == labels_.end()) throw Error(ErrorKind::BadPath, "unknown row label " + token);
      return it->second;
    }
    try {
      std::size_t used = 0;
      int id = std::stoi(token, &used);
      if (used == token.size()) return id;
    } catch (const std::logic_error&) {
    }
    throw Error(ErrorKind::Syntax, "bad row reference '" + token + "'");
  }

  void record(const std::vector<Row>& rows, const std::vector<std::string>& labels) {
    if (labels.size() > rows.size()) throw Error(ErrorKind::Syntax, "more labels than derived rows");
    for (std::size_t i = 0; i < labels.size(); ++i) labels_[labels[i]] = rows[i].id;
    for (const auto& r : rows) {
      if (!verify_row(*tableau_, r)) throw std::logic_error("row #" + std::to_string(r.id) + " fails verification");
      emit_line(render(r));
    }
  }

  void emit_line(const std::string& line) {
    log_.push_back(line);
    if (on_row_) on_row_(line);
  }

  void expect_args(const std::vector<std::string>& w, std::size_t n) {
    if (w.size() != n + 1) {
      throw Error(ErrorKind::Syntax, w[0] + " takes " + std::to_string(n) + " arguments");
    }
  }

  void execute(const std::string& text, std::vector<std::string> labels) {
    std::vector<std::string> w = words(text);
    const std::string& cmd = w[0];
    Tableau& t = *tableau_;
    if (cmd == "assert") {
      expect_args(w, 1);
      labels.push_back(w[1]);
      Row r = t.add_lemma(w[1]);
      record({r}, {});
      for (const auto& l : labels) labels_[l] = r.id;
    } else if (cmd == "assume") {
      std::string_view rest = trim(std::string_view(text).substr(cmd.size()));
      std::size_t len = sexpr_length(rest);
      NodePtr formula = parse_formula(rest.substr(0, len), t.theory().signature);
      rest = trim(rest.substr(len));
      NodePtr output;
      if (!rest.empty()) {
        if (rest.substr(0, 6) != "output") throw Error(ErrorKind::Syntax, "expected 'output' after the formula");
        rest = trim(rest.substr(6));
        if (!rest.empty()) output = parse_term(rest, t.theory().signature);
      }
      record({t.assume(formula, output)}, labels);
    } else if (cmd == "split") {
      expect_args(w, 1);
      record(t.split(ref(w[1])), labels);
    } else if (cmd == "dualize") {
      expect_args(w, 1);
      record({t.dualize(ref(w[1]))}, labels);
    } else if (cmd == "orphan") {
      expect_args(w, 1);
      record({t.drop_orphan_output(ref(w[1]))}, labels);
    } else if (cmd == "resolve") {
      expect_args(w, 4);
      record({t.resolve(ref(w[1]), parse_path(w[2]), ref(w[3]), parse_path(w[4]))}, labels);
    } else if (cmd == "eqrepl" || cmd == "iffrepl") {
      expect_args(w, 5);
      int a = ref(w[1]), b = ref(w[3]);
      Path pa = parse_path(w[2]), pb = parse_path(w[4]);
      Direction dir = parse_direction(w[5]);
      record({cmd == "eqrepl" ? t.equality_replace(a, pa, b, pb, dir) : t.equivalence_replace(a, pa, b, pb, dir)},
             labels);
    } else if (cmd == "induct") {
      expect_args(w, 1);
      record({t.insert_induction_hypothesis(w[1])}, labels);
    } else if (cmd == "extract") {
      expect_args(w, 0);
      extract();
    } else {
      throw Error(ErrorKind::Syntax, "unknown command '" + cmd + "'");
    }
  }

  void extract() {
    auto p = tableau_->extract_program();
    if (!p) throw Error(ErrorKind::NoFinalRow, "no final row with a primitive output");
    program_ = *p;
    done_ = true;
  }

  std::unique_ptr<Tableau> tableau_;
  std::function<void(const std::string&)> on_row_;
  std::map<std::string, int> labels_;
  std::vector<std::string> log_;
  ProgramDef program_;
  bool done_ = false;
};

}  // namespace

ReplayResult replay(const Theory& theory, const Spec& spec, std::string_view script,
                    const std::function<void(const std::string&)>& on_row) {
  ScriptRunner runner(theory, spec, on_row);
  runner.run(script);
  return runner.finish();
}

std::map<std::string, unsigned> parse_weights(std::string_view text) {
  std::map<std::string, unsigned> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto semi = line.find(';'); semi != std::string::npos) line.erase(semi);
    std::vector<std::string> w = words(line);
    if (w.empty()) continue;
    unsigned weight = 0;
    bool ok = w.size() == 2;
    if (ok) {
      const char* end = w[1].data() + w[1].size();
      auto [ptr, ec] = std::from_chars(w[1].data(), end, weight);
      ok = ec == std::errc() && ptr == end && weight > 0;
    }
    if (!ok) {
      throw Error(ErrorKind::Syntax, "weights line " + std::to_string(number) + ": expected `symbol positive-weight`");
    }
    out[w[0]] = weight;
  }
  return out;
}

namespace {

struct Action {
  enum Kind { Resolve, EqRepl, IffRepl } kind;
  int a, b;
  Path pa, pb;
  Direction dir = Direction::LeftToRight;
};

struct Candidate {
  std::size_t weight;
  std::uint64_t order;
  Action action;
  bool operator>(const Candidate& o) const { return weight != o.weight ? weight > o.weight : order > o.order; }
};

void collect_paths(const NodePtr& n, Path& cur, const std::function<void(const NodePtr&, const Path&)>& visit) {
  visit(n, cur);
  for (std::size_t i = 0; i < n->kids.size(); ++i) {
    cur.push_back(i + 1);
    collect_paths(n->kids[i], cur, visit);
    cur.pop_back();
  }
}

std::vector<std::pair<NodePtr, Path>> nodes_with_paths(const NodePtr& f) {
  std::vector<std::pair<NodePtr, Path>> out;
  Path cur;
  collect_paths(f, cur, [&](const NodePtr& n, const Path& p) { out.emplace_back(n, p); });
  return out;
}

bool is_literal(const NodePtr& n) { return n->kind == NodeKind::Atom || n->kind == NodeKind::Eq; }

unsigned goal_polarity(const Row& r, const Path& p) {
  return polarity_at(r.formula, p, r.kind == RowKind::Goal ? PolPos : PolNeg);
}

class Searcher {
 public:
  Searcher(const Theory& theory, const Spec& spec, const SearchConfig& config)
      : tableau_(std::make_unique<Tableau>(theory, spec)), config_(config) {}

  std::optional<SearchResult> run() {
    if (config_.max_rows == 0) return std::nullopt;
    admit_new(1);
    for (const auto& lemma : tableau_->theory().lemmas) {
      if (full()) return std::nullopt;
      tableau_->add_lemma(lemma.name);
      admit_new(tableau_->next_id() - 1);
    }
    while (!queue_.empty() && !found_ && !full()) {
      Candidate c = queue_.top();
      queue_.pop();
      std::optional<Row> row = derive(c.action, tableau_->next_id());
      if (!row || !worth_keeping(*row)) continue;
      tableau_->append(*row);
      admit_new(row->id);
    }
    if (!found_) return std::nullopt;
    return SearchResult{std::move(tableau_), *program_};
  }

 private:
  bool full() const { return tableau_->rows().size() >= config_.max_rows; }

  std::size_t weight(const NodePtr& n) const {
    auto it = config_.weights.find(n->name);
    std::size_t w = it == config_.weights.end() || n->name.empty() ? 1 : it->second;
    for (const auto& k : n->kids) w += weight(k);
    return w;
  }

  std::size_t row_weight(const Row& r) const { return weight(r.formula) + (r.output ? weight(r.output) : 0); }

  std::string key(const Row& r) const {
    return std::string(r.kind == RowKind::Goal ? "G " : "A ") + to_string(r.formula) + " | " +
           (r.output ? to_string(r.output) : "-");
  }

  bool worth_keeping(const Row& r) {
    if (r.kind == RowKind::Goal && r.formula->kind == NodeKind::False) return false;
    if (r.kind == RowKind::Assertion && r.formula->kind == NodeKind::True) return false;
    if (r.output && !is_primitive_output(r.output, tableau_->spec(), true)) return false;
    return seen_.insert(key(r)).second;
  }

  std::optional<Row> derive(const Action& a, int id) const {
    try {
      const Row& r1 = tableau_->row(a.a);
      const Row& r2 = tableau_->row(a.b);
      switch (a.kind) {
        case Action::Resolve: return derive_resolve(r1, a.pa, r2, a.pb, id);
        case Action::EqRepl: return derive_equality_replace(r1, a.pa, r2, a.pb, a.dir, id);
        case Action::IffRepl: return derive_equivalence_replace(r1, a.pa, r2, a.pb, a.dir, id);
      }
    } catch (const Error&) {
    }
    return std::nullopt;
  }

  void push(const Action& a) {
    std::optional<Row> probe = derive(a, tableau_->next_id());
    if (!probe) return;
    std::uint64_t order = ++counter_;
    if (config_.seed != 0) order = std::hash<std::uint64_t>{}(order ^ config_.seed) ^ (order << 32);
    queue_.push({row_weight(*probe), order, a});
  }

  // Records a newly appended row: splits and orphan drops happen at once;
  // rule applications pairing it with earlier rows are queued.
  void admit_new(int id) {
    std::vector<int> fresh{id};
    while (!fresh.empty() && !found_) {
      int cur = fresh.back();
      fresh.pop_back();
      const Row current = tableau_->row(cur);
      seen_.insert(key(current));
      if (current.is_final()) {
        if (auto p = tableau_->extract_program()) {
          program_ = *p;
          found_ = true;
          return;
        }
      }
      if (full()) return;
      try {
        for (const auto& r : tableau_->split(cur)) fresh.push_back(r.id);
        continue;
      } catch (const Error&) {
      }
      if (current.output && current.output->kind == NodeKind::MetaVar &&
          !occurs_metavar(current.output->name, current.formula)) {
        fresh.push_back(tableau_->drop_orphan_output(cur).id);
        continue;
      }
      for (const auto& other : tableau_->rows()) {
        if (other.id > cur) break;
        pair_actions(current, other);
        if (other.id != cur) pair_actions(other, current);
      }
    }
  }

  void pair_actions(const Row& r1, const Row& r2) {
    auto n1 = nodes_with_paths(r1.formula);
    auto n2 = nodes_with_paths(r2.formula);
    for (const auto& [l1, p1] : n1) {
      if (is_literal(l1) && r1.id <= r2.id) {
        unsigned pol1 = goal_polarity(r1, p1);
        for (const auto& [l2, p2] : n2) {
          if (!is_literal(l2) || l1->name != l2->name || l1->kind != l2->kind) continue;
          unsigned pol2 = goal_polarity(r2, p2);
          if (((pol1 & PolPos) && (pol2 & PolNeg)) || ((pol1 & PolNeg) && (pol2 & PolPos))) {
            push({Action::Resolve, r1.id, r2.id, p1, p2});
          }
        }
      }
      if (l1->kind != NodeKind::Eq && l1->kind != NodeKind::Iff) continue;
      bool eq = l1->kind == NodeKind::Eq;
      for (Direction dir : {Direction::LeftToRight, Direction::RightToLeft}) {
        const NodePtr& from = l1->kids[dir == Direction::LeftToRight ? 0 : 1];
        if (from->kind == NodeKind::MetaVar) continue;
        for (const auto& [o, po] : n2) {
          if (o->is_formula() == eq || o->kind == NodeKind::MetaVar) continue;
          if (o->kind != from->kind || o->name != from->name) continue;
          push({eq ? Action::EqRepl : Action::IffRepl, r1.id, r2.id, p1, po, dir});
        }
      }
    }
  }

  std::unique_ptr<Tableau> tableau_;
  SearchConfig config_;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<Candidate>> queue_;
  std::set<std::string> seen_;
  std::uint64_t counter_ = 0;
  bool found_ = false;
  std::optional<ProgramDef> program_;
};

}  // namespace

std::optional<SearchResult> search(const Theory& theory, const Spec& spec, const SearchConfig& config) {
  return Searcher(theory, spec, config).run();
}

}  // namespace dps
