#pragma once

// Deductive tableaus: assertion and goal rows with optional output entries,
// the derivation rules, induction-hypothesis insertion and program
// extraction.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dps/logic.hpp"
#include "dps/program.hpp"
#include "dps/wf.hpp"

namespace dps {

struct Lemma {
  std::string name;
  NodePtr formula;
};

struct Spec {
  std::string name;
  std::vector<std::pair<std::string, Sort>> params;
  std::optional<std::string> output;  // output metavariable
  Sort output_sort = Sort::Any;
  NodePtr condition;
};

// Lemmas, specifications and named relations sharing one signature.
struct Theory {
  Signature signature;
  std::vector<Lemma> lemmas;
  std::vector<Spec> specs;
  RelationRegistry relations;

  Theory();
  // Throws UnknownLemma.
  const Lemma& lemma(const std::string& name) const;
  // Throws IllFormedSpec when absent.
  const Spec& spec(const std::string& name) const;
  void add_relation(const std::string& name, RelPtr rel);
  // Registers the params as constants and the program symbol. Throws
  // IllFormedSpec when the condition has a metavariable other than the output.
  void add_spec(Spec spec);
  void add_lemma(const std::string& name, std::string_view formula_text);
};

// Lines `lemma NAME FORMULA`, `spec NAME (p:sort ...) [output MV] FORMULA`
// and `relation NAME RELSPEC`; `;` starts a comment and indented lines
// continue the previous entry. Throws Syntax, SortError or IllFormedSpec.
Theory parse_theory(std::string_view text);
// Throws Io when the file cannot be read.
Theory load_theory(const std::string& path);

enum class RowKind { Assertion, Goal };

struct Justification {
  std::string rule;
  std::vector<int> parents;
  std::vector<std::string> args;  // paths, direction, lemma name or part index
  MetaSubst unifier;
};

struct Row {
  int id = 0;
  RowKind kind = RowKind::Goal;
  NodePtr formula;
  NodePtr output;  // null when the row has no output entry
  Justification just;

  bool is_final() const;
};

std::string to_string(const Justification& j);
// `#id [A|G] formula | output | justification`, with `-` for no output.
std::string render(const Row& row);

enum class Direction { LeftToRight, RightToLeft };
Direction parse_direction(std::string_view text);
const char* direction_name(Direction d);

// Pure rule applications. The new row gets `id`; the second parent's
// clashing metavariables are renamed apart using it.
Row derive_resolve(const Row& r1, const Path& p1, const Row& r2, const Path& p2, int id);
Row derive_equality_replace(const Row& eq_row, const Path& eq_path, const Row& target, const Path& target_path,
                            Direction dir, int id);
Row derive_equivalence_replace(const Row& iff_row, const Path& iff_path, const Row& target, const Path& target_path,
                               Direction dir, int id);
std::vector<Row> derive_split(const Row& row, int first_id);
Row derive_dualize(const Row& row, int id);
Row derive_orphan(const Row& row, int id);

// Output terms built only from primitive symbols, program parameters and
// calls to the program itself; metavariables only when allowed.
bool is_primitive_output(const NodePtr& t, const Spec& spec, bool allow_metavars = false);

class Tableau {
 public:
  // The initial tableau: one goal row holding the spec condition.
  Tableau(const Theory& theory, const Spec& spec);

  const Theory& theory() const { return *theory_; }
  const Spec& spec() const { return spec_; }
  const std::vector<Row>& rows() const { return rows_; }
  // Throws BadPath for unknown ids.
  const Row& row(int id) const;
  int next_id() const { return static_cast<int>(rows_.size()) + 1; }
  const std::optional<std::string>& induction_relation() const { return induction_; }

  Row add_lemma(const std::string& name);
  // Case assumptions declared by a script.
  Row assume(const NodePtr& formula, const NodePtr& output);
  Row resolve(int r1, const Path& p1, int r2, const Path& p2);
  Row equality_replace(int eq_row, const Path& eq_path, int target, const Path& target_path, Direction dir);
  Row equivalence_replace(int iff_row, const Path& iff_path, int target, const Path& target_path, Direction dir);
  std::vector<Row> split(int id);
  Row dualize(int id);
  Row drop_orphan_output(int id);
  // Throws UnknownRelation, or NotInitial once a rule has been applied.
  Row insert_induction_hypothesis(const std::string& relation);

  // The first final row with a primitive output, as a simplified program.
  std::optional<ProgramDef> extract_program() const;

  // Appends a row produced elsewhere; used by search.
  Row append(Row row);

 private:
  const Theory* theory_;
  Spec spec_;
  std::vector<Row> rows_;
  std::optional<std::string> induction_;
};

// The induction hypothesis of the spec for a relation name.
NodePtr induction_hypothesis(const Theory& theory, const Spec& spec, const std::string& relation);

// Re-derives the row from its justification and compares.
bool verify_row(const Tableau& t, const Row& row);

}  // namespace dps
