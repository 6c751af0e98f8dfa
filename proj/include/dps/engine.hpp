#pragma once

// Derivation driver: scripted replay with per-step verification, and a
// bounded best-first search over rule applications.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dps/program.hpp"
#include "dps/tableau.hpp"

namespace dps {

struct ReplayResult {
  std::unique_ptr<Tableau> tableau;
  ProgramDef program;
  std::vector<std::string> log;  // one rendered row per derived row
};

// Commands, one per line, `;` comments:
//   assert LEMMA | assume FORMULA [output TERM] | split ROW | dualize ROW
//   orphan ROW | resolve ROW PATH ROW PATH | eqrepl ROW PATH ROW PATH ltr|rtl
//   iffrepl ROW PATH ROW PATH ltr|rtl | induct RELATION | extract
// A command may be prefixed by `label =` (or `l1, l2 =` for split); rows are
// referenced by number or `@label`. assert labels its row with the lemma name.
// Throws StepFailed(index, cause) and NoFinalRow.
// on_row sees every rendered row as it is created.
ReplayResult replay(const Theory& theory, const Spec& spec, std::string_view script,
                    const std::function<void(const std::string&)>& on_row = {});

struct SearchConfig {
  std::size_t max_rows = 200;
  std::map<std::string, unsigned> weights;  // symbol weight, default 1
  std::uint64_t seed = 0;                   // tie-break salt; 0 keeps row order
};

// Reads `symbol weight` lines.
std::map<std::string, unsigned> parse_weights(std::string_view text);

struct SearchResult {
  std::unique_ptr<Tableau> tableau;
  ProgramDef program;
};

// Best-first over resolution and replacement steps among the spec rows and
// all theory lemmas; priority is the weighted symbol count of the derived
// row, ties broken by creation order. Stops once the tableau holds max_rows.
std::optional<SearchResult> search(const Theory& theory, const Spec& spec, const SearchConfig& config);

}  // namespace dps
