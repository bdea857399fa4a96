#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace piflow {

// A parsed composition: element counts in first-appearance order (duplicate
// symbols merged into the first occurrence) plus an optional structure suffix
// captured after '-'. The suffix is ignored by scoring.
struct ParsedFormula {
  std::vector<std::pair<std::string, double>> counts;
  std::optional<std::string> suffix;

  double count_of(std::string_view symbol) const;
  double total() const;

  bool operator==(const ParsedFormula&) const = default;
};

// Parses e.g. "Ba0.2La1.8CuO4-Y". Element symbols are one capital plus an
// optional lowercase letter, validated against the 83-element table; counts
// are positive decimals defaulting to 1. Throws FormulaParseError with the
// byte offset of the problem.
ParsedFormula parse_formula(std::string_view text);

// Canonical rendering: symbols with counts (count 1 omitted, integer counts
// without a decimal point), suffix re-appended after '-'. Reparsing yields an
// equal count map.
std::string render_formula(const ParsedFormula& formula);

// The supported element symbols, atomic numbers 1..83 (hydrogen to bismuth).
const std::vector<std::string>& element_symbols();
bool is_known_element(std::string_view symbol);

// Reads a one-symbol-per-line table, e.g. the shipped asset file.
std::vector<std::string> load_element_table(const std::string& path);

}  // namespace piflow
