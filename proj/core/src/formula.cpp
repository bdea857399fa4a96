#include "piflow/formula.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "piflow/errors.hpp"

namespace piflow {

namespace {

// Atomic numbers 1..83, hydrogen through bismuth.
constexpr std::array<const char*, 83> kElements = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
    "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
    "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
    "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
    "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
    "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi"};

const std::unordered_set<std::string>& element_set() {
  static const std::unordered_set<std::string> set(kElements.begin(),
                                                   kElements.end());
  return set;
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string format_count(double value) {
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  std::array<char, 32> buffer{};
  auto [ptr, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

}  // namespace

double ParsedFormula::count_of(std::string_view symbol) const {
  for (const auto& [element, count] : counts) {
    if (element == symbol) return count;
  }
  return 0.0;
}

double ParsedFormula::total() const {
  double sum = 0.0;
  for (const auto& [element, count] : counts) sum += count;
  return sum;
}

const std::vector<std::string>& element_symbols() {
  static const std::vector<std::string> symbols(kElements.begin(),
                                                kElements.end());
  return symbols;
}

bool is_known_element(std::string_view symbol) {
  return element_set().count(std::string(symbol)) > 0;
}

std::vector<std::string> load_element_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoFailureError("cannot open element table '" + path + "'");
  }
  std::vector<std::string> symbols;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) symbols.push_back(line);
  }
  return symbols;
}

ParsedFormula parse_formula(std::string_view text) {
  if (text.empty()) {
    throw FormulaParseError("empty formula", 0);
  }
  ParsedFormula result;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '-') {
      result.suffix = std::string(text.substr(i + 1));
      if (result.counts.empty()) {
        throw FormulaParseError("formula has no elements before suffix", 0);
      }
      return result;
    }
    if (!is_upper(c)) {
      throw FormulaParseError(
          std::string("unexpected character '") + c + "'", i);
    }
    const std::size_t symbol_start = i;
    std::string symbol(1, c);
    ++i;
    if (i < text.size() && is_lower(text[i])) {
      symbol.push_back(text[i]);
      ++i;
    }
    if (!is_known_element(symbol)) {
      throw FormulaParseError("unknown element symbol '" + symbol + "'",
                              symbol_start);
    }
    double count = 1.0;
    if (i < text.size() && (is_digit(text[i]) || text[i] == '.')) {
      const std::size_t count_start = i;
      bool saw_dot = false;
      bool digits_before = false;
      bool digits_after = false;
      while (i < text.size() && (is_digit(text[i]) || text[i] == '.')) {
        if (text[i] == '.') {
          if (saw_dot) {
            throw FormulaParseError("malformed count", count_start);
          }
          saw_dot = true;
        } else if (saw_dot) {
          digits_after = true;
        } else {
          digits_before = true;
        }
        ++i;
      }
      if (!digits_before || (saw_dot && !digits_after)) {
        throw FormulaParseError("malformed count", count_start);
      }
      const std::string_view token = text.substr(count_start, i - count_start);
      auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), count);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw FormulaParseError("malformed count", count_start);
      }
      if (!(count > 0.0)) {
        throw FormulaParseError("count must be positive", count_start);
      }
    }
    bool merged = false;
    for (auto& [element, existing] : result.counts) {
      if (element == symbol) {
        existing += count;
        merged = true;
        break;
      }
    }
    if (!merged) {
      result.counts.emplace_back(std::move(symbol), count);
    }
  }
  return result;
}

std::string render_formula(const ParsedFormula& formula) {
  std::string out;
  for (const auto& [element, count] : formula.counts) {
    out += element;
    if (count != 1.0) {
      out += format_count(count);
    }
  }
  if (formula.suffix) {
    out += '-';
    out += *formula.suffix;
  }
  return out;
}

}  // namespace piflow
