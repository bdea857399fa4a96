#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "piflow/errors.hpp"
#include "piflow/formula.hpp"
#include "piflow/rng.hpp"

using namespace piflow;

namespace {

void check_offset(const std::string& text, std::size_t expected_offset) {
  try {
    parse_formula(text);
    FAIL("expected FormulaParseError for: ", text);
  } catch (const FormulaParseError& e) {
    CHECK_MESSAGE(e.offset() == expected_offset, "input was: ", text);
  }
}

}  // namespace

TEST_CASE("simple formulas parse to ordered count maps") {
  ParsedFormula water = parse_formula("H2O");
  REQUIRE(water.counts.size() == 2);
  CHECK(water.counts[0].first == "H");
  CHECK(water.counts[0].second == doctest::Approx(2.0));
  CHECK(water.counts[1].first == "O");
  CHECK(water.counts[1].second == doctest::Approx(1.0));
  CHECK_FALSE(water.suffix.has_value());
  CHECK(water.total() == doctest::Approx(3.0));
}

TEST_CASE("cuprate formula with large integer counts") {
  ParsedFormula f = parse_formula("Bi2Sr2Ca4Cu8O19");
  REQUIRE(f.counts.size() == 5);
  CHECK(f.counts[0] == std::pair<std::string, double>{"Bi", 2.0});
  CHECK(f.counts[1] == std::pair<std::string, double>{"Sr", 2.0});
  CHECK(f.counts[2] == std::pair<std::string, double>{"Ca", 4.0});
  CHECK(f.counts[3] == std::pair<std::string, double>{"Cu", 8.0});
  CHECK(f.counts[4] == std::pair<std::string, double>{"O", 19.0});
  CHECK(render_formula(f) == "Bi2Sr2Ca4Cu8O19");
}

TEST_CASE("fractional doping with a structure suffix") {
  ParsedFormula f = parse_formula("Ba0.2La1.8Cu1O4-Y");
  REQUIRE(f.counts.size() == 4);
  CHECK(f.counts[0] == std::pair<std::string, double>{"Ba", 0.2});
  CHECK(f.counts[1] == std::pair<std::string, double>{"La", 1.8});
  CHECK(f.counts[2] == std::pair<std::string, double>{"Cu", 1.0});
  CHECK(f.counts[3] == std::pair<std::string, double>{"O", 4.0});
  REQUIRE(f.suffix.has_value());
  CHECK(*f.suffix == "Y");
  // Canonical rendering drops the explicit count of 1.
  CHECK(render_formula(f) == "Ba0.2La1.8CuO4-Y");
}

TEST_CASE("counts default to one and duplicates merge into the first slot") {
  ParsedFormula f = parse_formula("CuOCu2");
  REQUIRE(f.counts.size() == 2);
  CHECK(f.counts[0] == std::pair<std::string, double>{"Cu", 3.0});
  CHECK(f.counts[1] == std::pair<std::string, double>{"O", 1.0});
}

TEST_CASE("single-letter vs two-letter symbol disambiguation") {
  // "CO" is carbon + oxygen; "Co" is cobalt.
  ParsedFormula co = parse_formula("CO");
  REQUIRE(co.counts.size() == 2);
  CHECK(co.counts[0].first == "C");
  CHECK(co.counts[1].first == "O");
  ParsedFormula cobalt = parse_formula("Co");
  REQUIRE(cobalt.counts.size() == 1);
  CHECK(cobalt.counts[0].first == "Co");
}

TEST_CASE("count_of looks up by symbol, zero for absent elements") {
  ParsedFormula f = parse_formula("Y1Ba2Cu3O7");
  CHECK(f.count_of("Ba") == doctest::Approx(2.0));
  CHECK(f.count_of("O") == doctest::Approx(7.0));
  CHECK(f.count_of("Fe") == doctest::Approx(0.0));
}

TEST_CASE("suffixes may carry arbitrary tail text") {
  ParsedFormula f = parse_formula("TiO2-rutile-phase");
  REQUIRE(f.suffix.has_value());
  CHECK(*f.suffix == "rutile-phase");
  CHECK(render_formula(f) == "TiO2-rutile-phase");
}

TEST_CASE("malformed input reports the byte offset of the problem") {
  check_offset("", 0);
  check_offset("2O", 0);        // leading digit: unexpected character
  check_offset("H2o", 2);       // trailing lone lowercase
  check_offset("Xx2", 0);       // unknown two-letter symbol at offset 0
  check_offset("CuZz3", 2);     // unknown symbol mid-formula
  check_offset("H2.3.4O", 1);   // doubled decimal point in the count
  check_offset("Cu.", 2);       // bare dot is not a count
  check_offset("Cu0O", 2);      // zero count is not positive
  check_offset("H O", 1);       // whitespace is not valid anywhere
  check_offset("-Y", 0);        // suffix without any elements
  check_offset("CuPo2", 2);     // polonium (Z=84) is beyond the table
  check_offset("U3O8", 0);      // uranium (Z=92) likewise
}

TEST_CASE("the element table covers exactly hydrogen through bismuth") {
  const auto& symbols = element_symbols();
  REQUIRE(symbols.size() == 83);
  CHECK(symbols.front() == "H");
  CHECK(symbols[25] == "Fe");  // Z=26
  CHECK(symbols.back() == "Bi");
  CHECK(is_known_element("Cu"));
  CHECK(is_known_element("Y"));
  CHECK_FALSE(is_known_element("Po"));
  CHECK_FALSE(is_known_element("Pu"));
  CHECK_FALSE(is_known_element("c"));
}

TEST_CASE("the shipped element asset matches the built-in table") {
  auto loaded = load_element_table(PIFLOW_ASSET_DIR "/elements.txt");
  CHECK(loaded == element_symbols());
}

TEST_CASE("load_element_table rejects missing files") {
  CHECK_THROWS_AS(load_element_table("/nonexistent/elements.txt"),
                  IoFailureError);
}

TEST_CASE("property: render then parse preserves the parsed form") {
  rng::Rng r(808);
  const auto& symbols = element_symbols();
  const std::vector<double> count_choices = {1.0, 2.0,  3.0,  4.0, 7.0, 19.0,
                                             0.1, 0.2,  0.5,  1.8, 2.5, 10.0,
                                             0.05, 6.25, 12.0, 33.0};
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    const std::size_t parts = 1 + r.index(6);
    for (std::size_t k = 0; k < parts; ++k) {
      text += symbols[r.index(symbols.size())];
      if (r.uniform() < 0.7) {
        const double count = count_choices[r.index(count_choices.size())];
        std::string rendered = render_formula(
            ParsedFormula{{{symbols.front(), count}}, std::nullopt});
        text += rendered.substr(1);  // strip the "H", keep the count digits
      }
    }
    if (r.uniform() < 0.25) text += "-phase" + std::to_string(trial % 7);

    ParsedFormula first = parse_formula(text);
    std::string canonical = render_formula(first);
    ParsedFormula second = parse_formula(canonical);
    CHECK_MESSAGE(second == first, "input was: ", text,
                  " canonical: ", canonical);
    CHECK(render_formula(second) == canonical);
  }
}
