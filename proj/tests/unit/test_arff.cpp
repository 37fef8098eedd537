#include <doctest.h>

#include "zerofolio/arff.hpp"
#include "zerofolio/error.hpp"
#include "zerofolio/serialize.hpp"

using namespace zerofolio;

namespace {

const char* kHeader =
    "@relation test\n"
    "@attribute name string\n"
    "@attribute value numeric\n"
    "@data\n";

}  // namespace

TEST_CASE("minimal document parses into typed values") {
  auto rel = arff::parse(std::string(kHeader) + "a,1.5\n");
  REQUIRE(rel.attributes.size() == 2);
  CHECK(rel.attributes[0].name == "name");
  CHECK(rel.attributes[1].type == arff::AttributeType::Numeric);
  REQUIRE(rel.rows.size() == 1);
  CHECK(std::get<std::string>(rel.rows[0][0]) == "a");
  CHECK(std::get<double>(rel.rows[0][1]) == 1.5);
}

TEST_CASE("question mark is the missing marker") {
  auto rel = arff::parse(std::string(kHeader) + "x,?\n");
  CHECK(arff::is_missing(rel.rows[0][1]));
  // A quoted '?' is a literal string.
  auto quoted = arff::parse(std::string(kHeader) + "'?',2\n");
  CHECK(std::get<std::string>(quoted.rows[0][0]) == "?");
}

TEST_CASE("arity violation is MalformedArff with the line number") {
  try {
    arff::parse(std::string(kHeader) + "a,1,2\n");
    FAIL("expected MalformedArff");
  } catch (const MalformedArff& e) {
    CHECK(e.line() == 5);
  }
}

TEST_CASE("malformed headers and values") {
  CHECK_THROWS_AS(arff::parse("@relation r\n@attribute x blob\n@data\n"), MalformedArff);
  CHECK_THROWS_AS(arff::parse(std::string(kHeader) + "'open,1\n"), MalformedArff);
  CHECK_THROWS_AS(arff::parse(std::string(kHeader) + "a,notanumber\n"), MalformedArff);
  CHECK_THROWS_AS(arff::parse("@relation r\n@attribute x numeric\n"), MalformedArff);
  CHECK_THROWS_AS(arff::parse(std::string(kHeader) + "{0 a, 1 2}\n"), MalformedArff);
}

TEST_CASE("quoting, escapes, comments, nominal types and case-insensitive keywords") {
  const std::string doc =
      "% comment line\n"
      "@RELATION 'my relation'\n"
      "@ATTRIBUTE 'instance id' STRING\n"
      "@ATTRIBUTE status {ok, timeout, 'mem out'}\n"
      "@attribute t REAL\n"
      "@Attribute i INTEGER\n"
      "@DATA\n"
      "'a, \\'quoted\\' file',ok,1e3,  -4 \r\n"
      "\"dq\",'mem out',?,0\n";
  auto rel = arff::parse(doc);
  CHECK(rel.name == "my relation");
  CHECK(rel.attributes[0].name == "instance id");
  CHECK(rel.attributes[1].nominal_values == std::vector<std::string>{"ok", "timeout", "mem out"});
  REQUIRE(rel.rows.size() == 2);
  CHECK(std::get<std::string>(rel.rows[0][0]) == "a, 'quoted' file");
  CHECK(std::get<double>(rel.rows[0][2]) == 1000.0);
  CHECK(std::get<double>(rel.rows[0][3]) == -4.0);
  CHECK(std::get<std::string>(rel.rows[1][1]) == "mem out");
  CHECK(rel.find_attribute("STATUS") == 1);
}

TEST_CASE("write then parse round-trips random relations") {
  SplitMix64 rng(2024);
  const std::string alphabet = "abc xyz,'\"\\%{}?-_09\t";
  for (int trial = 0; trial < 200; ++trial) {
    arff::Relation rel;
    rel.name = "rel" + std::to_string(trial);
    const std::size_t cols = 1 + rng.below(5);
    for (std::size_t c = 0; c < cols; ++c) {
      arff::Attribute a;
      a.name = "col " + std::to_string(c);
      const auto kind = rng.below(3);
      a.type = kind == 0 ? arff::AttributeType::Numeric
                         : (kind == 1 ? arff::AttributeType::String : arff::AttributeType::Nominal);
      if (a.type == arff::AttributeType::Nominal) a.nominal_values = {"x", "y z", "w,v"};
      rel.attributes.push_back(a);
    }
    const std::size_t rows = rng.below(6);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<arff::Value> row;
      for (const auto& a : rel.attributes) {
        if (a.type == arff::AttributeType::Numeric) {
          if (rng.below(4) == 0) {
            row.emplace_back(arff::Missing{});
          } else {
            row.emplace_back((rng.unit() - 0.5) * 1e6);
          }
        } else if (a.type == arff::AttributeType::Nominal) {
          row.emplace_back(a.nominal_values[rng.below(a.nominal_values.size())]);
        } else {
          std::string s;
          const auto len = rng.below(8);
          for (std::size_t k = 0; k < len; ++k) s.push_back(alphabet[rng.below(alphabet.size())]);
          row.emplace_back(s);
        }
      }
      rel.rows.push_back(std::move(row));
    }
    CHECK(arff::parse(arff::write(rel)) == rel);
  }
}
