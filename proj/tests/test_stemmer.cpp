#include <doctest.h>

#include <fstream>
#include <sstream>

#include "test_util.hpp"
#include "valuekit/stemmer.hpp"

using namespace valuekit;

TEST_CASE("stem basics") {
  CHECK(stem("running") == "run");
  CHECK(stem("power") == "power");
  CHECK(stem("Running") == "run");  // lowercased first
  CHECK(stem("don't") == "don't");  // non-alphabetic input passes through
}

TEST_CASE("stem irregular forms via the exception table") {
  CHECK(stem("children") == "child");
  CHECK(stem("feet") == "foot");
  CHECK(stem("women") == "woman");
  CHECK(stem("people") == "person");
  // porter_stem is the raw algorithm without the table.
  CHECK(porter_stem("children") == "children");
}

TEST_CASE("stem matches the reference fixture") {
  std::ifstream in(test_util::fixture("porter_reference.tsv"));
  REQUIRE(in.good());
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    std::string word = line.substr(0, tab);
    std::string expected = line.substr(tab + 1);
    CAPTURE(word);
    CHECK(porter_stem(word) == expected);
    ++checked;
  }
  CHECK(checked > 200);
}
