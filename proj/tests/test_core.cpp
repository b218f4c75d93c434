#include <doctest.h>

#include <cmath>
#include <random>

#include "valuekit/core.hpp"
#include "valuekit/rng.hpp"

using namespace valuekit;

namespace {

ValueVector unit(ValueDimension d) {
  ValueVector v;
  v.set(d, 1.0);
  return v;
}

ValueVector random_vector(std::mt19937_64& rng) {
  ValueVector v;
  for (ValueDimension d : kAllDimensions)
    v.set(d, 2.0 * unit_real(rng) - 1.0);
  return v;
}

}  // namespace

TEST_CASE("dimension codes and ordering") {
  CHECK(kAllDimensions.size() == 10);
  // Canonical order is alphabetical by short code.
  const char* expected[] = {"ACH", "BEN", "CON", "HED", "POW",
                            "SEC", "SD",  "STI", "TRA", "UNI"};
  for (int i = 0; i < kNumDimensions; ++i) {
    CHECK(dimension_code(kAllDimensions[i]) == expected[i]);
    CHECK(parse_dimension(expected[i]) == kAllDimensions[i]);
  }
  CHECK(parse_dimension("benevolence") == ValueDimension::Benevolence);
  CHECK(parse_dimension("self_direction") == ValueDimension::SelfDirection);
  CHECK(parse_dimension("SELF-DIRECTION") == ValueDimension::SelfDirection);
  CHECK(!parse_dimension("HONOR").has_value());
  CHECK_THROWS_AS(require_dimension("bogus"), InvalidInputError);
  for (ValueDimension d : kAllDimensions)
    CHECK(!dimension_group(d).empty());
}

TEST_CASE("normalize") {
  SUBCASE("already unit") {
    ValueVector v = unit(ValueDimension::Security);
    CHECK(normalize(v) == v);
  }
  SUBCASE("zero vector unchanged") {
    ValueVector z;
    CHECK(normalize(z) == z);
    CHECK(l2_norm(normalize(z)) == 0.0);
  }
  SUBCASE("3-4-5 triangle") {
    ValueVector v;
    v.set(ValueDimension::Security, 3.0);
    v.set(ValueDimension::Power, 4.0);
    ValueVector n = normalize(v);
    CHECK(n[ValueDimension::Security] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(n[ValueDimension::Power] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(l2_norm(n) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("idempotent and scale invariant") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      ValueVector v = random_vector(rng);
      ValueVector n = normalize(v);
      ValueVector nn = normalize(n);
      double c = unit_real(rng) * 10.0 + 1e-3;
      ValueVector scaled;
      for (ValueDimension d : kAllDimensions) scaled.set(d, c * v[d]);
      ValueVector ns = normalize(scaled);
      for (ValueDimension d : kAllDimensions) {
        CHECK(std::abs(nn[d] - n[d]) < 1e-12);
        CHECK(std::abs(ns[d] - n[d]) < 1e-12);
      }
    }
  }
}

TEST_CASE("dot") {
  ValueVector sec = unit(ValueDimension::Security);
  ValueVector pow = unit(ValueDimension::Power);
  CHECK(dot(sec, sec) == 1.0);
  CHECK(dot(sec, pow) == 0.0);

  ValueVector v;
  v.set(ValueDimension::Security, 0.6);
  v.set(ValueDimension::Power, 0.8);
  CHECK(dot(v, sec) == 0.6);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    ValueVector a = random_vector(rng);
    ValueVector b = random_vector(rng);
    CHECK(dot(a, b) == dot(b, a));
    double d = dot(normalize(a), normalize(b));
    CHECK(std::abs(d) <= 1.0 + 1e-12);
  }
}

TEST_CASE("quantize_vote") {
  CHECK(quantize_vote(Vote::Yes) == 1);
  CHECK(quantize_vote(Vote::No) == -1);
  CHECK(quantize_vote(Vote::Unrelated) == 0);
  CHECK(quantize_vote("yes") == 1);
  CHECK(quantize_vote("No") == -1);
  CHECK(quantize_vote("UNRELATED") == 0);
  CHECK_THROWS_WITH_AS(quantize_vote("maybe"),
                       doctest::Contains("maybe"), InvalidInputError);
}

TEST_CASE("utility range validation") {
  CHECK(Utility(0.5).value == 0.5);
  CHECK(Utility(-1.0).value == -1.0);
  CHECK_THROWS_AS(Utility(1.5), InvalidInputError);
  CHECK_THROWS_AS(Utility(std::nan("")), InvalidInputError);
}
