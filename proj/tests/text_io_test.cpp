#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <stdexcept>

#include "trailernav/trailernav.hpp"

using namespace trailernav;

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    CHECK(parse_double(format_double(v)) == v);
  }
  for (double v : {0.0, -0.0, 0.1, 1.0 / 3.0, 1e-300, 1e300}) {
    CHECK(parse_double(format_double(v)) == v);
  }
}

TEST_CASE("parse_double rejects malformed input") {
  CHECK_THROWS_AS(parse_double(""), std::runtime_error);
  CHECK_THROWS_AS(parse_double("abc"), std::runtime_error);
  CHECK_THROWS_AS(parse_double("1.5x"), std::runtime_error);
  CHECK_THROWS_AS(parse_double("1.5 "), std::runtime_error);
  CHECK(parse_double("-2.5") == -2.5);
  CHECK(parse_double("1e3") == 1000.0);
}

TEST_CASE("parse_int parses and rejects") {
  CHECK(parse_int("42") == 42);
  CHECK(parse_int("-7") == -7);
  CHECK_THROWS_AS(parse_int(""), std::runtime_error);
  CHECK_THROWS_AS(parse_int("3.5"), std::runtime_error);
  CHECK_THROWS_AS(parse_int("seven"), std::runtime_error);
  CHECK_THROWS_AS(parse_int("12 "), std::runtime_error);
}

TEST_CASE("split_ws tokenization") {
  CHECK(split_ws("").empty());
  CHECK(split_ws("   \t  ").empty());
  const auto one = split_ws("hello");
  REQUIRE(one.size() == 1);
  CHECK(one[0] == "hello");
  const auto three = split_ws("  a\tbb   ccc ");
  REQUIRE(three.size() == 3);
  CHECK(three[0] == "a");
  CHECK(three[1] == "bb");
  CHECK(three[2] == "ccc");
}

TEST_CASE("split_lines handles trailing newline and rejects CR") {
  CHECK(split_lines("").empty());
  const auto a = split_lines("x");
  REQUIRE(a.size() == 1);
  CHECK(a[0] == "x");
  const auto b = split_lines("x\n");
  REQUIRE(b.size() == 1);
  CHECK(b[0] == "x");
  const auto c = split_lines("x\ny\n");
  REQUIRE(c.size() == 2);
  CHECK(c[0] == "x");
  CHECK(c[1] == "y");
  const auto d = split_lines("x\n\ny");
  REQUIRE(d.size() == 3);
  CHECK(d[1].empty());
  CHECK_THROWS_AS(split_lines("x\r\ny"), std::runtime_error);
}
