#include <doctest.h>

#include <cmath>

#include "npsac/error.hpp"
#include "npsac/text.hpp"

using namespace npsac;

TEST_CASE("utf-8 validation") {
  CHECK(is_valid_utf8("plain"));
  CHECK(is_valid_utf8("caf\xC3\xA9"));
  CHECK_FALSE(is_valid_utf8("\xC3"));
  CHECK_FALSE(is_valid_utf8("\xC0\xAF"));      // overlong
  CHECK_FALSE(is_valid_utf8("\xED\xA0\x80"));  // surrogate
  CHECK(decode_utf8("caf\xC3\xA9").size() == 4);
  CHECK(utf8_length("caf\xC3\xA9") == 4);
  CHECK_THROWS_AS(decode_utf8("\xFF"), Error);
}

TEST_CASE("case folding is ASCII only") {
  CHECK(fold_case("AbC_\xC3\x89") == U"abc_\u00C9");
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23}) CHECK(parse_double(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
  CHECK_THROWS_AS(parse_double("1.5x"), Error);
  CHECK_THROWS_AS(parse_double(""), Error);
  CHECK(std::isnan(parse_double("nan")));
  CHECK(parse_int("-42") == -42);
  CHECK_THROWS_AS(parse_int("4.2"), Error);
}

TEST_CASE("split and trim") {
  CHECK(split("a,,b", ',') == std::vector<std::string_view>{"a", "", "b"});
  CHECK(trim("  x y \t") == "x y");
}
