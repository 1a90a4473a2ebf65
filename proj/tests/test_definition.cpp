#include "oracles.hpp"

#include "plastic/definition.hpp"
#include "plastic/errors.hpp"
#include "plastic/report.hpp"

#include <doctest.h>

using namespace plastic;

namespace {

int error_line(const std::string &text)
{
  try {
    parse_definition(text);
  } catch (const ParseError &e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string &text)
{
  try {
    parse_definition(text);
  } catch (const ParseError &e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_SUITE("definition")
{
  TEST_CASE("Fibonacci and Thue-Morse definitions")
  {
    auto const fib = parse_definition("alphabet: a b\nrule: a -> a b\nrule: b -> a");
    CHECK(fib.substitution == fibonacci_substitution());
    CHECK_FALSE(fib.lengths);
    auto const tm = parse_definition("alphabet: a b\nrule: a -> a b\nrule: b -> b a\n");
    CHECK(tm.substitution == thue_morse_substitution());
  }

  TEST_CASE("comments, blank lines, lengths and long names")
  {
    auto const f = parse_definition("# header\n\nalphabet: x0 x1   # two letters\n"
                                    "rule: x1 -> x0\n  rule: x0 -> x0 x1\nlengths: 1.5 2e-1\n");
    CHECK(f.substitution.alphabet().letters() == std::vector<std::string>{"x0", "x1"});
    CHECK(f.substitution.image(0) == Word{0, 1});
    REQUIRE(f.lengths);
    CHECK((*f.lengths)(0) == 1.5);
    CHECK((*f.lengths)(1) == 0.2);
  }

  TEST_CASE("errors carry line numbers")
  {
    CHECK(error_text("").find("missing alphabet") != std::string::npos);
    CHECK(error_line("alphabet: a b\nrule: a -> a c\n") == 2);
    CHECK(error_text("alphabet: a b\nrule: a -> a c\n").find("undeclared") != std::string::npos);
    CHECK(error_line("alphabet: a b\nrule: c -> a\n") == 2);
    CHECK(error_line("alphabet: a b\nrule: a -> a b\n# x\nrule: a -> b\n") == 4);
    CHECK(error_text("alphabet: a b\nrule: a -> a b\nrule: a -> b\n").find("duplicate") !=
          std::string::npos);
    CHECK(error_text("alphabet: a b\nrule: a -> a b\n").find("missing rule for 'b'") !=
          std::string::npos);
    CHECK(error_line("alphabet: a b\nrule: a -> a b\nrule: b -> a\nlengths: 1 0\n") == 4);
    CHECK(error_line("alphabet: a b\nrule: a -> a b\nrule: b -> a\nlengths: 1 -2\n") == 4);
    CHECK(error_line("alphabet: a b\nrule: a -> a b\nrule: b -> a\nlengths: 1\n") == 4);
    CHECK(error_line("alphabet: a b\nrule: a -> a b\nrule: b -> a\nlengths: 1 x\n") == 4);
    CHECK(error_line("alphabet: a a\n") == 1);
    CHECK(error_line("rule: a -> a\n") == 1);
    CHECK(error_line("alphabet: a\nrule: a ->\n") == 2);
    CHECK(error_line("alphabet: a\nrule: a a\n") == 2);
    CHECK(error_line("alphabet: a\nsomething\n") == 2);
    CHECK(error_line("alphabet: a\nweights: 1\n") == 2);
  }

  TEST_CASE("serialize round-trips")
  {
    for (auto const *text :
         {"alphabet: a b\nrule: a -> a b\nrule: b -> a\n",
          "alphabet: long b c\nrule: c -> long\nrule: b -> c\nrule: long -> long b\n"
          "lengths: 0.1 3 2.718281828459045\n"}) {
      auto const parsed = parse_definition(text);
      auto const again = parse_definition(serialize(parsed));
      CHECK(again == parsed);
      CHECK(serialize(again) == serialize(parsed));
    }
  }

  TEST_CASE("report helpers")
  {
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
    CHECK(format_real(-0.0) == "0");
    CHECK(real_json(1.61803398874989).dump() == "1.61803398875");
    CHECK(digest("") == "fnv1a64:cbf29ce484222325");
    CHECK(digest("a") == "fnv1a64:af63dc4c8601ec8c");
    CHECK(csv_row({"a b", "x,y", "q\""}) == "a b,\"x,y\",\"q\"\"\"\n");
  }
}
