#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "supergeo/rational.hpp"

using namespace supergeo;

TEST_CASE("parse and format round-trip in lowest terms") {
    CHECK(format_rat(parse_rat("2/4")) == "1/2");
    CHECK(format_rat(parse_rat("-6/4")) == "-3/2");
    CHECK(format_rat(parse_rat("5")) == "5");
    CHECK(format_rat(parse_rat("0/7")) == "0");
    CHECK(parse_rat("3/-6") == rat(-1, 2));
    CHECK_THROWS(parse_rat(""));
    CHECK_THROWS(parse_rat("x"));
    CHECK_THROWS(parse_rat("1/0"));
}

TEST_CASE("binomial") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(5, -1) == 0);
    CHECK(binomial(10, 5) == 252);
}

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(fnv1a64("supergeo") == fnv1a64("supergeo"));
}
