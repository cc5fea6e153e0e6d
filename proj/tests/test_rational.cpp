#include "doctest.h"

#include <cmath>

#include "mmk/rational.hpp"
#include "mmk/surd.hpp"

using namespace mmk;

TEST_CASE("parse_rational forms") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-7") == -7);
    CHECK(parse_rational("0.125") == Rational(1, 8));
    CHECK(parse_rational("3e-2") == Rational(3, 100));
    CHECK(parse_rational("-1.5E1") == -15);
    CHECK_THROWS_AS(parse_rational("abc"), DomainError);
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK(to_string(frac(4, 6)) == "2/3");
    CHECK(to_string(Rational(5)) == "5");
}

TEST_CASE("pow2 and binomial") {
    CHECK(pow2(3) == 8);
    CHECK(pow2(-2) == Rational(1, 4));
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(4, 0) == 1);
    CHECK(binomial(3, 5) == 0);
}

TEST_CASE("surd arithmetic is exact") {
    Surd r = Surd::sqrt_of(3);
    CHECK((r * r) == Surd(3));
    CHECK((r * r).is_rational());
    Surd x = Surd(1) + r;
    Surd inv = Surd(1) / x;
    CHECK((inv * x) == Surd(1));
    CHECK(std::abs(inv.to_double() - 1.0 / (1.0 + std::sqrt(3.0))) < 1e-15);
    // 7 - 4 sqrt3 > 0 but tiny
    Surd tiny = Surd(7) - Surd(4) * r;
    CHECK(tiny.sign() == 1);
    CHECK((Surd(2) * r - Surd(Rational(3464, 1000))).sign() == 1);
    CHECK((Surd(2) * r - Surd(Rational(3465, 1000))).sign() == -1);
    CHECK_THROWS(Surd::sqrt_of(2) + Surd::sqrt_of(3));
    CHECK_THROWS(Surd(0, 1, -1));
}
