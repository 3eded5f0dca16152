#include <doctest.h>

#include "dyadic/rational.hpp"
#include "dyadic/rng.hpp"

using dyadic::Rational;

TEST_SUITE_BEGIN("rational");

TEST_CASE("construction normalizes") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(-6, -3) == Rational(2));
    CHECK_THROWS_AS(Rational(1, 0), dyadic::InputError);
}

TEST_CASE("pow2") {
    CHECK(Rational::pow2(0) == Rational(1));
    CHECK(Rational::pow2(3) == Rational(8));
    CHECK(Rational::pow2(-2) == Rational(1, 4));
    CHECK_THROWS_AS(Rational::pow2(80), dyadic::OverflowError);
}

TEST_CASE("from_double is exact") {
    CHECK(Rational::from_double(0.5) == Rational(1, 2));
    CHECK(Rational::from_double(-0.75) == Rational(-3, 4));
    CHECK(Rational::from_double(3.0) == Rational(3));
    const double x = 0.1;
    CHECK(Rational::from_double(x).to_double() == x);
}

TEST_CASE("floor") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(6, 3).floor() == 2);
    CHECK(Rational(-6, 3).floor() == -2);
}

TEST_CASE("arithmetic round trips") {
    dyadic::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const Rational a(static_cast<std::int64_t>(rng.below(2001)) - 1000,
                         static_cast<std::int64_t>(rng.below(48)) + 1);
        const Rational b(static_cast<std::int64_t>(rng.below(2001)) - 1000,
                         static_cast<std::int64_t>(rng.below(48)) + 1);
        CHECK((a + b) - b == a);
        if (!b.is_zero()) CHECK((a * b) / b == a);
        CHECK((a <= b) == !(b < a));
    }
}

TEST_SUITE_END();
