#include "doctest.h"

#include "pdens/errors.hpp"
#include "pdens/padic.hpp"

#include <random>

using namespace pdens;

TEST_CASE("prime validation") {
    CHECK_NOTHROW(Prime(5));
    CHECK_THROWS_AS(Prime(4), InvalidArgument);
    CHECK_THROWS_AS(Prime(2), InvalidArgument);
    CHECK_THROWS_AS(Prime(9), InvalidArgument);
}

TEST_CASE("from_rational expansions") {
    Prime p(5);
    CHECK(PadicNumber::from_rational(p, Rational(0)).is_zero());
    auto x = PadicNumber::from_rational(p, Rational(50), 3);
    CHECK(*x.valuation() == 2);
    CHECK(x.digits() == std::vector<int>{2, 0, 0});
    auto y = PadicNumber::from_rational(p, Rational(1, 5), 2);
    CHECK(*y.valuation() == -1);
    CHECK(y.digits() == std::vector<int>{1, 0});
    // -1 = 4 + 4*5 + 4*25 + ...
    CHECK(PadicNumber::from_rational(p, Rational(-1), 3).digits() == std::vector<int>{4, 4, 4});
}

TEST_CASE("arithmetic") {
    Prime p(5);
    auto two = PadicNumber::from_rational(p, Rational(2), 8);
    auto three = PadicNumber::from_rational(p, Rational(3), 8);
    auto s = two + three;
    CHECK(*s.valuation() == 1);
    CHECK(s.angular_component() == 1);
    CHECK(s.precision() == 7);
    CHECK(*PadicNumber::from_rational(p, Rational(5)).inverse().valuation() == -1);
    CHECK_THROWS_AS(two + (-two), PrecisionExhausted);
    CHECK_THROWS_AS(PadicNumber::zero(p).inverse(), DivisionByZero);
    auto q = PadicNumber::from_rational(p, Rational(7, 3), 10);
    CHECK(q * q.inverse() == PadicNumber::from_rational(p, Rational(1), 10));
}

TEST_CASE("absolute value is multiplicative and ultrametric on random samples") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-2000, 2000);
    for (long prime : {3L, 5L, 7L}) {
        Prime p(prime);
        for (int i = 0; i < 300; ++i) {
            Rational a(d(rng), std::max(1L, std::abs(d(rng))));
            Rational b(d(rng), std::max(1L, std::abs(d(rng))));
            a.canonicalize();
            b.canonicalize();
            if (a == 0 || b == 0) continue;
            auto x = PadicNumber::from_rational(p, a, 20);
            auto y = PadicNumber::from_rational(p, b, 20);
            CHECK(*(x * y).valuation() == *x.valuation() + *y.valuation());
            if (a + b == 0) continue;
            long vs = ord_nonzero(Rational(a + b), prime);
            CHECK(vs >= std::min(*x.valuation(), *y.valuation()));
            if (*x.valuation() != *y.valuation()) CHECK(vs == std::min(*x.valuation(), *y.valuation()));
            // the p-adic sum agrees with the exact sum whenever it is decidable
            try {
                auto z = x + y;
                CHECK(*z.valuation() == vs);
            } catch (const PrecisionExhausted&) {
            }
        }
    }
}
