#include "doctest.h"

#include "random_ep.hpp"

#include "pdens/errors.hpp"

using namespace pdens;

TEST_CASE("evaluation") {
    CHECK(EPSequence::constant(5, 1).eval(7) == 1);
    auto even = EPSequence::periodic(5, 0, {}, {Rational(1, 2), 0});
    CHECK(even.eval(4) == Rational(1, 2));
    CHECK(even.eval(5) == 0);
    CHECK(EPSequence::term(5, 1, 1, -1).eval(2) == Rational(2, 25));
    auto s = EPSequence(3, 2, 2, {7, -1}, {EPBranch{1, {{2, 0, -1}}}, EPBranch{0, {}}});
    CHECK(s.eval(0) == 7);
    CHECK(s.eval(1) == -1);
    CHECK(s.eval(2) == 1 + Rational(2, 9));
    CHECK(s.eval(3) == 0);
}

TEST_CASE("boundedness") {
    CHECK_FALSE(EPSequence::term(5, 1, 0, 1).is_bounded());
    CHECK((EPSequence::term(5, 1, 1, -1) + EPSequence::constant(5, 3)).is_bounded());
    CHECK_FALSE(EPSequence::term(5, 1, 1, 0).is_bounded());
    CHECK_THROWS_AS(mean_value_at_infinity(EPSequence::term(5, 1, 1, 0)), Unbounded);
}

TEST_CASE("mean value at infinity") {
    CHECK(mean_value_at_infinity(EPSequence::periodic(5, 0, {}, {1, 0})) == Rational(1, 2));
    CHECK(mean_value_at_infinity(EPSequence::term(5, 1, 2, -1)) == 0);
    CHECK(mean_value_at_infinity(EPSequence::periodic(5, 0, {}, {1, 0, 1, 0})) == Rational(1, 2));
    CHECK(mean_value_at_infinity(EPSequence::periodic(5, 0, {}, {1, 0}).rebase_modulus(4)) == Rational(1, 2));
    auto eventually = EPSequence::periodic(5, 3, {9, 9, 9}, {2});
    CHECK(mean_value_at_infinity(eventually.shift(5)) == 2);
    auto s = EPSequence::periodic(7, 1, {4}, {3, 1, 2});
    auto zero = s + (-s);
    for (const auto& br : zero.branches()) CHECK((br.constant == 0 && br.terms.empty()));
    for (long n = 0; n < 10; ++n) CHECK(zero.eval(n) == 0);
}

TEST_CASE("ball to sphere recombination") {
    CHECK(ball_to_sphere(EPSequence::constant(5, Rational(3, 7)), 1) == EPSequence::constant(5, Rational(3, 7)));
    CHECK(mean_value_at_infinity(ball_to_sphere(EPSequence::constant(5, 0), 2)) == 0);
    auto ball = EPSequence::periodic(5, 0, {}, {Rational(5, 6), Rational(1, 6)});
    auto sphere = ball_to_sphere(ball, 1);
    CHECK(sphere.branch_limits() == std::vector<Rational>{1, 0});
}

TEST_CASE("randomized invariances") {
    std::mt19937 rng(20261019);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = fixtures::random_bounded_ep(rng);
        auto t = fixtures::random_bounded_ep(rng);
        CAPTURE(trial);
        if (t.q() != s.q()) t = EPSequence(s.q(), t.modulus(), t.onset(), t.head(), t.branches());
        Rational mv = mean_value_at_infinity(s);
        long horizon = s.onset() + 3 * s.modulus() * 4 + 5;

        for (long k : {2, 3, 4}) {
            auto r = s.rebase_modulus(k * s.modulus());
            CHECK(mean_value_at_infinity(r) == mv);
            for (long n = 0; n < horizon; ++n) CHECK(r.eval(n) == s.eval(n));
        }
        for (long k : {1, 2, 5, 11}) {
            auto sh = s.shift(k);
            CHECK(mean_value_at_infinity(sh) == mv);
            for (long n = 0; n < horizon; ++n) CHECK(sh.eval(n) == s.eval(n + k));
        }
        Rational a = fixtures::random_rational(rng), b = fixtures::random_rational(rng);
        auto lin = s.scaled(a) + t.scaled(b);
        CHECK(mean_value_at_infinity(lin) == a * mv + b * mean_value_at_infinity(t));
        for (long n = 0; n < horizon; ++n) CHECK(lin.eval(n) == a * s.eval(n) + b * t.eval(n));

        for (int d : {1, 2}) CHECK(mean_value_at_infinity(ball_to_sphere(s, d)) == mv);
    }
}

TEST_CASE("nonnegative sequences have nonnegative mean value") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> v(0, 9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> pattern;
        for (int i = 0; i < 1 + trial % 4; ++i) pattern.push_back(v(rng));
        auto s = EPSequence::periodic(5, 0, {}, pattern) + EPSequence::term(5, Rational(v(rng)), 1, -2);
        CHECK(mean_value_at_infinity(s) >= 0);
    }
}
