#include "doctest.h"

#include "pdens/errors.hpp"
#include "pdens/set1d.hpp"
#include "pdens/sets.hpp"

#include <random>

using namespace pdens;

namespace {

using F = Formula1D;

FormulaPtr random_formula(std::mt19937_64& rng, long p, int depth) {
    static const Rational centers[] = {Rational(0), Rational(1), Rational(-3), Rational(1, 5), Rational(26)};
    std::uniform_int_distribution<int> pick(0, 9);
    int choice = depth <= 0 ? pick(rng) % 4 : pick(rng);
    const Rational& c = centers[std::uniform_int_distribution<int>(0, 4)(rng)];
    switch (choice) {
        case 0:
        case 1: {
            auto cmp = static_cast<Cmp>(std::uniform_int_distribution<int>(0, 4)(rng));
            return F::ord(c, cmp, std::uniform_int_distribution<long>(-2, 3)(rng));
        }
        case 2:
        case 3: {
            long n = std::uniform_int_distribution<long>(1, 4)(rng);
            if (n == 4 && p == 7) n = 2;
            Rational lambda(std::uniform_int_distribution<long>(1, 12)(rng));
            if (pick(rng) == 0) lambda = 0;
            return F::coset(c, PowerCoset{lambda, lambda == 0 ? 1 : n});
        }
        case 4:
        case 5: return F::conj(random_formula(rng, p, depth - 1), random_formula(rng, p, depth - 1));
        case 6:
        case 7: return F::disj(random_formula(rng, p, depth - 1), random_formula(rng, p, depth - 1));
        default: return F::negate(random_formula(rng, p, depth - 1));
    }
}

Rational random_point(std::mt19937_64& rng, long p) {
    static const Rational centers[] = {Rational(0), Rational(1), Rational(-3), Rational(1, 5), Rational(26)};
    const Rational& c = centers[std::uniform_int_distribution<int>(0, 4)(rng)];
    if (std::uniform_int_distribution<int>(0, 40)(rng) == 0) return c;
    long v = std::uniform_int_distribution<long>(-4, 6)(rng);
    long u = std::uniform_int_distribution<long>(1, 2000)(rng);
    if (u % p == 0) ++u;
    return c + qpow(p, v) * Rational(u * (std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1));
}

}  // namespace

TEST_CASE("normalize_1d on the basic examples") {
    auto s = normalize_1d(5, F::ord(Rational(0), Cmp::Ge, 0));
    int open = 0, points = 0;
    for (const auto& c : s.cells()) (c.is_point() ? points : open)++;
    CHECK(open == 1);
    CHECK(points == 1);
    CHECK(s.cells()[0].coset.n == 1);

    auto sq = normalize_1d(5, F::conj(F::coset(Rational(0), PowerCoset{Rational(1), 2}), F::ord(Rational(0), Cmp::Ge, 2)));
    CHECK(sq.contains(Rational(25)));
    CHECK_FALSE(sq.contains(Rational(5)));
    CHECK_FALSE(sq.contains(Rational(4)));
    CHECK(sq.contains(Rational(625 * 4)));

    auto non = normalize_1d(5, F::negate(F::coset(Rational(0), PowerCoset{Rational(1), 2})));
    int open_non = 0;
    for (const auto& c : non.cells())
        if (!c.is_point()) ++open_non;
    CHECK(open_non == 3);
    auto p2 = normalize_1d(5, F::coset(Rational(0), PowerCoset{Rational(1), 2}));
    auto all = normalize_1d(5, F::negate(F::coset(Rational(0), PowerCoset{Rational(0), 1})));
    CHECK(same_set(p2.unite(non).minus(Set1D::from_disjoint_cells(5, {Cell1D::point(Rational(0))})), all));
    CHECK(p2.intersect(non).is_empty());
}

TEST_CASE("normalize_1d soundness on random formulas") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        long p = (i % 3 == 0) ? 3 : (i % 3 == 1 ? 5 : 7);
        auto f = random_formula(rng, p, 3);
        auto s = normalize_1d(p, f);
        for (int k = 0; k < 500; ++k) {
            Rational t = random_point(rng, p);
            bool expected = f->eval(t, p);
            if (s.contains(t) != expected) {
                FAIL("formula " << f->to_string() << " at t = " << to_string(t) << " p = " << p);
            }
        }
    }
}

TEST_CASE("normalize_1d cells are pairwise disjoint on exhaustive samples") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 30; ++i) {
        long p = (i % 2) ? 3 : 5;
        auto s = normalize_1d(p, random_formula(rng, p, 3));
        for (const auto& c : s.formula()->centers()) {
            for (long v = -6; v <= 6; ++v)
                for (long u = 1; u < p * p * p; ++u) {
                    if (u % p == 0) continue;
                    Rational t = c + qpow(p, v) * u;
                    int hits = 0;
                    for (const auto& cell : s.cells())
                        if (cell.contains(t, p)) ++hits;
                    CHECK(hits <= 1);
                }
        }
    }
}

TEST_CASE("normalization is idempotent") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        auto s = normalize_1d(5, random_formula(rng, 5, 3));
        auto again = normalize_1d(5, s.formula());
        CHECK(same_set(s, again));
        CHECK(again.cells().size() <= s.cells().size() + 0);
    }
}

TEST_CASE("lambda-cone recognition") {
    auto p2 = normalize_1d(5, F::coset(Rational(0), PowerCoset{Rational(1), 2}));
    CHECK(is_lambda_cone(p2, Subgroup::power(5, 2), Rational(0)));
    auto truncated = normalize_1d(5, F::conj(F::coset(Rational(0), PowerCoset{Rational(1), 2}), F::ord(Rational(0), Cmp::Ge, 2)));
    CHECK_FALSE(is_lambda_cone(truncated, Subgroup::power(5, 2), Rational(0)));
    auto two = normalize_1d(5, F::disj(F::coset(Rational(0), PowerCoset{Rational(2), 2}), F::coset(Rational(0), PowerCoset{Rational(5), 2})));
    CHECK(is_lambda_cone(two, Subgroup::power(5, 4), Rational(0)));
    CHECK_FALSE(is_lambda_cone(two, Subgroup::power(5, 1), Rational(0)));

    // classification: a cone is the union of its classes
    for (const auto& c : two.cells()) {
        if (c.is_point()) continue;
        CHECK(c.center == 0);
        CHECK_FALSE(c.lo);
        CHECK_FALSE(c.hi);
    }
}

TEST_CASE("local cone radius") {
    auto p2 = normalize_1d(5, F::coset(Rational(0), PowerCoset{Rational(1), 2}));
    CHECK(local_cone_radius(p2, Rational(0), Subgroup::power(5, 2)) == 0);
    auto shifted = p2.affine_image(Rational(5), Rational(1));  // 1 + 5 P_2
    long g = local_cone_radius(shifted, Rational(1), Subgroup::power(5, 2));
    CHECK(g >= 0);
    // scanning by hand: below g the truncation is not a local cone
    for (long lower = 0; lower < g; ++lower) {
        auto ball = normalize_1d(5, F::ord(Rational(1), Cmp::Ge, lower));
        CHECK_FALSE(is_lambda_cone(shifted.intersect(ball), Subgroup::power(5, 2), Rational(1)));
    }
    auto far = p2.affine_image(Rational(1), Rational(1, 5));
    long r = local_cone_radius(far, Rational(3), Subgroup::power(5, 2));
    auto ball = normalize_1d(5, F::ord(Rational(3), Cmp::Ge, r));
    CHECK(far.intersect(ball).is_empty());
    CHECK_THROWS_AS(local_cone_radius(p2, Rational(0), Subgroup::power(5, 1)), InvalidSubgroup);
}

TEST_CASE("local cone radius terminates at centers and boundary points") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 15; ++i) {
        auto s = normalize_1d(3, random_formula(rng, 3, 2));
        Subgroup g = Subgroup::power(3, s.coset_lcm());
        for (const auto& c : s.cells()) {
            CHECK_NOTHROW(local_cone_radius(s, c.center, g));
            if (c.lo && !c.is_point()) CHECK_NOTHROW(local_cone_radius(s, c.center + qpow(3, *c.lo), g));
        }
    }
}

TEST_CASE("member on ray cones and graphs") {
    RayCone r(5, {Rational(0), Rational(0)}, true);
    r.add_ray({Rational(1), Rational(1)}, PowerCoset{Rational(1), 2});
    auto x = DefinableSet::from(r);
    CHECK(x.contains({Rational(4), Rational(4)}));
    CHECK_FALSE(x.contains({Rational(4), Rational(1)}));
    CHECK_FALSE(x.contains({Rational(2), Rational(2)}));
    auto base = normalize_1d(5, F::coset(Rational(0), PowerCoset{Rational(1), 1}));
    auto g = DefinableSet::from(MonomialGraph{base, Rational(1), 2, 1});
    CHECK(g.contains({Rational(5), Rational(25)}));
    CHECK_FALSE(g.contains({Rational(1), Rational(1)}));  // below the germ level
    CHECK(MonomialGraph::least_level(Rational(1), 2, 5) == 1);
    CHECK(MonomialGraph::least_level(Rational(25), 3, 5) == 0);
    CHECK(MonomialGraph::least_level(Rational(1, 25), 2, 5) == 3);
    CHECK_THROWS_AS(DefinableSet::from(MonomialGraph{base, Rational(1), 2, 0}), InvalidArgument);
}

TEST_CASE("ray merging") {
    RayCone r(5, {Rational(0), Rational(0)}, false);
    r.add_ray({Rational(1), Rational(1)}, PowerCoset{Rational(1), 2});
    r.add_ray({Rational(2), Rational(2)}, PowerCoset{Rational(1), 2});  // 2 P_2 along (1,1)
    r.add_ray({Rational(5), Rational(5)}, PowerCoset{Rational(1), 2});
    r.add_ray({Rational(10), Rational(10)}, PowerCoset{Rational(1), 2});
    REQUIRE(r.rays().size() == 1);
    CHECK(r.rays().begin()->second.n == 1);  // the whole punctured line
}
