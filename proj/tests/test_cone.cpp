#include "doctest.h"

#include "fixtures.hpp"
#include "pdens/errors.hpp"

using namespace pdens;
using namespace fixtures;

namespace {

ClassSet classes_of(const ConeWithMultiplicity& c, const Point& u) {
    ClassSet s{1, {}};
    auto it = c.rays.find(u);
    if (it == c.rays.end()) return s;
    s.n = it->second.n;
    for (const auto& [k, w] : it->second.weight) s.classes.insert(k);
    return s;
}

std::set<Rational> weights_of(const ConeWithMultiplicity& c) {
    std::set<Rational> out;
    for (const auto& [u, w] : c.rays)
        for (const auto& [k, x] : w.weight) out.insert(x);
    if (c.product)
        for (const auto& [t, x] : c.product->weight) out.insert(x);
    return out;
}

}  // namespace

TEST_CASE("tangent cones of sets in K") {
    const auto p2 = Subgroup::power(5, 2);
    auto x = DefinableSet::from(coset_set(5, 1, 2).intersect(ball(5, 0, 2)));
    auto c = tangent_cone(x, {0}, p2);
    CHECK(c.apex);
    CHECK(classes_of(c, {1}) == ClassSet{2, {CosetClass{0, 0}}});

    auto interior = tangent_cone(DefinableSet::from(ball(5, 0, 3)), {Rational(125)}, p2);
    CHECK(classes_of(interior, {1}) == ClassSet{1, {CosetClass{0, 0}}});

    auto outside = tangent_cone(x, {Rational(2)}, p2);
    CHECK(outside.empty());

    // a point of X that is isolated gives the apex only
    auto pt = DefinableSet::from(Set1D::from_cells(5, {Cell1D::point(Rational(3))}));
    auto apex = tangent_cone(pt, {Rational(3)}, p2);
    CHECK(apex.apex);
    CHECK(apex.rays.empty());
    CHECK(apex.dimension() == 0);
}

TEST_CASE("tangent cone of a monomial graph collapses onto the horizontal axis") {
    const auto p2 = Subgroup::power(5, 2);
    auto c = tangent_cone(graph(5, coset_set(5, 1, 2), 1, 2), {0, 0}, p2);
    REQUIRE(c.rays.size() == 1);
    CHECK(c.rays.begin()->first == Point{1, 0});
    CHECK(classes_of(c, {1, 0}) == ClassSet{2, {CosetClass{0, 0}}});
    // every ray lies in |y| <= |x| / q
    for (const auto& germ : germ_corpus()) {
        bool is_graph = std::holds_alternative<MonomialGraph>(germ.set.pieces().front());
        if (!is_graph) continue;
        auto cone = tangent_cone(germ.set, germ.at, Subgroup::power(germ.set.prime(), 2));
        for (const auto& [u, w] : cone.rays) {
            auto o = ord_p(u[1], germ.set.prime());
            CHECK((!o || *o >= 1));
        }
    }
}

TEST_CASE("tangent cone at a non-origin point of a graph follows the derivative") {
    auto c = tangent_cone(graph(3, ball(3, 0, 1), 1, 2), {3, 9}, Subgroup::power(3, 2));
    REQUIRE(c.rays.size() == 1);
    CHECK(c.rays.begin()->first == Point{1, 6});
    CHECK(classes_of(c, {1, 6}) == ClassSet{1, {CosetClass{0, 0}}});
}

TEST_CASE("specialization multiplicities") {
    const auto p2 = Subgroup::power(5, 2);
    auto single = sc_multiplicity(DefinableSet::from(coset_set(5, 1, 2)), {0}, p2);
    CHECK(weights_of(single) == std::set<Rational>{1});

    auto two = sc_multiplicity(two_branch(5), {0, 0}, p2);
    REQUIRE(two.rays.size() == 1);
    CHECK(weights_of(two) == std::set<Rational>{2});
    CHECK(classes_of(two, {1, 0}) == ClassSet{2, {CosetClass{0, 0}}});

    auto disjoint = sc_multiplicity(DefinableSet::from(coset_set(5, 1, 2).unite(coset_set(5, 2, 2))), {0}, p2);
    CHECK(weights_of(disjoint) == std::set<Rational>{1});
    CHECK(classes_of(disjoint, {1}).classes.size() == 2);

    // a coarser group spreads the branch over its saturation
    auto spread = sc_multiplicity(DefinableSet::from(coset_set(5, 1, 2)), {0}, Subgroup::power(5, 1));
    CHECK(weights_of(spread) == std::set<Rational>{Rational(1, 4)});
}

TEST_CASE("single-branch germs have multiplicity 1 for a fine enough group") {
    for (const auto& germ : germ_corpus()) {
        if (germ.name == "two-branch graph") continue;
        long n = germ.set.coset_lcm() * 2;
        auto c = sc_multiplicity(germ.set, germ.at, Subgroup::power(germ.set.prime(), n));
        for (const auto& w : weights_of(c)) CHECK_MESSAGE(w == 1, germ.name);
    }
}

TEST_CASE("nu specialization is linear") {
    const auto p2 = Subgroup::power(5, 2);
    auto a = DefinableSet::from(coset_set(5, 1, 2));
    auto b = DefinableSet::from(coset_set(5, 2, 2));
    StepFunction f;
    f.add(1, a);
    CHECK(same_support(nu_specialization(f, {0}, p2), sc_multiplicity(a, {0}, p2)));
    CHECK(nu_specialization(f, {0}, p2).rays == sc_multiplicity(a, {0}, p2).rays);

    StepFunction h;
    h.add(Rational(1, 2), a).add(Rational(1, 2), b);
    auto nu = nu_specialization(h, {0}, p2);
    CHECK(weights_of(nu) == std::set<Rational>{Rational(1, 2)});
    CHECK(classes_of(nu, {1}).classes.size() == 2);

    StepFunction zero;
    zero.p = 5;
    CHECK(nu_specialization(zero, {0}, p2).empty());
}

TEST_CASE("tangent cone identities") {
    const auto p2 = Subgroup::power(5, 2);
    auto x = coset_set(5, 1, 2);
    auto y = even_valuation(5);
    auto cu = tangent_cone(DefinableSet::from(x.unite(y)), {0}, p2);
    auto cx = tangent_cone(DefinableSet::from(x), {0}, p2);
    auto cy = tangent_cone(DefinableSet::from(y), {0}, p2);
    ClassSet joined = class_union(5, classes_of(cx, {1}), classes_of(cy, {1}));
    CHECK(classes_of(cu, {1}) == joined);
    for (long n = 0; n <= 4; ++n)
        CHECK(same_support(cx, tangent_cone(DefinableSet::from(x.intersect(ball(5, 0, n))), {0}, p2)));
    // a smaller group gives a smaller cone
    auto wide = tangent_cone(DefinableSet::from(x), {0}, Subgroup::power(5, 1));
    CHECK(classes_of(wide, {1}) == ClassSet{1, {CosetClass{0, 0}}});
}

TEST_CASE("saturation decomposition over coset representatives") {
    // C^P_1 = union over representatives mu of P_1/P_2 of mu C^P_2
    auto x = DefinableSet::from(coset_set(5, 1, 2));
    auto fine = classes_of(tangent_cone(x, {0}, Subgroup::power(5, 2)), {1});
    auto coarse = classes_of(tangent_cone(x, {0}, Subgroup::power(5, 1)), {1});
    ClassSet acc{1, {}};
    for (const auto& c : PowerClasses::get(5, 2).all())
        acc = class_union(5, acc, class_scaled(5, fine, PowerClasses::get(5, 2).representative(c)));
    CHECK(acc == coarse);
}

TEST_CASE("distinguished cone stabilization") {
    auto x = DefinableSet::from(coset_set(5, 1, 2));
    CHECK(distinguished_check(x, {0}, Subgroup::power(5, 2), {Subgroup::power(5, 4)}));
    auto k = DefinableSet::from(coset_set(5, 1, 1));
    CHECK(distinguished_check(k, {0}, Subgroup::power(5, 1), {Subgroup::power(5, 2)}));
    CHECK(distinguished_check(graph(5, coset_set(5, 1, 2), 1, 2), {0, 0}, Subgroup::power(5, 2),
                              {Subgroup::power(5, 6)}));
    // P_2 is not a P_1-cone
    CHECK_FALSE(distinguished_check(x, {0}, Subgroup::power(5, 1), {Subgroup::power(5, 2)}));
}

TEST_CASE("germ density equals specialization cone density on the corpus") {
    for (const auto& germ : germ_corpus()) {
        long n = germ.set.coset_lcm();
        auto r = theorem_mt_check(germ.set, germ.at, Subgroup::power(germ.set.prime(), n));
        CHECK_MESSAGE(r.equal, germ.name);
        CHECK_MESSAGE(r.lhs == r.rhs, germ.name);
    }
    auto ev = theorem_mt_check(DefinableSet::from(even_valuation(5)), {0}, Subgroup::power(5, 2));
    CHECK(ev.lhs == Rational(1, 2));
    CHECK(ev.rhs == Rational(1, 2));
    auto tb = theorem_mt_check(two_branch(5), {0, 0}, Subgroup::power(5, 2));
    CHECK(tb.lhs == Rational(1, 2));
    CHECK(tb.rhs == Rational(1, 2));
    auto pt = DefinableSet::from(Set1D::from_cells(5, {Cell1D::point(Rational(3))}));
    CHECK_THROWS_AS(theorem_mt_check(pt, {3}, Subgroup::power(5, 1)), UnsupportedSet);
}

TEST_CASE("deformation cross-check contains the branch multiplicity") {
    const auto p2 = Subgroup::power(5, 2);
    auto x = DefinableSet::from(coset_set(5, 1, 2));
    auto r = sc_cross_check(x, {0}, p2, {1}, 12);
    CHECK(r.interval.contains(1));
    CHECK(r.interval.hi - r.interval.lo < Rational(1, 1000));

    auto off = sc_cross_check(x, {0}, p2, {2}, 12);
    CHECK(off.interval.contains(0));

    auto two = sc_cross_check(two_branch(5), {0, 0}, p2, {1, 0}, 12);
    CHECK(two.interval.contains(2));

    auto spread = sc_cross_check(x, {0}, Subgroup::power(5, 1), {2}, 12);
    CHECK(spread.interval.contains(Rational(1, 4)));

    CHECK_THROWS_AS(sc_cross_check(x, {0}, p2, {1}, 2), DepthTooSmall);
}
