#include "doctest.h"

#include "fixtures.hpp"
#include "pdens/crofton.hpp"
#include "pdens/errors.hpp"

#include <random>

using namespace pdens;
using namespace fixtures;

namespace {

const Point o2{0, 0};

DefinableSet full_line(long p, const Point& u, const Point& origin = {0, 0}) {
    RayCone r(p, origin, true);
    r.add_classes(u, ClassSet{1, {CosetClass{0, 0}}});
    return DefinableSet::from(std::move(r));
}

Matrix random_unimodular(std::mt19937& gen) {
    std::uniform_int_distribution<long> d(-4, 4);
    for (;;) {
        Matrix g{{d(gen), d(gen)}, {d(gen), d(gen)}};
        Rational det = determinant2(g);
        if (det == 1 || det == -1) return g;
    }
}

}  // namespace

TEST_CASE("invariant measure partition of P^1") {
    auto c = invariant_cell_measure(5, 1);
    CHECK(c.size() == 6);
    for (const auto& cell : c) CHECK(cell.measure == Rational(1, 6));
    Rational chart_a;
    for (const auto& cell : c)
        if (cell.chart_a) chart_a += cell.measure;
    CHECK(chart_a == Rational(5, 6));
    auto d = invariant_cell_measure(3, 2);
    CHECK(d.size() == 12);
    for (const auto& cell : d) CHECK(cell.measure == Rational(1, 12));
    for (long p : {3L, 5L, 7L})
        for (long k = 1; k <= 3; ++k) {
            Rational total;
            for (const auto& cell : invariant_cell_measure(p, k)) total += cell.measure;
            CHECK(total == 1);
        }
}

TEST_CASE("GL_2(Z_p) permutes cells of equal depth") {
    std::mt19937 gen(7);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix g = random_unimodular(gen);
        for (long k = 1; k <= 2; ++k) {
            auto cells = invariant_cell_measure(3, k);
            std::map<std::pair<bool, Integer>, int> hits;
            for (const auto& cell : cells) {
                // images of several points of the cell land in one cell of the same depth
                std::set<std::pair<bool, Integer>> targets;
                for (long e = 0; e < 3; ++e) {
                    Rational t = Rational(cell.center) + qpow(3, k) * e;
                    Point v = cell.chart_a ? Point{1, t} : Point{t, 1};
                    auto img = ProjectiveLine::of(pdens::apply(g, v), 3);
                    for (const auto& c2 : cells)
                        if (c2.contains(img, 3)) targets.insert({c2.chart_a, c2.center});
                }
                CHECK(targets.size() == 1);
                ++hits[*targets.begin()];
            }
            CHECK(hits.size() == cells.size());
        }
    }
}

TEST_CASE("projective lines and completions") {
    auto l = ProjectiveLine::of({3, 6}, 3);
    CHECK(l.v == Point{1, 2});
    auto m = ProjectiveLine::of({3, 1}, 3);
    CHECK(m.v == Point{3, 1});
    for (const auto& line : {l, m}) {
        Point w = line.completion();
        CHECK(line.v[0] * w[1] - line.v[1] * w[0] == 1);
        CHECK(line.project(line.v) == 0);
        CHECK(line.project(w) == 1);
    }
}

TEST_CASE("condition star") {
    auto ray = DefinableSet::from(rays(5, {{{1, 1}, {1, 2}}}));
    CHECK_FALSE(check_condition_star(ray, o2, ProjectiveLine::of({1, 1}, 5)));
    CHECK(check_condition_star(ray, o2, ProjectiveLine::of({1, 0}, 5)));
    auto g = graph(5, coset_set(5, 1, 2), 1, 2);
    CHECK(check_condition_star(g, o2, ProjectiveLine::of({0, 1}, 5)));
}

TEST_CASE("direct images") {
    auto ray = DefinableSet::from(rays(5, {{{1, 1}, {1, 2}}}));
    auto img = direct_image(StepFunction::indicator(ray, 1), o2, ProjectiveLine::of({1, 0}, 5));
    REQUIRE(img.image.terms.size() == 1);
    CHECK(img.image.terms[0].first == 1);
    // p_V(s (1,1)) = s for V = span(1, 0)
    const auto& s = std::get<Set1D>(img.image.terms[0].second.pieces()[0]);
    CHECK(same_set(s, coset_set(5, 1, 2)));
    CHECK_THROWS_AS(direct_image(StepFunction::indicator(ray, 1), o2, ProjectiveLine::of({1, 1}, 5)),
                    ConditionStarViolated);

    auto two = DefinableSet::from(rays(5, {{{1, 1}, {1, 2}}, {{1, -1}, {1, 2}}}));
    auto generic = direct_image(StepFunction::indicator(two, 1), o2, ProjectiveLine::of({1, 2}, 5));
    CHECK(generic.image.terms.size() == 2);
    CHECK(local_density(generic.image, {0}).density == Rational(1, 2));

    StepFunction zero;
    zero.p = 5;
    zero.ambient = 2;
    CHECK(direct_image(zero, o2, ProjectiveLine::of({1, 0}, 5)).image.terms.empty());

    auto g = graph(5, coset_set(5, 1, 2), 1, 2);
    auto gi = direct_image(StepFunction::indicator(g, 1), o2, ProjectiveLine::of({0, 1}, 5));
    CHECK(local_density(gi.image, {0}).density == Rational(1, 4));
    CHECK_THROWS_AS(direct_image(StepFunction::indicator(g, 1), o2, ProjectiveLine::of({1, 0}, 5)), UnsupportedSet);
}

TEST_CASE("Crofton integrals of cones") {
    auto line = full_line(5, {1, 0});
    auto r = crofton_integral(StepFunction::indicator(line, 1), o2);
    CHECK(r.value == 1);
    CHECK(r.bad_directions.size() == 1);
    CHECK(r.cells_evaluated > 0);

    auto axes = DefinableSet::from(rays(5, {{{1, 0}, {1, 2}}, {{0, 1}, {1, 2}}}));
    CHECK(crofton_integral(StepFunction::indicator(axes, 1), o2).value == Rational(1, 2));

    StepFunction twice;
    twice.add(2, line);
    twice.dim = 1;
    CHECK(crofton_integral(twice, o2).value == 2);

    CHECK_THROWS_AS(crofton_integral(StepFunction::indicator(graph(5, coset_set(5, 1, 2), 1, 2), 1), o2), NonCone);
}

TEST_CASE("kappa calibration on random lines") {
    std::mt19937 gen(11);
    std::uniform_int_distribution<long> d(-30, 30);
    for (long p : {3L, 5L})
        for (int i = 0; i < 10; ++i) {
            Point u{d(gen), d(gen)};
            if (u[0] == 0 && u[1] == 0) u[0] = 1;
            CHECK(crofton_integral(StepFunction::indicator(full_line(p, u), 1), o2).value == 1);
        }
}

TEST_CASE("Crofton integral is linear") {
    auto a = DefinableSet::from(rays(5, {{{1, 2}, {1, 2}}}));
    auto b = DefinableSet::from(rays(5, {{{1, 3}, {2, 2}}, {{5, 1}, {1, 1}}}));
    auto ia = crofton_integral(StepFunction::indicator(a, 1), o2).value;
    auto ib = crofton_integral(StepFunction::indicator(b, 1), o2).value;
    StepFunction f;
    f.add(Rational(2, 3), a).add(Rational(-5, 7), b);
    f.dim = 1;
    CHECK(crofton_integral(f, o2).value == Rational(2, 3) * ia - Rational(5, 7) * ib);
}

TEST_CASE("verify_crofton") {
    auto tb = verify_crofton(two_branch(5), o2);
    CHECK(tb.lhs == Rational(1, 2));
    CHECK(tb.equal);
    auto ray = verify_crofton(DefinableSet::from(rays(5, {{{1, 1}, {1, 2}}})), o2);
    CHECK(ray.lhs == Rational(1, 4));
    CHECK(ray.rhs == Rational(1, 4));
    auto pi = verify_crofton(full_line(3, {2, 1}), o2);
    CHECK(pi.lhs == 1);
    CHECK(pi.equal);
    // a ray germ at an interior point is a full line
    auto inner = verify_crofton(DefinableSet::from(rays(3, {{{1, 1}, {1, 1}}})), {1, 1});
    CHECK(inner.lhs == 1);
    CHECK(inner.equal);
    auto off = verify_crofton(graph(3, ball(3, 0, 1), 1, 2), {3, 9});
    CHECK(off.equal);
}

TEST_CASE("GL_2 invariance of densities and Crofton integrals") {
    std::mt19937 gen(3);
    std::vector<DefinableSet> inputs{
        DefinableSet::from(rays(5, {{{1, 1}, {1, 2}}})),
        DefinableSet::from(rays(3, {{{1, 0}, {1, 2}}, {{1, 1}, {2, 2}}, {{3, 1}, {1, 1}}})),
        full_line(5, {2, 7}),
    };
    for (int i = 0; i < 6; ++i)
        for (const auto& x : inputs) {
            Matrix g = random_unimodular(gen);
            auto y = transform(x, g);
            CHECK(density(y, o2) == density(x, o2));
            CHECK(crofton_integral(StepFunction::indicator(y, 1), o2).value ==
                  crofton_integral(StepFunction::indicator(x, 1), o2).value);
        }
}

TEST_CASE("Monte Carlo diagnostic is close to the exact value") {
    auto axes = DefinableSet::from(rays(5, {{{1, 0}, {1, 2}}, {{0, 1}, {1, 2}}}));
    double mc = crofton_monte_carlo(StepFunction::indicator(axes, 1), o2, 200);
    CHECK(mc == doctest::Approx(0.5).epsilon(0.05));
}
