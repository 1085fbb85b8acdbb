#pragma once

#include "pdens/cone.hpp"
#include "pdens/density.hpp"

#include <string>
#include <vector>

namespace fixtures {

using namespace pdens;
using F = Formula1D;

inline Set1D coset_set(long p, const Rational& lambda, long n, const Rational& c = 0) {
    return normalize_1d(p, F::coset(c, PowerCoset{lambda, n}));
}

inline Set1D even_valuation(long p, const Rational& c = 0) {
    const auto& pc = PowerClasses::get(p, 2);
    std::vector<FormulaPtr> fs;
    for (long u = 0; u < pc.unit_classes(); ++u)
        fs.push_back(F::coset(c, PowerCoset{pc.representative({0, u}), 2}));
    return normalize_1d(p, F::any_of(fs));
}

inline Set1D ball(long p, const Rational& c, long k) { return normalize_1d(p, F::ord(c, Cmp::Ge, k)); }

inline RayCone rays(long p, const std::vector<std::pair<Point, PowerCoset>>& list, Point origin = {0, 0}) {
    RayCone r(p, std::move(origin), true);
    for (const auto& [u, c] : list) r.add_ray(u, c);
    return r;
}

inline DefinableSet graph(long p, const Set1D& base, const Rational& c, long k) {
    return DefinableSet::from(MonomialGraph{base, c, k, MonomialGraph::least_level(c, k, p)});
}

/// Two graphs over P_2 with slopes 1 and 2.
inline DefinableSet two_branch(long p) {
    auto a = coset_set(p, 1, 2);
    return graph(p, a, 1, 2).unite(graph(p, a, 2, 2));
}

struct Germ {
    std::string name;
    DefinableSet set;
    Point at;
};

/// Class-S germs used by the cone and Crofton suites.
inline std::vector<Germ> germ_corpus() {
    std::vector<Germ> g;
    g.push_back({"P_2 in Q_5", DefinableSet::from(coset_set(5, 1, 2)), {0}});
    g.push_back({"3 P_2 in Q_5", DefinableSet::from(coset_set(5, 3, 2)), {0}});
    g.push_back({"P_3 in Q_7", DefinableSet::from(coset_set(7, 1, 3)), {0}});
    g.push_back({"P_2 u 2P_2 in Q_5", DefinableSet::from(coset_set(5, 1, 2).unite(coset_set(5, 2, 2))), {0}});
    g.push_back({"even valuation", DefinableSet::from(even_valuation(5)), {0}});
    g.push_back({"P_2 off center", DefinableSet::from(coset_set(3, 1, 2, Rational(1, 3))), {Rational(1, 3)}});
    g.push_back({"ball interior", DefinableSet::from(ball(5, 0, 3)), {Rational(125)}});
    g.push_back({"P_3 at 0 p=3", DefinableSet::from(coset_set(3, 1, 3)), {0}});
    g.push_back({"ray P_2 (1,1)", DefinableSet::from(rays(5, {{{1, 1}, {1, 2}}})), {0, 0}});
    g.push_back({"three rays", DefinableSet::from(rays(5, {{{1, 0}, {1, 2}}, {{0, 1}, {2, 2}}, {{1, 3}, {1, 1}}})),
                 {0, 0}});
    g.push_back({"graph t^2 over P_2", graph(5, coset_set(5, 1, 2), 1, 2), {0, 0}});
    g.push_back({"two-branch graph", two_branch(5), {0, 0}});
    g.push_back({"graph off origin", graph(3, ball(3, 0, 1), 1, 2), {3, 9}});
    g.push_back({"box P_2 x P_2", DefinableSet::from(BoxSet{{coset_set(5, 1, 2), coset_set(5, 1, 2)}}), {0, 0}});
    g.push_back({"box even x P_2", DefinableSet::from(BoxSet{{even_valuation(3), coset_set(3, 1, 2)}}), {0, 0}});
    return g;
}

}  // namespace fixtures
