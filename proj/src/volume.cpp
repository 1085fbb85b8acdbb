#include "pdens/volume.hpp"

#include "pdens/errors.hpp"

#include <algorithm>
#include <limits>

namespace pdens {

namespace {

constexpr long kNoLevel = std::numeric_limits<long>::min() / 4;

// sum over m in [from, to] (to absent: infinity) with m = v mod n of q^-m (1 - 1/q) / h
Rational valuation_band_measure(long q, long n, long h, long v, long from, std::optional<long> to) {
    long first = from + mod(v - from, n);
    if (to && first > *to) return Rational(0);
    Rational shell = qpow(q, -first) * Rational(q - 1, q) / h;
    Rational ratio = qpow(q, -n);
    if (!to) return shell / (1 - ratio);
    long count = (*to - first) / n + 1;
    return shell * (1 - qpow(q, -n * count)) / (1 - ratio);
}

long cell_stable_level(const Cell1D& cell, long p, const Rational& x) {
    if (cell.is_point()) return kNoLevel;
    Rational d = x - cell.center;
    if (d == 0) {
        long s = kNoLevel;
        if (cell.lo) s = std::max(s, *cell.lo);
        if (cell.hi) s = std::max(s, *cell.hi + 1);
        return s;
    }
    return ord_nonzero(d, p) + PowerClasses::get(p, cell.coset.n).digits();
}

long set1d_stable_level(const Set1D& s, const Rational& x) {
    long level = kNoLevel;
    for (const auto& c : s.cells()) level = std::max(level, cell_stable_level(c, s.prime(), x));
    return level;
}

Rational ray_ball_volume(const RayCone& r, const Point& at, long j) {
    const long p = r.prime();
    Point y = at - r.origin();
    bool zero = std::all_of(y.begin(), y.end(), [](const Rational& c) { return c == 0; });
    Rational total;
    for (const auto& [u, s] : r.rays()) {
        Set1D line = class_set_as_set1d(p, s, Rational(0), false);
        if (zero) {
            total += set1d_ball_volume(line, Rational(0), j);
            continue;
        }
        std::size_t k = RayCone::pivot(u, p);
        Rational a = y[k];
        auto rho = ord_p(Point(scale(a, u) - y), p);
        if (rho && *rho < j) continue;
        total += set1d_ball_volume(line, a, j);
    }
    return total;
}

long ray_stable_level(const RayCone& r, const Point& at) {
    const long p = r.prime();
    Point y = at - r.origin();
    bool zero = std::all_of(y.begin(), y.end(), [](const Rational& c) { return c == 0; });
    long level = kNoLevel;
    if (zero) return level;
    for (const auto& [u, s] : r.rays()) {
        std::size_t k = RayCone::pivot(u, p);
        Rational a = y[k];
        auto rho = ord_p(Point(scale(a, u) - y), p);
        if (rho) level = std::max(level, *rho + 1);
        else level = std::max(level, ord_nonzero(a, p) + PowerClasses::get(p, s.n).digits());
    }
    return level;
}

Rational graph_ball_volume(const MonomialGraph& g, long p, const Point& at, long j) {
    auto o1 = ord_p(at[0], p);
    if (!o1 || *o1 >= g.m0) {
        Rational e = g.c;
        for (long i = 0; i < g.k; ++i) e *= at[0];
        e -= at[1];
        auto oe = ord_p(e, p);
        if (oe && *oe < j) return Rational(0);
        return set1d_ball_volume(g.base, at[0], std::max(j, g.m0));
    }
    if (j > *o1) return Rational(0);
    auto o2 = ord_p(at[1], p);
    if (o2 && *o2 < j) return Rational(0);
    return set1d_ball_volume(g.base, Rational(0), g.m0);
}

long graph_stable_level(const MonomialGraph& g, long p, const Point& at) {
    auto o1 = ord_p(at[0], p);
    if (!o1 || *o1 >= g.m0) {
        Rational e = g.c;
        for (long i = 0; i < g.k; ++i) e *= at[0];
        e -= at[1];
        auto oe = ord_p(e, p);
        if (oe) return *oe + 1;
        return std::max(g.m0, set1d_stable_level(g.base, at[0]));
    }
    return *o1 + 1;
}

}  // namespace

Rational cell_ball_volume(const Cell1D& cell, long p, const Rational& x, long j) {
    if (cell.is_point()) return Rational(0);
    const auto& pc = PowerClasses::get(p, cell.coset.n);
    const CosetClass target = pc.class_of(cell.coset.scale);
    const long n = cell.coset.n;
    const long h = pc.unit_classes();
    Rational d = x - cell.center;
    auto delta = ord_p(d, p);
    if (!delta || j <= *delta) {
        long from = cell.lo ? std::max(*cell.lo, j) : j;
        return valuation_band_measure(p, n, h, target.val, from, cell.hi);
    }
    // every point of B(x, j) has ord(t - c) = delta
    if ((cell.lo && *delta < *cell.lo) || (cell.hi && *delta > *cell.hi)) return Rational(0);
    if (mod(*delta, n) != target.val) return Rational(0);
    const int r = pc.digits();
    const long fixed = j - *delta;  // unit digits pinned by the ball
    if (fixed >= r) {
        CosetClass c = pc.class_of(d);
        return c == target ? qpow(p, -j) : Rational(0);
    }
    const long u0 = unit_residue(d, p, r).get_si();
    const long step = ipow(p, static_cast<unsigned long>(fixed)).get_si();
    const long free_count = ipow(p, static_cast<unsigned long>(r - fixed)).get_si();
    long hits = 0;
    for (long w = 0; w < free_count; ++w)
        if (pc.class_of_unit_residue(u0 + step * w).unit == target.unit) ++hits;
    return qpow(p, -j) * Rational(hits, free_count);
}

Rational set1d_ball_volume(const Set1D& s, const Rational& x, long j) {
    Rational total;
    for (const auto& c : s.cells()) total += cell_ball_volume(c, s.prime(), x, j);
    return total;
}

Rational ball_volume(const DefinableSet& x, const Point& at, long j, int d) {
    if (static_cast<int>(at.size()) != x.ambient()) throw InvalidArgument("point has the wrong dimension");
    if (d < 1) throw UnsupportedSet("densities of dimension 0 are outside the supported class");
    const long p = x.prime();
    Rational total;
    for (const auto& piece : x.pieces()) {
        int pd = piece_dimension(piece);
        if (pd < d) continue;
        if (pd > d)
            throw UnsupportedSet("a piece of dimension " + std::to_string(pd) + " has infinite " +
                                 std::to_string(d) + "-dimensional measure");
        total += std::visit(
            [&](const auto& s) -> Rational {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Set1D>) {
                    return set1d_ball_volume(s, at[0], j);
                } else if constexpr (std::is_same_v<T, BoxSet>) {
                    if (pd != x.ambient()) throw UnsupportedSet("lower-dimensional boxes have no supported measure");
                    Rational v(1);
                    for (std::size_t i = 0; i < s.factors.size() && v != 0; ++i)
                        v *= set1d_ball_volume(s.factors[i], at[i], j);
                    return v;
                } else if constexpr (std::is_same_v<T, RayCone>) {
                    return ray_ball_volume(s, at, j);
                } else {
                    return graph_ball_volume(s, p, at, j);
                }
            },
            piece);
    }
    return total;
}

Rational ball_volume(const StepFunction& f, const Point& at, long j) {
    Rational total;
    for (const auto& [w, s] : f.terms) total += w * ball_volume(s, at, j, f.dim);
    return total;
}

Rational volume_on_sphere(const DefinableSet& x, const Point& at, long n, int d) {
    return ball_volume(x, at, n, d) - ball_volume(x, at, n + 1, d);
}

long stable_level(const DefinableSet& x, const Point& at, int d) {
    const long p = x.prime();
    long level = kNoLevel;
    for (const auto& piece : x.pieces()) {
        if (piece_dimension(piece) != d) continue;
        long s = std::visit(
            [&](const auto& s) -> long {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Set1D>) {
                    return set1d_stable_level(s, at[0]);
                } else if constexpr (std::is_same_v<T, BoxSet>) {
                    long l = kNoLevel;
                    for (std::size_t i = 0; i < s.factors.size(); ++i)
                        l = std::max(l, set1d_stable_level(s.factors[i], at[i]));
                    return l;
                } else if constexpr (std::is_same_v<T, RayCone>) {
                    return ray_stable_level(s, at);
                } else {
                    return graph_stable_level(s, p, at);
                }
            },
            piece);
        level = std::max(level, s);
    }
    return level;
}

long volume_period(const DefinableSet& x) { return x.coset_lcm(); }

}  // namespace pdens
