#include "pdens/sets.hpp"

#include "pdens/errors.hpp"

#include <algorithm>

namespace pdens {

ClassSet minimized(long p, const ClassSet& s) {
    auto [m, classes] = minimize_classes(p, s.n, s.classes);
    return {m, classes};
}

ClassSet lifted(long p, const ClassSet& s, long n) { return {n, lift_classes(p, s.n, s.classes, n)}; }

ClassSet class_union(long p, const ClassSet& a, const ClassSet& b) {
    long n = lcm(a.n, b.n);
    ClassSet out = lifted(p, a, n);
    for (const auto& c : lifted(p, b, n).classes) out.classes.insert(c);
    return minimized(p, out);
}

ClassSet class_scaled(long p, const ClassSet& s, const Rational& a) {
    const auto& pc = PowerClasses::get(p, s.n);
    CosetClass shift = pc.class_of(a);
    ClassSet out{s.n, {}};
    for (const auto& c : s.classes) out.classes.insert(pc.add(c, shift));
    return out;
}

ClassSet class_saturated(long p, const ClassSet& s, const Subgroup& group) {
    long n = lcm(s.n, group.exponent());
    const auto& pc = PowerClasses::get(p, n);
    auto base = lift_classes(p, s.n, s.classes, n);
    auto g = group.classes_at(n);
    ClassSet out{n, {}};
    for (const auto& a : base)
        for (const auto& b : g) out.classes.insert(pc.add(a, b));
    return minimized(p, out);
}

Set1D class_set_as_set1d(long p, const ClassSet& s, const Rational& center, bool with_center) {
    const auto& pc = PowerClasses::get(p, s.n);
    std::vector<Cell1D> cells;
    for (const auto& c : s.classes) cells.emplace_back(center, PowerCoset{pc.representative(c), s.n});
    if (with_center) cells.push_back(Cell1D::point(center));
    return Set1D::from_disjoint_cells(p, std::move(cells));
}

RayCone::RayCone(long p, Point origin, bool apex) : p_(p), origin_(std::move(origin)), apex_(apex) {
    if (origin_.empty()) throw InvalidArgument("ray cone needs an ambient dimension");
}

std::size_t RayCone::pivot(const Point& u, long p) {
    std::optional<long> best;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto v = ord_p(u[i], p);
        if (v && (!best || *v < *best)) {
            best = v;
            idx = i;
        }
    }
    if (!best) throw InvalidArgument("ray direction must be nonzero");
    return idx;
}

Point RayCone::canonical_direction(const Point& u, long p, Rational* scale) {
    std::size_t k = pivot(u, p);
    Rational s = u[k];
    Point out;
    for (const auto& c : u) out.push_back(Rational(c / s));
    if (scale) *scale = s;
    return out;
}

void RayCone::add_ray(const Point& direction, const PowerCoset& coset) {
    if (coset.scale == 0) throw InvalidArgument("a ray coset needs a nonzero scale");
    const auto& pc = PowerClasses::get(p_, coset.n);
    add_classes(direction, ClassSet{coset.n, {pc.class_of(coset.scale)}});
}

void RayCone::add_classes(const Point& direction, const ClassSet& classes) {
    if (direction.size() != origin_.size()) throw InvalidArgument("ray direction has the wrong dimension");
    if (classes.classes.empty()) return;
    Rational scale;
    Point u = canonical_direction(direction, p_, &scale);
    ClassSet shifted = minimized(p_, class_scaled(p_, classes, scale));
    auto it = rays_.find(u);
    if (it == rays_.end())
        rays_.emplace(u, shifted);
    else
        it->second = class_union(p_, it->second, shifted);
}

std::vector<std::pair<Point, PowerCoset>> RayCone::ray_list() const {
    std::vector<std::pair<Point, PowerCoset>> out;
    for (const auto& [u, s] : rays_) {
        const auto& pc = PowerClasses::get(p_, s.n);
        for (const auto& c : s.classes) out.push_back({u, PowerCoset{pc.representative(c), s.n}});
    }
    return out;
}

bool RayCone::contains(const Point& z) const {
    if (z.size() != origin_.size()) throw InvalidArgument("point has the wrong dimension");
    Point y = z - origin_;
    bool zero = std::all_of(y.begin(), y.end(), [](const Rational& c) { return c == 0; });
    if (zero) return apex_;
    for (const auto& [u, s] : rays_) {
        Rational t = y[pivot(u, p_)];
        if (t == 0) continue;
        if (scale(t, u) != y) continue;
        const auto& pc = PowerClasses::get(p_, s.n);
        if (s.classes.count(pc.class_of(t))) return true;
    }
    return false;
}

long RayCone::coset_lcm() const {
    long n = 1;
    for (const auto& [u, s] : rays_) n = lcm(n, s.n);
    return n;
}

long MonomialGraph::least_level(const Rational& c, long k, long p) {
    if (k < 2) throw InvalidArgument("monomial graph exponent must be at least 2");
    long oc = ord_nonzero(c, p);
    // smallest m with oc + (k-1) m >= 1
    long need = 1 - oc;
    long m = need >= 0 ? (need + k - 2) / (k - 1) : -((-need) / (k - 1));
    while (oc + (k - 1) * (m - 1) >= 1) --m;
    while (oc + (k - 1) * m < 1) ++m;
    return m;
}

int piece_dimension(const Piece& piece) {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Set1D>) {
                return s.dimension();
            } else if constexpr (std::is_same_v<T, BoxSet>) {
                int d = 0;
                for (const auto& f : s.factors) {
                    int fd = f.dimension();
                    if (fd < 0) return -1;
                    d += fd;
                }
                return d;
            } else if constexpr (std::is_same_v<T, RayCone>) {
                if (!s.rays().empty()) return 1;
                return s.apex() ? 0 : -1;
            } else {
                return s.base.dimension();
            }
        },
        piece);
}

int piece_ambient(const Piece& piece) {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Set1D>) return 1;
            else if constexpr (std::is_same_v<T, BoxSet>) return static_cast<int>(s.factors.size());
            else if constexpr (std::is_same_v<T, RayCone>) return s.ambient();
            else return 2;
        },
        piece);
}

DefinableSet DefinableSet::from(Set1D s) {
    DefinableSet d(s.prime(), 1);
    d.add(std::move(s));
    return d;
}

DefinableSet DefinableSet::from(BoxSet b) {
    if (b.factors.empty()) throw InvalidArgument("box needs at least one factor");
    long p = b.factors.front().prime();
    if (b.factors.size() == 1) return from(b.factors.front());
    DefinableSet d(p, static_cast<int>(b.factors.size()));
    d.add(std::move(b));
    return d;
}

DefinableSet DefinableSet::from(RayCone r) {
    DefinableSet d(r.prime(), r.ambient());
    d.add(std::move(r));
    return d;
}

DefinableSet DefinableSet::from(MonomialGraph g) {
    long p = g.base.prime();
    long least = MonomialGraph::least_level(g.c, g.k, p);
    if (g.m0 < least)
        throw InvalidArgument("graph level m0 = " + std::to_string(g.m0) + " is below the least admissible level " +
                              std::to_string(least));
    DefinableSet d(p, 2);
    d.add(std::move(g));
    return d;
}

int DefinableSet::dimension() const {
    int d = -1;
    for (const auto& pc : pieces_) d = std::max(d, piece_dimension(pc));
    return d;
}

bool DefinableSet::contains(const Point& z) const {
    if (static_cast<int>(z.size()) != ambient_) throw InvalidArgument("point has the wrong dimension");
    for (const auto& piece : pieces_) {
        bool in = std::visit(
            [&](const auto& s) -> bool {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Set1D>) {
                    return s.contains(z[0]);
                } else if constexpr (std::is_same_v<T, BoxSet>) {
                    for (std::size_t i = 0; i < z.size(); ++i)
                        if (!s.factors[i].contains(z[i])) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, RayCone>) {
                    return s.contains(z);
                } else {
                    if (!s.base.contains(z[0])) return false;
                    auto v = ord_p(z[0], p_);
                    if (v && *v < s.m0) return false;
                    Rational y = s.c;
                    for (long i = 0; i < s.k; ++i) y *= z[0];
                    return y == z[1];
                }
            },
            piece);
        if (in) return true;
    }
    return false;
}

void DefinableSet::add(Piece piece) {
    if (piece_ambient(piece) != ambient_) throw InvalidArgument("pieces live in different ambient spaces");
    for (auto& existing : pieces_) {
        if (auto* a = std::get_if<Set1D>(&existing)) {
            if (auto* b = std::get_if<Set1D>(&piece)) {
                *a = a->unite(*b);
                return;
            }
        }
        if (auto* a = std::get_if<RayCone>(&existing)) {
            if (auto* b = std::get_if<RayCone>(&piece)) {
                if (a->origin() == b->origin()) {
                    if (b->apex()) a->set_apex(true);
                    for (const auto& [u, s] : b->rays()) a->add_classes(u, s);
                    return;
                }
                for (const auto& [u, s] : b->rays()) {
                    (void)s;
                    if (!a->rays().count(u)) continue;
                    Point d = b->origin() - a->origin();
                    Rational t = d[RayCone::pivot(u, p_)];
                    if (scale(t, u) == d)
                        throw UnsupportedSet("ray cones with different origins share a line");
                }
            }
        }
        if (auto* a = std::get_if<MonomialGraph>(&existing)) {
            if (auto* b = std::get_if<MonomialGraph>(&piece)) {
                if (a->c == b->c && a->k == b->k) {
                    if (a->m0 != b->m0) throw UnsupportedSet("overlapping graphs with different germ levels");
                    a->base = a->base.unite(b->base);
                    return;
                }
            }
        }
        if (auto* a = std::get_if<BoxSet>(&existing)) {
            if (auto* b = std::get_if<BoxSet>(&piece)) {
                bool disjoint = false;
                for (std::size_t i = 0; i < a->factors.size(); ++i)
                    if (a->factors[i].intersect(b->factors[i]).is_empty()) disjoint = true;
                if (!disjoint) throw UnsupportedSet("overlapping boxes");
            }
        }
    }
    pieces_.push_back(std::move(piece));
}

DefinableSet DefinableSet::unite(const DefinableSet& other) const {
    if (other.p_ != p_) throw InvalidArgument("prime mismatch");
    if (other.ambient_ != ambient_) throw InvalidArgument("ambient dimension mismatch");
    DefinableSet out = *this;
    for (const auto& piece : other.pieces_) out.add(piece);
    return out;
}

long DefinableSet::coset_lcm() const {
    long n = 1;
    for (const auto& piece : pieces_) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Set1D>) n = lcm(n, s.coset_lcm());
                else if constexpr (std::is_same_v<T, BoxSet>) {
                    for (const auto& f : s.factors) n = lcm(n, f.coset_lcm());
                } else if constexpr (std::is_same_v<T, RayCone>) n = lcm(n, s.coset_lcm());
                else n = lcm(n, s.base.coset_lcm());
            },
            piece);
    }
    return n;
}

StepFunction StepFunction::indicator(const DefinableSet& x) { return indicator(x, x.dimension()); }

StepFunction StepFunction::indicator(const DefinableSet& x, int dim) {
    StepFunction f;
    f.p = x.prime();
    f.ambient = x.ambient();
    f.dim = dim;
    f.terms.push_back({Rational(1), x});
    return f;
}

StepFunction& StepFunction::add(const Rational& w, const DefinableSet& x) {
    if (!terms.empty() && (x.prime() != p || x.ambient() != ambient))
        throw InvalidArgument("step function terms must share prime and ambient space");
    if (terms.empty()) {
        p = x.prime();
        ambient = x.ambient();
    }
    if (w != 0) terms.push_back({w, x});
    return *this;
}

Point apply(const Matrix& g, const Point& x) {
    Point out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].size() != x.size()) throw InvalidArgument("matrix and point dimensions differ");
        for (std::size_t j = 0; j < x.size(); ++j) out[i] += g[i][j] * x[j];
    }
    return out;
}

Rational determinant2(const Matrix& g) {
    if (g.size() != 2 || g[0].size() != 2 || g[1].size() != 2) throw InvalidArgument("expected a 2x2 matrix");
    return g[0][0] * g[1][1] - g[0][1] * g[1][0];
}

DefinableSet transform(const DefinableSet& x, const Matrix& g, const Point& shift_in) {
    const long p = x.prime();
    const int n = x.ambient();
    Point shift = shift_in.empty() ? Point(static_cast<std::size_t>(n)) : shift_in;
    if (static_cast<int>(g.size()) != n || static_cast<int>(shift.size()) != n)
        throw InvalidArgument("transform has the wrong dimension");
    DefinableSet out(p, n);
    for (const auto& piece : x.pieces()) {
        DefinableSet part = std::visit(
            [&](const auto& s) -> DefinableSet {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Set1D>) {
                    return DefinableSet::from(s.affine_image(g[0][0], shift[0]));
                } else if constexpr (std::is_same_v<T, RayCone>) {
                    RayCone r(p, apply(g, s.origin()) + shift, s.apex());
                    for (const auto& [u, cs] : s.rays()) {
                        Point v = apply(g, u);
                        Rational sc;
                        Point w = RayCone::canonical_direction(v, p, &sc);
                        r.add_classes(w, class_scaled(p, cs, sc));
                    }
                    return DefinableSet::from(std::move(r));
                } else if constexpr (std::is_same_v<T, BoxSet>) {
                    BoxSet b;
                    for (int i = 0; i < n; ++i) {
                        int src = -1;
                        for (int j = 0; j < n; ++j)
                            if (g[i][j] != 0) {
                                if (src >= 0) throw UnsupportedSet("box image under a non-monomial matrix");
                                src = j;
                            }
                        if (src < 0) throw InvalidArgument("singular matrix");
                        b.factors.push_back(s.factors[static_cast<std::size_t>(src)].affine_image(
                            g[i][src], shift[static_cast<std::size_t>(i)]));
                    }
                    return DefinableSet::from(std::move(b));
                } else {
                    throw UnsupportedSet("linear image of a monomial graph is not presentable");
                }
            },
            piece);
        out = out.pieces().empty() ? part : out.unite(part);
    }
    return out;
}

}  // namespace pdens
