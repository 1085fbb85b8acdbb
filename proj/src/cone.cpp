#include "pdens/cone.hpp"

#include "pdens/errors.hpp"
#include "pdens/volume.hpp"

#include <algorithm>

namespace pdens {

namespace {

bool is_zero(const Point& x) {
    return std::all_of(x.begin(), x.end(), [](const Rational& c) { return c == 0; });
}

// weight(c) = #{g in group : c - g in S} / #group on K^x/P_N.
WeightedClasses orbit_weights(long p, const ClassSet& s, const Subgroup& group) {
    long n = lcm(s.n, group.exponent());
    const auto& pc = PowerClasses::get(p, n);
    auto base = lift_classes(p, s.n, s.classes, n);
    auto g = group.classes_at(n);
    Rational unit(1, static_cast<long>(g.size()));
    WeightedClasses out{n, {}};
    for (const auto& a : base)
        for (const auto& b : g) out.weight[pc.add(a, b)] += unit;
    return out;
}

WeightedClasses lift_weights(long p, const WeightedClasses& w, long n) {
    if (n == w.n) return w;
    WeightedClasses out{n, {}};
    const auto& fine = PowerClasses::get(p, n);
    const auto& coarse = PowerClasses::get(p, w.n);
    for (const auto& c : fine.all()) {
        auto it = w.weight.find(fine.reduce(c, coarse));
        if (it != w.weight.end()) out.weight[c] = it->second;
    }
    return out;
}

WeightedTuples lift_tuples(long p, const WeightedTuples& w, long n, std::size_t dim) {
    if (n == w.n) return w;
    const auto& fine = PowerClasses::get(p, n);
    const auto& coarse = PowerClasses::get(p, w.n);
    std::map<CosetClass, std::vector<CosetClass>> fibres;
    for (const auto& c : fine.all()) fibres[fine.reduce(c, coarse)].push_back(c);
    WeightedTuples out{n, {}};
    for (const auto& [t, wt] : w.weight) {
        std::vector<std::vector<CosetClass>> acc{{}};
        for (std::size_t i = 0; i < dim; ++i) {
            std::vector<std::vector<CosetClass>> next;
            for (const auto& partial : acc)
                for (const auto& c : fibres[t[i]]) {
                    auto e = partial;
                    e.push_back(c);
                    next.push_back(std::move(e));
                }
            acc = std::move(next);
        }
        for (auto& e : acc) out.weight[std::move(e)] = wt;
    }
    return out;
}

void add_weights(long p, WeightedClasses& into, const WeightedClasses& w, const Rational& scale) {
    long n = lcm(into.n, w.n);
    into = lift_weights(p, into, n);
    for (const auto& [c, x] : lift_weights(p, w, n).weight) into.weight[c] += scale * x;
}

// Coarsest exponent at which the weights are constant on fibres.
template <class Key, class Reduce>
std::pair<long, std::map<Key, Rational>> minimize_weights(long p, long n, const std::map<Key, Rational>& w,
                                                          std::size_t dim, Reduce reduce) {
    std::map<Key, Rational> nz;
    for (const auto& [k, x] : w)
        if (x != 0) nz.emplace(k, x);
    const long fine_index = PowerClasses::get(p, n).index();
    for (long m = 1; m < n; ++m) {
        if (n % m != 0) continue;
        long fibre = fine_index / PowerClasses::get(p, m).index();
        long full = 1;
        for (std::size_t i = 0; i < dim; ++i) full *= fibre;
        std::map<Key, std::pair<long, Rational>> groups;
        bool ok = true;
        for (const auto& [k, x] : nz) {
            auto [it, fresh] = groups.emplace(reduce(k, m), std::make_pair(0L, x));
            if (!fresh && it->second.second != x) {
                ok = false;
                break;
            }
            ++it->second.first;
        }
        if (!ok) continue;
        for (const auto& [k, g] : groups)
            if (g.first != full) ok = false;
        if (!ok) continue;
        std::map<Key, Rational> out;
        for (const auto& [k, g] : groups) out.emplace(k, g.second);
        return {m, out};
    }
    return {n, nz};
}

struct Builder {
    long p;
    int ambient;
    const Subgroup& group;
    ConeWithMultiplicity cone;

    void add_ray(const Point& direction, const ClassSet& s) {
        if (s.classes.empty()) return;
        Rational scale;
        Point u = RayCone::canonical_direction(direction, p, &scale);
        ClassSet shifted = class_scaled(p, s, scale);
        WeightedClasses w = orbit_weights(p, shifted, group);
        auto it = cone.rays.find(u);
        if (it == cone.rays.end())
            cone.rays.emplace(u, w);
        else
            add_weights(p, it->second, w, Rational(1));
    }

    void add_product(const std::vector<ClassSet>& factors) {
        long n = group.exponent();
        for (const auto& f : factors) n = lcm(n, f.n);
        const auto& pc = PowerClasses::get(p, n);
        std::vector<std::vector<CosetClass>> tuples{{}};
        for (const auto& f : factors) {
            std::vector<std::vector<CosetClass>> next;
            for (const auto& t : tuples)
                for (const auto& c : lift_classes(p, f.n, f.classes, n)) {
                    auto e = t;
                    e.push_back(c);
                    next.push_back(std::move(e));
                }
            tuples = std::move(next);
        }
        auto g = group.classes_at(n);
        Rational unit(1, static_cast<long>(g.size()));
        WeightedTuples w{n, {}};
        for (const auto& t : tuples)
            for (const auto& b : g) {
                auto e = t;
                for (auto& c : e) c = pc.add(c, b);
                w.weight[e] += unit;
            }
        if (!cone.product) {
            cone.product = std::move(w);
            return;
        }
        long m = lcm(cone.product->n, n);
        auto lhs = lift_tuples(p, *cone.product, m, factors.size());
        for (const auto& [t, x] : lift_tuples(p, w, m, factors.size()).weight) lhs.weight[t] += x;
        cone.product = std::move(lhs);
    }
};

void add_piece(Builder& b, const Piece& piece, const Point& x) {
    const long p = b.p;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Set1D>) {
                SetGerm g = germ_at(s, x[0]);
                if (g.in_closure) b.cone.apex = true;
                b.add_ray(Point{Rational(1)}, g.classes);
            } else if constexpr (std::is_same_v<T, RayCone>) {
                Point y = x - s.origin();
                if (is_zero(y)) {
                    if (s.apex() || !s.rays().empty()) b.cone.apex = true;
                    for (const auto& [u, cs] : s.rays()) b.add_ray(u, cs);
                    return;
                }
                for (const auto& [u, cs] : s.rays()) {
                    Rational t = y[RayCone::pivot(u, p)];
                    if (t == 0 || scale(t, u) != y) continue;
                    if (!cs.classes.count(PowerClasses::get(p, cs.n).class_of(t))) continue;
                    b.cone.apex = true;
                    b.add_ray(u, ClassSet{1, {CosetClass{0, 0}}});
                }
            } else if constexpr (std::is_same_v<T, MonomialGraph>) {
                Rational fx = s.c;
                for (long i = 0; i < s.k; ++i) fx *= x[0];
                if (fx != x[1]) return;
                auto o = ord_p(x[0], p);
                if (o && *o < s.m0) return;
                SetGerm g = germ_at(s.base, x[0], s.m0);
                if (!g.in_closure) return;
                b.cone.apex = true;
                Rational slope = s.c * s.k;
                for (long i = 0; i + 1 < s.k; ++i) slope *= x[0];
                b.add_ray(Point{Rational(1), slope}, g.classes);
            } else {
                std::vector<SetGerm> germs;
                std::vector<std::size_t> open;
                for (std::size_t i = 0; i < s.factors.size(); ++i) {
                    germs.push_back(germ_at(s.factors[i], x[i]));
                    if (!germs.back().in_closure) return;
                    if (!germs.back().classes.classes.empty()) open.push_back(i);
                }
                b.cone.apex = true;
                if (open.size() == s.factors.size()) {
                    std::vector<ClassSet> fs;
                    for (const auto& g : germs) fs.push_back(g.classes);
                    b.add_product(fs);
                } else if (open.size() == 1) {
                    Point axis(s.factors.size());
                    axis[open[0]] = 1;
                    b.add_ray(axis, germs[open[0]].classes);
                } else if (!open.empty()) {
                    throw UnsupportedSet("box germ of intermediate dimension");
                }
            }
        },
        piece);
}

ConeWithMultiplicity build_cone(const DefinableSet& x, const Point& at, const Subgroup& group) {
    if (static_cast<int>(at.size()) != x.ambient()) throw InvalidArgument("point has the wrong dimension");
    if (group.prime() != x.prime()) throw InvalidArgument("group and set use different primes");
    Builder b{x.prime(), x.ambient(), group, {}};
    b.cone.p = x.prime();
    b.cone.ambient = x.ambient();
    b.cone.base_point = at;
    for (const auto& piece : x.pieces()) add_piece(b, piece, at);
    return b.cone.canonical();
}

}  // namespace

SetGerm germ_at(const Set1D& s, const Rational& a, std::optional<long> min_level) {
    const long p = s.prime();
    SetGerm g;
    if (s.is_empty()) return g;
    long n = s.coset_lcm();
    long level = min_level.value_or(0);
    for (const auto& c : s.cells()) {
        if (c.is_point()) continue;
        auto d = ord_p(Rational(a - c.center), p);
        if (!d) {
            if (c.lo) level = std::max(level, *c.lo);
            if (c.hi) level = std::max(level, *c.hi + 1);
        } else {
            level = std::max(level, *d + PowerClasses::get(p, c.coset.n).digits() + 1);
        }
    }
    // past `level` every cell is either class-determined around a or constant
    const auto& pc = PowerClasses::get(p, n);
    g.classes.n = n;
    for (const auto& c : pc.all()) {
        Rational rep = pc.representative(c);
        long v = ord_nonzero(rep, p);
        long k = v >= level ? 0 : (level - v + n - 1) / n;
        Rational t = a + rep * qpow(p, n * k);
        if (s.contains(t)) g.classes.classes.insert(c);
    }
    g.classes = minimized(p, g.classes);
    g.in_closure = !g.classes.classes.empty() || s.contains(a);
    return g;
}

int ConeWithMultiplicity::dimension() const {
    if (product) return ambient;
    if (!rays.empty()) return 1;
    return apex ? 0 : -1;
}

ConeWithMultiplicity ConeWithMultiplicity::canonical() const {
    ConeWithMultiplicity out = *this;
    out.rays.clear();
    for (const auto& [u, w] : rays) {
        auto [m, weights] = minimize_weights(
            p, w.n, w.weight, 1, [&](const CosetClass& c, long m) {
                return PowerClasses::get(p, w.n).reduce(c, PowerClasses::get(p, m));
            });
        if (!weights.empty()) out.rays.emplace(u, WeightedClasses{m, std::move(weights)});
    }
    if (product) {
        const long n = product->n;
        auto [m, weights] = minimize_weights(
            p, n, product->weight, static_cast<std::size_t>(ambient),
            [&](const std::vector<CosetClass>& t, long m) {
                std::vector<CosetClass> r;
                for (const auto& c : t) r.push_back(PowerClasses::get(p, n).reduce(c, PowerClasses::get(p, m)));
                return r;
            });
        if (weights.empty())
            out.product.reset();
        else
            out.product = WeightedTuples{m, std::move(weights)};
    }
    return out;
}

ConeWithMultiplicity ConeWithMultiplicity::support() const {
    ConeWithMultiplicity out = *this;
    for (auto& [u, w] : out.rays)
        for (auto& [c, x] : w.weight) x = 1;
    if (out.product)
        for (auto& [t, x] : out.product->weight) x = 1;
    return out.canonical();
}

StepFunction ConeWithMultiplicity::as_step_function(int dim) const {
    StepFunction f;
    f.p = p;
    f.ambient = ambient;
    f.dim = dim;
    const Point origin(static_cast<std::size_t>(ambient));
    for (const auto& [u, w] : rays)
        for (const auto& [c, x] : w.weight) {
            RayCone r(p, origin, false);
            r.add_classes(u, ClassSet{w.n, {c}});
            f.add(x, DefinableSet::from(std::move(r)));
        }
    if (product) {
        const auto& pc = PowerClasses::get(p, product->n);
        for (const auto& [t, x] : product->weight) {
            BoxSet box;
            for (const auto& c : t)
                box.factors.push_back(Set1D::from_disjoint_cells(
                    p, {Cell1D(Rational(0), PowerCoset{pc.representative(c), product->n})}));
            f.add(x, DefinableSet::from(std::move(box)));
        }
    }
    return f;
}

Rational ConeWithMultiplicity::multiplicity_at(const Point& z) const {
    if (static_cast<int>(z.size()) != ambient) throw InvalidArgument("point has the wrong dimension");
    if (is_zero(z)) return Rational(0);
    for (const auto& [u, w] : rays) {
        Rational t = z[RayCone::pivot(u, p)];
        if (t == 0 || scale(t, u) != z) continue;
        auto it = w.weight.find(PowerClasses::get(p, w.n).class_of(t));
        if (it != w.weight.end()) return it->second;
    }
    if (product && std::none_of(z.begin(), z.end(), [](const Rational& c) { return c == 0; })) {
        std::vector<CosetClass> t;
        for (const auto& c : z) t.push_back(PowerClasses::get(p, product->n).class_of(c));
        auto it = product->weight.find(t);
        if (it != product->weight.end()) return it->second;
    }
    return Rational(0);
}

RayCone ConeWithMultiplicity::as_ray_cone() const {
    if (product) throw UnsupportedSet("a product cone has no ray presentation");
    RayCone r(p, Point(static_cast<std::size_t>(ambient)), apex);
    for (const auto& [u, w] : rays) {
        ClassSet s{w.n, {}};
        for (const auto& [c, x] : w.weight) s.classes.insert(c);
        r.add_classes(u, s);
    }
    return r;
}

bool same_support(const ConeWithMultiplicity& a, const ConeWithMultiplicity& b) {
    auto sa = a.support();
    auto sb = b.support();
    return sa.p == sb.p && sa.ambient == sb.ambient && sa.apex == sb.apex && sa.rays == sb.rays &&
           sa.product == sb.product;
}

ConeWithMultiplicity tangent_cone(const DefinableSet& x, const Point& at, const Subgroup& group) {
    return build_cone(x, at, group).support();
}

ConeWithMultiplicity sc_multiplicity(const DefinableSet& x, const Point& at, const Subgroup& group) {
    return build_cone(x, at, group);
}

ConeWithMultiplicity nu_specialization(const StepFunction& f, const Point& at, const Subgroup& group) {
    ConeWithMultiplicity out;
    out.p = f.p;
    out.ambient = f.ambient;
    out.base_point = at;
    for (const auto& [w, s] : f.terms) {
        if (w == 0) continue;
        ConeWithMultiplicity c = sc_multiplicity(s, at, group);
        out.apex = out.apex || c.apex;
        for (const auto& [u, wc] : c.rays) {
            auto it = out.rays.try_emplace(u, WeightedClasses{wc.n, {}}).first;
            add_weights(f.p, it->second, wc, w);
        }
        if (c.product) {
            WeightedTuples scaled = *c.product;
            for (auto& [t, x] : scaled.weight) x *= w;
            if (!out.product) {
                out.product = std::move(scaled);
            } else {
                long m = lcm(out.product->n, scaled.n);
                auto dim = static_cast<std::size_t>(f.ambient);
                auto lhs = lift_tuples(f.p, *out.product, m, dim);
                for (const auto& [t, x] : lift_tuples(f.p, scaled, m, dim).weight) lhs.weight[t] += x;
                out.product = std::move(lhs);
            }
        }
    }
    return out.canonical();
}

CrossCheck sc_cross_check(const DefinableSet& x, const Point& at, const Subgroup& group, const Point& z,
                          long depth) {
    const long p = x.prime();
    const int d = x.dimension();
    if (d < 1) throw UnsupportedSet("densities of dimension 0 are outside the supported class");
    if (static_cast<int>(z.size()) != x.ambient()) throw InvalidArgument("direction has the wrong dimension");
    if (is_zero(z)) throw InvalidArgument("the cross-check needs z away from the apex");
    if (depth < 3) throw DepthTooSmall("cross-check depth must be at least 3");

    const int r = std::max(PowerClasses::get(p, group.exponent()).digits(),
                           PowerClasses::get(p, x.coset_lcm()).digits());
    const long pr = ipow(p, static_cast<unsigned long>(r)).get_si();
    std::vector<long> units;
    for (long u = 1; u < pr; ++u)
        if (u % p != 0) units.push_back(u);

    // slice bound: mu_d(X meet B(y, k)) <= lines * q^(-d k)
    long lines = 0;
    for (const auto& piece : x.pieces()) {
        if (const auto* rc = std::get_if<RayCone>(&piece))
            lines += std::max<long>(1, static_cast<long>(rc->rays().size()));
        else
            lines += 1;
    }

    std::vector<Rational> theta;  // theta[j - 1], ball-normalized, truncated
    for (long j = 1; j <= depth; ++j) {
        Rational sum;
        for (long v = j; v <= j + depth; ++v) {
            Rational weight = qpow(p, d * v - v - r);
            for (long u : units) {
                Rational lambda = qpow(p, v) * u;
                if (!group.contains(lambda)) continue;
                Rational vol = ball_volume(x, at + scale(lambda, z), j + v, d);
                if (vol != 0) sum += weight * vol;
            }
        }
        theta.push_back(sum * qpow(p, j * (d + 1)));
    }

    const long total = depth;
    for (long e = 1; 2 * e <= total; ++e)
        for (long b = 0; b + 2 * e <= total; ++b) {
            bool periodic = true;
            for (long j = b; j + e < total && periodic; ++j)
                if (theta[static_cast<std::size_t>(j)] != theta[static_cast<std::size_t>(j + e)]) periodic = false;
            if (!periodic) continue;
            Rational mv;
            for (long j = b; j < b + e; ++j) mv += theta[static_cast<std::size_t>(j)];
            mv /= e;
            const Rational index(subgroup_index(group));
            Rational tail = Rational(lines) * qpow(p, -depth) / Rational(p - 1);
            return CrossCheck{{index * mv, index * (mv + tail)}, e, b + 1, depth};
        }
    throw DepthTooSmall("no periodic pattern within depth " + std::to_string(depth));
}

bool distinguished_check(const DefinableSet& x, const Point& at, const Subgroup& group,
                         const std::vector<Subgroup>& refinements) {
    ConeWithMultiplicity base = tangent_cone(x, at, group);
    for (const auto& g : refinements)
        if (!same_support(base, tangent_cone(x, at, g))) return false;
    return true;
}

MtResult theorem_mt_check(const DefinableSet& x, const Point& at, const Subgroup& group, long refine_bound) {
    const int d = x.dimension();
    if (d < 1) throw UnsupportedSet("densities of dimension 0 are outside the supported class");
    const Rational lhs = local_density(StepFunction::indicator(x, d), at).density;
    const long n = lcm(x.coset_lcm(), group.exponent());
    const Point origin(static_cast<std::size_t>(x.ambient()));
    Subgroup g = group;
    MtResult last{lhs, Rational(0), false, g, 0};
    for (long k = 1; k <= refine_bound + 1; ++k) {
        if (k > 1) g = group.intersect(Subgroup::power(x.prime(), k * n));
        ConeWithMultiplicity cone = sc_multiplicity(x, at, g);
        Rational rhs = local_density(cone.as_step_function(d), origin).density;
        last = MtResult{lhs, rhs, lhs == rhs, g, k - 1};
        if (last.equal) return last;
    }
    throw NoStabilization("densities still differ after " + std::to_string(refine_bound) +
                          " refinements: " + to_string(last.lhs) + " vs " + to_string(last.rhs));
}

}  // namespace pdens
