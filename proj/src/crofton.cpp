#include "pdens/crofton.hpp"

#include "pdens/errors.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace pdens {

namespace {

bool is_zero(const Point& x) {
    return std::all_of(x.begin(), x.end(), [](const Rational& c) { return c == 0; });
}

Rational det(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

Rational binomial(long n, long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(r);
}

// Ray of a cone germ: weight * 1_{S u}.
struct WeightedRay {
    Rational weight;
    Point u;
    ClassSet classes;
};

void require_plane(const StepFunction& f) {
    if (f.ambient != 2) throw UnsupportedSet("Crofton integration is implemented for germs in K^2");
    if (f.dim != 1) throw UnsupportedSet("Crofton integration needs a one-dimensional step function");
}

std::vector<WeightedRay> cone_rays(const StepFunction& f, const Point& at) {
    require_plane(f);
    std::vector<WeightedRay> out;
    for (const auto& [w, s] : f.terms)
        for (const auto& piece : s.pieces()) {
            const auto* r = std::get_if<RayCone>(&piece);
            if (!r) throw NonCone("Crofton integration takes ray cones; route other germs through their tangent cone");
            if (r->origin() != at) throw NonCone("ray cone origin differs from the base point");
            for (const auto& [u, cs] : r->rays()) out.push_back({w, u, cs});
        }
    return out;
}

struct Direction {
    Point u;
    bool chart_a;
    Rational tau;  // chart coordinate of the line of u
    long n = 1;
    int r = 1;
};

class Integrator {
public:
    Integrator(long p, std::vector<WeightedRay> rays) : p_(p), rays_(std::move(rays)) {
        for (const auto& ray : rays_) {
            auto it = std::find_if(dirs_.begin(), dirs_.end(), [&](const Direction& d) { return d.u == ray.u; });
            if (it == dirs_.end()) {
                ProjectiveLine l{ray.u};
                dirs_.push_back({ray.u, l.in_chart_a(), l.chart_coordinate(), 1, 1});
                it = dirs_.end() - 1;
            }
            it->n = lcm(it->n, ray.classes.n);
            it->r = std::max(it->r, PowerClasses::get(p, ray.classes.n).digits());
        }
        period_ = 1;
        for (const auto& d : dirs_) period_ = lcm(period_, d.n);
    }

    CroftonResult run() {
        CroftonResult res;
        for (const auto& d : dirs_) res.bad_directions.push_back(d.u);
        const long q = p_;
        struct Cell {
            bool chart_a;
            Integer center;
            long depth;
        };
        std::vector<Cell> stack;
        for (long t = q - 1; t >= 0; --t) stack.push_back({true, Integer(t), 1});
        stack.push_back({false, Integer(0), 1});
        Rational measure_total;
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            if (c.depth > 400) throw InternalInconsistency("Crofton refinement did not separate the bad directions");
            res.depth_used = std::max(res.depth_used, c.depth);
            const Rational mu = qpow(q, 1 - c.depth) / (q + 1);
            const ProjectiveLine v0 = line(c.chart_a, Rational(c.center));
            std::vector<std::size_t> bad;
            bool resolved = true;
            for (std::size_t j = 0; j < dirs_.size(); ++j) {
                const auto& d = dirs_[j];
                auto o = d.chart_a == c.chart_a ? ord_p(Rational(d.tau - c.center), p_) : std::optional<long>{};
                if (d.chart_a == c.chart_a && (!o || *o >= c.depth)) {
                    bad.push_back(j);
                    continue;
                }
                if (ord_nonzero(det(v0.v, d.u), p_) + d.r > c.depth) resolved = false;
            }
            if (resolved && bad.empty()) {
                res.value += mu * integrand(v0);
                measure_total += mu;
                ++res.cells_evaluated;
                continue;
            }
            if (resolved && bad.size() == 1) {
                // cell = {tau} u shells ord(t - tau) = k' >= depth; the shell
                // contributions decay geometrically with ratio q^-P per period
                const auto& d = dirs_[bad[0]];
                const long pr = ipow(p_, static_cast<unsigned long>(d.r)).get_si();
                Rational sum, msum;
                for (long k = c.depth; k < c.depth + period_; ++k) {
                    const Rational sub = qpow(q, 1 - k - d.r) / (q + 1);
                    for (long w = 1; w < pr; ++w) {
                        if (w % p_ == 0) continue;
                        sum += sub * integrand(line(c.chart_a, d.tau + qpow(p_, k) * w));
                        msum += sub;
                        ++res.cells_evaluated;
                    }
                    res.depth_used = std::max(res.depth_used, k + d.r);
                }
                const Rational geometric = 1 - qpow(q, -period_);
                res.value += sum / geometric;
                measure_total += msum / geometric;
                continue;
            }
            const Integer step = ipow(p_, static_cast<unsigned long>(c.depth));
            for (long a = q - 1; a >= 0; --a) stack.push_back({c.chart_a, c.center + step * a, c.depth + 1});
        }
        if (measure_total != 1)
            throw InternalInconsistency("Crofton cells cover measure " + to_string(measure_total) + " instead of 1");
        return res;
    }

    Rational integrand(const ProjectiveLine& v) {
        std::vector<CosetClass> key;
        for (const auto& d : dirs_) key.push_back(PowerClasses::get(p_, d.n).class_of(det(v.v, d.u)));
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        StepFunction image;
        image.p = p_;
        image.ambient = 1;
        image.dim = 1;
        for (const auto& ray : rays_) {
            Rational s = det(v.v, ray.u);
            image.add(ray.weight,
                      DefinableSet::from(class_set_as_set1d(p_, class_scaled(p_, ray.classes, s), Rational(0), false)));
        }
        Rational value = local_density(image, {Rational(0)}).density;
        memo_.emplace(std::move(key), value);
        return value;
    }

private:
    static ProjectiveLine line(bool chart_a, const Rational& t) {
        return chart_a ? ProjectiveLine::chart_a(t) : ProjectiveLine::chart_b(t);
    }

    long p_;
    std::vector<WeightedRay> rays_;
    std::vector<Direction> dirs_;
    long period_ = 1;
    std::map<std::vector<CosetClass>, Rational> memo_;
};

}  // namespace

ProjectiveLine ProjectiveLine::of(const Point& direction, long p) {
    if (direction.size() != 2) throw InvalidArgument("lines of K^2 need two coordinates");
    return {RayCone::canonical_direction(direction, p)};
}

Point ProjectiveLine::completion() const {
    if (in_chart_a()) return {Rational(0), Rational(1)};
    return {Rational(-1), Rational(0)};
}

Rational ProjectiveLine::project(const Point& y) const { return det(v, y); }

bool P1Cell::contains(const ProjectiveLine& line, long p) const {
    if (line.in_chart_a() != chart_a) return false;
    auto o = ord_p(Rational(line.chart_coordinate() - center), p);
    return !o || *o >= depth;
}

std::vector<P1Cell> invariant_cell_measure(long p, long depth) {
    if (depth < 1) throw InvalidArgument("partition depth must be at least 1");
    const Rational mu = qpow(p, 1 - depth) / (p + 1);
    const Integer pk = ipow(p, static_cast<unsigned long>(depth));
    std::vector<P1Cell> cells;
    for (Integer t = 0; t < pk; ++t) cells.push_back({true, t, depth, mu});
    for (Integer s = 0; s < pk; s += p) cells.push_back({false, s, depth, mu});
    return cells;
}

bool check_condition_star(const DefinableSet& x, const Point& at, const ProjectiveLine& line) {
    if (x.ambient() != 2) throw UnsupportedSet("condition star is checked for sets in K^2");
    const long p = x.prime();
    for (const auto& piece : x.pieces()) {
        if (const auto* r = std::get_if<RayCone>(&piece)) {
            Point y = at - r->origin();
            for (const auto& [u, cs] : r->rays()) {
                if (u != line.v) continue;
                if (is_zero(y)) return false;
                Rational t = y[RayCone::pivot(u, p)];
                if (t != 0 && scale(t, u) == y && cs.classes.count(PowerClasses::get(p, cs.n).class_of(t)))
                    return false;
            }
        } else if (!std::holds_alternative<MonomialGraph>(piece)) {
            throw UnsupportedSet("condition star needs a one-dimensional set of K^2");
        }
        // a monomial graph meets every line through a germ point only there
    }
    return true;
}

DirectImage direct_image(const StepFunction& f, const Point& at, const ProjectiveLine& line) {
    require_plane(f);
    const long p = f.p;
    const Rational center = line.project(at);
    DirectImage out;
    out.image.p = p;
    out.image.ambient = 1;
    out.image.dim = 1;
    auto add = [&](const Rational& w, const ClassSet& s) {
        out.image.add(w, DefinableSet::from(class_set_as_set1d(p, s, center, false)));
    };
    for (const auto& [w, s] : f.terms) {
        if (!check_condition_star(s, at, line))
            throw ConditionStarViolated("the fibre of the projection through the base point contains a ray");
        for (const auto& piece : s.pieces()) {
            if (const auto* r = std::get_if<RayCone>(&piece)) {
                Point y = at - r->origin();
                for (const auto& [u, cs] : r->rays()) {
                    const Rational d = det(line.v, u);
                    const int digits = PowerClasses::get(p, cs.n).digits();
                    if (is_zero(y)) {
                        add(w, class_scaled(p, cs, d));
                        continue;
                    }
                    Rational t = y[RayCone::pivot(u, p)];
                    auto rho = ord_p(Point(scale(t, u) - y), p);
                    if (rho) {
                        out.level = std::max(out.level, *rho + 1);
                        continue;
                    }
                    out.level = std::max(out.level, ord_nonzero(t, p) + digits);
                    if (cs.classes.count(PowerClasses::get(p, cs.n).class_of(t)))
                        add(w, class_scaled(p, ClassSet{1, {CosetClass{0, 0}}}, d));
                }
            } else {
                const auto& g = std::get<MonomialGraph>(piece);
                Rational gx = g.c;
                for (long i = 0; i < g.k; ++i) gx *= at[0];
                auto off = ord_p(Rational(gx - at[1]), p);
                auto o1 = ord_p(at[0], p);
                if (off) {
                    out.level = std::max(out.level, *off + 1);
                    continue;
                }
                if (o1 && *o1 < g.m0) {
                    out.level = std::max(out.level, *o1 + 1);
                    continue;
                }
                SetGerm germ = germ_at(g.base, at[0], g.m0);
                if (germ.classes.classes.empty()) continue;
                Rational slope = g.c * g.k;
                for (long i = 0; i + 1 < g.k; ++i) slope *= at[0];
                const Rational d = det(line.v, Point{Rational(1), slope});
                if (d == 0) throw UnsupportedSet("projection along the tangent of a graph folds the germ");
                // p_V(at + (s, g(at1 + s) - g(at1))) = d s (1 + eps(s)); the image
                // is d S once ord eps >= digits
                const int digits = PowerClasses::get(p, germ.classes.n).digits();
                long level = g.m0;
                for (long i = 2; i <= g.k; ++i) {
                    Rational coef = line.v[0] * g.c * binomial(g.k, i);
                    for (long e = 0; e < g.k - i; ++e) coef *= at[0];
                    if (coef == 0) continue;
                    long need = digits + ord_nonzero(d, p) - ord_nonzero(coef, p);
                    long l = need <= 0 ? -(-need / (i - 1)) : (need + i - 2) / (i - 1);
                    level = std::max(level, l);
                }
                out.level = std::max(out.level, level);
                add(w, class_scaled(p, germ.classes, d));
            }
        }
    }
    return out;
}

CroftonResult crofton_integral(const StepFunction& f, const Point& at) {
    if (at.size() != 2) throw UnsupportedSet("Crofton integration is implemented for germs in K^2");
    auto rays = cone_rays(f, at);
    if (rays.empty()) {
        CroftonResult r;
        r.depth_used = 1;
        return r;
    }
    return Integrator(f.p, std::move(rays)).run();
}

CroftonCheck verify_crofton(const DefinableSet& x, const Point& at) {
    if (x.ambient() != 2 || x.dimension() != 1)
        throw UnsupportedSet("Crofton verification needs a one-dimensional set of K^2");
    const Rational lhs = local_density(StepFunction::indicator(x, 1), at).density;
    const auto cone = sc_multiplicity(x, at, Subgroup::power(x.prime(), x.coset_lcm()));
    const Point origin{Rational(0), Rational(0)};
    CroftonResult rhs = crofton_integral(cone.as_step_function(1), origin);
    return {lhs, rhs.value, lhs == rhs.value, std::move(rhs)};
}

double crofton_monte_carlo(const StepFunction& f, const Point& at, long samples, unsigned seed) {
    auto rays = cone_rays(f, at);
    if (rays.empty() || samples <= 0) return 0.0;
    const long p = f.p;
    Integrator integ(p, rays);
    std::mt19937 gen(seed);
    std::uniform_int_distribution<long> digit(0, p - 1);
    std::uniform_int_distribution<long> chart(0, p);  // p chart-A discs and one chart-B disc at depth 1
    double acc = 0.0;
    for (long i = 0; i < samples; ++i) {
        const bool a = chart(gen) < p;
        Rational t;
        for (long k = a ? 0 : 1; k < 16; ++k) t += qpow(p, k) * digit(gen);
        ProjectiveLine v = a ? ProjectiveLine::chart_a(t) : ProjectiveLine::chart_b(t);
        bool bad = std::any_of(rays.begin(), rays.end(), [&](const WeightedRay& r) { return det(v.v, r.u) == 0; });
        if (!bad) acc += integ.integrand(v).get_d();
    }
    return acc / static_cast<double>(samples);
}

}  // namespace pdens
