#include "pdens/density.hpp"

#include "pdens/errors.hpp"
#include "pdens/volume.hpp"

#include <algorithm>

namespace pdens {

namespace {

struct Window {
    long onset;
    long period;
};

Window sequence_window(const StepFunction& f, const Point& x) {
    if (f.dim < 1) throw UnsupportedSet("densities of dimension 0 are outside the supported class");
    if (static_cast<int>(x.size()) != f.ambient) throw InvalidArgument("point has the wrong dimension");
    long onset = 0;
    long period = 1;
    for (const auto& [w, s] : f.terms) {
        if (s.dimension() > f.dim)
            throw UnsupportedSet("step function term of dimension " + std::to_string(s.dimension()) +
                                 " exceeds the declared dimension " + std::to_string(f.dim));
        onset = std::max(onset, stable_level(s, x, f.dim));
        period = lcm(period, volume_period(s));
    }
    return {onset, period};
}

// Values v(0 .. onset + 3 period), checked periodic over the last two periods.
EPSequence assemble(long q, const Window& w, const std::vector<Rational>& values, const char* what) {
    for (long n = w.onset; n < w.onset + 2 * w.period; ++n)
        if (values[static_cast<std::size_t>(n)] != values[static_cast<std::size_t>(n + w.period)])
            throw NoStabilization(std::string(what) + " sequence failed its periodicity check at level " +
                                  std::to_string(n));
    std::vector<Rational> head(values.begin(), values.begin() + w.onset);
    std::vector<Rational> pattern(static_cast<std::size_t>(w.period));
    for (long n = w.onset; n < w.onset + w.period; ++n)
        pattern[static_cast<std::size_t>(n % w.period)] = values[static_cast<std::size_t>(n)];
    return EPSequence::periodic(q, w.onset, std::move(head), pattern);
}

}  // namespace

EPSequence theta_ball_sequence(const StepFunction& f, const Point& x) {
    Window w = sequence_window(f, x);
    std::vector<Rational> values;
    for (long n = 0; n < w.onset + 3 * w.period; ++n)
        values.push_back(ball_volume(f, x, n) * qpow(f.p, n * f.dim));
    return assemble(f.p, w, values, "ball-normalized");
}

EPSequence theta_sequence(const StepFunction& f, const Point& x) {
    Window w = sequence_window(f, x);
    const Rational sphere_unit = 1 - qpow(f.p, -f.dim);
    std::vector<Rational> values;
    for (long n = 0; n < w.onset + 3 * w.period; ++n) {
        Rational gamma;
        for (const auto& [wt, s] : f.terms) gamma += wt * volume_on_sphere(s, x, n, f.dim);
        values.push_back(gamma * qpow(f.p, n * f.dim) / sphere_unit);
    }
    return assemble(f.p, w, values, "sphere-normalized");
}

DensityReport local_density(const StepFunction& f, const Point& x) {
    EPSequence sphere = theta_sequence(f, x);
    EPSequence ball = theta_ball_sequence(f, x);
    Rational d = mean_value_at_infinity(sphere);
    if (mean_value_at_infinity(ball) != d)
        throw InternalInconsistency("ball and sphere normalizations give different densities");
    if (mean_value_at_infinity(ball_to_sphere(ball, f.dim)) != d)
        throw InternalInconsistency("ball-to-sphere recombination disagrees with the sphere sequence");
    return DensityReport{x, f.dim, sphere, ball, d, sphere.modulus()};
}

Rational density(const DefinableSet& x, const Point& at) {
    return local_density(StepFunction::indicator(x), at).density;
}

bool density_additivity_check(const DefinableSet& x, const DefinableSet& y, const Point& at) {
    if (x.ambient() != 1 || y.ambient() != 1) {
        // Outside K the intersection is only available when one set contains the other.
        throw UnsupportedSet("additivity check needs sets in K");
    }
    const auto& a = std::get<Set1D>(x.pieces().at(0));
    const auto& b = std::get<Set1D>(y.pieces().at(0));
    int d = std::max(x.dimension(), y.dimension());
    auto theta = [&](const Set1D& s) -> Rational {
        if (s.dimension() < d) return Rational(0);
        return local_density(StepFunction::indicator(DefinableSet::from(s), d), at).density;
    };
    return theta(a) + theta(b) == theta(a.unite(b)) + theta(a.intersect(b));
}

}  // namespace pdens
