#pragma once

#include "pdens/ep_sequence.hpp"
#include "pdens/sets.hpp"

namespace pdens {

struct DensityReport {
    Point point;
    int dim = 1;
    EPSequence theta;       // sphere-normalized
    EPSequence theta_ball;  // ball-normalized
    Rational density;
    long modulus = 1;
};

/// n -> gamma(n) / ((1 - q^-d) q^(-n d)), sphere-normalized volumes.
EPSequence theta_sequence(const StepFunction& f, const Point& x);
/// n -> q^(n d) mu_d(X meet B(x, n)).
EPSequence theta_ball_sequence(const StepFunction& f, const Point& x);

/// Mean value at infinity of the sphere sequence, cross-checked against the
/// ball-normalized route; a disagreement raises InternalInconsistency.
DensityReport local_density(const StepFunction& f, const Point& x);
Rational density(const DefinableSet& x, const Point& at);

/// Theta(X) + Theta(Y) == Theta(X u Y) + Theta(X n Y) at x.
bool density_additivity_check(const DefinableSet& x, const DefinableSet& y, const Point& at);

}  // namespace pdens
