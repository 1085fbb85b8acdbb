#pragma once

#include "pdens/sets.hpp"

namespace pdens {

/// mu(C meet B(x, j)) for a cell of K (a point cell has measure 0).
Rational cell_ball_volume(const Cell1D& cell, long p, const Rational& x, long j);
Rational set1d_ball_volume(const Set1D& s, const Rational& x, long j);

/// d-dimensional measure of X meet B(x, j). Pieces of dimension below d
/// contribute 0; a piece of dimension above d raises UnsupportedSet.
Rational ball_volume(const DefinableSet& x, const Point& at, long j, int d);
Rational ball_volume(const StepFunction& f, const Point& at, long j);

/// mu_d(X meet S(x, n)) = ball(n) - ball(n + 1).
Rational volume_on_sphere(const DefinableSet& x, const Point& at, long n, int d);

/// From this level on, q^(j d) * ball_volume(j) is periodic with period
/// volume_period(X).
long stable_level(const DefinableSet& x, const Point& at, int d);
long volume_period(const DefinableSet& x);

}  // namespace pdens
