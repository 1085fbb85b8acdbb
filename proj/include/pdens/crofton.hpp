#pragma once

#include "pdens/cone.hpp"

namespace pdens {

/// A line of K^2 through 0, stored as its primitive generator with the first
/// coordinate of minimal valuation equal to 1.
struct ProjectiveLine {
    Point v;

    static ProjectiveLine of(const Point& direction, long p);
    /// [1 : t], t in Z_p.
    static ProjectiveLine chart_a(const Rational& t) { return {{Rational(1), t}}; }
    /// [s : 1], s in p Z_p.
    static ProjectiveLine chart_b(const Rational& s) { return {{s, Rational(1)}}; }
    bool in_chart_a() const { return v[0] == 1; }
    /// Coordinate t or s of the chart containing the line.
    const Rational& chart_coordinate() const { return in_chart_a() ? v[1] : v[0]; }
    /// w with det(v | w) = 1, so K^2/V is identified with K by the w-coordinate.
    Point completion() const;
    /// w-coordinate of y in the basis (v, w): det(v, y).
    Rational project(const Point& y) const;

    friend bool operator==(const ProjectiveLine&, const ProjectiveLine&) = default;
};

/// Residue disc {V in chart : ord(coordinate(V) - center) >= depth}.
struct P1Cell {
    bool chart_a = true;
    Integer center;
    long depth = 1;
    Rational measure;

    bool contains(const ProjectiveLine& line, long p) const;
};

/// The (q+1) q^(k-1) residue discs of depth k with their invariant measure.
std::vector<P1Cell> invariant_cell_measure(long p, long depth);

bool check_condition_star(const DefinableSet& x, const Point& at, const ProjectiveLine& line);

struct DirectImage {
    StepFunction image;  // germ at p_V(at), on K, dimension 1
    long level = 0;      // truncation level from which the germ image is exact
};

/// Germ direct image p_(V!, at) of a step function on a one-dimensional set of K^2.
DirectImage direct_image(const StepFunction& f, const Point& at, const ProjectiveLine& line);

struct CroftonResult {
    Rational value;
    long depth_used = 0;
    long cells_evaluated = 0;
    std::vector<Point> bad_directions;
};

/// Exact integral over P^1 of Theta_1 of the projected germs. The input must
/// be a combination of ray cones with origin `at`; other germs go through
/// verify_crofton.
CroftonResult crofton_integral(const StepFunction& f, const Point& at);

struct CroftonCheck {
    Rational lhs, rhs;
    bool equal = false;
    CroftonResult detail;
};

/// Theta_1(X)(at) against the Crofton integral of its specialization cone.
CroftonCheck verify_crofton(const DefinableSet& x, const Point& at);

/// Approximate diagnostic: integrand averaged over random lines. Not exact.
double crofton_monte_carlo(const StepFunction& f, const Point& at, long samples, unsigned seed = 12345);

}  // namespace pdens
