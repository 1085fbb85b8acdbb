#pragma once

#include "pdens/density.hpp"
#include "pdens/sets.hpp"

#include <map>
#include <optional>

namespace pdens {

/// A function on K^x/P_n: class -> multiplicity (absent classes weigh 0).
struct WeightedClasses {
    long n = 1;
    std::map<CosetClass, Rational> weight;

    friend bool operator==(const WeightedClasses&, const WeightedClasses&) = default;
};

/// Tuples of classes for product cones in K^m (one class per coordinate).
struct WeightedTuples {
    long n = 1;
    std::map<std::vector<CosetClass>, Rational> weight;

    friend bool operator==(const WeightedTuples&, const WeightedTuples&) = default;
};

/// A closed cone with apex 0 in K^m carrying a multiplicity on each coset
/// piece. One-dimensional cones are coset rays along canonical directions;
/// cones of full dimension m >= 2 (tangent cones of boxes) are products of
/// one-dimensional cones of K and are stored as class tuples.
struct ConeWithMultiplicity {
    long p = 3;
    int ambient = 1;
    Point base_point;  // the point x the cone was computed at
    bool apex = false;
    std::map<Point, WeightedClasses> rays;
    std::optional<WeightedTuples> product;

    bool empty() const { return !apex && rays.empty() && !product; }
    int dimension() const;
    /// Presentation with minimal exponents; equal cones give equal values.
    ConeWithMultiplicity canonical() const;
    /// Same support, every multiplicity set to 1.
    ConeWithMultiplicity support() const;
    /// sum of multiplicity * indicator(piece) as a step function of dimension d.
    StepFunction as_step_function(int dim) const;
    /// Multiplicity at z (0 off the cone and at the apex).
    Rational multiplicity_at(const Point& z) const;
    /// The support as a set (ray cones only).
    RayCone as_ray_cone() const;
};

/// Germ of a subset of K at a: the classes S such that a + s lies in X for
/// every small s in S, and whether a lies in the closure of X.
struct SetGerm {
    ClassSet classes{1, {}};
    bool in_closure = false;
};

/// Only levels >= min_level are looked at.
SetGerm germ_at(const Set1D& s, const Rational& a, std::optional<long> min_level = {});

bool same_support(const ConeWithMultiplicity& a, const ConeWithMultiplicity& b);

/// Closed tangent cone C_x(X) for the group; multiplicities are all 1.
ConeWithMultiplicity tangent_cone(const DefinableSet& x, const Point& at, const Subgroup& group);

/// Tangent cone with the specialization multiplicity: each branch of the germ
/// spreads its own density over its group-saturated cone.
ConeWithMultiplicity sc_multiplicity(const DefinableSet& x, const Point& at, const Subgroup& group);

/// Linear extension of sc_multiplicity over the terms of a step function.
ConeWithMultiplicity nu_specialization(const StepFunction& f, const Point& at, const Subgroup& group);

struct Interval {
    Rational lo, hi;
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};

struct CrossCheck {
    Interval interval;
    long period = 1;
    long onset = 0;
    long depth = 0;
};

/// [K^x : group] Theta_{d+1}(D(X, x, group))(z, 0) from truncated Fubini sums
/// of exact slice volumes; the true value lies in the returned interval.
CrossCheck sc_cross_check(const DefinableSet& x, const Point& at, const Subgroup& group, const Point& z,
                          long depth);

bool distinguished_check(const DefinableSet& x, const Point& at, const Subgroup& group,
                         const std::vector<Subgroup>& refinements);

struct MtResult {
    Rational lhs, rhs;
    bool equal = false;
    Subgroup group;
    long refinements = 0;
};

/// Theta_d(X)(x) against Theta_d(SC_x(X))(0), refining the group by
/// intersecting with P_(kN) up to `refine_bound` times.
MtResult theorem_mt_check(const DefinableSet& x, const Point& at, const Subgroup& group, long refine_bound = 4);

}  // namespace pdens
