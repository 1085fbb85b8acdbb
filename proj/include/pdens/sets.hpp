#pragma once

#include "pdens/power_classes.hpp"
#include "pdens/set1d.hpp"

#include <map>
#include <variant>
#include <vector>

namespace pdens {

/// A subset of K^x given as a union of classes of K^x/P_n.
struct ClassSet {
    long n = 1;
    std::set<CosetClass> classes;

    friend bool operator==(const ClassSet&, const ClassSet&) = default;
};

/// Smallest exponent presentation of the same subset of K^x.
ClassSet minimized(long p, const ClassSet& s);
ClassSet lifted(long p, const ClassSet& s, long n);
ClassSet class_union(long p, const ClassSet& a, const ClassSet& b);
/// {a s : s in S}.
ClassSet class_scaled(long p, const ClassSet& s, const Rational& a);
/// Saturation of S under multiplication by the group.
ClassSet class_saturated(long p, const ClassSet& s, const Subgroup& group);
/// Disjoint cells centered at `center`, one per class; optionally with the point itself.
Set1D class_set_as_set1d(long p, const ClassSet& s, const Rational& center, bool with_center);

/// x0 + union over directions u of (S_u) u, plus x0 itself when `apex`.
/// Directions are primitive with pivot coordinate (first coordinate of
/// minimal valuation) equal to 1, so s -> s u is an isometry onto the line.
class RayCone {
public:
    RayCone(long p, Point origin, bool apex);

    /// Adds (lambda P_n) u; rays along the same line are merged.
    void add_ray(const Point& direction, const PowerCoset& coset);
    void add_classes(const Point& direction, const ClassSet& classes);

    /// u = scale * canonical; canonical has pivot coordinate 1.
    static Point canonical_direction(const Point& u, long p, Rational* scale = nullptr);
    static std::size_t pivot(const Point& u, long p);

    long prime() const noexcept { return p_; }
    int ambient() const noexcept { return static_cast<int>(origin_.size()); }
    const Point& origin() const noexcept { return origin_; }
    bool apex() const noexcept { return apex_; }
    void set_apex(bool a) { apex_ = a; }
    const std::map<Point, ClassSet>& rays() const noexcept { return rays_; }
    /// One (direction, lambda P_n) per class, in canonical order.
    std::vector<std::pair<Point, PowerCoset>> ray_list() const;

    bool contains(const Point& z) const;
    long coset_lcm() const;

    friend bool operator==(const RayCone&, const RayCone&) = default;

private:
    long p_;
    Point origin_;
    bool apex_;
    std::map<Point, ClassSet> rays_;
};

/// Cartesian product of subsets of K.
struct BoxSet {
    std::vector<Set1D> factors;
};

/// {(t, c t^k) : t in A, ord t >= m0}.
struct MonomialGraph {
    Set1D base;
    Rational c;
    long k = 2;
    long m0 = 1;

    /// Least m0 with ord(c) + (k - 1) m0 >= 1.
    static long least_level(const Rational& c, long k, long p);
};

using Piece = std::variant<Set1D, BoxSet, RayCone, MonomialGraph>;

/// A supported set: a finite union of pieces that overlap at most in a set
/// of lower dimension.
class DefinableSet {
public:
    DefinableSet(long p, int ambient) : p_(p), ambient_(ambient) {}
    static DefinableSet from(Set1D s);
    static DefinableSet from(BoxSet b);
    static DefinableSet from(RayCone r);
    static DefinableSet from(MonomialGraph g);

    long prime() const noexcept { return p_; }
    int ambient() const noexcept { return ambient_; }
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }
    int dimension() const;

    bool contains(const Point& z) const;
    DefinableSet unite(const DefinableSet& other) const;
    long coset_lcm() const;

private:
    void add(Piece piece);

    long p_;
    int ambient_;
    std::vector<Piece> pieces_;
};

int piece_dimension(const Piece& piece);
int piece_ambient(const Piece& piece);

/// sum of weight * indicator, integrated against the d-dimensional measure.
struct StepFunction {
    long p = 3;
    int ambient = 1;
    int dim = 1;
    std::vector<std::pair<Rational, DefinableSet>> terms;

    static StepFunction indicator(const DefinableSet& x);
    static StepFunction indicator(const DefinableSet& x, int dim);
    StepFunction& add(const Rational& w, const DefinableSet& x);
};

using Matrix = std::vector<std::vector<Rational>>;

Point apply(const Matrix& g, const Point& x);
Rational determinant2(const Matrix& g);

/// Image g(X) + shift for the set kinds where the image stays presentable:
/// ray cones under any invertible g, sets in K under affine maps, boxes under
/// signed diagonal-permutation matrices.
DefinableSet transform(const DefinableSet& x, const Matrix& g, const Point& shift = {});

}  // namespace pdens
