#pragma once

#include "pdens/padic.hpp"
#include "pdens/rational.hpp"

#include <compare>
#include <set>
#include <vector>

namespace pdens {

/// A class of K^x / P_n written as (ord mod n, discrete log of the unit part
/// modulo the number of unit classes).
struct CosetClass {
    long val = 0;
    long unit = 0;
    auto operator<=>(const CosetClass&) const = default;
};

/// The finite group K^x / P_n for K = Q_p, p odd.
///
/// With n = p^s m (p not dividing m), an element is an n-th power iff its
/// valuation is divisible by n and its unit part is an n-th power modulo
/// p^(s+1). Units modulo p^(s+1) form a cyclic group, so the unit class is a
/// discrete logarithm reduced modulo h = gcd(n, (p-1)p^s). The same primitive
/// root is used for every n, which makes reduction between exponents a plain
/// `mod`.
class PowerClasses {
public:
    /// Shared immutable instance; tables are built once per (p, n).
    static const PowerClasses& get(long p, long n);

    long p() const noexcept { return p_; }
    long n() const noexcept { return n_; }
    /// Digits of the unit part that determine the class.
    int digits() const noexcept { return r_; }
    /// Digits demanded of a PadicNumber operand (Hensel margin 2 ord_p(n) + 1).
    int required_precision() const noexcept { return 2 * s_ + 1; }
    long unit_classes() const noexcept { return h_; }
    long index() const noexcept { return n_ * h_; }
    long primitive_root() const noexcept { return root_; }

    CosetClass class_of(const Rational& x) const;
    CosetClass class_of(const PadicNumber& x) const;
    CosetClass class_of_unit_residue(long residue) const;

    Rational representative(CosetClass c) const;
    CosetClass add(CosetClass a, CosetClass b) const;
    CosetClass negate(CosetClass a) const;
    /// Image of `c` in K^x / P_m, m a divisor of n.
    CosetClass reduce(CosetClass c, const PowerClasses& coarser) const;

    std::vector<CosetClass> all() const;
    /// Class of the n-th powers of each element: the image of P_k inside K^x/P_n.
    std::vector<CosetClass> power_image(long k) const;

private:
    PowerClasses(long p, long n);

    long p_, n_;
    int s_, r_;
    long modulus_;
    long phi_, h_;
    long root_;
    std::vector<long> log_;
};

/// lambda * P_n; lambda = 0 denotes the singleton {0}.
struct PowerCoset {
    Rational scale;
    long n = 1;

    friend bool operator==(const PowerCoset& a, const PowerCoset& b) {
        return a.scale == b.scale && a.n == b.n;
    }
};

bool is_nth_power(const PadicNumber& x, long n);
bool membership(const PadicNumber& x, const PowerCoset& c);
bool membership(const Rational& x, long p, const PowerCoset& c);

/// Number of unit classes of Z_p^x modulo n-th powers, counted by enumerating
/// residues modulo p^(ord_p(n)+1).
long unit_power_classes_by_enumeration(long p, long n);

/// An open subgroup of finite index of K^x, presented as a union of classes of
/// K^x / P_n.
class Subgroup {
public:
    static Subgroup power(long p, long n);
    static Subgroup from_classes(long p, long n, std::set<CosetClass> classes);
    static Subgroup from_representatives(long p, long n, const std::vector<Rational>& reps);

    long prime() const noexcept { return p_; }
    long exponent() const noexcept { return n_; }
    const std::set<CosetClass>& classes() const noexcept { return classes_; }
    std::vector<Rational> representatives() const;

    bool contains(const Rational& x) const;
    bool contains(const PadicNumber& x) const;

    /// The classes of K^x/P_m covered by this subgroup; m must be a multiple of exponent().
    std::set<CosetClass> classes_at(long m) const;

    Subgroup intersect(const Subgroup& other) const;
    bool is_subset_of(const Subgroup& other) const;
    /// True when this is P_m for some m; sets `m` to the smallest such.
    bool is_power_group(long* m = nullptr) const;

    std::string describe() const;

    friend bool operator==(const Subgroup& a, const Subgroup& b);

private:
    Subgroup(long p, long n, std::set<CosetClass> classes);

    long p_;
    long n_;
    std::set<CosetClass> classes_;
};

/// [K^x : Lambda], with [K^x : P_N] obtained by brute-force enumeration.
long subgroup_index(const Subgroup& group);

/// Smallest exponent m dividing n such that `classes` (a subset of K^x/P_n) is
/// a union of fibres of K^x/P_n -> K^x/P_m. Returns the reduced set.
std::pair<long, std::set<CosetClass>> minimize_classes(long p, long n,
                                                       const std::set<CosetClass>& classes);

/// Lift a set of classes of K^x/P_n to K^x/P_m (n divides m).
std::set<CosetClass> lift_classes(long p, long n, const std::set<CosetClass>& classes, long m);

}  // namespace pdens
