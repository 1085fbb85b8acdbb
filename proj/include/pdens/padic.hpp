#pragma once

#include "pdens/rational.hpp"

#include <optional>
#include <vector>

namespace pdens {

/// Residue characteristic of K = Q_p; odd primes only.
class Prime {
public:
    explicit Prime(long p);

    long value() const noexcept { return p_; }
    /// Cardinality of the residue field. Equal to p for K = Q_p, kept separate
    /// so formulas stay written in q.
    long q() const noexcept { return p_; }

    friend bool operator==(const Prime&, const Prime&) = default;

private:
    long p_;
};

bool is_prime(long n);

inline constexpr int kDefaultPrecision = 32;

/// An element of Q_p stored as p^valuation * unit, with the unit known modulo
/// p^precision. Zero is exact and carries valuation +infinity.
class PadicNumber {
public:
    static PadicNumber zero(Prime p);
    static PadicNumber from_rational(Prime p, const Rational& r, int precision = kDefaultPrecision);

    Prime prime() const noexcept { return prime_; }
    bool is_zero() const noexcept { return !valuation_.has_value(); }
    /// nullopt means +infinity.
    std::optional<long> valuation() const noexcept { return valuation_; }
    int precision() const noexcept { return precision_; }
    /// Unit part as an integer in [1, p^precision), prime to p.
    const Integer& unit() const noexcept { return unit_; }

    /// Base-p digits d_0 .. d_{k-1} of the unit part; d_0 is the angular component.
    std::vector<int> digits() const;
    int angular_component() const;

    PadicNumber operator-() const;
    PadicNumber inverse() const;

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
    friend bool operator==(const PadicNumber& a, const PadicNumber& b) {
        return a.prime_ == b.prime_ && a.valuation_ == b.valuation_ &&
               a.precision_ == b.precision_ && a.unit_ == b.unit_;
    }

private:
    PadicNumber(Prime p, std::optional<long> v, Integer unit, int precision);

    Prime prime_;
    std::optional<long> valuation_;
    Integer unit_;
    int precision_ = 0;
};

}  // namespace pdens
