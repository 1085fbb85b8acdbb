#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdens {

using Integer = mpz_class;
using Rational = mpq_class;

/// A point of K^m with exact rational coordinates.
using Point = std::vector<Rational>;

/// p-adic valuation of a nonzero integer.
long ord_p(const Integer& n, long p);

/// p-adic valuation of a rational; std::nullopt stands for +infinity (r = 0).
std::optional<long> ord_p(const Rational& r, long p);

/// Valuation of a nonzero rational; throws InvalidArgument on zero.
long ord_nonzero(const Rational& r, long p);

/// Minimal valuation over the coordinates of a point (nullopt if all zero).
std::optional<long> ord_p(const Point& x, long p);

/// q^e as an exact rational, e of any sign.
Rational qpow(long q, long e);

Integer ipow(long base, unsigned long e);

/// Unit part x * p^{-ord x} reduced modulo p^digits, as an integer in [1, p^digits).
Integer unit_residue(const Rational& x, long p, int digits);

/// Floor-style modulus, always in [0, m).
inline long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

long gcd(long a, long b);
long lcm(long a, long b);

/// "num/den", or "num" for integers.
std::string to_string(const Rational& r);
std::string to_string(const Point& x);

/// Parses "a", "-a" or "a/b".
Rational parse_rational(std::string_view text);

Point operator-(const Point& a, const Point& b);
Point operator+(const Point& a, const Point& b);
Point scale(const Rational& s, const Point& x);

}  // namespace pdens
