#include "pdens/padic.hpp"

#include "pdens/errors.hpp"

#include <algorithm>

namespace pdens {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Prime::Prime(long p) : p_(p) {
    if (!is_prime(p) || p < 3) throw InvalidArgument(std::to_string(p) + " is not an odd prime");
}

PadicNumber::PadicNumber(Prime p, std::optional<long> v, Integer unit, int precision)
    : prime_(p), valuation_(v), unit_(std::move(unit)), precision_(precision) {}

PadicNumber PadicNumber::zero(Prime p) { return PadicNumber(p, std::nullopt, Integer(0), 0); }

PadicNumber PadicNumber::from_rational(Prime p, const Rational& r, int precision) {
    if (precision < 1) throw InvalidArgument("precision must be at least 1");
    if (r == 0) return zero(p);
    long v = ord_nonzero(r, p.value());
    return PadicNumber(p, v, unit_residue(r, p.value(), precision), precision);
}

std::vector<int> PadicNumber::digits() const {
    std::vector<int> out;
    Integer u = unit_;
    for (int i = 0; i < precision_; ++i) {
        Integer d = u % prime_.value();
        out.push_back(static_cast<int>(d.get_si()));
        u /= prime_.value();
    }
    return out;
}

int PadicNumber::angular_component() const {
    if (is_zero()) return 0;
    Integer d = unit_ % prime_.value();
    return static_cast<int>(d.get_si());
}

PadicNumber PadicNumber::operator-() const {
    if (is_zero()) return *this;
    Integer modulus = ipow(prime_.value(), static_cast<unsigned long>(precision_));
    return PadicNumber(prime_, valuation_, modulus - unit_, precision_);
}

PadicNumber PadicNumber::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of p-adic zero");
    Integer modulus = ipow(prime_.value(), static_cast<unsigned long>(precision_));
    Integer inv;
    mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), modulus.get_mpz_t());
    return PadicNumber(prime_, -*valuation_, inv, precision_);
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    if (!(a.prime_ == b.prime_)) throw InvalidArgument("mixing different primes");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const long p = a.prime_.value();
    const long va = *a.valuation_, vb = *b.valuation_;
    const long m = std::min(va, vb);
    // Both operands are known modulo p^absolute.
    const long absolute = std::min(va + a.precision_, vb + b.precision_);
    const long rel = absolute - m;
    Integer modulus = ipow(p, static_cast<unsigned long>(rel));
    Integer s = a.unit_ * ipow(p, static_cast<unsigned long>(va - m)) +
                b.unit_ * ipow(p, static_cast<unsigned long>(vb - m));
    s %= modulus;
    if (s == 0)
        throw PrecisionExhausted("cancellation consumed all " + std::to_string(rel) +
                                 " digits of the sum");
    long shift = ord_p(s, p);
    Integer unit = s / ipow(p, static_cast<unsigned long>(shift));
    return PadicNumber(a.prime_, m + shift, unit, static_cast<int>(rel - shift));
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    if (!(a.prime_ == b.prime_)) throw InvalidArgument("mixing different primes");
    if (a.is_zero() || b.is_zero()) return PadicNumber::zero(a.prime_);
    int k = std::min(a.precision_, b.precision_);
    Integer modulus = ipow(a.prime_.value(), static_cast<unsigned long>(k));
    Integer u = (a.unit_ * b.unit_) % modulus;
    return PadicNumber(a.prime_, *a.valuation_ + *b.valuation_, u, k);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

}  // namespace pdens
