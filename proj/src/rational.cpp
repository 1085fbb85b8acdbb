#include "pdens/rational.hpp"

#include "pdens/errors.hpp"

#include <numeric>

namespace pdens {

long ord_p(const Integer& n, long p) {
    if (n == 0) throw InvalidArgument("valuation of zero integer");
    Integer m = abs(n);
    long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

std::optional<long> ord_p(const Rational& r, long p) {
    if (r == 0) return std::nullopt;
    return ord_p(Integer(r.get_num()), p) - ord_p(Integer(r.get_den()), p);
}

long ord_nonzero(const Rational& r, long p) {
    auto v = ord_p(r, p);
    if (!v) throw InvalidArgument("valuation of zero");
    return *v;
}

std::optional<long> ord_p(const Point& x, long p) {
    std::optional<long> best;
    for (const auto& c : x) {
        auto v = ord_p(c, p);
        if (v && (!best || *v < *best)) best = v;
    }
    return best;
}

Integer ipow(long base, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

Rational qpow(long q, long e) {
    if (e >= 0) return Rational(ipow(q, static_cast<unsigned long>(e)));
    Rational r(Integer(1), ipow(q, static_cast<unsigned long>(-e)));
    return r;
}

Integer unit_residue(const Rational& x, long p, int digits) {
    long v = ord_nonzero(x, p);
    Integer modulus = ipow(p, static_cast<unsigned long>(digits));
    Integer num = x.get_num();
    Integer den = x.get_den();
    if (v > 0) num /= ipow(p, static_cast<unsigned long>(v));
    if (v < 0) den /= ipow(p, static_cast<unsigned long>(-v));
    Integer inv;
    Integer den_mod = den % modulus;
    if (mpz_invert(inv.get_mpz_t(), den_mod.get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw InternalInconsistency("unit part is not invertible");
    Integer r = (num * inv) % modulus;
    if (r < 0) r += modulus;
    return r;
}

long gcd(long a, long b) { return std::gcd(a, b); }

long lcm(long a, long b) { return std::lcm(a, b); }

std::string to_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_str();
}

std::string to_string(const Point& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ",";
        s += to_string(x[i]);
    }
    return s + ")";
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    Rational r;
    if (s.empty() || r.set_str(s, 10) != 0) throw InvalidArgument("not a rational: '" + s + "'");
    if (r.get_den() == 0) throw DivisionByZero("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

Point operator-(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw InvalidArgument("dimension mismatch");
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Point operator+(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw InvalidArgument("dimension mismatch");
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Point scale(const Rational& s, const Point& x) {
    Point r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = s * x[i];
    return r;
}

}  // namespace pdens
