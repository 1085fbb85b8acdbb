#include "pdens/set1d.hpp"

#include "pdens/errors.hpp"

namespace pdens {

Cell1D::Cell1D(Rational c, PowerCoset k, std::optional<long> lo_, std::optional<long> hi_)
    : center(std::move(c)), coset(std::move(k)), lo(lo_), hi(hi_) {
    if (coset.n < 1) throw InvalidArgument("cell coset exponent must be positive");
    if (coset.scale == 0) {
        if (lo || hi) throw InvalidArgument("a point cell carries no valuation bounds");
        coset.n = 1;
        return;
    }
    if (lo && hi && *lo > *hi) throw InvalidArgument("empty cell: lower bound exceeds upper bound");
}

Cell1D Cell1D::point(const Rational& c) { return Cell1D(c, PowerCoset{Rational(0), 1}); }

bool Cell1D::contains(const Rational& t, long p) const {
    Rational d = t - center;
    if (is_point()) return d == 0;
    if (d == 0) return false;
    long v = ord_nonzero(d, p);
    if (lo && v < *lo) return false;
    if (hi && v > *hi) return false;
    return membership(d, p, coset);
}

bool Cell1D::contains(const PadicNumber& t) const {
    PadicNumber c = PadicNumber::from_rational(t.prime(), center, std::max(t.precision(), 1));
    PadicNumber d = t - c;
    if (is_point()) return d.is_zero();
    if (d.is_zero()) return false;
    long v = *d.valuation();
    if (lo && v < *lo) return false;
    if (hi && v > *hi) return false;
    return membership(d, coset);
}

FormulaPtr Cell1D::formula() const {
    std::vector<FormulaPtr> parts{Formula1D::coset(center, coset)};
    if (lo) parts.push_back(Formula1D::ord(center, Cmp::Ge, *lo));
    if (hi) parts.push_back(Formula1D::ord(center, Cmp::Le, *hi));
    return Formula1D::all_of(parts);
}

Set1D Set1D::empty(long p) { return Set1D(p, {}); }

Set1D Set1D::from_formula(long p, const FormulaPtr& f) { return normalize_1d(p, f); }

Set1D Set1D::from_cells(long p, const std::vector<Cell1D>& cells) {
    for (const auto& c : cells) {
        if (c.is_point()) continue;
        long v = ord_nonzero(c.coset.scale, p);
        long first = c.lo ? *c.lo + mod(v - *c.lo, c.coset.n) : v;
        if (c.hi && first > *c.hi) throw InvalidArgument("empty cell: no valuation in range matches the coset");
    }
    std::vector<FormulaPtr> fs;
    for (const auto& c : cells) fs.push_back(c.formula());
    return normalize_1d(p, Formula1D::any_of(fs));
}

Set1D Set1D::from_disjoint_cells(long p, std::vector<Cell1D> cells) { return Set1D(p, std::move(cells)); }

int Set1D::dimension() const {
    if (cells_.empty()) return -1;
    for (const auto& c : cells_)
        if (!c.is_point()) return 1;
    return 0;
}

bool Set1D::contains(const Rational& t) const {
    for (const auto& c : cells_)
        if (c.contains(t, p_)) return true;
    return false;
}

bool Set1D::contains(const PadicNumber& t) const {
    if (t.prime().value() != p_) throw InvalidArgument("prime mismatch");
    for (const auto& c : cells_)
        if (c.contains(t)) return true;
    return false;
}

FormulaPtr Set1D::formula() const {
    std::vector<FormulaPtr> fs;
    for (const auto& c : cells_) fs.push_back(c.formula());
    return Formula1D::any_of(fs);
}

Set1D Set1D::closure() const {
    std::vector<Cell1D> cells = cells_;
    for (const auto& c : cells_) {
        if (c.is_point() || c.hi) continue;
        if (!contains(c.center)) {
            bool dup = false;
            for (const auto& d : cells)
                if (d.is_point() && d.center == c.center) dup = true;
            if (!dup) cells.push_back(Cell1D::point(c.center));
        }
    }
    return Set1D(p_, std::move(cells));
}

Set1D Set1D::unite(const Set1D& other) const {
    return normalize_1d(p_, Formula1D::disj(formula(), other.formula()));
}

Set1D Set1D::intersect(const Set1D& other) const {
    return normalize_1d(p_, Formula1D::conj(formula(), other.formula()));
}

Set1D Set1D::minus(const Set1D& other) const {
    return normalize_1d(p_, Formula1D::conj(formula(), Formula1D::negate(other.formula())));
}

Set1D Set1D::affine_image(const Rational& s, const Rational& a) const {
    if (s == 0) throw InvalidArgument("affine image needs a nonzero scale");
    long shift = ord_nonzero(s, p_);
    std::vector<Cell1D> out;
    for (const auto& c : cells_) {
        Rational center = s * c.center + a;
        if (c.is_point()) {
            out.push_back(Cell1D::point(center));
            continue;
        }
        std::optional<long> lo = c.lo, hi = c.hi;
        if (lo) *lo += shift;
        if (hi) *hi += shift;
        out.emplace_back(center, PowerCoset{Rational(s * c.coset.scale), c.coset.n}, lo, hi);
    }
    return Set1D(p_, std::move(out));
}

long Set1D::coset_lcm() const {
    long n = 1;
    for (const auto& c : cells_) n = lcm(n, c.coset.n);
    return n;
}

bool same_set(const Set1D& a, const Set1D& b) {
    if (a.prime() != b.prime()) return false;
    auto fa = a.formula();
    auto fb = b.formula();
    auto diff = Formula1D::disj(Formula1D::conj(fa, Formula1D::negate(fb)),
                                Formula1D::conj(fb, Formula1D::negate(fa)));
    return normalize_1d(a.prime(), diff).is_empty();
}

}  // namespace pdens
