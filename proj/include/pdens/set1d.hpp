#pragma once

#include "pdens/formula.hpp"
#include "pdens/padic.hpp"
#include "pdens/power_classes.hpp"

#include <optional>
#include <vector>

namespace pdens {

/// {t : lo <= ord(t - c) <= hi, t - c in lambda P_n}; lambda = 0 gives {c}.
/// Missing bounds are infinite.
struct Cell1D {
    Rational center;
    PowerCoset coset;
    std::optional<long> lo;
    std::optional<long> hi;

    Cell1D(Rational c, PowerCoset k, std::optional<long> lo = {}, std::optional<long> hi = {});
    static Cell1D point(const Rational& c);

    bool is_point() const { return coset.scale == 0; }
    bool contains(const Rational& t, long p) const;
    bool contains(const PadicNumber& t) const;
    FormulaPtr formula() const;

    friend bool operator==(const Cell1D& a, const Cell1D& b) {
        return a.center == b.center && a.coset == b.coset && a.lo == b.lo && a.hi == b.hi;
    }
};

/// A definable subset of K given as pairwise disjoint cells.
class Set1D {
public:
    static Set1D empty(long p);
    static Set1D from_formula(long p, const FormulaPtr& f);
    /// Union of possibly overlapping cells, normalized into a disjoint family.
    static Set1D from_cells(long p, const std::vector<Cell1D>& cells);
    /// Trusts the caller that `cells` are pairwise disjoint.
    static Set1D from_disjoint_cells(long p, std::vector<Cell1D> cells);

    long prime() const noexcept { return p_; }
    const std::vector<Cell1D>& cells() const noexcept { return cells_; }
    bool is_empty() const noexcept { return cells_.empty(); }
    /// 1 if some cell is open, 0 if only points remain, -1 for the empty set.
    int dimension() const;

    bool contains(const Rational& t) const;
    bool contains(const PadicNumber& t) const;

    FormulaPtr formula() const;
    Set1D closure() const;
    Set1D unite(const Set1D& other) const;
    Set1D intersect(const Set1D& other) const;
    Set1D minus(const Set1D& other) const;
    /// {s t + a : t in X}, s nonzero.
    Set1D affine_image(const Rational& s, const Rational& a) const;

    /// Largest exponent among the cell cosets (lcm), 1 if none.
    long coset_lcm() const;

private:
    Set1D(long p, std::vector<Cell1D> cells) : p_(p), cells_(std::move(cells)) {}

    long p_;
    std::vector<Cell1D> cells_;
};

/// Same subset of K, decided by normalizing the symmetric difference.
bool same_set(const Set1D& a, const Set1D& b);

/// Disjoint cell decomposition with centers drawn from the atoms of `f`.
Set1D normalize_1d(long p, const FormulaPtr& f);

class Subgroup;

/// True iff lambda (X - x0) is contained in X - x0 for every lambda in the group.
bool is_lambda_cone(const Set1D& x, const Subgroup& group, const Rational& origin);

/// Smallest level g >= 0 such that X meets B(x0, g) in a local cone of the group.
long local_cone_radius(const Set1D& x, const Rational& origin, const Subgroup& group);

}  // namespace pdens
