#pragma once

#include "pdens/power_classes.hpp"
#include "pdens/rational.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pdens {

enum class Cmp { Lt, Le, Eq, Ge, Gt };

std::string to_string(Cmp c);

class Formula1D;
using FormulaPtr = std::shared_ptr<const Formula1D>;

/// Quantifier-free condition on one variable t built from
///   ord(t - c) <cmp> k     and     t - c in lambda P_n
/// with AND / OR / NOT. All constants are exact rationals.
class Formula1D {
public:
    enum class Kind { True, False, Ord, Coset, And, Or, Not };

    static FormulaPtr truth(bool value);
    static FormulaPtr ord(const Rational& center, Cmp cmp, long k);
    static FormulaPtr coset(const Rational& center, const PowerCoset& c);
    static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
    static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
    static FormulaPtr negate(FormulaPtr a);
    /// Folded conjunction/disjunction; empty lists give true/false.
    static FormulaPtr all_of(const std::vector<FormulaPtr>& fs);
    static FormulaPtr any_of(const std::vector<FormulaPtr>& fs);

    Kind kind() const noexcept { return kind_; }
    const Rational& center() const noexcept { return center_; }
    Cmp cmp() const noexcept { return cmp_; }
    long k() const noexcept { return k_; }
    const PowerCoset& power_coset() const noexcept { return coset_; }
    const FormulaPtr& lhs() const noexcept { return a_; }
    const FormulaPtr& rhs() const noexcept { return b_; }

    bool eval(const Rational& t, long p) const;

    /// Distinct atom centers in order of first appearance.
    std::vector<Rational> centers() const;
    std::vector<long> ord_levels() const;
    std::vector<long> coset_exponents() const;

    /// Canonical text accepted by parse_formula.
    std::string to_string() const;

    friend bool operator==(const Formula1D& x, const Formula1D& y);

private:
    explicit Formula1D(Kind k) : kind_(k) {}
    void collect(std::vector<Rational>* centers, std::vector<long>* levels, std::vector<long>* exps) const;

    Kind kind_;
    Rational center_;
    Cmp cmp_ = Cmp::Eq;
    long k_ = 0;
    PowerCoset coset_;
    FormulaPtr a_, b_;
};

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b);

}  // namespace pdens
