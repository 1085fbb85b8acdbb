#pragma once

#include "pdens/rational.hpp"

#include <vector>

namespace pdens {

/// c * n^l * q^(a n).
struct EPTerm {
    Rational c;
    int l = 0;
    long a = 0;

    friend bool operator==(const EPTerm& x, const EPTerm& y) {
        return x.c == y.c && x.l == y.l && x.a == y.a;
    }
};

/// Terms of one residue class. The (l, a) = (0, 0) coefficient lives in
/// `constant` and never appears in `terms`.
struct EPBranch {
    Rational constant;
    std::vector<EPTerm> terms;

    friend bool operator==(const EPBranch& x, const EPBranch& y) {
        return x.constant == y.constant && x.terms == y.terms;
    }
};

/// Eventually periodic exponential-polynomial sequence: value(n) is head[n]
/// for n < onset, and the branch n mod modulus evaluated at n otherwise.
class EPSequence {
public:
    EPSequence(long q, long modulus, long onset, std::vector<Rational> head,
               std::vector<EPBranch> branches);

    static EPSequence constant(long q, const Rational& v);
    /// Pure periodic pattern from the onset on: value(n) = pattern[n mod e].
    static EPSequence periodic(long q, long onset, std::vector<Rational> head,
                               const std::vector<Rational>& pattern);
    /// A single term c n^l q^(a n), valid for every n >= 0.
    static EPSequence term(long q, const Rational& c, int l, long a);

    long q() const noexcept { return q_; }
    long modulus() const noexcept { return modulus_; }
    long onset() const noexcept { return onset_; }
    const std::vector<Rational>& head() const noexcept { return head_; }
    const std::vector<EPBranch>& branches() const noexcept { return branches_; }

    Rational eval(long n) const;
    bool is_bounded() const;
    /// Limit along each residue class; requires is_bounded().
    std::vector<Rational> branch_limits() const;

    EPSequence rebase_modulus(long e) const;
    EPSequence shift(long k) const;
    EPSequence scaled(const Rational& s) const;

    friend EPSequence operator+(const EPSequence& a, const EPSequence& b);
    friend EPSequence operator-(const EPSequence& a, const EPSequence& b);
    friend EPSequence operator-(const EPSequence& a);
    friend bool operator==(const EPSequence& a, const EPSequence& b);

private:
    long q_;
    long modulus_;
    long onset_;
    std::vector<Rational> head_;
    std::vector<EPBranch> branches_;
};

Rational mean_value_at_infinity(const EPSequence& s);

/// (s(n) - b s(n+1)) / (1 - b) with b = q^(-d).
EPSequence ball_to_sphere(const EPSequence& s_ball, int d);

}  // namespace pdens
