#include "pdens/ep_sequence.hpp"

#include "pdens/errors.hpp"

#include <algorithm>
#include <map>

namespace pdens {

namespace {

void normalize_branch(EPBranch& b) {
    std::map<std::pair<int, long>, Rational> acc;
    for (const auto& t : b.terms) {
        if (t.l == 0 && t.a == 0) {
            b.constant += t.c;
            continue;
        }
        acc[{t.l, t.a}] += t.c;
    }
    b.terms.clear();
    for (const auto& [key, c] : acc)
        if (c != 0) b.terms.push_back({c, key.first, key.second});
}

Rational binomial(int n, int k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(r);
}

Rational eval_branch(const EPBranch& b, long q, long n) {
    Rational v = b.constant;
    for (const auto& t : b.terms) {
        Rational x = t.c * qpow(q, t.a * n);
        for (int i = 0; i < t.l; ++i) x *= n;
        v += x;
    }
    return v;
}

}  // namespace

EPSequence::EPSequence(long q, long modulus, long onset, std::vector<Rational> head,
                       std::vector<EPBranch> branches)
    : q_(q), modulus_(modulus), onset_(onset), head_(std::move(head)), branches_(std::move(branches)) {
    if (modulus_ < 1) throw InvalidArgument("EP sequence modulus must be positive");
    if (onset_ < 0) throw InvalidArgument("EP sequence onset must be nonnegative");
    if (static_cast<long>(head_.size()) != onset_)
        throw InvalidArgument("EP sequence head must hold exactly `onset` values");
    if (static_cast<long>(branches_.size()) != modulus_)
        throw InvalidArgument("EP sequence needs one branch per residue");
    for (auto& b : branches_) normalize_branch(b);
}

EPSequence EPSequence::constant(long q, const Rational& v) {
    return EPSequence(q, 1, 0, {}, {EPBranch{v, {}}});
}

EPSequence EPSequence::periodic(long q, long onset, std::vector<Rational> head,
                                const std::vector<Rational>& pattern) {
    std::vector<EPBranch> branches;
    for (const auto& v : pattern) branches.push_back({v, {}});
    return EPSequence(q, static_cast<long>(pattern.size()), onset, std::move(head), std::move(branches));
}

EPSequence EPSequence::term(long q, const Rational& c, int l, long a) {
    EPBranch b;
    b.terms.push_back({c, l, a});
    return EPSequence(q, 1, 0, {}, {b});
}

Rational EPSequence::eval(long n) const {
    if (n < 0) throw InvalidArgument("EP sequences are indexed by n >= 0");
    if (n < onset_) return head_[static_cast<std::size_t>(n)];
    return eval_branch(branches_[static_cast<std::size_t>(n % modulus_)], q_, n);
}

bool EPSequence::is_bounded() const {
    for (const auto& b : branches_)
        for (const auto& t : b.terms)
            if (t.a > 0 || (t.a == 0 && t.l > 0)) return false;
    return true;
}

std::vector<Rational> EPSequence::branch_limits() const {
    if (!is_bounded()) throw Unbounded("sequence has no finite branch limits");
    std::vector<Rational> out;
    for (const auto& b : branches_) out.push_back(b.constant);
    return out;
}

EPSequence EPSequence::rebase_modulus(long e) const {
    if (e % modulus_ != 0) throw InvalidArgument("new modulus must be a multiple of the old one");
    std::vector<EPBranch> branches;
    for (long c = 0; c < e; ++c) branches.push_back(branches_[static_cast<std::size_t>(c % modulus_)]);
    return EPSequence(q_, e, onset_, head_, std::move(branches));
}

EPSequence EPSequence::shift(long k) const {
    if (k < 0) throw InvalidArgument("shift must be nonnegative");
    long onset = std::max(0L, onset_ - k);
    std::vector<Rational> head;
    for (long n = 0; n < onset; ++n) head.push_back(eval(n + k));
    std::vector<EPBranch> branches;
    for (long c = 0; c < modulus_; ++c) {
        const EPBranch& src = branches_[static_cast<std::size_t>((c + k) % modulus_)];
        EPBranch b{src.constant, {}};
        // c (n+k)^l q^(a(n+k)) expanded in powers of n.
        for (const auto& t : src.terms) {
            Rational scale = t.c * qpow(q_, t.a * k);
            for (int i = 0; i <= t.l; ++i) {
                Rational coef = scale * binomial(t.l, i);
                for (int j = 0; j < t.l - i; ++j) coef *= k;
                b.terms.push_back({coef, i, t.a});
            }
        }
        branches.push_back(std::move(b));
    }
    return EPSequence(q_, modulus_, onset, std::move(head), std::move(branches));
}

EPSequence EPSequence::scaled(const Rational& s) const {
    std::vector<Rational> head;
    for (const auto& v : head_) head.push_back(v * s);
    std::vector<EPBranch> branches;
    for (const auto& b : branches_) {
        EPBranch nb{b.constant * s, {}};
        for (const auto& t : b.terms) nb.terms.push_back({t.c * s, t.l, t.a});
        branches.push_back(std::move(nb));
    }
    return EPSequence(q_, modulus_, onset_, std::move(head), std::move(branches));
}

EPSequence operator+(const EPSequence& a, const EPSequence& b) {
    if (a.q_ != b.q_) throw InvalidArgument("EP sequences over different q");
    long e = lcm(a.modulus_, b.modulus_);
    long onset = std::max(a.onset_, b.onset_);
    std::vector<Rational> head;
    for (long n = 0; n < onset; ++n) head.push_back(a.eval(n) + b.eval(n));
    std::vector<EPBranch> branches;
    for (long c = 0; c < e; ++c) {
        const auto& x = a.branches_[static_cast<std::size_t>(c % a.modulus_)];
        const auto& y = b.branches_[static_cast<std::size_t>(c % b.modulus_)];
        EPBranch s{x.constant + y.constant, x.terms};
        s.terms.insert(s.terms.end(), y.terms.begin(), y.terms.end());
        branches.push_back(std::move(s));
    }
    return EPSequence(a.q_, e, onset, std::move(head), std::move(branches));
}

EPSequence operator-(const EPSequence& a) { return a.scaled(Rational(-1)); }

EPSequence operator-(const EPSequence& a, const EPSequence& b) { return a + (-b); }

bool operator==(const EPSequence& a, const EPSequence& b) {
    return a.q_ == b.q_ && a.modulus_ == b.modulus_ && a.onset_ == b.onset_ && a.head_ == b.head_ &&
           a.branches_ == b.branches_;
}

Rational mean_value_at_infinity(const EPSequence& s) {
    if (!s.is_bounded()) throw Unbounded("mean value at infinity needs a bounded sequence");
    Rational sum;
    for (const auto& b : s.branches()) sum += b.constant;
    return sum / s.modulus();
}

EPSequence ball_to_sphere(const EPSequence& s_ball, int d) {
    Rational b = qpow(s_ball.q(), -d);
    return (s_ball - s_ball.shift(1).scaled(b)).scaled(1 / (1 - b));
}

}  // namespace pdens
