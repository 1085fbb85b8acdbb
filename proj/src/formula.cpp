#include "pdens/formula.hpp"

#include "pdens/errors.hpp"

#include <algorithm>

namespace pdens {

std::string to_string(Cmp c) {
    switch (c) {
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Eq: return "=";
        case Cmp::Ge: return ">=";
        case Cmp::Gt: return ">";
    }
    return "?";
}

FormulaPtr Formula1D::truth(bool value) {
    return FormulaPtr(new Formula1D(value ? Kind::True : Kind::False));
}

FormulaPtr Formula1D::ord(const Rational& center, Cmp cmp, long k) {
    auto* f = new Formula1D(Kind::Ord);
    f->center_ = center;
    f->cmp_ = cmp;
    f->k_ = k;
    return FormulaPtr(f);
}

FormulaPtr Formula1D::coset(const Rational& center, const PowerCoset& c) {
    if (c.n < 1) throw InvalidArgument("coset exponent must be positive");
    auto* f = new Formula1D(Kind::Coset);
    f->center_ = center;
    f->coset_ = c;
    return FormulaPtr(f);
}

FormulaPtr Formula1D::conj(FormulaPtr a, FormulaPtr b) {
    auto* f = new Formula1D(Kind::And);
    f->a_ = std::move(a);
    f->b_ = std::move(b);
    return FormulaPtr(f);
}

FormulaPtr Formula1D::disj(FormulaPtr a, FormulaPtr b) {
    auto* f = new Formula1D(Kind::Or);
    f->a_ = std::move(a);
    f->b_ = std::move(b);
    return FormulaPtr(f);
}

FormulaPtr Formula1D::negate(FormulaPtr a) {
    auto* f = new Formula1D(Kind::Not);
    f->a_ = std::move(a);
    return FormulaPtr(f);
}

FormulaPtr Formula1D::all_of(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return truth(true);
    FormulaPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

FormulaPtr Formula1D::any_of(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return truth(false);
    FormulaPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

bool Formula1D::eval(const Rational& t, long p) const {
    switch (kind_) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Ord: {
            auto v = ord_p(Rational(t - center_), p);
            if (!v) return cmp_ == Cmp::Ge || cmp_ == Cmp::Gt;
            switch (cmp_) {
                case Cmp::Lt: return *v < k_;
                case Cmp::Le: return *v <= k_;
                case Cmp::Eq: return *v == k_;
                case Cmp::Ge: return *v >= k_;
                case Cmp::Gt: return *v > k_;
            }
            return false;
        }
        case Kind::Coset: return membership(Rational(t - center_), p, coset_);
        case Kind::And: return a_->eval(t, p) && b_->eval(t, p);
        case Kind::Or: return a_->eval(t, p) || b_->eval(t, p);
        case Kind::Not: return !a_->eval(t, p);
    }
    return false;
}

void Formula1D::collect(std::vector<Rational>* centers, std::vector<long>* levels,
                        std::vector<long>* exps) const {
    switch (kind_) {
        case Kind::True:
        case Kind::False: return;
        case Kind::Ord:
            if (std::find(centers->begin(), centers->end(), center_) == centers->end())
                centers->push_back(center_);
            levels->push_back(k_);
            return;
        case Kind::Coset:
            if (std::find(centers->begin(), centers->end(), center_) == centers->end())
                centers->push_back(center_);
            exps->push_back(coset_.n);
            return;
        case Kind::Not: a_->collect(centers, levels, exps); return;
        case Kind::And:
        case Kind::Or:
            a_->collect(centers, levels, exps);
            b_->collect(centers, levels, exps);
            return;
    }
}

std::vector<Rational> Formula1D::centers() const {
    std::vector<Rational> c;
    std::vector<long> l, e;
    collect(&c, &l, &e);
    return c;
}

std::vector<long> Formula1D::ord_levels() const {
    std::vector<Rational> c;
    std::vector<long> l, e;
    collect(&c, &l, &e);
    return l;
}

std::vector<long> Formula1D::coset_exponents() const {
    std::vector<Rational> c;
    std::vector<long> l, e;
    collect(&c, &l, &e);
    return e;
}

namespace {

std::string shifted_t(const Rational& c) {
    if (c == 0) return "t";
    if (c > 0) return "t - " + to_string(c);
    return "t + " + to_string(Rational(-c));
}

std::string child(const FormulaPtr& f) {
    auto k = f->kind();
    if (k == Formula1D::Kind::And || k == Formula1D::Kind::Or) return "(" + f->to_string() + ")";
    return f->to_string();
}

}  // namespace

std::string Formula1D::to_string() const {
    switch (kind_) {
        case Kind::True: return "true";
        case Kind::False: return "false";
        case Kind::Ord:
            return "ord(" + shifted_t(center_) + ") " + pdens::to_string(cmp_) + " " + std::to_string(k_);
        case Kind::Coset:
            return shifted_t(center_) + " in " + pdens::to_string(coset_.scale) + " * P " +
                   std::to_string(coset_.n);
        case Kind::And: return child(a_) + " and " + child(b_);
        case Kind::Or: return child(a_) + " or " + child(b_);
        case Kind::Not: return "not " + child(a_);
    }
    return "";
}

bool operator==(const Formula1D& x, const Formula1D& y) {
    if (x.kind_ != y.kind_) return false;
    switch (x.kind_) {
        case Formula1D::Kind::True:
        case Formula1D::Kind::False: return true;
        case Formula1D::Kind::Ord: return x.center_ == y.center_ && x.cmp_ == y.cmp_ && x.k_ == y.k_;
        case Formula1D::Kind::Coset: return x.center_ == y.center_ && x.coset_ == y.coset_;
        case Formula1D::Kind::Not: return *x.a_ == *y.a_;
        case Formula1D::Kind::And:
        case Formula1D::Kind::Or: return *x.a_ == *y.a_ && *x.b_ == *y.b_;
    }
    return false;
}

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (!a || !b) return a == b;
    return *a == *b;
}

}  // namespace pdens
