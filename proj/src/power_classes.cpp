#include "pdens/power_classes.hpp"

#include "pdens/errors.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace pdens {

namespace {

long powmod(long base, long e, long m) {
    long result = 1 % m;
    long b = base % m;
    while (e > 0) {
        if (e & 1) result = static_cast<long>((__int128)result * b % m);
        b = static_cast<long>((__int128)b * b % m);
        e >>= 1;
    }
    return result;
}

// Smallest primitive root modulo p^2; it generates (Z/p^k)^x for every k.
long primitive_root_p2(long p) {
    const long order = p - 1;
    std::vector<long> factors;
    long m = order;
    for (long d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) factors.push_back(m);
    for (long g = 2; g < p * p; ++g) {
        if (g % p == 0) continue;
        bool primitive = true;
        for (long f : factors)
            if (powmod(g, order / f, p) == 1) primitive = false;
        if (!primitive) continue;
        if (powmod(g, p - 1, p * p) != 1) return g;
    }
    throw InternalInconsistency("no primitive root found");
}

}  // namespace

PowerClasses::PowerClasses(long p, long n) : p_(p), n_(n) {
    if (n < 1) throw InvalidArgument("power class exponent must be positive");
    s_ = static_cast<int>(ord_p(Integer(n), p));
    r_ = s_ + 1;
    Integer m = ipow(p, static_cast<unsigned long>(r_));
    if (m > 10'000'000) throw InvalidArgument("power class table too large for n = " + std::to_string(n));
    modulus_ = m.get_si();
    phi_ = (p - 1) * (modulus_ / p);
    h_ = gcd(n, phi_);
    root_ = primitive_root_p2(p);
    log_.assign(static_cast<std::size_t>(modulus_), -1);
    long g = 1;
    for (long i = 0; i < phi_; ++i) {
        log_[static_cast<std::size_t>(g)] = i;
        g = static_cast<long>((__int128)g * root_ % modulus_);
    }
}

const PowerClasses& PowerClasses::get(long p, long n) {
    static std::mutex mutex;
    static std::map<std::pair<long, long>, std::unique_ptr<PowerClasses>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{p, n}];
    if (!slot) slot.reset(new PowerClasses(p, n));
    return *slot;
}

CosetClass PowerClasses::class_of_unit_residue(long residue) const {
    long l = log_[static_cast<std::size_t>(mod(residue, modulus_))];
    if (l < 0) throw InvalidArgument("residue is not a unit");
    return {0, l % h_};
}

CosetClass PowerClasses::class_of(const Rational& x) const {
    if (x == 0) throw InvalidArgument("zero has no power class");
    long v = ord_nonzero(x, p_);
    long u = unit_residue(x, p_, r_).get_si();
    return {mod(v, n_), class_of_unit_residue(u).unit};
}

CosetClass PowerClasses::class_of(const PadicNumber& x) const {
    if (x.is_zero()) throw InvalidArgument("zero has no power class");
    if (x.prime().value() != p_) throw InvalidArgument("prime mismatch");
    if (x.precision() < required_precision())
        throw PrecisionExhausted("need " + std::to_string(required_precision()) +
                                 " unit digits to decide P_" + std::to_string(n_) +
                                 " membership, have " + std::to_string(x.precision()));
    Integer u = x.unit() % modulus_;
    return {mod(*x.valuation(), n_), class_of_unit_residue(u.get_si()).unit};
}

Rational PowerClasses::representative(CosetClass c) const {
    long u = powmod(root_, c.unit, modulus_);
    return qpow(p_, c.val) * Rational(u);
}

CosetClass PowerClasses::add(CosetClass a, CosetClass b) const {
    return {mod(a.val + b.val, n_), mod(a.unit + b.unit, h_)};
}

CosetClass PowerClasses::negate(CosetClass a) const { return {mod(-a.val, n_), mod(-a.unit, h_)}; }

CosetClass PowerClasses::reduce(CosetClass c, const PowerClasses& coarser) const {
    if (n_ % coarser.n_ != 0) throw InvalidArgument("reduction target exponent must divide");
    return {mod(c.val, coarser.n_), mod(c.unit, coarser.h_)};
}

std::vector<CosetClass> PowerClasses::all() const {
    std::vector<CosetClass> out;
    out.reserve(static_cast<std::size_t>(n_ * h_));
    for (long a = 0; a < n_; ++a)
        for (long b = 0; b < h_; ++b) out.push_back({a, b});
    return out;
}

std::vector<CosetClass> PowerClasses::power_image(long k) const {
    std::set<CosetClass> image;
    for (const auto& c : all()) image.insert({mod(k * c.val, n_), mod(k * c.unit, h_)});
    return {image.begin(), image.end()};
}

bool is_nth_power(const PadicNumber& x, long n) {
    if (x.is_zero()) throw InvalidArgument("is_nth_power requires a nonzero argument");
    return PowerClasses::get(x.prime().value(), n).class_of(x) == CosetClass{};
}

bool membership(const PadicNumber& x, const PowerCoset& c) {
    if (c.scale == 0) return x.is_zero();
    if (x.is_zero()) return false;
    const auto& pc = PowerClasses::get(x.prime().value(), c.n);
    return pc.class_of(x) == pc.class_of(c.scale);
}

bool membership(const Rational& x, long p, const PowerCoset& c) {
    if (c.scale == 0) return x == 0;
    if (x == 0) return false;
    const auto& pc = PowerClasses::get(p, c.n);
    return pc.class_of(x) == pc.class_of(c.scale);
}

long unit_power_classes_by_enumeration(long p, long n) {
    const int r = static_cast<int>(ord_p(Integer(n), p)) + 1;
    const long modulus = ipow(p, static_cast<unsigned long>(r)).get_si();
    std::set<long> powers;
    long units = 0;
    for (long u = 1; u < modulus; ++u) {
        if (u % p == 0) continue;
        ++units;
        powers.insert(powmod(u, n, modulus));
    }
    return units / static_cast<long>(powers.size());
}

std::pair<long, std::set<CosetClass>> minimize_classes(long p, long n,
                                                       const std::set<CosetClass>& classes) {
    const auto& fine = PowerClasses::get(p, n);
    for (long m = 1; m <= n; ++m) {
        if (n % m != 0) continue;
        const auto& coarse = PowerClasses::get(p, m);
        std::set<CosetClass> image;
        for (const auto& c : classes) image.insert(fine.reduce(c, coarse));
        const long fibre = fine.index() / coarse.index();
        if (static_cast<long>(image.size()) * fibre == static_cast<long>(classes.size()))
            return {m, image};
    }
    return {n, classes};
}

std::set<CosetClass> lift_classes(long p, long n, const std::set<CosetClass>& classes, long m) {
    if (m % n != 0) throw InvalidArgument("lift target must be a multiple of the exponent");
    const auto& fine = PowerClasses::get(p, m);
    const auto& coarse = PowerClasses::get(p, n);
    std::set<CosetClass> out;
    for (const auto& c : fine.all())
        if (classes.count(fine.reduce(c, coarse))) out.insert(c);
    return out;
}

Subgroup::Subgroup(long p, long n, std::set<CosetClass> classes)
    : p_(p), n_(n), classes_(std::move(classes)) {}

Subgroup Subgroup::power(long p, long n) {
    Prime check(p);
    (void)check;
    if (n < 1) throw InvalidSubgroup("P_n needs n >= 1");
    return Subgroup(p, n, {CosetClass{}});
}

Subgroup Subgroup::from_classes(long p, long n, std::set<CosetClass> classes) {
    const auto& pc = PowerClasses::get(p, n);
    if (!classes.count(CosetClass{})) throw InvalidSubgroup("subgroup must contain 1");
    for (const auto& a : classes)
        for (const auto& b : classes)
            if (!classes.count(pc.add(a, b)))
                throw InvalidSubgroup("coset representatives are not closed under multiplication");
    auto [m, reduced] = minimize_classes(p, n, classes);
    return Subgroup(p, m, std::move(reduced));
}

Subgroup Subgroup::from_representatives(long p, long n, const std::vector<Rational>& reps) {
    const auto& pc = PowerClasses::get(p, n);
    std::set<CosetClass> classes;
    for (const auto& r : reps) {
        if (r == 0) throw InvalidSubgroup("zero cannot represent a coset");
        classes.insert(pc.class_of(r));
    }
    return from_classes(p, n, std::move(classes));
}

std::vector<Rational> Subgroup::representatives() const {
    const auto& pc = PowerClasses::get(p_, n_);
    std::vector<Rational> out;
    for (const auto& c : classes_) out.push_back(pc.representative(c));
    return out;
}

bool Subgroup::contains(const Rational& x) const {
    if (x == 0) return false;
    return classes_.count(PowerClasses::get(p_, n_).class_of(x)) > 0;
}

bool Subgroup::contains(const PadicNumber& x) const {
    if (x.is_zero()) return false;
    return classes_.count(PowerClasses::get(p_, n_).class_of(x)) > 0;
}

std::set<CosetClass> Subgroup::classes_at(long m) const { return lift_classes(p_, n_, classes_, m); }

Subgroup Subgroup::intersect(const Subgroup& other) const {
    if (other.p_ != p_) throw InvalidArgument("prime mismatch");
    long m = lcm(n_, other.n_);
    auto a = classes_at(m);
    auto b = other.classes_at(m);
    std::set<CosetClass> both;
    for (const auto& c : a)
        if (b.count(c)) both.insert(c);
    return from_classes(p_, m, std::move(both));
}

bool Subgroup::is_subset_of(const Subgroup& other) const {
    long m = lcm(n_, other.n_);
    auto a = classes_at(m);
    auto b = other.classes_at(m);
    for (const auto& c : a)
        if (!b.count(c)) return false;
    return true;
}

bool Subgroup::is_power_group(long* m) const {
    if (classes_.size() == 1) {
        if (m) *m = n_;
        return true;
    }
    return false;
}

std::string Subgroup::describe() const {
    long m = 0;
    if (is_power_group(&m)) return "P" + std::to_string(m);
    std::ostringstream os;
    os << "cosets " << n_ << " (";
    bool first = true;
    for (const auto& r : representatives()) {
        if (!first) os << ", ";
        os << to_string(r);
        first = false;
    }
    os << ")";
    return os.str();
}

bool operator==(const Subgroup& a, const Subgroup& b) {
    if (a.p_ != b.p_) return false;
    long m = lcm(a.n_, b.n_);
    return a.classes_at(m) == b.classes_at(m);
}

long subgroup_index(const Subgroup& group) {
    const long n = group.exponent();
    const long full = n * unit_power_classes_by_enumeration(group.prime(), n);
    return full / static_cast<long>(group.classes().size());
}

}  // namespace pdens
