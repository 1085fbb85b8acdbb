#include "pdens/errors.hpp"
#include "pdens/power_classes.hpp"
#include "pdens/set1d.hpp"

#include <algorithm>
#include <map>

namespace pdens {

namespace {

struct Band {
    std::optional<long> lo, hi;
    // accepted fine classes, and the valuation residues that occur in the band
    std::set<CosetClass> accepted;
    std::set<long> residues;
};

// Coarsest exponent m | n for which `accepted` is a union of fibres of
// K^x/P_n -> K^x/P_m, ignoring classes whose valuation residue never occurs.
std::pair<long, std::set<CosetClass>> coarsen(long p, long n, const std::set<CosetClass>& accepted,
                                              const std::set<long>& residues) {
    const auto& fine = PowerClasses::get(p, n);
    for (long m = 1; m <= n; ++m) {
        if (n % m != 0) continue;
        const auto& coarse = PowerClasses::get(p, m);
        std::map<CosetClass, std::pair<bool, bool>> seen;  // (some in, some out)
        for (const auto& c : fine.all()) {
            if (!residues.count(c.val)) continue;
            auto& s = seen[fine.reduce(c, coarse)];
            (accepted.count(c) ? s.first : s.second) = true;
        }
        bool ok = true;
        std::set<CosetClass> out;
        for (const auto& [k, s] : seen) {
            if (s.first && s.second) {
                ok = false;
                break;
            }
            if (s.first) out.insert(k);
        }
        if (ok) return {m, out};
    }
    return {n, accepted};
}

}  // namespace

Set1D normalize_1d(long p, const FormulaPtr& f) {
    std::vector<Rational> centers = f->centers();
    if (centers.empty()) centers.push_back(Rational(0));
    const std::size_t m = centers.size();

    long n_all = 1;
    int r0 = 1;
    for (long e : f->coset_exponents()) {
        n_all = lcm(n_all, e);
        r0 = std::max(r0, PowerClasses::get(p, e).digits());
    }
    const long nf = lcm(n_all, (p - 1) * ipow(p, static_cast<unsigned long>(r0 - 1)).get_si());
    const auto& fine = PowerClasses::get(p, nf);
    const int rf = fine.digits();
    const long hf = fine.unit_classes();
    const long modulus = ipow(p, static_cast<unsigned long>(rf)).get_si();

    // rho[i][j] = ord(c_i - c_j)
    std::vector<std::vector<long>> rho(m, std::vector<long>(m, 0));
    std::vector<long> landmarks = f->ord_levels();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j) {
                rho[i][j] = ord_nonzero(Rational(centers[i] - centers[j]), p);
                landmarks.push_back(rho[i][j]);
            }
    long k_lo = 0, k_hi = 0;
    if (!landmarks.empty()) {
        k_lo = *std::min_element(landmarks.begin(), landmarks.end());
        k_hi = *std::max_element(landmarks.begin(), landmarks.end());
    }
    const long d_lo = k_lo - rf - 2 * nf;
    const long d_hi = k_hi + rf + 2 * nf;

    std::vector<Rational> unit_reps(static_cast<std::size_t>(hf));
    {
        long g = fine.primitive_root();
        long u = 1;
        for (long i = 0; i < hf; ++i) {
            unit_reps[static_cast<std::size_t>(i)] = Rational(u);
            u = static_cast<long>((__int128)u * g % modulus);
        }
    }

    std::vector<Cell1D> cells;
    for (std::size_t i = 0; i < m; ++i) {
        long start = d_lo;
        if (i > 0) {
            long need = d_lo;
            for (std::size_t j = 0; j < i; ++j) need = std::max(need, rho[i][j] + 1);
            start = need;
        }
        if (start > d_hi) start = d_hi;
        // truth[delta - start] = accepted unit indices at valuation delta
        std::vector<std::vector<bool>> truth;
        for (long delta = start; delta <= d_hi; ++delta) {
            std::vector<bool> row(static_cast<std::size_t>(hf), false);
            Rational scale = qpow(p, delta);
            for (long u = 0; u < hf; ++u) {
                Rational t = centers[i] + scale * unit_reps[static_cast<std::size_t>(u)];
                bool in_region = true;
                for (std::size_t j = 0; j < m && in_region; ++j) {
                    if (j == i) continue;
                    auto dj = ord_p(Rational(t - centers[j]), p);
                    if (!dj || (j < i ? *dj >= delta : *dj > delta)) in_region = false;
                }
                row[static_cast<std::size_t>(u)] = in_region && f->eval(t, p);
            }
            truth.push_back(std::move(row));
        }
        auto row_at = [&](long delta) -> const std::vector<bool>& {
            return truth[static_cast<std::size_t>(delta - start)];
        };

        std::vector<Band> bands;
        std::optional<long> cur_hi;
        long cur_lo = d_hi;
        auto close_band = [&](std::optional<long> lo) {
            Band b;
            b.lo = lo;
            b.hi = cur_hi;
            long top = cur_hi ? *cur_hi : d_hi;
            for (long delta = std::max(cur_lo, top - nf + 1); delta <= top; ++delta) {
                b.residues.insert(mod(delta, nf));
                const auto& row = row_at(delta);
                for (long u = 0; u < hf; ++u)
                    if (row[static_cast<std::size_t>(u)]) b.accepted.insert({mod(delta, nf), u});
            }
            bands.push_back(std::move(b));
        };
        for (long delta = d_hi - 1; delta >= start; --delta) {
            long top = cur_hi ? *cur_hi : d_hi;
            if (delta + nf > top || row_at(delta) == row_at(delta + nf)) {
                cur_lo = delta;
            } else {
                close_band(cur_lo);
                cur_hi = delta;
                cur_lo = delta;
            }
        }
        close_band(i == 0 ? std::optional<long>() : std::optional<long>(cur_lo));

        for (const auto& b : bands) {
            if (b.accepted.empty()) continue;
            auto [mexp, classes] = coarsen(p, nf, b.accepted, b.residues);
            const auto& pc = PowerClasses::get(p, mexp);
            for (const auto& c : classes)
                cells.emplace_back(centers[i], PowerCoset{pc.representative(c), mexp}, b.lo, b.hi);
        }
    }
    for (const auto& c : centers)
        if (f->eval(c, p)) cells.push_back(Cell1D::point(c));
    return Set1D::from_disjoint_cells(p, std::move(cells));
}

namespace {

// Formula for origin + (union of the given classes of K^x/P_n).
FormulaPtr classes_formula(long p, long n, const std::set<CosetClass>& classes, const Rational& origin) {
    const auto& pc = PowerClasses::get(p, n);
    std::vector<FormulaPtr> fs;
    for (const auto& c : classes) fs.push_back(Formula1D::coset(origin, PowerCoset{pc.representative(c), n}));
    return Formula1D::any_of(fs);
}

bool group_stable(long p, long n, const std::set<CosetClass>& classes, const std::set<CosetClass>& group) {
    const auto& pc = PowerClasses::get(p, n);
    for (const auto& c : classes)
        for (const auto& g : group)
            if (!classes.count(pc.add(c, g))) return false;
    return true;
}

// Whether (X - x0) meets B(0, level) in (cone) meet B(0, level), the cone
// being the union of classes found by probing; level absent means no ball.
bool cone_on_ball(const Set1D& x, const Rational& origin, const Subgroup& group, std::optional<long> level) {
    const long p = x.prime();
    const long n = lcm(x.coset_lcm(), group.exponent());
    const auto& pc = PowerClasses::get(p, n);
    const auto gclasses = group.classes_at(n);
    std::set<CosetClass> classes;
    for (const auto& c : pc.all()) {
        Rational rep = pc.representative(c);
        if (level) {
            // push the representative into the ball without changing its class
            long v = ord_nonzero(rep, p);
            long need = *level - v;
            if (need > 0) rep *= qpow(p, n * ((need + n - 1) / n));
        }
        if (x.contains(Rational(origin + rep))) classes.insert(c);
    }
    if (!group_stable(p, n, classes, gclasses)) return false;
    FormulaPtr ball = level ? Formula1D::ord(origin, Cmp::Ge, *level) : Formula1D::truth(true);
    FormulaPtr not_origin = Formula1D::negate(Formula1D::coset(origin, PowerCoset{Rational(0), 1}));
    FormulaPtr lhs = Formula1D::all_of({x.formula(), ball, not_origin});
    FormulaPtr rhs = Formula1D::all_of({classes_formula(p, n, classes, origin), ball});
    FormulaPtr diff = Formula1D::disj(Formula1D::conj(lhs, Formula1D::negate(rhs)),
                                      Formula1D::conj(rhs, Formula1D::negate(lhs)));
    return normalize_1d(p, diff).is_empty();
}

}  // namespace

bool is_lambda_cone(const Set1D& x, const Subgroup& group, const Rational& origin) {
    if (group.prime() != x.prime()) throw InvalidArgument("prime mismatch");
    return cone_on_ball(x, origin, group, std::nullopt);
}

long local_cone_radius(const Set1D& x, const Rational& origin, const Subgroup& group) {
    const long p = x.prime();
    const long n = x.coset_lcm();
    if (!group.is_subset_of(Subgroup::power(p, n)))
        throw InvalidSubgroup("group must lie inside P_" + std::to_string(n));
    long bound = 0;
    for (const auto& c : x.cells()) {
        if (c.center != origin) bound = std::max(bound, ord_nonzero(Rational(c.center - origin), p));
        if (c.lo) bound = std::max(bound, *c.lo);
        if (c.hi) bound = std::max(bound, *c.hi);
    }
    bound += PowerClasses::get(p, lcm(n, group.exponent())).digits() + lcm(n, group.exponent()) + 2;
    for (long g = 0; g <= bound; ++g)
        if (cone_on_ball(x, origin, group, g)) return g;
    throw InternalInconsistency("no local cone radius found up to level " + std::to_string(bound));
}

}  // namespace pdens
