#pragma once

#include "pdens/ep_sequence.hpp"

#include <random>

namespace fixtures {

inline pdens::Rational random_rational(std::mt19937& rng, long span = 20) {
    std::uniform_int_distribution<long> num(-span, span), den(1, span);
    pdens::Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

/// Bounded sequence with random head, constants and decaying terms.
inline pdens::EPSequence random_bounded_ep(std::mt19937& rng) {
    using namespace pdens;
    static const long primes[] = {3, 5, 7};
    std::uniform_int_distribution<int> pick(0, 2), mod(1, 4), onset(0, 3), nterms(0, 2), ell(0, 2), expo(-3, -1);
    long q = primes[pick(rng)];
    long e = mod(rng);
    long b = onset(rng);
    std::vector<Rational> head;
    for (long n = 0; n < b; ++n) head.push_back(random_rational(rng));
    std::vector<EPBranch> branches;
    for (long c = 0; c < e; ++c) {
        EPBranch br{random_rational(rng), {}};
        int k = nterms(rng);
        for (int i = 0; i < k; ++i) br.terms.push_back({random_rational(rng), ell(rng), expo(rng)});
        branches.push_back(br);
    }
    return EPSequence(q, e, b, std::move(head), std::move(branches));
}

}  // namespace fixtures
