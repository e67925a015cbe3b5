// Shared generators for the unit tests.

#pragma once

#include <cmath>
#include <random>

#include "hardycheck/geometry.hpp"
#include "hardycheck/qstate.hpp"

namespace support {

using namespace hardycheck;

inline SingleKet random_ket(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    return SingleKet{complex{n(rng), n(rng)}, complex{n(rng), n(rng)}}.normalized_copy();
}

inline BipartiteKet random_bipartite(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    BipartiteKet k;
    for (auto& a : k.amp) a = {n(rng), n(rng)};
    return k.normalized_copy();
}

// Haar-ish random 2x2 unitary from a random orthonormal column pair and a phase.
inline Operator2 random_unitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ph(-pi, pi);
    SingleKet c0 = random_ket(rng);
    SingleKet c1 = std::polar(1.0, ph(rng)) * orthogonal_complement(c0);
    return from_columns(c0, c1);
}

inline ProofAngles random_admissible(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> th(0.0, pi / 2.0);
    std::uniform_real_distribution<double> ang(-pi, pi);
    for (;;) {
        ProofAngles p{th(rng), ang(rng), ang(rng)};
        if (p.theta > 0.0 && admissible(p)) return p;
    }
}

} // namespace support
