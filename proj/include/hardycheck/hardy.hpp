// hardy.hpp
// The Hardy state family a|++> + b(|+-> + |-+>), its B-measurement basis, the Hardy and
// Goldstein ledgers and the closed-form contradiction probability with its maximum.

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "hardycheck/core.hpp"
#include "hardycheck/ledger.hpp"
#include "hardycheck/qstate.hpp"

namespace hardycheck {

struct HardyParams {
    double theta = 0.0;
    double a = 1.0; // cos(theta)
    double b = 0.0; // sin(theta)/sqrt(2)
    double n = 1.0; // 1/sqrt(1 - b^2)

    static HardyParams from_theta(double theta) {
        if (!(theta >= 0.0 && theta <= pi / 2.0))
            throw error(errc::domain_error, "theta must lie in [0, pi/2], got " + std::to_string(theta));
        HardyParams p;
        p.theta = theta;
        p.a = std::cos(theta);
        p.b = std::sin(theta) / std::sqrt(2.0);
        p.n = 1.0 / std::sqrt(1.0 - p.b * p.b);
        return p;
    }
};

inline BipartiteKet hardy_state(double theta) {
    HardyParams p = HardyParams::from_theta(theta);
    return {p.a, p.b, p.b, 0.0};
}

// Eigenbasis of B_j: first = circle-plus, second = circle-minus.
struct BPair {
    SingleKet oplus;
    SingleKet ominus;
};

inline BPair hardy_b_basis(double theta) {
    HardyParams p = HardyParams::from_theta(theta);
    return {SingleKet{p.n * p.a, p.n * p.b}, SingleKet{p.n * p.b, -p.n * p.a}};
}

// P(ominus, ominus) in closed form, as a function of a = cos(theta).
inline double p_hardy(double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw error(errc::domain_error, "p_hardy needs 0 <= a <= 1");
    return sqr((a - a * a * a) / (1.0 + a * a));
}

inline double golden_ratio_conjugate() { return (std::sqrt(5.0) - 1.0) / 2.0; }

// Closed-form maximiser and maximum of p_hardy.
inline double hardy_a_star_closed() { return std::pow(golden_ratio_conjugate(), 1.5); }
inline double hardy_p_max_closed() { return std::pow(golden_ratio_conjugate(), 5.0); }

struct HardyOptimum {
    double a_star = 0.0;
    double p_max = 0.0;
};

// Dense grid over [0,1] followed by golden-section refinement around the best cell.
inline HardyOptimum optimize_hardy(int grid_points = 10000) {
    const int n = std::max(grid_points, 3);
    const double h = 1.0 / (n - 1);
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < n; ++i) {
        double v = p_hardy(i * h);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = std::max(0.0, (best - 1) * h);
    double hi = std::min(1.0, (best + 1) * h);
    const double g = golden_ratio_conjugate();
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = p_hardy(x1);
    double f2 = p_hardy(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = p_hardy(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = p_hardy(x1);
        }
    }
    double a = 0.5 * (lo + hi);
    return {a, p_hardy(a)};
}

namespace detail {

// P(k_other | k_given) where the given outcome is on particle `given_on` (1 or 2).
inline double conditional_prob(const BipartiteKet& psi, int given_on, const SingleKet& given, const SingleKet& other) {
    Conditional c = given_on == 1 ? conditional_second(psi, given) : conditional_first(psi, given);
    if (c.weight <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::norm(inner(other, c.ket)) / c.weight;
}

} // namespace detail

// Expands hardy_state(theta) in the (B1 eigenbasis) x (A2 basis) and (A1 basis) x (B2 eigenbasis)
// product bases and compares with the rewritten forms.
inline Ledger verify_rewrite_forms(double theta, double tolerance = 1e-12) {
    HardyParams p = HardyParams::from_theta(theta);
    BipartiteKet psi = hardy_state(theta);
    BPair b = hardy_b_basis(theta);
    const double big = p.n * (1.0 - p.b * p.b);
    const double mid = p.n * p.a * p.b;
    const double small = p.n * p.b * p.b;

    Ledger l("rewrite-forms");
    auto coef = [&](const SingleKet& k1, const SingleKet& k2) { return inner(tensor(k1, k2), psi).real(); };
    l.add("B1xA2.oplus+", "coefficient on |oplus +>", coef(b.oplus, ket_plus()), Target::exactly(big), tolerance);
    l.add("B1xA2.oplus-", "coefficient on |oplus ->", coef(b.oplus, ket_minus()), Target::exactly(mid), tolerance);
    l.add("B1xA2.ominus+", "coefficient on |ominus +>", coef(b.ominus, ket_plus()), Target::exactly(0.0), tolerance);
    l.add("B1xA2.ominus-", "coefficient on |ominus ->", coef(b.ominus, ket_minus()), Target::exactly(small), tolerance);
    l.add("A1xB2.+oplus", "coefficient on |+ oplus>", coef(ket_plus(), b.oplus), Target::exactly(big), tolerance);
    l.add("A1xB2.-oplus", "coefficient on |- oplus>", coef(ket_minus(), b.oplus), Target::exactly(mid), tolerance);
    l.add("A1xB2.+ominus", "coefficient on |+ ominus>", coef(ket_plus(), b.ominus), Target::exactly(0.0), tolerance);
    l.add("A1xB2.-ominus", "coefficient on |- ominus>", coef(ket_minus(), b.ominus), Target::exactly(small), tolerance);
    return l;
}

inline void mark_applicability(Ledger& l, double p_contradiction) {
    if (!(p_contradiction > tol::vanishing)) {
        l.applicable = false;
        l.note = "no contradicting events: the proof needs a != 0 and a != 1";
    }
}

// Hardy's arrangement, all values computed from the state.
inline Ledger hardy_ledger(double theta, double tolerance = 1e-12) {
    BipartiteKet psi = hardy_state(theta);
    BPair b = hardy_b_basis(theta);
    Ledger l("hardy");
    l.add("ominus1_forces_minus2", "P(-_2 | ominus_1)", detail::conditional_prob(psi, 1, b.ominus, ket_minus()), Target::exactly(1.0),
          tolerance);
    l.add("ominus2_forces_minus1", "P(-_1 | ominus_2)", detail::conditional_prob(psi, 2, b.ominus, ket_minus()), Target::exactly(1.0),
          tolerance);
    l.add("never_minus_minus", "P(-_1, -_2)", joint_prob(psi, ket_minus(), ket_minus()), Target::exactly(0.0), tolerance);
    double p4 = joint_prob(psi, b.ominus, b.ominus);
    l.add("contradiction", "P(ominus_1, ominus_2)", p4, Target::positive(), tol::vanishing);
    mark_applicability(l, p4);
    return l;
}

// Goldstein's arrangement of the same properties.
inline Ledger goldstein_ledger(double theta, double tolerance = 1e-12) {
    BipartiteKet psi = hardy_state(theta);
    BPair b = hardy_b_basis(theta);
    Ledger l("goldstein");
    l.add("never_minus_minus", "P(-_1, -_2)", joint_prob(psi, ket_minus(), ket_minus()), Target::exactly(0.0), tolerance);
    l.add("plus2_forces_oplus1", "P(oplus_1 | +_2)", detail::conditional_prob(psi, 2, ket_plus(), b.oplus), Target::exactly(1.0),
          tolerance);
    l.add("plus1_forces_oplus2", "P(oplus_2 | +_1)", detail::conditional_prob(psi, 1, ket_plus(), b.oplus), Target::exactly(1.0),
          tolerance);
    double p4 = joint_prob(psi, b.ominus, b.ominus);
    l.add("contradiction", "P(ominus_1, ominus_2)", p4, Target::positive(), tol::vanishing);
    mark_applicability(l, p4);
    return l;
}

} // namespace hardycheck
