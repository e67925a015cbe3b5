// geometry.hpp
// Parameter machinery for the post-selected construction: the non-orthogonal particle-1
// basis fixed by (alpha, beta), the rotated particle-2 basis fixed by gamma, the circled
// bases fixed by delta and epsilon, and the coefficients q, r, s, M.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hardycheck/core.hpp"
#include "hardycheck/hardy.hpp"
#include "hardycheck/ledger.hpp"
#include "hardycheck/qstate.hpp"

namespace hardycheck {

struct ProofAngles {
    double theta = pi / 2.0;
    double alpha = pi / 3.0;
    double beta = pi / 6.0;
};

// Throws unless the angles admit the construction.
inline void validate(const ProofAngles& p, double margin = tol::angle_margin) {
    if (!(p.theta > 0.0 && p.theta <= pi / 2.0) || !std::isfinite(p.alpha) || !std::isfinite(p.beta))
        throw error(errc::domain_error, "theta must lie in (0, pi/2] and alpha, beta must be finite");
    if (std::abs(std::sin(p.alpha)) <= margin) throw error(errc::singular_alpha, "sin(alpha) vanishes");
    if (std::abs(std::sin(p.alpha - p.beta)) >= 1.0 - margin)
        throw error(errc::singular_overlap, "alpha - beta is an odd multiple of pi/2");
}

inline bool admissible(const ProofAngles& p, double margin = tol::angle_margin) {
    return p.theta > 0.0 && p.theta <= pi / 2.0 && std::abs(std::sin(p.alpha)) > margin &&
           std::abs(std::sin(p.alpha - p.beta)) < 1.0 - margin;
}

struct DerivedGeometry {
    double gamma = 0.0;
    double cos_gamma = 1.0; // from cot(gamma) directly, exact even where gamma sits near 0 or pi
    double sin_gamma = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double cos_eps = 1.0; // q / |(q, r)|, exact even where epsilon sits near +-pi
    double sin_eps = 0.0; // r / |(q, r)|
    double m = 1.0;
    double q = 0.0;
    double r = 0.0;
    double s = 0.0;
    // M cos(delta - beta) and M sin(delta - alpha); both are finite as cos(alpha - beta) -> 0.
    double m_cos_db = 0.0;
    double m_sin_da = 0.0;

    // tan(delta) as printed uses q/s in place of s/q; kept for the deviation report.
    double delta_printed = std::numeric_limits<double>::quiet_NaN();
    bool s_degenerate = false;
};

inline DerivedGeometry derive_geometry(const ProofAngles& p, double margin = tol::angle_margin) {
    validate(p, margin);
    HardyParams h = HardyParams::from_theta(p.theta);
    const double a = h.a;
    const double b = h.b;
    DerivedGeometry g;
    const double sa = std::sin(p.alpha);
    const double ca = std::cos(p.alpha);
    const double cb = std::cos(p.beta);
    const double sb = std::sin(p.beta);
    const double cu = std::cos(p.alpha - p.beta);
    // cot(gamma) = sqrt(2) cot(theta) - cot(alpha) = (a sin alpha - b cos alpha) / (b sin alpha), gamma in (0, pi)
    const double sign_a = sa > 0.0 ? 1.0 : -1.0;
    const double cot_num = sign_a * (a * sa - b * ca);
    const double cot_den = b * std::abs(sa);
    const double hg = std::hypot(cot_num, cot_den);
    g.gamma = std::atan2(cot_den, cot_num);
    g.cos_gamma = cot_num / hg;
    g.sin_gamma = cot_den / hg;
    g.m = 1.0 / cu;

    const double cg = g.cos_gamma;
    const double sg = g.sin_gamma;
    g.q = a * cb * cg + b * (sb * cg + cb * sg);
    g.s = -a * sa * cg + b * (ca * cg - sa * sg);
    // The defining relation for gamma turns -a cos(beta) sin(gamma) + b cos(beta + gamma)
    // into a product, so r keeps full relative precision when it is small.
    g.r = -b * sg * cu / sa;

    g.epsilon = std::atan2(g.r, g.q);
    const double qr = std::hypot(g.q, g.r);
    if (qr > 0.0) {
        g.cos_eps = g.q / qr;
        g.sin_eps = g.r / qr;
    }
    // q sin(delta - alpha) = s cos(delta - beta). Both components of
    // (q cos alpha - s sin beta, q sin alpha + s cos beta) equal k cos(alpha - beta) w with
    // k = sin(gamma) / (b sin(alpha)) = sign(sin alpha) / hg and w below, so delta is fixed by w alone.
    const double wx = (a * a + b * b) * sa - a * b * ca;
    const double wy = b * (a * sa - b * ca);
    const double sign = (sa > 0.0) == (cu > 0.0) ? 1.0 : -1.0;
    g.delta = std::atan2(sign * wy, sign * wx);
    // M cos(delta - beta) = q / |k cos(alpha - beta) w|, M sin(delta - alpha) = s / |k cos(alpha - beta) w|
    const double rr = std::abs(cu) * std::hypot(wx, wy) / hg;
    g.m_cos_db = g.q / rr;
    g.m_sin_da = g.s / rr;

    g.s_degenerate = std::abs(g.s) < 1e-12;
    if (!g.s_degenerate) {
        const double k = g.q / g.s;
        g.delta_printed = std::atan((std::sin(p.alpha) + k * std::cos(p.beta)) / (std::cos(p.alpha) - k * std::sin(p.beta)));
    }
    return g;
}

// Distance between two angles modulo pi (tan(delta) fixes delta only modulo pi).
inline double angle_distance_mod_pi(double x, double y) {
    double d = std::remainder(x - y, pi);
    return std::abs(d);
}

inline double delta_printed_deviation(const DerivedGeometry& g) {
    if (g.s_degenerate || !std::isfinite(g.delta_printed)) return std::numeric_limits<double>::quiet_NaN();
    return angle_distance_mod_pi(g.delta_printed, g.delta);
}

struct BasisPair {
    SingleKet first;
    SingleKet second;

    double overlap() const { return inner(second, first).real(); }
    double max_orthonormality_error() const {
        return std::max({std::abs(first.norm2() - 1.0), std::abs(second.norm2() - 1.0), std::abs(inner(first, second))});
    }
};

struct ProofBases {
    BasisPair hat1;  // |+^>_1, |-^>_1 (non-orthogonal)
    BasisPair hat2;  // |+^>_2, |-^>_2
    BasisPair circ1; // |oplus^>_1, |ominus^>_1
    BasisPair circ2; // |oplus^>_2, |ominus^>_2
};

inline ProofBases build_bases(const ProofAngles& p, const DerivedGeometry& g) {
    validate(p);
    ProofBases b;
    b.hat1.first = {std::cos(p.alpha), std::sin(p.alpha)};
    b.hat1.second = {-std::sin(p.beta), std::cos(p.beta)};
    b.hat2.first = {g.cos_gamma, g.sin_gamma};
    b.hat2.second = {-g.sin_gamma, g.cos_gamma};
    // M (cos(delta - beta) |+^> + sin(delta - alpha) |-^>) and M (-sin(delta - beta) |+^> + cos(delta - alpha) |-^>)
    // reduce to the rotated pair below; inverse_transform_residual checks the expansion.
    b.circ1.first = {std::cos(g.delta), std::sin(g.delta)};
    b.circ1.second = {-std::sin(g.delta), std::cos(g.delta)};
    b.circ2.first = g.cos_eps * b.hat2.first + g.sin_eps * b.hat2.second;
    b.circ2.second = -g.sin_eps * b.hat2.first + g.cos_eps * b.hat2.second;
    return b;
}

// Largest error when the inverse transforms are applied to rebuild |+>, |-> on both particles
// and |+^>_j, |-^>_j from the circled bases.
inline double inverse_transform_residual(const ProofAngles& p, const DerivedGeometry& g, const ProofBases& b) {
    auto diff = [](const SingleKet& x, const SingleKet& y) { return std::sqrt((x - y).norm2()); };
    double r = 0.0;
    r = std::max(r, diff(g.m * (std::cos(p.beta) * b.hat1.first - std::sin(p.alpha) * b.hat1.second), ket_plus()));
    r = std::max(r, diff(g.m * (std::sin(p.beta) * b.hat1.first + std::cos(p.alpha) * b.hat1.second), ket_minus()));
    r = std::max(r, diff(g.cos_gamma * b.hat2.first - g.sin_gamma * b.hat2.second, ket_plus()));
    r = std::max(r, diff(g.sin_gamma * b.hat2.first + g.cos_gamma * b.hat2.second, ket_minus()));
    r = std::max(r, diff(std::cos(g.delta - p.alpha) * b.circ1.first - std::sin(g.delta - p.alpha) * b.circ1.second,
                         b.hat1.first));
    r = std::max(r, diff(std::sin(g.delta - p.beta) * b.circ1.first + std::cos(g.delta - p.beta) * b.circ1.second,
                         b.hat1.second));
    r = std::max(r, diff(g.cos_eps * b.circ2.first - g.sin_eps * b.circ2.second, b.hat2.first));
    r = std::max(r, diff(g.sin_eps * b.circ2.first + g.cos_eps * b.circ2.second, b.hat2.second));
    return r;
}

namespace detail {

inline Operator2 inverse(const Operator2& a) {
    complex d = a.det();
    return (1.0 / d) * Operator2{a(1, 1), -a(0, 1), -a(1, 0), a(0, 0)};
}

// Expansion coefficients X with psi = sum X(i,j) |e_i>_1 |f_j>_2 for arbitrary (invertible) bases.
inline Operator2 expand(const BipartiteKet& psi, const BasisPair& e, const BasisPair& f) {
    Operator2 b1 = from_columns(e.first, e.second);
    Operator2 b2 = from_columns(f.first, f.second);
    return inverse(b1) * coefficient_matrix(psi) * inverse(b2.transpose());
}

} // namespace detail

// Expands the Hardy state in the three hybrid bases and compares with the rewritten forms.
inline Ledger rewrite_residuals(const ProofAngles& p, double tolerance = 1e-10) {
    DerivedGeometry g = derive_geometry(p);
    ProofBases b = build_bases(p, g);
    BipartiteKet psi = hardy_state(p.theta);
    const double m = g.m;
    const double da = g.delta - p.alpha;
    const double db = g.delta - p.beta;
    const double ce = g.cos_eps;
    const double se = g.sin_eps;

    Ledger l("rewrite-residuals");
    auto add = [&](const char* id, const char* what, complex got, double want) {
        // The construction is real; a stray imaginary part counts against the residual.
        l.add(id, what, got.real() + std::abs(got.imag()), Target::exactly(want), tolerance);
    };
    Operator2 x1 = detail::expand(psi, b.hat1, b.hat2);
    add("hatA1xhatA2.++", "coefficient on |+^ +^>", x1(0, 0), m * g.q);
    add("hatA1xhatA2.+-", "coefficient on |+^ -^>", x1(0, 1), m * g.r);
    add("hatA1xhatA2.-+", "coefficient on |-^ +^>", x1(1, 0), m * g.s);
    add("hatA1xhatA2.--", "coefficient on |-^ -^>", x1(1, 1), 0.0);

    Operator2 x2 = detail::expand(psi, b.circ1, b.hat2);
    add("hatB1xhatA2.oplus+", "coefficient on |oplus^ +^>", x2(0, 0), m * (g.q * std::cos(da) + g.s * std::sin(db)));
    add("hatB1xhatA2.oplus-", "coefficient on |oplus^ -^>", x2(0, 1), m * g.r * std::cos(da));
    add("hatB1xhatA2.ominus+", "coefficient on |ominus^ +^>", x2(1, 0), 0.0);
    add("hatB1xhatA2.ominus-", "coefficient on |ominus^ -^>", x2(1, 1), -m * g.r * std::sin(da));

    Operator2 x3 = detail::expand(psi, b.hat1, b.circ2);
    add("hatA1xhatB2.+oplus", "coefficient on |+^ oplus^>", x3(0, 0), m * (g.q * ce + g.r * se));
    add("hatA1xhatB2.+ominus", "coefficient on |+^ ominus^>", x3(0, 1), 0.0);
    add("hatA1xhatB2.-oplus", "coefficient on |-^ oplus^>", x3(1, 0), m * g.s * ce);
    add("hatA1xhatB2.-ominus", "coefficient on |-^ ominus^>", x3(1, 1), -m * g.s * se);
    return l;
}

struct OminusClosed {
    double mm1 = 0.0;
    double mm2_consistent = 0.0;
    double mm2_printed = 0.0;
};

inline OminusClosed p_joint_ominus_closed(const DerivedGeometry& g, const ProofAngles& p) {
    OminusClosed c;
    c.mm1 = sqr(g.s * g.sin_eps * g.m_cos_db);
    c.mm2_consistent = sqr(g.r * g.m_sin_da * g.cos_eps);
    c.mm2_printed = sqr(g.m * g.r * g.cos_eps * std::cos(g.delta - p.alpha));
    return c;
}

inline OminusClosed p_joint_ominus_closed(const ProofAngles& p) { return p_joint_ominus_closed(derive_geometry(p), p); }

// Direct inner-product value of P(ominus^_1, ominus^_2).
inline double p_joint_ominus_direct(const ProofAngles& p, const ProofBases& b) {
    return joint_prob(hardy_state(p.theta), b.circ1.second, b.circ2.second);
}

} // namespace hardycheck
