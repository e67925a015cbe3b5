// postselect.hpp
// Hardy and Goldstein reasoning with the particle-1 A-measurement replaced by unambiguous
// discrimination: post-selected ledgers, inconclusive-event probabilities by two routes,
// and the gap between contradicting and inapplicable events.

#pragma once

#include <cmath>
#include <limits>
#include <string_view>

#include "hardycheck/core.hpp"
#include "hardycheck/discrimination.hpp"
#include "hardycheck/geometry.hpp"
#include "hardycheck/hardy.hpp"
#include "hardycheck/ledger.hpp"
#include "hardycheck/qstate.hpp"

namespace hardycheck {

enum class ProofVersion { hardy, goldstein };

inline std::string_view to_string(ProofVersion v) { return v == ProofVersion::hardy ? "hardy" : "goldstein"; }

// Everything derived from one angle triple, built once.
struct ProofContext {
    ProofAngles angles;
    HardyParams hardy;
    DerivedGeometry geometry;
    ProofBases bases;
    Povm povm;
    BipartiteKet psi;

    explicit ProofContext(const ProofAngles& p, double margin = tol::angle_margin)
        : angles(p),
          hardy(HardyParams::from_theta(p.theta)),
          geometry(derive_geometry(p, margin)),
          bases(build_bases(p, geometry)),
          povm(ud_povm(bases.hat1)),
          psi(hardy_state(p.theta)) {}

    // P(outcome of A^_1, k2)
    double p_a1(PovmLabel l, const SingleKet& k2) const { return povm_joint_prob(psi, povm[l], k2); }
    double p_ominus_ominus() const { return joint_prob(psi, bases.circ1.second, bases.circ2.second); }
    double overlap_abs() const { return std::abs(std::sin(angles.alpha - angles.beta)); }
};

namespace detail {

inline double ratio(double num, double den) {
    return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

} // namespace detail

inline Ledger generalized_ledger(const ProofContext& c, ProofVersion version, double tolerance = 1e-10) {
    const auto& b = c.bases;
    const SingleKet& plus2 = b.hat2.first;
    const SingleKet& minus2 = b.hat2.second;
    const SingleKet& oplus2 = b.circ2.first;
    const SingleKet& ominus2 = b.circ2.second;
    const double p_oo = c.p_ominus_ominus();

    Ledger l(version == ProofVersion::hardy ? "hardy-postselected" : "goldstein-postselected");
    if (version == ProofVersion::hardy) {
        // Runs with A^_1 inconclusive and B^_2 = ominus^ are discarded.
        Conditional given_om1 = conditional_second(c.psi, b.circ1.second);
        l.add("ominus1_forces_minus2", "P(-^_2 | ominus^_1)", detail::ratio(std::norm(inner(minus2, given_om1.ket)), given_om1.weight),
              Target::exactly(1.0), tolerance);
        const double pm = c.p_a1(PovmLabel::minus, ominus2);
        const double pp = c.p_a1(PovmLabel::plus, ominus2);
        l.add("ominus2_forces_minus1_selected", "P(-^_1 | ominus^_2, selected)", detail::ratio(pm, pm + pp), Target::exactly(1.0), tolerance);
        l.add("never_minus_minus", "P(-^_1, -^_2)", c.p_a1(PovmLabel::minus, minus2), Target::exactly(0.0), tolerance);
        l.add("contradiction", "P(ominus^_1, ominus^_2)", p_oo, Target::positive(), tol::vanishing);
    } else {
        // Runs with A^_1 inconclusive and A^_2 = -^ are discarded.
        const double p_incl_minus = c.p_a1(PovmLabel::inconclusive, minus2);
        l.add("never_minus_minus_selected", "P(-^_1, -^_2 | selected)", detail::ratio(c.p_a1(PovmLabel::minus, minus2), 1.0 - p_incl_minus),
              Target::exactly(0.0), tolerance);
        Conditional given_p2 = conditional_first(c.psi, plus2);
        l.add("plus2_forces_oplus1", "P(oplus^_1 | +^_2)", detail::ratio(std::norm(inner(b.circ1.first, given_p2.ket)), given_p2.weight),
              Target::exactly(1.0), tolerance);
        const double po = c.p_a1(PovmLabel::plus, oplus2);
        const double pm = c.p_a1(PovmLabel::plus, ominus2);
        l.add("plus1_forces_oplus2_conclusive", "P(oplus^_2 | +^_1)", detail::ratio(po, po + pm), Target::exactly(1.0), tolerance);
        l.add("contradiction", "P(ominus^_1, ominus^_2)", p_oo, Target::positive(), tol::vanishing);
    }
    if (!(p_oo > tol::vanishing)) {
        l.applicable = false;
        l.note = "VanishingContradiction: P(ominus^_1, ominus^_2) vanishes for these angles";
    }
    return l;
}

inline Ledger generalized_ledger(const ProofAngles& p, ProofVersion version, double tolerance = 1e-10) {
    return generalized_ledger(ProofContext(p), version, tolerance);
}

struct TwoRoutes {
    double via_trace = 0.0;
    double via_decomposition = 0.0;

    double disagreement() const { return std::abs(via_trace - via_decomposition); }
};

// P(?_1, -^_2)
inline TwoRoutes p_inconclusive_minus(const ProofContext& c) {
    const double a = c.hardy.a;
    const double b = c.hardy.b;
    const auto& g = c.geometry;
    TwoRoutes t;
    t.via_trace = c.p_a1(PovmLabel::inconclusive, c.bases.hat2.second);
    const double sg = g.sin_gamma;
    const double cg = g.cos_gamma;
    const double marginal = sqr(-a * sg + b * cg) + sqr(b * sg);
    const double plus_minus = (1.0 - c.overlap_abs()) * sqr(g.m * g.r);
    const double minus_minus = 0.0;
    t.via_decomposition = marginal - plus_minus - minus_minus;
    return t;
}

// P(?_1, ominus^_2)
inline TwoRoutes p_inconclusive_ominus(const ProofContext& c) {
    const double a = c.hardy.a;
    const double b = c.hardy.b;
    const auto& g = c.geometry;
    TwoRoutes t;
    t.via_trace = c.p_a1(PovmLabel::inconclusive, c.bases.circ2.second);
    const double sge = g.sin_gamma * g.cos_eps + g.cos_gamma * g.sin_eps;
    const double cge = g.cos_gamma * g.cos_eps - g.sin_gamma * g.sin_eps;
    const double marginal = sqr(-a * sge + b * cge) + sqr(b * sge);
    const double plus_ominus = 0.0;
    const double minus_ominus = (1.0 - c.overlap_abs()) * sqr(g.m * g.s * g.sin_eps);
    t.via_decomposition = marginal - plus_ominus - minus_ominus;
    return t;
}

inline TwoRoutes p_inconclusive_minus(const ProofAngles& p) { return p_inconclusive_minus(ProofContext(p)); }
inline TwoRoutes p_inconclusive_ominus(const ProofAngles& p) { return p_inconclusive_ominus(ProofContext(p)); }

struct GapReport {
    ProofAngles angles;
    ProofVersion version = ProofVersion::hardy;
    double p_contradiction = 0.0;
    double p_inapplicable = 0.0;
    double gap = 0.0;
};

struct GapPair {
    GapReport hardy;
    GapReport goldstein;
};

// Contradiction probability minus inapplicable-event probability for each version.
// A proof of nonlocality needs gap > 0.
inline GapPair gaps(const ProofContext& c) {
    const double p_oo = c.p_ominus_ominus();
    GapPair r;
    r.hardy = {c.angles, ProofVersion::hardy, p_oo, p_inconclusive_ominus(c).via_trace, 0.0};
    r.hardy.gap = r.hardy.p_contradiction - r.hardy.p_inapplicable;
    r.goldstein = {c.angles, ProofVersion::goldstein, p_oo, p_inconclusive_minus(c).via_trace, 0.0};
    r.goldstein.gap = r.goldstein.p_contradiction - r.goldstein.p_inapplicable;
    return r;
}

inline GapPair gaps(const ProofAngles& p) { return gaps(ProofContext(p)); }

} // namespace hardycheck
