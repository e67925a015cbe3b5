// wxhh.hpp
// Two-particle interferometer with tap beam splitters. Each particle is a two-path qubit
// (particle 1: a = first, c = second; particle 2: b = first, d = second). A tap on the second
// path of each particle sends amplitude to detector K (particle 1) or L (particle 2); the
// remaining light meets a phase shifter and a final beam splitter whose first output is
// detector F (particle 1) or H (particle 2).

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "hardycheck/core.hpp"
#include "hardycheck/geometry.hpp"
#include "hardycheck/hardy.hpp"
#include "hardycheck/ledger.hpp"
#include "hardycheck/qstate.hpp"

namespace hardycheck {

// (|ab> + |cd>)/sqrt(2)
inline BipartiteKet hsz_state() {
    const double h = 1.0 / std::sqrt(2.0);
    return {h, 0.0, 0.0, h};
}

struct TapConfig {
    double tau1 = 1.0; // amplitude transmittance of the tap on path c
    double tau2 = 1.0; // amplitude transmittance of the tap on path d
};

struct TapResult {
    BipartiteKet effective;  // renormalised |ab> + Q|cd>
    double q = 0.0;
    double keep_probability = 0.0;
    bool product = false;    // Q = 0: the kept branch is |ab> alone
};

inline TapResult tap_postselect(const TapConfig& t) {
    for (double tau : {t.tau1, t.tau2})
        if (!(tau >= 0.0 && tau <= 1.0)) throw error(errc::domain_error, "tap transmittance must lie in [0, 1]");
    TapResult r;
    r.q = t.tau1 * t.tau2;
    const double h = 1.0 / std::sqrt(2.0);
    BipartiteKet kept{h, 0.0, 0.0, h * r.q};
    r.keep_probability = kept.norm2();
    r.effective = kept.normalized_copy();
    r.product = r.q == 0.0;
    return r;
}

// Phase shifter and final beam splitter for one particle.
struct Setting {
    double phase = 0.0;
    double transmittance = 1.0;

    double reflectance() const { return std::sqrt(std::max(0.0, 1.0 - transmittance * transmittance)); }
};

// First: the ket whose projector is the first-output click (F or H). Second: its complement (E or G).
inline BasisPair setting_projectors(const Setting& s) {
    if (!(s.transmittance >= 0.0 && s.transmittance <= 1.0))
        throw error(errc::domain_error, "transmittance must lie in [0, 1]");
    SingleKet click{s.transmittance, I * s.reflectance() * std::polar(1.0, s.phase)};
    return {click, orthogonal_complement(click)};
}

// Setting whose first-output ket equals k up to a global phase.
inline Setting setting_for(const SingleKet& k) {
    SingleKet n = k.normalized_copy();
    Setting s;
    s.transmittance = std::min(1.0, std::abs(n[0]));
    if (std::abs(n[1]) == 0.0) return s;
    double ph = std::arg(n[1]) - pi / 2.0;
    if (std::abs(n[0]) > 0.0) ph -= std::arg(n[0]);
    ph = std::fmod(ph, 2.0 * pi);
    if (ph < 0.0) ph += 2.0 * pi;
    s.phase = ph;
    return s;
}

struct LocalUnitaries {
    Operator2 u1;
    Operator2 u2;
};

// Local unitaries with (u1 (x) u2)|a> = |b> up to a global phase, from the Schmidt forms.
inline LocalUnitaries local_equivalence(const BipartiteKet& a, const BipartiteKet& b) {
    require_normalized(a, "local_equivalence first state");
    require_normalized(b, "local_equivalence second state");
    Schmidt sa = schmidt(a);
    Schmidt sb = schmidt(b);
    for (int k = 0; k < 2; ++k)
        if (std::abs(sa.coeff[static_cast<std::size_t>(k)] - sb.coeff[static_cast<std::size_t>(k)]) > 1e-10)
            throw error(errc::spectra_mismatch, "states have different Schmidt coefficients");
    return {sb.u * sa.u.adjoint(), sb.v * sa.v.adjoint()};
}

// Hardy angle theta with the same Schmidt spectrum as (|ab> + Q|cd>)/sqrt(1+Q^2).
inline double hardy_theta_for_q(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw error(errc::domain_error, "Q must lie in [0, 1]");
    return std::asin(std::min(1.0, std::sqrt(2.0 * q / (1.0 + q * q))));
}

// Q whose entropy-matched Hardy state has parameter a.
inline double q_for_hardy_a(double a) {
    if (!(a > 0.0 && a < 1.0)) throw error(errc::domain_error, "a must lie in (0, 1)");
    const double b2 = (1.0 - a * a) / 2.0;
    return (1.0 - std::sqrt(1.0 - 4.0 * b2 * b2)) / (2.0 * b2);
}

struct WxhhSettings {
    Setting a1, b1, a2, b2;
};

// Joint first-output probabilities of two settings on a two-path state.
inline double click_click(const BipartiteKet& psi, const Setting& s1, const Setting& s2) {
    return joint_prob(psi, setting_projectors(s1).first, setting_projectors(s2).first);
}

// --- Full-run model: each particle has three terminal modes (first path, second path, tap detector).

struct FullRun {
    std::array<complex, 9> amp{}; // index 3*m1 + m2, m = 0 (first path), 1 (second path), 2 (K or L)
};

inline FullRun full_run_state(const TapConfig& t) {
    const double h = 1.0 / std::sqrt(2.0);
    const double r1 = std::sqrt(std::max(0.0, 1.0 - t.tau1 * t.tau1));
    const double r2 = std::sqrt(std::max(0.0, 1.0 - t.tau2 * t.tau2));
    const std::array<complex, 3> c{0.0, t.tau1, I * r1};
    const std::array<complex, 3> d{0.0, t.tau2, I * r2};
    FullRun f;
    f.amp[0] = h; // |a b>
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) f.amp[3 * i + j] += h * c[i] * d[j];
    return f;
}

// Joint distribution over (particle-1 outcome, particle-2 outcome) with outcomes
// 0 = first output (F/H), 1 = second output (E/G), 2 = tap detector (K/L).
inline std::array<std::array<double, 3>, 3> full_run_distribution(const FullRun& f, const Setting& s1, const Setting& s2) {
    auto embed = [](const BasisPair& bp) {
        std::array<std::array<complex, 3>, 3> k{};
        k[0] = {bp.first[0], bp.first[1], 0.0};
        k[1] = {bp.second[0], bp.second[1], 0.0};
        k[2] = {0.0, 0.0, 1.0};
        return k;
    };
    auto k1 = embed(setting_projectors(s1));
    auto k2 = embed(setting_projectors(s2));
    std::array<std::array<double, 3>, 3> p{};
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y) {
            complex amp = 0.0;
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) amp += std::conj(k1[x][i]) * std::conj(k2[y][j]) * f.amp[3 * i + j];
            p[x][y] = std::norm(amp);
        }
    return p;
}

// Max difference between (a) full-run statistics conditioned on no K and no L clicks and
// (b) statistics of the renormalised effective state, over all four kept outcome pairs.
inline double selection_order_deviation(const TapConfig& t, const Setting& s1, const Setting& s2) {
    auto full = full_run_distribution(full_run_state(t), s1, s2);
    double kept = 0.0;
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) kept += full[x][y];
    TapResult eff = tap_postselect(t);
    BasisPair p1 = setting_projectors(s1);
    BasisPair p2 = setting_projectors(s2);
    const std::array<SingleKet, 2> k1{p1.first, p1.second};
    const std::array<SingleKet, 2> k2{p2.first, p2.second};
    double dev = std::abs(kept - eff.keep_probability);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            dev = std::max(dev, std::abs(full[x][y] / kept - joint_prob(eff.effective, k1[x], k2[y])));
    return dev;
}

struct WxhhAnalysis {
    double q = 0.0;
    double theta_eff = 0.0;
    double a_eff = 0.0;
    double entropy = 0.0;
    WxhhSettings settings;
    Ledger ledger;
    double equivalence_residual = 0.0;     // |(u1 (x) u2) eta - hardy| up to phase
    double selection_order_deviation = 0.0; // over all four settings pairs, symmetric taps
};

inline WxhhAnalysis wxhh_ledger(double q, double tolerance = 1e-10) {
    if (!(q > 0.0 && q < 1.0)) throw error(errc::domain_error, "Q must lie in (0, 1)");
    WxhhAnalysis w;
    w.q = q;
    const TapConfig taps{std::sqrt(q), std::sqrt(q)};
    const BipartiteKet eta = tap_postselect(taps).effective;
    w.entropy = partial_entropy(eta);
    w.theta_eff = hardy_theta_for_q(q);
    w.a_eff = std::cos(w.theta_eff);
    const BipartiteKet target = hardy_state(w.theta_eff);
    LocalUnitaries u = local_equivalence(eta, target);
    {
        BipartiteKet mapped = apply_local(u.u1, u.u2, eta);
        w.equivalence_residual = std::abs(1.0 - std::abs(inner(target, mapped)));
    }

    // Measuring k on the Hardy state equals measuring u^dagger k on eta.
    const BPair b = hardy_b_basis(w.theta_eff);
    const Operator2 u1d = u.u1.adjoint();
    const Operator2 u2d = u.u2.adjoint();
    w.settings.a1 = setting_for(u1d * ket_minus());
    w.settings.b1 = setting_for(u1d * b.ominus);
    w.settings.a2 = setting_for(u2d * ket_minus());
    w.settings.b2 = setting_for(u2d * b.ominus);

    auto marginal1 = [&](const Setting& s) { return conditional_second(eta, setting_projectors(s).first).weight; };
    auto marginal2 = [&](const Setting& s) { return conditional_first(eta, setting_projectors(s).first).weight; };
    const auto& st = w.settings;
    Ledger l("wxhh");
    l.add("B1F_forces_A2H", "P(A2=H | B1=F)", click_click(eta, st.b1, st.a2) / marginal1(st.b1), Target::exactly(1.0), tolerance);
    l.add("B2H_forces_A1F", "P(A1=F | B2=H)", click_click(eta, st.a1, st.b2) / marginal2(st.b2), Target::exactly(1.0), tolerance);
    l.add("never_A1F_A2H", "P(A1=F, A2=H)", click_click(eta, st.a1, st.a2), Target::exactly(0.0), tolerance);
    const double w4 = click_click(eta, st.b1, st.b2);
    l.add("contradiction", "P(B1=F, B2=H)", w4, Target::positive(), tol::vanishing);
    l.add("contradiction_matches_hardy", "P(B1=F, B2=H) equals the Hardy probability of the matched state", w4,
          Target::exactly(p_hardy(w.a_eff)), tolerance);
    w.ledger = std::move(l);

    double dev = 0.0;
    for (const Setting* s1 : {&st.a1, &st.b1})
        for (const Setting* s2 : {&st.a2, &st.b2}) dev = std::max(dev, selection_order_deviation(taps, *s1, *s2));
    w.selection_order_deviation = dev;
    return w;
}

} // namespace hardycheck
