// qstate.hpp
// Pure states of one and two two-level systems, 2x2 operators, reduced states,
// partial entropy and outcome probabilities.
//
// Basis order for a two-particle ket is fixed as (++, +-, -+, --); index = 2*s1 + s2
// with s = 0 for "+" and s = 1 for "-".

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "hardycheck/core.hpp"

namespace hardycheck {

using complex = std::complex<double>;

inline constexpr complex I{0.0, 1.0};

inline bool is_finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// ---------------------------------------------------------------------------
// SingleKet

struct SingleKet {
    std::array<complex, 2> amp{};

    SingleKet() = default;
    SingleKet(complex first, complex second) : amp{first, second} {}

    complex& operator[](int i) { return amp[static_cast<std::size_t>(i)]; }
    const complex& operator[](int i) const { return amp[static_cast<std::size_t>(i)]; }

    double norm2() const { return std::norm(amp[0]) + std::norm(amp[1]); }
    bool finite() const { return is_finite(amp[0]) && is_finite(amp[1]); }
    bool normalized(double eps = tol::constructed) const { return std::abs(norm2() - 1.0) <= eps; }

    SingleKet normalized_copy() const {
        double n = std::sqrt(norm2());
        return n > 0.0 ? SingleKet{amp[0] / n, amp[1] / n} : *this;
    }

    friend SingleKet operator+(const SingleKet& x, const SingleKet& y) { return {x[0] + y[0], x[1] + y[1]}; }
    friend SingleKet operator-(const SingleKet& x, const SingleKet& y) { return {x[0] - y[0], x[1] - y[1]}; }
    friend SingleKet operator*(complex c, const SingleKet& x) { return {c * x[0], c * x[1]}; }
    friend SingleKet operator*(double c, const SingleKet& x) { return {c * x[0], c * x[1]}; }
};

inline SingleKet ket_plus() { return {1.0, 0.0}; }
inline SingleKet ket_minus() { return {0.0, 1.0}; }

// <x|y>
inline complex inner(const SingleKet& x, const SingleKet& y) {
    return std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1];
}

// Unit vector orthogonal to k (for normalized k).
inline SingleKet orthogonal_complement(const SingleKet& k) {
    return {-std::conj(k[1]), std::conj(k[0])};
}

// ---------------------------------------------------------------------------
// BipartiteKet

struct BipartiteKet {
    std::array<complex, 4> amp{};

    BipartiteKet() = default;
    BipartiteKet(complex pp, complex pm, complex mp, complex mm) : amp{pp, pm, mp, mm} {}

    complex& operator()(int s1, int s2) { return amp[static_cast<std::size_t>(2 * s1 + s2)]; }
    const complex& operator()(int s1, int s2) const { return amp[static_cast<std::size_t>(2 * s1 + s2)]; }

    double norm2() const {
        double s = 0.0;
        for (auto z : amp) s += std::norm(z);
        return s;
    }
    bool finite() const { return std::all_of(amp.begin(), amp.end(), [](complex z) { return is_finite(z); }); }
    bool normalized(double eps = tol::constructed) const { return std::abs(norm2() - 1.0) <= eps; }

    BipartiteKet normalized_copy() const {
        double n = std::sqrt(norm2());
        BipartiteKet r = *this;
        if (n > 0.0)
            for (auto& z : r.amp) z /= n;
        return r;
    }
};

inline complex inner(const BipartiteKet& x, const BipartiteKet& y) {
    complex s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(x.amp[i]) * y.amp[i];
    return s;
}

inline BipartiteKet tensor(const SingleKet& k1, const SingleKet& k2) {
    BipartiteKet r;
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) r(s1, s2) = k1[s1] * k2[s2];
    return r;
}

// ---------------------------------------------------------------------------
// Operator2

struct Operator2 {
    std::array<std::array<complex, 2>, 2> m{};

    Operator2() = default;
    Operator2(complex a, complex b, complex c, complex d) : m{{{a, b}, {c, d}}} {}

    complex& operator()(int i, int j) { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    const complex& operator()(int i, int j) const {
        return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }

    static Operator2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Operator2 zero() { return {}; }

    complex trace() const { return m[0][0] + m[1][1]; }
    complex det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

    Operator2 adjoint() const {
        return {std::conj(m[0][0]), std::conj(m[1][0]), std::conj(m[0][1]), std::conj(m[1][1])};
    }
    Operator2 transpose() const { return {m[0][0], m[1][0], m[0][1], m[1][1]}; }
    Operator2 conjugate() const {
        return {std::conj(m[0][0]), std::conj(m[0][1]), std::conj(m[1][0]), std::conj(m[1][1])};
    }

    double max_abs_diff(const Operator2& o) const {
        double d = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) d = std::max(d, std::abs((*this)(i, j) - o(i, j)));
        return d;
    }

    bool is_hermitian(double eps = tol::constructed) const { return max_abs_diff(adjoint()) <= eps; }

    // Eigenvalues of the Hermitian part, ascending.
    std::pair<double, double> hermitian_eigenvalues() const {
        double a = m[0][0].real();
        double d = m[1][1].real();
        complex b = 0.5 * (m[0][1] + std::conj(m[1][0]));
        double mean = 0.5 * (a + d);
        double rad = std::hypot(0.5 * (a - d), std::abs(b));
        return {mean - rad, mean + rad};
    }

    bool is_psd(double eps = tol::constructed) const {
        return is_hermitian(eps) && hermitian_eigenvalues().first >= -eps;
    }

    friend Operator2 operator+(const Operator2& x, const Operator2& y) {
        Operator2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = x(i, j) + y(i, j);
        return r;
    }
    friend Operator2 operator-(const Operator2& x, const Operator2& y) {
        Operator2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = x(i, j) - y(i, j);
        return r;
    }
    friend Operator2 operator*(complex c, const Operator2& x) {
        Operator2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = c * x(i, j);
        return r;
    }
    friend Operator2 operator*(double c, const Operator2& x) { return complex{c, 0.0} * x; }
    friend Operator2 operator*(const Operator2& x, const Operator2& y) {
        Operator2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
        return r;
    }
    friend SingleKet operator*(const Operator2& x, const SingleKet& k) {
        return {x(0, 0) * k[0] + x(0, 1) * k[1], x(1, 0) * k[0] + x(1, 1) * k[1]};
    }
};

// |x><y|
inline Operator2 outer(const SingleKet& x, const SingleKet& y) {
    return {x[0] * std::conj(y[0]), x[0] * std::conj(y[1]), x[1] * std::conj(y[0]), x[1] * std::conj(y[1])};
}

inline Operator2 projector(const SingleKet& k) { return outer(k, k); }

// <k|A|k>, real part (A Hermitian).
inline double expectation(const Operator2& a, const SingleKet& k) { return inner(k, a * k).real(); }

// Columns of u as kets.
inline SingleKet column(const Operator2& u, int j) { return {u(0, j), u(1, j)}; }
inline Operator2 from_columns(const SingleKet& c0, const SingleKet& c1) { return {c0[0], c1[0], c0[1], c1[1]}; }

// Orthonormal eigenvectors (columns) and ascending eigenvalues of a Hermitian 2x2 operator.
struct HermitianEigen {
    std::array<double, 2> values{};
    Operator2 vectors;
};

inline HermitianEigen hermitian_eigen(const Operator2& h) {
    double a = h(0, 0).real();
    double d = h(1, 1).real();
    complex b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
    double half_diff = 0.5 * (a - d);
    double rad = std::hypot(half_diff, std::abs(b));
    double mean = 0.5 * (a + d);
    HermitianEigen e;
    e.values = {mean - rad, mean + rad};
    if (rad == 0.0) {
        e.vectors = Operator2::identity();
        return e;
    }
    // Upper eigenvector chosen from whichever row is better conditioned.
    SingleKet up;
    if (half_diff >= 0.0)
        up = SingleKet{half_diff + rad, std::conj(b)};
    else
        up = SingleKet{b, rad - half_diff};
    up = up.normalized_copy();
    e.vectors = from_columns(orthogonal_complement(up), up);
    return e;
}

// ---------------------------------------------------------------------------
// Reduced states and entropy

struct ReducedState {
    Operator2 rho;

    bool valid(double eps = tol::constructed) const {
        return rho.is_hermitian(eps) && std::abs(rho.trace() - 1.0) <= eps &&
               rho.hermitian_eigenvalues().first >= -eps;
    }
};

inline void require_normalized(const BipartiteKet& psi, const char* what) {
    if (!psi.finite() || std::abs(psi.norm2() - 1.0) > tol::input_norm)
        throw error(errc::not_normalized, what);
}

inline void require_normalized(const SingleKet& k, const char* what) {
    if (!k.finite() || std::abs(k.norm2() - 1.0) > tol::input_norm) throw error(errc::not_normalized, what);
}

// Coefficient matrix C with psi = sum C(i,j) |i>|j>.
inline Operator2 coefficient_matrix(const BipartiteKet& psi) { return {psi(0, 0), psi(0, 1), psi(1, 0), psi(1, 1)}; }

inline BipartiteKet from_coefficients(const Operator2& c) { return {c(0, 0), c(0, 1), c(1, 0), c(1, 1)}; }

// Tr_2 |psi><psi| = C C^dagger
inline ReducedState partial_trace_second(const BipartiteKet& psi) {
    require_normalized(psi, "partial_trace_second input");
    Operator2 c = coefficient_matrix(psi);
    return {c * c.adjoint()};
}

// Tr_1 |psi><psi| = C^T conj(C)
inline ReducedState partial_trace_first(const BipartiteKet& psi) {
    require_normalized(psi, "partial_trace_first input");
    Operator2 c = coefficient_matrix(psi);
    return {c.transpose() * c.conjugate()};
}

// Von Neumann entropy in nats, 0 ln 0 = 0.
inline double von_neumann_entropy(const ReducedState& state) {
    if (!state.valid(1e-10)) throw error(errc::invalid_density, "reduced state fails density invariants");
    auto [l0, l1] = state.rho.hermitian_eigenvalues();
    double s = 0.0;
    for (double l : {l0, l1}) {
        double p = std::clamp(l, 0.0, 1.0);
        if (p > 0.0) s -= p * std::log(p);
    }
    return std::min(std::max(s, 0.0), ln2);
}

inline double partial_entropy(const BipartiteKet& psi) { return von_neumann_entropy(partial_trace_second(psi)); }

// ---------------------------------------------------------------------------
// Probabilities

// |<k1 (x) k2 | psi>|^2
inline double joint_prob(const BipartiteKet& psi, const SingleKet& k1, const SingleKet& k2) {
    require_normalized(psi, "joint_prob state");
    require_normalized(k1, "joint_prob particle-1 ket");
    require_normalized(k2, "joint_prob particle-2 ket");
    return std::clamp(std::norm(inner(tensor(k1, k2), psi)), 0.0, 1.0);
}

// <k2|_2 psi as a particle-1 vector (unnormalized) and its squared norm.
struct Conditional {
    SingleKet ket;
    double weight = 0.0;
};

inline Conditional conditional_first(const BipartiteKet& psi, const SingleKet& k2) {
    SingleKet v;
    for (int s1 = 0; s1 < 2; ++s1) v[s1] = std::conj(k2[0]) * psi(s1, 0) + std::conj(k2[1]) * psi(s1, 1);
    return {v, v.norm2()};
}

// <k1|_1 psi as a particle-2 vector (unnormalized) and its squared norm.
inline Conditional conditional_second(const BipartiteKet& psi, const SingleKet& k1) {
    SingleKet v;
    for (int s2 = 0; s2 < 2; ++s2) v[s2] = std::conj(k1[0]) * psi(0, s2) + std::conj(k1[1]) * psi(1, s2);
    return {v, v.norm2()};
}

// <psi| (e1 (x) |k2><k2|) |psi>
inline double povm_joint_prob(const BipartiteKet& psi, const Operator2& e1, const SingleKet& k2) {
    if (!e1.is_psd()) throw error(errc::not_psd, "povm_joint_prob operator is not positive semidefinite");
    require_normalized(k2, "povm_joint_prob particle-2 ket");
    Conditional c = conditional_first(psi, k2);
    return std::clamp(expectation(e1, c.ket), 0.0, 1.0);
}

// <psi| (e1 (x) e2) |psi>
inline double operator_joint_prob(const BipartiteKet& psi, const Operator2& e1, const Operator2& e2) {
    Operator2 c = coefficient_matrix(psi);
    // sum_{ijkl} conj(C_ik) e1_ij e2_kl C_jl = Tr(C^dagger e1 C e2^T)
    return (c.adjoint() * e1 * c * e2.transpose()).trace().real();
}

// (u1 (x) u2) psi
inline BipartiteKet apply_local(const Operator2& u1, const Operator2& u2, const BipartiteKet& psi) {
    return from_coefficients(u1 * coefficient_matrix(psi) * u2.transpose());
}

// ---------------------------------------------------------------------------
// Schmidt decomposition: psi = sum_k coeff[k] |u_k> (x) |v_k>, coeff descending.

struct Schmidt {
    std::array<double, 2> coeff{};
    Operator2 u; // columns u_k
    Operator2 v; // columns v_k
};

inline Schmidt schmidt(const BipartiteKet& psi) {
    Operator2 c = coefficient_matrix(psi);
    HermitianEigen e = hermitian_eigen(c * c.adjoint());
    Schmidt s;
    SingleKet u0 = column(e.vectors, 1);
    SingleKet u1 = column(e.vectors, 0);
    s.coeff = {std::sqrt(std::max(e.values[1], 0.0)), std::sqrt(std::max(e.values[0], 0.0))};
    // psi = sum_k sigma_k |u_k> |w_k> with w_k = conj(C^dagger u_k)/sigma_k = C^T conj(u_k)/sigma_k
    auto partner = [&](const SingleKet& u, double sigma) {
        SingleKet cu{std::conj(u[0]), std::conj(u[1])};
        return (1.0 / sigma) * (c.transpose() * cu);
    };
    SingleKet w0 = s.coeff[0] > 0.0 ? partner(u0, s.coeff[0]) : ket_plus();
    SingleKet w1;
    if (s.coeff[1] > 1e-300 && s.coeff[1] > 1e-8 * s.coeff[0]) {
        w1 = partner(u1, s.coeff[1]);
    } else {
        w1 = orthogonal_complement(w0);
    }
    s.u = from_columns(u0, u1);
    s.v = from_columns(w0, w1);
    return s;
}

} // namespace hardycheck
