// simplex.hpp
// Phase-I simplex for {x >= 0 : A x = b}. Dense tableau, Bland's rule; templated on the
// scalar so the same code runs in double and in exact rationals.

#pragma once

#include <cstddef>
#include <vector>

namespace hardycheck::lp {

template <typename Scalar>
struct Phase1Result {
    Scalar objective{};            // sum of artificials at optimum; zero iff feasible
    std::vector<Scalar> x;         // primal values of the structural variables
    std::vector<Scalar> dual;      // y with y.A_j <= 0 for all j and y.b = objective
    std::size_t pivots = 0;
};

// a: rows x cols, row-major. eps: pivot / optimality tolerance (zero for exact scalars).
template <typename Scalar>
Phase1Result<Scalar> phase1(const std::vector<std::vector<Scalar>>& a, const std::vector<Scalar>& b, const Scalar& eps) {
    const std::size_t m = b.size();
    const std::size_t n = m == 0 ? 0 : a.front().size();
    const std::size_t cols = n + m; // structural then artificial
    const Scalar zero(0);
    const Scalar one(1);

    // Flip rows so the right-hand side is non-negative.
    std::vector<int> sign(m, 1);
    std::vector<std::vector<Scalar>> t(m, std::vector<Scalar>(cols + 1, zero));
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < zero) sign[i] = -1;
        const Scalar s(sign[i]);
        for (std::size_t j = 0; j < n; ++j) t[i][j] = s * a[i][j];
        t[i][n + i] = one;
        t[i][cols] = s * b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    // Reduced costs z_j = c_j - c_B^T T_j with c = 1 on artificials.
    std::vector<Scalar> z(cols + 1, zero);
    for (std::size_t j = 0; j <= cols; ++j) {
        Scalar acc = j >= n && j < cols ? one : zero;
        for (std::size_t i = 0; i < m; ++i) acc -= t[i][j];
        z[j] = acc;
    }

    Phase1Result<Scalar> res;
    for (;;) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (z[j] < -eps) {
                enter = j;
                break;
            }
        if (enter == cols) break;

        std::size_t leave = m;
        Scalar best{};
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > eps) {
                Scalar ratio = t[i][cols] / t[i][enter];
                if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave == m) break; // unbounded direction cannot occur in phase I; guard anyway

        const Scalar piv = t[leave][enter];
        for (std::size_t j = 0; j <= cols; ++j) t[leave][j] /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            const Scalar f = t[i][enter];
            if (f == zero) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
        }
        const Scalar fz = z[enter];
        for (std::size_t j = 0; j <= cols; ++j) z[j] -= fz * t[leave][j];
        basis[leave] = enter;
        ++res.pivots;
    }

    res.objective = -z[cols];
    res.x.assign(n, zero);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][cols];
    res.dual.assign(m, zero);
    for (std::size_t i = 0; i < m; ++i) res.dual[i] = Scalar(sign[i]) * (one - z[n + i]);
    return res;
}

} // namespace hardycheck::lp
