// lhv.hpp
// Local-hidden-variable feasibility for two-party correlation tables: is the table a convex
// combination of deterministic local strategies? Answers with weights or with a separating
// linear functional.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hardycheck/core.hpp"
#include "hardycheck/discrimination.hpp"
#include "hardycheck/geometry.hpp"
#include "hardycheck/hardy.hpp"
#include "hardycheck/qstate.hpp"
#include "hardycheck/simplex.hpp"

namespace hardycheck {

// One local measurement: effects summing to identity, with outcome labels.
struct Measurement {
    std::string name;
    std::vector<std::string> labels;
    std::vector<Operator2> effects;

    static Measurement projective(std::string name, const BasisPair& basis, std::string first, std::string second) {
        return {std::move(name), {std::move(first), std::move(second)}, {projector(basis.first), projector(basis.second)}};
    }
    static Measurement from_povm(std::string name, const Povm& p) {
        Measurement m{std::move(name), {}, {}};
        for (const auto& e : p.elements) {
            m.labels.emplace_back(to_string(e.label));
            m.effects.push_back(e.op);
        }
        return m;
    }
};

struct CorrelationTable {
    std::vector<std::string> settings1, settings2;
    std::vector<std::vector<std::string>> outcomes1, outcomes2;
    // dist[s][t][x * outcomes2[t].size() + y] = P(x, y | s, t)
    std::vector<std::vector<std::vector<double>>> dist;

    std::size_t n1(std::size_t s) const { return outcomes1[s].size(); }
    std::size_t n2(std::size_t t) const { return outcomes2[t].size(); }
    double p(std::size_t s, std::size_t t, std::size_t x, std::size_t y) const { return dist[s][t][x * n2(t) + y]; }

    double marginal1(std::size_t s, std::size_t t, std::size_t x) const {
        double m = 0.0;
        for (std::size_t y = 0; y < n2(t); ++y) m += p(s, t, x, y);
        return m;
    }
    double marginal2(std::size_t s, std::size_t t, std::size_t y) const {
        double m = 0.0;
        for (std::size_t x = 0; x < n1(s); ++x) m += p(s, t, x, y);
        return m;
    }

    // Largest change of one party's marginal across the other party's settings.
    double signaling() const {
        double d = 0.0;
        for (std::size_t s = 0; s < settings1.size(); ++s)
            for (std::size_t x = 0; x < n1(s); ++x)
                for (std::size_t t = 1; t < settings2.size(); ++t)
                    d = std::max(d, std::abs(marginal1(s, t, x) - marginal1(s, 0, x)));
        for (std::size_t t = 0; t < settings2.size(); ++t)
            for (std::size_t y = 0; y < n2(t); ++y)
                for (std::size_t s = 1; s < settings1.size(); ++s)
                    d = std::max(d, std::abs(marginal2(s, t, y) - marginal2(0, t, y)));
        return d;
    }
};

inline void validate(const CorrelationTable& t) {
    if (t.settings1.empty() || t.settings2.empty() || t.outcomes1.size() != t.settings1.size() ||
        t.outcomes2.size() != t.settings2.size() || t.dist.size() != t.settings1.size())
        throw error(errc::table_invalid, "table shape is inconsistent");
    for (std::size_t s = 0; s < t.settings1.size(); ++s) {
        if (t.dist[s].size() != t.settings2.size()) throw error(errc::table_invalid, "table shape is inconsistent");
        for (std::size_t u = 0; u < t.settings2.size(); ++u) {
            const auto& d = t.dist[s][u];
            if (d.size() != t.n1(s) * t.n2(u)) throw error(errc::table_invalid, "distribution has the wrong size");
            double sum = 0.0;
            for (double v : d) {
                if (!std::isfinite(v) || v < -1e-12) throw error(errc::table_invalid, "negative or non-finite entry");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw error(errc::table_invalid, "distribution does not sum to 1");
        }
    }
    if (t.signaling() > 1e-9) throw error(errc::table_invalid, "table violates no-signaling");
}

inline CorrelationTable correlation_table(const BipartiteKet& psi, const std::vector<Measurement>& party1,
                                          const std::vector<Measurement>& party2) {
    require_normalized(psi, "correlation_table state");
    auto check = [](const Measurement& m) {
        Operator2 sum = Operator2::zero();
        for (const auto& e : m.effects) {
            if (!e.is_psd(1e-10)) throw error(errc::not_psd, "measurement effect is not positive");
            sum = sum + e;
        }
        if (m.effects.size() != m.labels.size() || sum.max_abs_diff(Operator2::identity()) > 1e-10)
            throw error(errc::invalid_input, "measurement effects do not sum to identity");
    };
    CorrelationTable t;
    for (const auto& m : party1) {
        check(m);
        t.settings1.push_back(m.name);
        t.outcomes1.push_back(m.labels);
    }
    for (const auto& m : party2) {
        check(m);
        t.settings2.push_back(m.name);
        t.outcomes2.push_back(m.labels);
    }
    t.dist.resize(party1.size());
    for (std::size_t s = 0; s < party1.size(); ++s)
        for (const auto& m2 : party2) {
            std::vector<double> d;
            for (const auto& e1 : party1[s].effects)
                for (const auto& e2 : m2.effects) d.push_back(std::max(0.0, operator_joint_prob(psi, e1, e2)));
            t.dist[s].push_back(std::move(d));
        }
    return t;
}

// Settings of Hardy's argument: A_j in {+, -}, B_j in {oplus, ominus}.
inline CorrelationTable hardy_table(double theta) {
    const BPair b = hardy_b_basis(theta);
    const BasisPair a_basis{ket_plus(), ket_minus()};
    const BasisPair b_basis{b.oplus, b.ominus};
    std::vector<Measurement> party{Measurement::projective("A", a_basis, "+", "-"),
                                   Measurement::projective("B", b_basis, "oplus", "ominus")};
    return correlation_table(hardy_state(theta), party, party);
}

// Settings of the post-selected construction, with A^_1 the three-outcome discrimination POVM.
inline CorrelationTable postselected_table(const ProofAngles& p) {
    DerivedGeometry g = derive_geometry(p);
    ProofBases b = build_bases(p, g);
    std::vector<Measurement> party1{Measurement::from_povm("A^", ud_povm(b.hat1)),
                                    Measurement::projective("B^", b.circ1, "oplus^", "ominus^")};
    std::vector<Measurement> party2{Measurement::projective("A^", b.hat2, "+^", "-^"),
                                    Measurement::projective("B^", b.circ2, "oplus^", "ominus^")};
    return correlation_table(hardy_state(p.theta), party1, party2);
}

inline constexpr std::size_t max_strategies = 10000;

// Deterministic strategies of one party: one outcome per setting, mixed-radix enumeration
// with the first setting varying fastest.
inline std::vector<std::vector<std::size_t>> deterministic_strategies(const std::vector<std::size_t>& outcome_counts) {
    std::size_t total = 1;
    for (auto c : outcome_counts) {
        if (c == 0) throw error(errc::table_invalid, "setting without outcomes");
        total *= c;
        if (total > max_strategies) throw error(errc::table_invalid, "too many deterministic strategies");
    }
    std::vector<std::vector<std::size_t>> out;
    out.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<std::size_t> s(outcome_counts.size());
        std::size_t r = k;
        for (std::size_t i = 0; i < outcome_counts.size(); ++i) {
            s[i] = r % outcome_counts[i];
            r /= outcome_counts[i];
        }
        out.push_back(std::move(s));
    }
    return out;
}

struct LhvVerdict {
    bool feasible = false;
    std::size_t strategies = 0;
    std::vector<double> weights;      // per joint strategy (party-1 index major), when feasible
    double residual = 0.0;            // max |sum w D - P|, when feasible
    std::vector<double> certificate;  // per table entry (row order of `entries`), when infeasible
    double certificate_value = 0.0;   // certificate . table
    double certificate_max_strategy = 0.0; // max over strategies of certificate . D
    double phase1_objective = 0.0;
    bool exact = false;               // verdict decided in rational arithmetic
};

namespace detail {

struct LhvSystem {
    std::vector<std::vector<double>> a; // rows: table entries, cols: joint strategies
    std::vector<double> b;
};

inline LhvSystem lhv_system(const CorrelationTable& t) {
    std::vector<std::size_t> c1, c2;
    for (std::size_t s = 0; s < t.settings1.size(); ++s) c1.push_back(t.n1(s));
    for (std::size_t u = 0; u < t.settings2.size(); ++u) c2.push_back(t.n2(u));
    auto l1 = deterministic_strategies(c1);
    auto l2 = deterministic_strategies(c2);
    if (l1.size() * l2.size() > max_strategies) throw error(errc::table_invalid, "too many deterministic strategies");
    LhvSystem sys;
    for (std::size_t s = 0; s < c1.size(); ++s)
        for (std::size_t u = 0; u < c2.size(); ++u)
            for (std::size_t x = 0; x < c1[s]; ++x)
                for (std::size_t y = 0; y < c2[u]; ++y) {
                    std::vector<double> row;
                    row.reserve(l1.size() * l2.size());
                    for (const auto& s1 : l1)
                        for (const auto& s2 : l2) row.push_back(s1[s] == x && s2[u] == y ? 1.0 : 0.0);
                    sys.a.push_back(std::move(row));
                    sys.b.push_back(t.p(s, u, x, y));
                }
    return sys;
}

} // namespace detail

inline LhvVerdict lhv_feasible(const CorrelationTable& t) {
    validate(t);
    detail::LhvSystem sys = detail::lhv_system(t);
    const std::size_t rows = sys.b.size();
    const std::size_t cols = sys.a.front().size();

    LhvVerdict v;
    v.strategies = cols;
    auto res = lp::phase1<double>(sys.a, sys.b, 1e-12);
    v.phase1_objective = res.objective;
    bool feasible = res.objective <= 1e-9;
    std::vector<double> x = res.x;
    std::vector<double> y = res.dual;

    if (res.objective > 1e-9 && res.objective <= 1e-7) {
        using rational = boost::multiprecision::cpp_rational;
        std::vector<std::vector<rational>> ar(rows, std::vector<rational>(cols));
        std::vector<rational> br(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) ar[i][j] = rational(sys.a[i][j]);
            br[i] = rational(sys.b[i]);
        }
        auto exact = lp::phase1<rational>(ar, br, rational(0));
        v.exact = true;
        feasible = exact.objective == 0;
        for (std::size_t j = 0; j < cols; ++j) x[j] = static_cast<double>(exact.x[j]);
        for (std::size_t i = 0; i < rows; ++i) y[i] = static_cast<double>(exact.dual[i]);
    }

    v.feasible = feasible;
    if (feasible) {
        v.weights = x;
        for (std::size_t i = 0; i < rows; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < cols; ++j) acc += sys.a[i][j] * x[j];
            v.residual = std::max(v.residual, std::abs(acc - sys.b[i]));
        }
    } else {
        v.certificate = y;
        for (std::size_t i = 0; i < rows; ++i) v.certificate_value += y[i] * sys.b[i];
        v.certificate_max_strategy = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rows; ++i) acc += y[i] * sys.a[i][j];
            v.certificate_max_strategy = std::max(v.certificate_max_strategy, acc);
        }
    }
    return v;
}

} // namespace hardycheck
