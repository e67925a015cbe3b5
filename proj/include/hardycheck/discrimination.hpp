// discrimination.hpp
// Unambiguous discrimination POVM for two non-orthogonal particle-1 states.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>
#include <vector>

#include "hardycheck/core.hpp"
#include "hardycheck/geometry.hpp"
#include "hardycheck/qstate.hpp"

namespace hardycheck {

enum class PovmLabel { plus, minus, inconclusive };

inline std::string_view to_string(PovmLabel l) {
    switch (l) {
    case PovmLabel::plus: return "plus";
    case PovmLabel::minus: return "minus";
    case PovmLabel::inconclusive: return "inconclusive";
    }
    return "?";
}

struct PovmElement {
    PovmLabel label;
    Operator2 op;
};

struct Povm {
    std::vector<PovmElement> elements;
    BasisPair targets; // the two states being discriminated
    double overlap_abs = 0.0;

    const Operator2& operator[](PovmLabel l) const {
        for (const auto& e : elements)
            if (e.label == l) return e.op;
        throw error(errc::invalid_input, "povm has no element with that label");
    }

    Operator2 sum() const {
        Operator2 s = Operator2::zero();
        for (const auto& e : elements) s = s + e.op;
        return s;
    }
};

// E? = 1 - (2*1 - |+^><+^| - |-^><-^|)/(1 + |<-^|+^>|), E+ = (1 - |-^><-^|)/(1 + |<-^|+^>|),
// E- = (1 - |+^><+^|)/(1 + |<-^|+^>|).
inline Povm ud_povm(const BasisPair& pair) {
    require_normalized(pair.first, "ud_povm first state");
    require_normalized(pair.second, "ud_povm second state");
    const double ov = std::abs(inner(pair.second, pair.first));
    if (ov >= 1.0 - 1e-9) throw error(errc::parallel_states, "states to discriminate are (nearly) parallel");
    const Operator2 one = Operator2::identity();
    const Operator2 pp = projector(pair.first);
    const Operator2 pm = projector(pair.second);
    const double k = 1.0 / (1.0 + ov);
    Povm p;
    p.targets = pair;
    p.overlap_abs = ov;
    p.elements = {
        {PovmLabel::plus, k * (one - pm)},
        {PovmLabel::minus, k * (one - pp)},
        {PovmLabel::inconclusive, one - k * (2.0 * one - pp - pm)},
    };
    return p;
}

struct PovmCheck {
    double completeness = 0.0;      // max |sum E - 1|
    double min_eigenvalue = 0.0;    // over all elements
    double max_eigenvalue = 0.0;    // over all elements
    double hermiticity = 0.0;       // max |E - E^dagger|
    double misidentification = 0.0; // max(<-^|E+|-^>, <+^|E-|+^>)
    double success_plus = 0.0;      // <+^|E+|+^>
    double success_minus = 0.0;     // <-^|E-|-^>

    bool valid(double eps = tol::constructed) const {
        return completeness <= eps && min_eigenvalue >= -eps && hermiticity <= eps && misidentification <= eps;
    }
};

inline PovmCheck check_povm(const Povm& p) {
    PovmCheck c;
    c.completeness = p.sum().max_abs_diff(Operator2::identity());
    c.min_eigenvalue = 1.0;
    c.max_eigenvalue = 0.0;
    for (const auto& e : p.elements) {
        auto [lo, hi] = e.op.hermitian_eigenvalues();
        c.min_eigenvalue = std::min(c.min_eigenvalue, lo);
        c.max_eigenvalue = std::max(c.max_eigenvalue, hi);
        c.hermiticity = std::max(c.hermiticity, e.op.max_abs_diff(e.op.adjoint()));
    }
    c.misidentification = std::max(std::abs(expectation(p[PovmLabel::plus], p.targets.second)),
                                   std::abs(expectation(p[PovmLabel::minus], p.targets.first)));
    c.success_plus = expectation(p[PovmLabel::plus], p.targets.first);
    c.success_minus = expectation(p[PovmLabel::minus], p.targets.second);
    return c;
}

struct OutcomeProbs {
    double plus = 0.0;
    double minus = 0.0;
    double inconclusive = 0.0;

    double operator[](PovmLabel l) const {
        switch (l) {
        case PovmLabel::plus: return plus;
        case PovmLabel::minus: return minus;
        case PovmLabel::inconclusive: return inconclusive;
        }
        return 0.0;
    }
    double total() const { return plus + minus + inconclusive; }
};

inline OutcomeProbs outcome_probs(const SingleKet& state, const Povm& p) {
    require_normalized(state, "outcome_probs state");
    return {expectation(p[PovmLabel::plus], state), expectation(p[PovmLabel::minus], state),
            expectation(p[PovmLabel::inconclusive], state)};
}

} // namespace hardycheck
