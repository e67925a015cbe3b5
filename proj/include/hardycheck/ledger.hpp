// ledger.hpp
// A named list of probability claims with computed values and pass flags.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace hardycheck {

enum class TargetKind { exact, strictly_positive, non_positive };

struct Target {
    TargetKind kind = TargetKind::exact;
    double value = 0.0;

    static Target exactly(double v) { return {TargetKind::exact, v}; }
    static Target positive() { return {TargetKind::strictly_positive, 0.0}; }
    static Target at_most_zero() { return {TargetKind::non_positive, 0.0}; }
};

struct Claim {
    std::string id;
    std::string description;
    double computed = 0.0;
    Target target;
    double tolerance = 0.0;
    bool pass = false;
};

inline bool evaluate(const Target& t, double computed, double tolerance) {
    if (!std::isfinite(computed)) return false;
    switch (t.kind) {
    case TargetKind::exact: return std::abs(computed - t.value) <= tolerance;
    case TargetKind::strictly_positive: return computed > tolerance;
    case TargetKind::non_positive: return computed <= tolerance;
    }
    return false;
}

class Ledger {
public:
    Ledger() = default;
    explicit Ledger(std::string name) : name_(std::move(name)) {}

    const Claim& add(std::string id, std::string description, double computed, Target target, double tolerance) {
        Claim c{std::move(id), std::move(description), computed, target, tolerance, false};
        c.pass = evaluate(c.target, c.computed, c.tolerance);
        claims_.push_back(std::move(c));
        return claims_.back();
    }

    const std::string& name() const { return name_; }
    const std::vector<Claim>& claims() const { return claims_; }
    std::size_t size() const { return claims_.size(); }
    const Claim& operator[](std::size_t i) const { return claims_[i]; }

    const Claim* find(const std::string& id) const {
        auto it = std::find_if(claims_.begin(), claims_.end(), [&](const Claim& c) { return c.id == id; });
        return it == claims_.end() ? nullptr : &*it;
    }

    bool all_pass() const {
        return std::all_of(claims_.begin(), claims_.end(), [](const Claim& c) { return c.pass; });
    }

    // Largest |computed - target| over exact claims.
    double max_residual() const {
        double r = 0.0;
        for (const auto& c : claims_)
            if (c.target.kind == TargetKind::exact) r = std::max(r, std::abs(c.computed - c.target.value));
        return r;
    }

    // False when the proof this ledger supports does not run (e.g. no contradicting events).
    bool applicable = true;
    std::string note;

private:
    std::string name_;
    std::vector<Claim> claims_;
};

} // namespace hardycheck
