// sweep.hpp
// Deterministic (theta, alpha, beta) grid evaluation of the post-selection gaps, with
// shardable ranges and an order-independent merge.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "hardycheck/core.hpp"
#include "hardycheck/geometry.hpp"
#include "hardycheck/postselect.hpp"

namespace hardycheck {

struct GridSpec {
    std::vector<double> theta_values;
    int alpha_steps = 0;
    int beta_steps = 0;
    // alpha_i = pi (i + alpha_offset) / alpha_steps, beta_j = pi (j + beta_offset) / beta_steps
    double alpha_offset = 0.25;
    double beta_offset = 0.75;
    double margin = tol::sweep_margin;
    std::size_t top_k = 100;
    bool keep_all = false;

    std::uint64_t size() const {
        return static_cast<std::uint64_t>(theta_values.size()) * static_cast<std::uint64_t>(std::max(alpha_steps, 0)) *
               static_cast<std::uint64_t>(std::max(beta_steps, 0));
    }

    ProofAngles angles_at(std::uint64_t index) const {
        const auto nb = static_cast<std::uint64_t>(beta_steps);
        const auto na = static_cast<std::uint64_t>(alpha_steps);
        const std::uint64_t j = index % nb;
        const std::uint64_t i = (index / nb) % na;
        const std::uint64_t t = index / (nb * na);
        return {theta_values[t], pi * (static_cast<double>(i) + alpha_offset) / alpha_steps,
                pi * (static_cast<double>(j) + beta_offset) / beta_steps};
    }

    std::size_t slice_of(std::uint64_t index) const {
        return static_cast<std::size_t>(index / (static_cast<std::uint64_t>(alpha_steps) * beta_steps));
    }

    // Excludes sin(alpha) ~ 0, alpha - beta ~ pi/2 mod pi and alpha - beta ~ 0 mod pi.
    bool excluded(const ProofAngles& p) const {
        const double u = p.alpha - p.beta;
        return !admissible(p) || std::abs(std::sin(p.alpha)) <= margin || std::abs(std::cos(u)) <= margin ||
               std::abs(std::sin(u)) <= margin;
    }
};

inline void validate(const GridSpec& g) {
    if (g.theta_values.empty() || g.alpha_steps <= 0 || g.beta_steps <= 0)
        throw error(errc::empty_grid, "grid has no points");
    for (double t : g.theta_values)
        if (!(t > 0.0 && t <= pi / 2.0)) throw error(errc::domain_error, "sweep theta must lie in (0, pi/2]");
    if (!(g.margin >= 0.0)) throw error(errc::invalid_input, "margin must be non-negative");
}

struct PointEval {
    std::uint64_t index = 0;
    ProofAngles angles;
    double p_ominus_ominus = 0.0;
    double p_inconclusive_minus = 0.0;
    double p_inconclusive_ominus = 0.0;
    double gap_hardy = 0.0;
    double gap_goldstein = 0.0;
    // Diagnostics.
    double mm1_deviation = 0.0;   // |mm1 - direct|
    double mm2_deviation = 0.0;   // |mm2_printed - mm1|
    double delta_deviation = std::numeric_limits<double>::quiet_NaN();
    double route_deviation = 0.0; // max over both inconclusive probabilities

    double score() const { return std::max(gap_hardy, gap_goldstein); }
};

inline PointEval evaluate_point(const ProofAngles& p, std::uint64_t index = 0) {
    ProofContext c(p);
    PointEval e;
    e.index = index;
    e.angles = p;
    e.p_ominus_ominus = c.p_ominus_ominus();
    TwoRoutes minus = p_inconclusive_minus(c);
    TwoRoutes ominus = p_inconclusive_ominus(c);
    e.p_inconclusive_minus = minus.via_trace;
    e.p_inconclusive_ominus = ominus.via_trace;
    e.gap_hardy = e.p_ominus_ominus - e.p_inconclusive_ominus;
    e.gap_goldstein = e.p_ominus_ominus - e.p_inconclusive_minus;
    OminusClosed closed = p_joint_ominus_closed(c.geometry, p);
    e.mm1_deviation = std::abs(closed.mm1 - e.p_ominus_ominus);
    e.mm2_deviation = std::abs(closed.mm2_printed - closed.mm1);
    e.delta_deviation = delta_printed_deviation(c.geometry);
    e.route_deviation = std::max(minus.disagreement(), ominus.disagreement());
    return e;
}

struct Argmax {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
    double alpha = 0.0;
    double beta = 0.0;

    bool has_value() const { return std::isfinite(value); }

    // Larger value wins; ties go to the smaller index.
    void offer(double v, std::uint64_t idx, double a, double b) {
        if (v > value || (v == value && idx < index)) {
            value = v;
            index = idx;
            alpha = a;
            beta = b;
        }
    }
    void merge(const Argmax& o) {
        if (o.has_value()) offer(o.value, o.index, o.alpha, o.beta);
    }
};

struct SliceStats {
    double theta = 0.0;
    std::uint64_t points = 0;
    std::uint64_t skipped = 0;
    Argmax hardy;
    Argmax goldstein;
    double max_mm1_deviation = 0.0;
    double max_mm2_deviation = 0.0;
    double max_delta_deviation = 0.0;
    std::uint64_t delta_undefined = 0;
    double max_route_deviation = 0.0;
    double min_probability = std::numeric_limits<double>::infinity();
    double max_probability = -std::numeric_limits<double>::infinity();

    void add(const PointEval& e) {
        ++points;
        hardy.offer(e.gap_hardy, e.index, e.angles.alpha, e.angles.beta);
        goldstein.offer(e.gap_goldstein, e.index, e.angles.alpha, e.angles.beta);
        max_mm1_deviation = std::max(max_mm1_deviation, e.mm1_deviation);
        max_mm2_deviation = std::max(max_mm2_deviation, e.mm2_deviation);
        if (std::isfinite(e.delta_deviation))
            max_delta_deviation = std::max(max_delta_deviation, e.delta_deviation);
        else
            ++delta_undefined;
        max_route_deviation = std::max(max_route_deviation, e.route_deviation);
        for (double v : {e.p_ominus_ominus, e.p_inconclusive_minus, e.p_inconclusive_ominus}) {
            min_probability = std::min(min_probability, v);
            max_probability = std::max(max_probability, v);
        }
    }

    void merge(const SliceStats& o) {
        points += o.points;
        skipped += o.skipped;
        hardy.merge(o.hardy);
        goldstein.merge(o.goldstein);
        max_mm1_deviation = std::max(max_mm1_deviation, o.max_mm1_deviation);
        max_mm2_deviation = std::max(max_mm2_deviation, o.max_mm2_deviation);
        max_delta_deviation = std::max(max_delta_deviation, o.max_delta_deviation);
        delta_undefined += o.delta_undefined;
        max_route_deviation = std::max(max_route_deviation, o.max_route_deviation);
        min_probability = std::min(min_probability, o.min_probability);
        max_probability = std::max(max_probability, o.max_probability);
    }
};

struct SweepResult {
    GridSpec grid;
    std::vector<SliceStats> slices;
    std::vector<PointEval> top;       // best top_k by score, ordered
    std::vector<PointEval> all;       // every admissible point when grid.keep_all, by index
    int shard_index = 0;              // 0-based; meaningful when shard_count > 1
    int shard_count = 1;

    std::uint64_t total_points() const {
        std::uint64_t n = 0;
        for (const auto& s : slices) n += s.points;
        return n;
    }
    double max_gap(ProofVersion v) const {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& s : slices) m = std::max(m, v == ProofVersion::hardy ? s.hardy.value : s.goldstein.value);
        return m;
    }
};

namespace detail {

inline bool better(const PointEval& x, const PointEval& y) {
    if (x.score() != y.score()) return x.score() > y.score();
    return x.index < y.index;
}

inline void trim_top(std::vector<PointEval>& top, std::size_t k) {
    std::sort(top.begin(), top.end(), better);
    if (top.size() > k) top.resize(k);
}

inline SweepResult empty_result(const GridSpec& grid) {
    SweepResult r;
    r.grid = grid;
    r.slices.resize(grid.theta_values.size());
    for (std::size_t t = 0; t < grid.theta_values.size(); ++t) r.slices[t].theta = grid.theta_values[t];
    return r;
}

} // namespace detail

// Evaluates grid indices [begin, end).
inline SweepResult sweep_range(const GridSpec& grid, std::uint64_t begin, std::uint64_t end) {
    validate(grid);
    SweepResult r = detail::empty_result(grid);
    end = std::min(end, grid.size());
    for (std::uint64_t idx = begin; idx < end; ++idx) {
        ProofAngles p = grid.angles_at(idx);
        SliceStats& slice = r.slices[grid.slice_of(idx)];
        if (grid.excluded(p)) {
            ++slice.skipped;
            continue;
        }
        PointEval e = evaluate_point(p, idx);
        slice.add(e);
        if (grid.keep_all) r.all.push_back(e);
        r.top.push_back(e);
        if (r.top.size() >= 2 * grid.top_k + 64) detail::trim_top(r.top, grid.top_k);
    }
    detail::trim_top(r.top, grid.top_k);
    return r;
}

// Associative and commutative combination of partial results over disjoint ranges.
inline SweepResult merge(const SweepResult& a, const SweepResult& b) {
    SweepResult r = a;
    for (std::size_t t = 0; t < r.slices.size() && t < b.slices.size(); ++t) r.slices[t].merge(b.slices[t]);
    r.top.insert(r.top.end(), b.top.begin(), b.top.end());
    detail::trim_top(r.top, r.grid.top_k);
    r.all.insert(r.all.end(), b.all.begin(), b.all.end());
    std::sort(r.all.begin(), r.all.end(), [](const PointEval& x, const PointEval& y) { return x.index < y.index; });
    r.shard_index = 0;
    r.shard_count = 1;
    return r;
}

inline std::pair<std::uint64_t, std::uint64_t> shard_bounds(std::uint64_t total, int k, int n) {
    if (n <= 0 || k < 0 || k >= n) throw error(errc::invalid_input, "shard must satisfy 0 <= k < n");
    const auto nn = static_cast<std::uint64_t>(n);
    const auto kk = static_cast<std::uint64_t>(k);
    return {total * kk / nn, total * (kk + 1) / nn};
}

inline void require_points(const SweepResult& r) {
    if (r.total_points() == 0) throw error(errc::empty_grid, "every grid point falls in an excluded singular set");
}

// One shard of the grid (k is 0-based), evaluated on `jobs` threads.
inline SweepResult sweep_shard(const GridSpec& grid, int k, int n, int jobs = 1) {
    validate(grid);
    auto [begin, end] = shard_bounds(grid.size(), k, n);
    jobs = std::max(1, jobs);
    std::vector<SweepResult> parts(static_cast<std::size_t>(jobs));
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
        auto [b, e] = shard_bounds(end - begin, w, jobs);
        workers.emplace_back([&, w, b, e] { parts[static_cast<std::size_t>(w)] = sweep_range(grid, begin + b, begin + e); });
    }
    for (auto& t : workers) t.join();
    SweepResult r = parts.front();
    for (std::size_t w = 1; w < parts.size(); ++w) r = merge(r, parts[w]);
    r.shard_index = k;
    r.shard_count = n;
    return r;
}

inline SweepResult sweep(const GridSpec& grid, int jobs = 1) {
    SweepResult r = sweep_shard(grid, 0, 1, jobs);
    require_points(r);
    return r;
}

} // namespace hardycheck
