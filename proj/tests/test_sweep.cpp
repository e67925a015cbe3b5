#include <catch_amalgamated.hpp>

#include "hardycheck/json_io.hpp"
#include "hardycheck/sweep.hpp"
#include "support.hpp"

using namespace hardycheck;
using namespace support;

namespace {

GridSpec small_grid() {
    GridSpec g;
    g.theta_values = {0.3, 0.9, pi / 2.0};
    g.alpha_steps = 40;
    g.beta_steps = 30;
    g.top_k = 10;
    return g;
}

std::string text(const SweepResult& r) { return to_text(to_json(r)); }

template <typename F>
void expect_code(errc code, F&& f) {
    try {
        f();
        FAIL("expected " << to_string(code));
    } catch (const error& e) {
        CHECK(e.code() == code);
    }
}

} // namespace

TEST_CASE("grid indexing", "[sweep]") {
    GridSpec g = small_grid();
    CHECK(g.size() == 3u * 40u * 30u);
    ProofAngles first = g.angles_at(0);
    CHECK(first.theta == 0.3);
    CHECK(first.alpha == pi * 0.25 / 40);
    CHECK(first.beta == pi * 0.75 / 30);
    ProofAngles last = g.angles_at(g.size() - 1);
    CHECK(last.theta == pi / 2.0);
    CHECK(g.slice_of(g.size() - 1) == 2);
    CHECK(g.slice_of(40u * 30u) == 1);
}

TEST_CASE("maximally entangled slice never yields a positive gap", "[sweep]") {
    GridSpec g;
    g.theta_values = {pi / 2.0};
    g.alpha_steps = 300;
    g.beta_steps = 300;
    SweepResult r = sweep(g, 4);
    REQUIRE(r.total_points() > 80000u);
    CHECK(r.max_gap(ProofVersion::hardy) <= 1e-12);
    CHECK(r.max_gap(ProofVersion::goldstein) <= 1e-12);
    CHECK(r.slices[0].max_route_deviation <= 1e-12);
    CHECK(r.slices[0].max_mm1_deviation <= 1e-12);
    CHECK(r.slices[0].min_probability >= -1e-12);
    CHECK(r.slices[0].max_probability <= 1.0 + 1e-12);
}

TEST_CASE("results do not depend on threads or shards", "[sweep]") {
    GridSpec g = small_grid();
    const std::string serial = text(sweep(g, 1));
    CHECK(text(sweep(g, 5)) == serial);
    CHECK(text(sweep(g, 1)) == serial);

    for (int n : {2, 3, 7}) {
        SweepResult merged = sweep_shard(g, 0, n, 2);
        for (int k = 1; k < n; ++k) merged = merge(merged, sweep_shard(g, k, n, 2));
        CHECK(text(merged) == serial);
    }
    // Merge order is irrelevant.
    SweepResult a = sweep_shard(g, 0, 3), b = sweep_shard(g, 1, 3), c = sweep_shard(g, 2, 3);
    CHECK(text(merge(merge(c, a), b)) == serial);
}

TEST_CASE("full dumps keep every point in index order", "[sweep]") {
    GridSpec g = small_grid();
    g.keep_all = true;
    SweepResult r = sweep(g, 3);
    CHECK(r.all.size() == r.total_points());
    for (std::size_t i = 1; i < r.all.size(); ++i) REQUIRE(r.all[i - 1].index < r.all[i].index);
    SweepResult m = merge(sweep_shard(g, 1, 2), sweep_shard(g, 0, 2));
    CHECK(text(m) == text(r));
}

TEST_CASE("top points and slice maxima agree", "[sweep]") {
    SweepResult r = sweep(small_grid(), 2);
    REQUIRE(r.top.size() == 10);
    for (std::size_t i = 1; i < r.top.size(); ++i) REQUIRE(r.top[i - 1].score() >= r.top[i].score());
    double best = -1.0;
    for (const auto& s : r.slices) best = std::max({best, s.hardy.value, s.goldstein.value});
    CHECK(r.top.front().score() == best);
    for (const auto& s : r.slices) {
        PointEval e = evaluate_point(small_grid().angles_at(s.hardy.index), s.hardy.index);
        CHECK(e.gap_hardy == s.hardy.value);
    }
}

TEST_CASE("sweep JSON round-trips", "[sweep]") {
    SweepResult r = sweep(small_grid());
    const std::string t = text(r);
    CHECK(text(sweep_from(nlohmann::json::parse(t))) == t);
}

TEST_CASE("empty and fully excluded grids are rejected", "[sweep][errors]") {
    GridSpec g;
    expect_code(errc::empty_grid, [&] { sweep(g); });
    g.theta_values = {1.0};
    g.alpha_steps = 0;
    g.beta_steps = 10;
    expect_code(errc::empty_grid, [&] { sweep(g); });

    // A single point with alpha = beta sits on the excluded alpha - beta = 0 set.
    GridSpec e;
    e.theta_values = {1.0};
    e.alpha_steps = 1;
    e.beta_steps = 1;
    e.alpha_offset = 0.5;
    e.beta_offset = 0.5;
    expect_code(errc::empty_grid, [&] { sweep(e); });

    GridSpec bad = small_grid();
    bad.theta_values = {2.0};
    expect_code(errc::domain_error, [&] { sweep(bad); });
    expect_code(errc::invalid_input, [&] { sweep_shard(small_grid(), 3, 3); });
}

TEST_CASE("margins exclude the singular sets", "[sweep]") {
    GridSpec g;
    g.theta_values = {1.0};
    g.alpha_steps = 4;
    g.beta_steps = 4;
    g.alpha_offset = 0.0;
    g.beta_offset = 0.0;
    SweepResult r = sweep_shard(g, 0, 1);
    // alpha = 0 removes a row; alpha = beta and alpha - beta = +-pi/2 remove more.
    CHECK(r.slices[0].skipped > 4u);
    CHECK(r.slices[0].points + r.slices[0].skipped == 16u);
}
