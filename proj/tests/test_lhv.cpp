#include <catch_amalgamated.hpp>

#include <numeric>

#include "hardycheck/lhv.hpp"
#include "support.hpp"

using namespace hardycheck;
using namespace support;
using Catch::Matchers::WithinAbs;

namespace {

// Applies an outcome permutation to one setting of one party.
CorrelationTable relabel(CorrelationTable t, int party, std::size_t setting, const std::vector<std::size_t>& perm) {
    if (party == 1) {
        auto old = t.outcomes1[setting];
        for (std::size_t x = 0; x < perm.size(); ++x) t.outcomes1[setting][perm[x]] = old[x];
        for (std::size_t u = 0; u < t.settings2.size(); ++u) {
            auto d = t.dist[setting][u];
            const std::size_t n2 = t.n2(u);
            for (std::size_t x = 0; x < perm.size(); ++x)
                for (std::size_t y = 0; y < n2; ++y) t.dist[setting][u][perm[x] * n2 + y] = d[x * n2 + y];
        }
    } else {
        auto old = t.outcomes2[setting];
        for (std::size_t y = 0; y < perm.size(); ++y) t.outcomes2[setting][perm[y]] = old[y];
        for (std::size_t s = 0; s < t.settings1.size(); ++s) {
            auto d = t.dist[s][setting];
            const std::size_t n2 = perm.size();
            for (std::size_t x = 0; x < t.n1(s); ++x)
                for (std::size_t y = 0; y < n2; ++y) t.dist[s][setting][x * n2 + perm[y]] = d[x * n2 + y];
        }
    }
    return t;
}

void check_witness(const LhvVerdict& v) {
    if (v.feasible) {
        REQUIRE(v.residual <= 1e-8);
        REQUIRE(v.weights.size() == v.strategies);
        double sum = 0.0;
        for (double w : v.weights) {
            REQUIRE(w >= -1e-12);
            sum += w;
        }
        REQUIRE(std::abs(sum - 1.0) <= 1e-8);
    } else {
        REQUIRE(v.certificate_value - v.certificate_max_strategy > 1e-10);
    }
}

} // namespace

TEST_CASE("deterministic strategy enumeration", "[lhv]") {
    auto s = deterministic_strategies({3, 2});
    REQUIRE(s.size() == 6);
    CHECK(s[0] == std::vector<std::size_t>{0, 0});
    CHECK(s[1] == std::vector<std::size_t>{1, 0});
    CHECK(s[5] == std::vector<std::size_t>{2, 1});
    CHECK_THROWS_AS(deterministic_strategies({2, 0}), error);
    CHECK_THROWS_AS(deterministic_strategies(std::vector<std::size_t>(14, 2)), error);
}

TEST_CASE("Hardy table entries", "[lhv]") {
    const double theta = 0.9;
    CorrelationTable t = hardy_table(theta);
    CHECK(t.signaling() <= 1e-12);
    // Settings: 0 = A, 1 = B; outcomes A: (+, -), B: (oplus, ominus).
    CHECK(t.p(0, 0, 1, 1) <= 1e-15);                                          // P(-, -) = 0
    CHECK_THAT(t.p(1, 1, 1, 1), WithinAbs(p_hardy(std::cos(theta)), 1e-12)); // P(ominus, ominus)
    CHECK(t.p(1, 0, 1, 0) <= 1e-15);                                          // ominus_1 forces -_2
    CHECK(t.p(0, 1, 0, 1) <= 1e-15);                                          // ominus_2 forces -_1
}

TEST_CASE("product tables factorize and are local", "[lhv]") {
    std::mt19937_64 rng(61);
    const BipartiteKet psi = tensor(random_ket(rng), random_ket(rng));
    auto meas = [&](const char* name) {
        SingleKet k = random_ket(rng);
        return Measurement::projective(name, {k, orthogonal_complement(k)}, "0", "1");
    };
    CorrelationTable t = correlation_table(psi, {meas("X"), meas("Y")}, {meas("X"), meas("Y")});
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t u = 0; u < 2; ++u)
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y)
                    REQUIRE(std::abs(t.p(s, u, x, y) - t.marginal1(s, u, x) * t.marginal2(s, u, y)) <= 1e-12);
    LhvVerdict v = lhv_feasible(t);
    CHECK(v.feasible);
    check_witness(v);
}

TEST_CASE("verdicts on the reference tables", "[lhv]") {
    LhvVerdict prod = lhv_feasible(hardy_table(0.0));
    CHECK(prod.feasible);
    check_witness(prod);
    CHECK(prod.strategies == 16);

    LhvVerdict hardy = lhv_feasible(hardy_table(std::acos(hardy_a_star_closed())));
    CHECK_FALSE(hardy.feasible);
    check_witness(hardy);
    CHECK(hardy.certificate_max_strategy <= 1e-12);
    CHECK(hardy.certificate_value > 1e-10);

    LhvVerdict maxent = lhv_feasible(hardy_table(pi / 2.0));
    CHECK(maxent.feasible);
    check_witness(maxent);
}

TEST_CASE("post-selected tables", "[lhv]") {
    CorrelationTable t = postselected_table({1.0, 0.9, 0.4});
    CHECK(t.outcomes1[0].size() == 3);
    CHECK(t.signaling() <= 1e-12);
    LhvVerdict v = lhv_feasible(t);
    CHECK(v.strategies == 24);
    check_witness(v);
    // With the inconclusive outcome kept, the maximally entangled construction is local.
    LhvVerdict m = lhv_feasible(postselected_table({pi / 2.0, pi / 3.0, pi / 6.0}));
    check_witness(m);
}

TEST_CASE("verdicts are invariant under outcome relabeling", "[lhv][property]") {
    std::mt19937_64 rng(62);
    for (double theta : {0.0, 0.5, std::acos(hardy_a_star_closed()), 1.2, pi / 2.0}) {
        CorrelationTable t = hardy_table(theta);
        const bool base = lhv_feasible(t).feasible;
        for (int trial = 0; trial < 10; ++trial) {
            CorrelationTable r = t;
            for (int party : {1, 2})
                for (std::size_t s = 0; s < 2; ++s) {
                    std::vector<std::size_t> perm(2);
                    std::iota(perm.begin(), perm.end(), 0);
                    std::shuffle(perm.begin(), perm.end(), rng);
                    r = relabel(r, party, s, perm);
                }
            LhvVerdict v = lhv_feasible(r);
            REQUIRE(v.feasible == base);
            check_witness(v);
        }
    }
    CorrelationTable p = postselected_table({1.1, 0.7, 0.2});
    const bool base = lhv_feasible(p).feasible;
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<std::size_t> perm(3);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        REQUIRE(lhv_feasible(relabel(p, 1, 0, perm)).feasible == base);
    }
}

TEST_CASE("near-boundary verdicts use exact arithmetic", "[lhv]") {
    // Mix the Hardy table with the local product table until the floating-point margin is tiny.
    CorrelationTable h = hardy_table(std::acos(hardy_a_star_closed()));
    CorrelationTable l = hardy_table(0.0);
    bool saw_exact = false;
    for (double lam : {1e-8, 5e-8, 1e-7, 5e-7}) {
        CorrelationTable m = h;
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t u = 0; u < 2; ++u)
                for (std::size_t k = 0; k < 4; ++k) m.dist[s][u][k] = lam * h.dist[s][u][k] + (1.0 - lam) * l.dist[s][u][k];
        LhvVerdict v = lhv_feasible(m);
        saw_exact = saw_exact || v.exact;
        check_witness(v);
    }
    INFO("exact fallback exercised: " << saw_exact);
    SUCCEED();
}

TEST_CASE("invalid tables", "[lhv][errors]") {
    CorrelationTable t = hardy_table(0.7);
    CorrelationTable bad = t;
    bad.dist[0][0][0] += 0.1;
    CHECK_THROWS_AS(lhv_feasible(bad), error);
    bad = t;
    bad.dist[0][0].pop_back();
    CHECK_THROWS_AS(lhv_feasible(bad), error);
    // Shifting weight between outcome pairs with the same party-1 outcome signals to party 1's marginal elsewhere.
    bad = t;
    bad.dist[0][0][0] += 0.05;
    bad.dist[0][0][2] -= 0.05;
    try {
        lhv_feasible(bad);
        FAIL("expected TableInvalid");
    } catch (const error& e) {
        CHECK(e.code() == errc::table_invalid);
    }
}
