#include <catch_amalgamated.hpp>

#include "hardycheck/postselect.hpp"
#include "support.hpp"

using namespace hardycheck;
using namespace support;
using Catch::Matchers::WithinAbs;

TEST_CASE("post-selected ledgers at the maximally entangled reference point", "[postselect]") {
    ProofAngles p{pi / 2.0, pi / 3.0, pi / 6.0};
    Ledger h = generalized_ledger(p, ProofVersion::hardy);
    REQUIRE(h.size() == 4);
    CHECK(h.all_pass());
    CHECK(h.applicable);
    CHECK_THAT(h.find("contradiction")->computed, WithinAbs(0.125, 1e-12));
    for (const char* id : {"ominus1_forces_minus2", "ominus2_forces_minus1_selected", "never_minus_minus"}) CHECK(std::abs(h.find(id)->computed - h.find(id)->target.value) <= 1e-10);

    Ledger g = generalized_ledger(p, ProofVersion::goldstein);
    REQUIRE(g.size() == 4);
    CHECK(g.all_pass());
    CHECK_THAT(g.find("contradiction")->computed, WithinAbs(0.125, 1e-12));
}

TEST_CASE("post-selected ledgers hold for random admissible angles", "[postselect][property]") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        ProofAngles p = random_admissible(rng);
        if (std::abs(std::cos(p.alpha - p.beta)) < 1e-3) continue;
        ProofContext c(p);
        Ledger g = generalized_ledger(c, ProofVersion::goldstein);
        REQUIRE(g.find("plus1_forces_oplus2_conclusive")->pass);
        REQUIRE(g.find("plus2_forces_oplus1")->pass);
        REQUIRE(g.find("never_minus_minus_selected")->pass);
        Ledger h = generalized_ledger(c, ProofVersion::hardy);
        REQUIRE(h.find("ominus1_forces_minus2")->pass);
        REQUIRE(h.find("ominus2_forces_minus1_selected")->pass);
        REQUIRE(h.find("never_minus_minus")->pass);
    }
}

TEST_CASE("orthogonal limit reduces to the Hardy ledger", "[postselect]") {
    for (double theta : {0.5, 1.0, 1.4}) {
        ProofAngles p{theta, 1e-6, 1e-6};
        Ledger h = generalized_ledger(p, ProofVersion::hardy);
        CHECK(h.all_pass());
        CHECK_THAT(h.find("contradiction")->computed, WithinAbs(p_hardy(std::cos(theta)), 1e-10));
        CHECK(p_inconclusive_minus(p).via_trace < 1e-12);
        CHECK(p_inconclusive_ominus(p).via_trace < 1e-12);
    }
}

TEST_CASE("vanishing contradiction is flagged", "[postselect]") {
    // At theta = pi/2 with alpha = beta the contradiction probability sin^2(u)/2 is zero.
    Ledger h = generalized_ledger({pi / 2.0, 0.8, 0.8}, ProofVersion::hardy);
    CHECK_FALSE(h.applicable);
    CHECK(h.note.find("VanishingContradiction") != std::string::npos);
    CHECK_FALSE(h.find("contradiction")->pass);
}

TEST_CASE("inconclusive probabilities by two routes", "[postselect]") {
    ProofAngles p{pi / 2.0, pi / 3.0, pi / 6.0};
    TwoRoutes m = p_inconclusive_minus(p);
    TwoRoutes o = p_inconclusive_ominus(p);
    CHECK_THAT(m.via_trace, WithinAbs(0.25, 1e-12));
    CHECK_THAT(m.via_decomposition, WithinAbs(0.25, 1e-12));
    CHECK_THAT(o.via_trace, WithinAbs(0.25, 1e-12));
    CHECK_THAT(o.via_decomposition, WithinAbs(0.25, 1e-12));

    std::mt19937_64 rng(42);
    for (int i = 0; i < 10000; ++i) {
        ProofContext c(random_admissible(rng));
        REQUIRE(p_inconclusive_minus(c).disagreement() <= 1e-12);
        REQUIRE(p_inconclusive_ominus(c).disagreement() <= 1e-12);
    }
}

TEST_CASE("probabilities are in range and marginals add up", "[postselect][property]") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 2000; ++i) {
        ProofContext c(random_admissible(rng));
        const SingleKet& om2 = c.bases.circ2.second;
        double total = 0.0;
        for (PovmLabel l : {PovmLabel::plus, PovmLabel::minus, PovmLabel::inconclusive}) {
            const double x = c.p_a1(l, om2);
            REQUIRE(x >= -1e-12);
            REQUIRE(x <= 1.0 + 1e-12);
            total += x;
        }
        const double marginal = joint_prob(c.psi, c.bases.circ1.first, om2) + c.p_ominus_ominus();
        REQUIRE(std::abs(total - marginal) <= 1e-12);
        REQUIRE(std::abs(conditional_first(c.psi, om2).weight - marginal) <= 1e-12);
    }
}

TEST_CASE("inconclusive probabilities vanish linearly in the overlap", "[postselect]") {
    const double theta = 1.0;
    for (double beta : {0.0, 0.6}) {
        double prev_ratio = 0.0;
        for (double u : {1e-2, 1e-3, 1e-4, 1e-5}) {
            ProofAngles p{theta, beta + u, beta};
            const double r = p_inconclusive_minus(p).via_trace / std::abs(std::sin(u));
            REQUIRE(std::isfinite(r));
            if (prev_ratio > 0.0) REQUIRE(std::abs(r - prev_ratio) <= 0.05 * prev_ratio);
            prev_ratio = r;
            REQUIRE(p_inconclusive_ominus(p).via_trace <= 2.0 * std::abs(std::sin(u)));
        }
    }
}

TEST_CASE("gaps", "[postselect]") {
    GapPair r = gaps({pi / 2.0, pi / 3.0, pi / 6.0});
    CHECK_THAT(r.hardy.gap, WithinAbs(-0.125, 1e-12));
    CHECK_THAT(r.goldstein.gap, WithinAbs(-0.125, 1e-12));
    CHECK(r.hardy.version == ProofVersion::hardy);
    CHECK(r.goldstein.version == ProofVersion::goldstein);

    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> ang(-pi, pi);
    for (int i = 0; i < 10000; ++i) {
        ProofAngles p{pi / 2.0, ang(rng), ang(rng)};
        if (!admissible(p)) continue;
        GapPair g = gaps(p);
        REQUIRE(g.hardy.gap <= 1e-12);
        REQUIRE(g.goldstein.gap <= 1e-12);
        REQUIRE(g.hardy.gap == g.hardy.p_contradiction - g.hardy.p_inapplicable);
    }

    // Near the origin of the orthogonal limit the gap is Hardy's probability.
    for (double theta : {0.4, 0.9, 1.3}) {
        GapPair g = gaps({theta, 1e-7, 1e-7});
        REQUIRE(std::abs(g.hardy.gap - p_hardy(std::cos(theta))) <= 1e-6);
        REQUIRE(g.hardy.gap > 0.0);
        REQUIRE(std::abs(g.goldstein.gap - p_hardy(std::cos(theta))) <= 1e-6);
    }
}
