#include <gtest/gtest.h>

#include <cstdlib>

#include "plgroup/certify.hpp"

using namespace plgroup;

namespace {

// Distance from 0.g to nZ by scanning multiples of n around 0.g.
Dyadic distance_oracle(const PLMap1P& g, int n) {
    const Dyadic x = g(Dyadic(0));
    const bigint q = x.floor() / n;
    Dyadic best = abs(x);
    for (bigint m = q - 2; m <= q + 2; ++m) best = std::min(best, abs(x - Dyadic(m * n)));
    return best;
}

std::int64_t floor_int(const Dyadic& x) { return static_cast<std::int64_t>(x.floor()); }

} // namespace

TEST(Certify, DistanceToNZ) {
    EXPECT_EQ(distance_to_nZ(Dyadic(0), 3), Dyadic(0));
    EXPECT_EQ(distance_to_nZ(Dyadic::normalize(5, 1), 3), Dyadic::normalize(1, 1));
    EXPECT_EQ(distance_to_nZ(Dyadic::normalize(-7, 1), 4), Dyadic::normalize(1, 1));
    EXPECT_EQ(distance_to_nZ(Dyadic(6), 4), Dyadic(2));
    EXPECT_EQ(least_factor_count(Dyadic(0), 1), 0);
    EXPECT_EQ(least_factor_count(Dyadic::normalize(1, 3), 1), 1);
    EXPECT_EQ(least_factor_count(Dyadic(2), 2), 2);
    EXPECT_EQ(least_factor_count(Dyadic::normalize(7, 1), 2), 2);
}

TEST(Certify, IdentityAndTau) {
    for (int n = 2; n <= 6; ++n) {
        EXPECT_EQ(ulam_lower_certificate(PLMap1P::identity(), n).bound, 0);
        EXPECT_EQ(commutator_lower_certificate(make_tn(n), n).bound, 0);
        const WidthCertificate c = ulam_lower_certificate(make_tau(n), n);
        EXPECT_EQ(c.distance_to_nZ, Dyadic::normalize(detail::pow2(n) - 1, 2 * n - 1));
        EXPECT_EQ(c.bound, 1);
        EXPECT_EQ(commutator_lower_certificate(make_tau(n), n).bound, 1);
    }
}

TEST(Certify, WitnessBounds) {
    for (int n = 4; n <= 12; ++n) {
        const PLMap1P w = width_witness(n);
        ASSERT_TRUE(in_omega(w, n));
        const Dyadic x = w(Dyadic(0));
        EXPECT_LT(Dyadic(n / 2), x);
        EXPECT_LT(x, Dyadic(n / 2 + 1));
        const WidthCertificate c = ulam_lower_certificate(w, n);
        EXPECT_EQ(c.distance_to_nZ, distance_oracle(w, n));
        EXPECT_EQ(c.bound, floor_int(distance_oracle(w, n)) + 1);
        if (n % 2 == 0) { EXPECT_EQ(c.bound, n / 2) << n; }
    }
    for (int n = 8; n <= 16; n += 4) {
        const WidthCertificate c = commutator_lower_certificate(width_witness(n), n);
        EXPECT_EQ(c.bound, n / 4) << n;
        EXPECT_EQ(c.bound, floor_int(c.distance_to_nZ) / 2 + 1);
    }
}

TEST(Certify, ReportLayout) {
    const std::string r = ulam_lower_certificate(width_witness(8), 8).report();
    EXPECT_EQ(r.rfind("certificate ulam n=8\nwitness_point_image ", 0), 0u) << r;
    EXPECT_NE(r.find("\ndistance_to_nZ "), std::string::npos);
    EXPECT_NE(r.find("\nassumption "), std::string::npos);
    EXPECT_NE(r.find("\nbound 4\n"), std::string::npos);
}

TEST(Certify, InvariantUnderTnAndLiftShift) {
    rnd::Rng rng(70);
    for (int n = 2; n <= 5; ++n)
        for (int i = 0; i < 40; ++i) {
            const PLMap1P g = rnd::omega_word(rng, n, 4);
            const std::int64_t b = ulam_lower_certificate(g, n).bound;
            EXPECT_EQ(ulam_lower_certificate(compose(g, make_tn(n)), n).bound, b);
            EXPECT_EQ(ulam_lower_certificate(compose(make_tn(n), g), n).bound, b);
            EXPECT_EQ(b, floor_int(distance_oracle(g, n)) + 1 - (distance_oracle(g, n).is_zero() ? 1 : 0));
        }
}

// Every product of j <= 3 factors from a fixed pool of conjugated fixed-point
// maps, times any power of t_4, has ulam bound <= j. The witness needs 2.
TEST(Certify, EnumeratedSoundnessAtLevelFour) {
    const int n = 4;
    rnd::Rng rng(71);
    std::vector<PLMap1P> pool, comms;
    for (int i = 0; i < 6; ++i) {
        const PLMap1P h = rnd::fixed_point_map(rng), w = rnd::periodic_map(rng);
        pool.push_back(product({invert(w), h, w}));
        comms.push_back(commutator(rnd::periodic_map(rng), rnd::periodic_map(rng)));
    }
    const auto check = [&](const std::vector<PLMap1P>& src, std::int64_t cap) {
        std::vector<std::pair<PLMap1P, std::int64_t>> layer{{PLMap1P::identity(), 0}};
        for (std::int64_t j = 1; j <= 3; ++j) {
            std::vector<std::pair<PLMap1P, std::int64_t>> next;
            for (const auto& [g, k] : layer)
                for (const PLMap1P& f : src) next.emplace_back(compose(g, f), j);
            for (const auto& [g, k] : next)
                for (std::int64_t m = -2; m <= 2; ++m) {
                    const PLMap1P gt = compose(g, make_translation(Dyadic(m * n)));
                    EXPECT_LE(least_factor_count(distance_oracle(gt, n), cap), k);
                }
            layer = std::move(next);
        }
    };
    check(pool, 1);
    check(comms, 2);
    EXPECT_EQ(ulam_lower_certificate(width_witness(n), n).bound, 2);
}

TEST(Certify, CommutatorOfTauWithConjugatedZeta) {
    for (int n = 2; n <= 4; ++n) {
        const PLMap1P w = transporter(n, {Dyadic::normalize(1, 1)}, {Dyadic::normalize(1, 2 * n + 1)});
        const PLMap1P c = commutator(make_tau(n), product({invert(w), make_zeta(n, 1), w}));
        EXPECT_LE(commutator_lower_certificate(c, n).bound, 1);
    }
}

TEST(Suite, DeterministicAcrossThreadCounts) {
    const std::string a = run_lemma_suite(2, 7, 4).str();
    EXPECT_EQ(run_lemma_suite(2, 7, 4).str(), a);
    ::setenv("PLGROUP_THREADS", "1", 1);
    EXPECT_EQ(run_lemma_suite(2, 7, 4).str(), a);
    ::unsetenv("PLGROUP_THREADS");
    EXPECT_NE(a.find("SUITE PASS"), std::string::npos) << a;
}

TEST(Suite, ZeroIterationsStillRunsStructuralChecks) {
    const SuiteReport r = run_lemma_suite(3, 1, 0);
    EXPECT_TRUE(r.pass()) << r.str();
    const std::string s = r.str();
    EXPECT_NE(s.find("LEMMA zeta-lattice"), std::string::npos);
    EXPECT_NE(s.find("index=49"), std::string::npos);
    EXPECT_NE(s.find("eta=2"), std::string::npos);
    EXPECT_THROW(run_lemma_suite(7, 1, 1), malformed);
}

TEST(Suite, SkipsWeakGeneratorsAboveFive) {
    const std::string s = run_lemma_suite(6, 1, 0).str();
    EXPECT_NE(s.find("LEMMA weak-generators n=6 trials=0"), std::string::npos) << s;
}
