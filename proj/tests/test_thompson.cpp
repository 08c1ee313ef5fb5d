#include <gtest/gtest.h>

#include "plgroup/cocycle.hpp"
#include "plgroup/decompose.hpp"
#include "plgroup/random.hpp"
#include "plgroup/thompson.hpp"

using namespace plgroup;

namespace {

Dyadic d(std::int64_t m, std::int64_t e = 0) { return Dyadic::normalize(m, e); }

// [p, q] = [j / N^m, (j + 1) / N^m] for some j, m.
bool is_standard(const Dyadic& p, const Dyadic& q, int n) {
    const auto len = log2_ratio(q - p, Dyadic(1));
    if (!len || *len > 0 || (-*len) % n != 0) return false;
    return (p.times_pow2(-*len)).is_integer();
}

// Element of F_{2^n} by direct inspection: fixes 0, slopes powers of 2^n,
// breakpoints in Z[1/2^n] = Z[1/2].
bool in_F_oracle(const PLMap1P& f, int n) {
    if (!f(Dyadic(0)).is_zero() || f(Dyadic(1)) != Dyadic(1)) return false;
    for (const Node& nd : f.nodes())
        if (nd.y < Dyadic(0) || Dyadic(1) < nd.y) return false;
    for (std::int64_t s : f.log2_slopes())
        if (s % n != 0) return false;
    return true;
}

} // namespace

TEST(Transporter, SpecExamples) {
    const PLMap1P f = transporter(2, {d(1, 2)}, {d(1, 4)});
    EXPECT_EQ(f(d(1, 2)), d(1, 4));
    EXPECT_TRUE(in_thompson_F(f, 2));
    EXPECT_THROW(transporter(2, {d(1, 2)}, {d(1, 1)}), refused);
    try {
        transporter(2, {d(1, 2)}, {d(1, 1)});
    } catch (const refused& e) {
        EXPECT_NE(std::string(e.what()).find("position 1"), std::string::npos);
    }
    EXPECT_TRUE(transporter(3, {}, {}).is_identity());
}

TEST(Transporter, MalformedInputs) {
    EXPECT_THROW(transporter(2, {d(1, 1), d(1, 2)}, {d(1, 2), d(1, 1)}), malformed); // not increasing
    EXPECT_THROW(transporter(2, {Dyadic(1)}, {Dyadic(1)}), malformed);              // outside (0, 1)
    EXPECT_THROW(transporter(2, {d(1, 2)}, {}), malformed);
}

TEST(Transporter, StandardSplitPiecesAreStandard) {
    rnd::Rng rng(30);
    for (int n = 2; n <= 5; ++n)
        for (int i = 0; i < 100; ++i) {
            Dyadic a = rnd::unit_dyadic(rng, 12), b = rnd::unit_dyadic(rng, 12);
            if (b < a) std::swap(a, b);
            if (a == b) continue;
            const auto pts = detail::standard_split(a, b, n);
            for (std::size_t j = 0; j + 1 < pts.size(); ++j) EXPECT_TRUE(is_standard(pts[j], pts[j + 1], n));
            // Piece count agrees with theta(b) - theta(a) mod N - 1.
            const std::int64_t mod = static_cast<std::int64_t>(orbit_modulus(n));
            const std::int64_t dt = static_cast<std::int64_t>(theta(b, n).value) - static_cast<std::int64_t>(theta(a, n).value);
            EXPECT_EQ(mod_floor(static_cast<std::int64_t>(pts.size() - 1) - dt, mod), 0);
        }
}

// Exhaustive: on the grid j/2^6 at n = 2, a transporter exists iff theta
// values agree, and when it exists it maps exactly and lies in F.
TEST(Transporter, ExhaustiveGridEquivalence) {
    const int n = 2;
    for (std::int64_t i = 1; i < 64; ++i)
        for (std::int64_t j = 1; j < 64; ++j) {
            const Dyadic x = d(i, 6), y = d(j, 6);
            const bool match = theta(x, n) == theta(y, n);
            if (match) {
                const PLMap1P f = transporter(n, {x}, {y});
                EXPECT_EQ(f(x), y);
                EXPECT_TRUE(in_F_oracle(f, n));
                const PLMap1P g = fprime_point_transporter(n, x, y);
                EXPECT_EQ(g(x), y);
                EXPECT_TRUE(classify_thompson(g, n).in_Fprime);
            } else {
                EXPECT_THROW(transporter(n, {x}, {y}), refused);
                EXPECT_THROW(fprime_point_transporter(n, x, y), refused);
            }
        }
}

TEST(Transporter, RandomTuples) {
    rnd::Rng rng(31);
    for (int n = 2; n <= 5; ++n)
        for (int i = 0; i < 100; ++i) {
            const auto [xs, ys] = rnd::theta_matched(rng, n, static_cast<std::size_t>(rnd::uniform(rng, 1, 5)));
            const PLMap1P f = transporter(n, xs, ys);
            for (std::size_t j = 0; j < xs.size(); ++j) EXPECT_EQ(f(xs[j]), ys[j]);
            EXPECT_TRUE(in_F_oracle(f, n));
            EXPECT_TRUE(in_omega(f, n));
        }
}

TEST(Transporter, OrbitsAreThetaFibersWithTransversal) {
    // {1/N, ..., (N-1)/N} meets every fiber exactly once.
    for (int n = 2; n <= 5; ++n) {
        const std::int64_t N = std::int64_t{1} << n;
        std::vector<int> hit(N, 0);
        for (std::int64_t j = 1; j < N; ++j) ++hit[theta(d(j, n), n).value];
        for (std::int64_t r = 0; r < N - 1; ++r) EXPECT_EQ(hit[r], 1) << "n=" << n << " r=" << r;
    }
}

TEST(Bump, ShapeAndErrors) {
    const PLMap1P b = bump(2, d(1, 2), d(5, 4), d(9, 4), 1);
    EXPECT_TRUE(classify_thompson(b, 2).in_Fc);
    EXPECT_EQ(b(d(5, 4)), d(1, 1));
    EXPECT_EQ(b.slopes_at(d(5, 4)), std::make_pair(std::int64_t{2}, std::int64_t{-2}));
    EXPECT_THROW(bump(2, d(1, 2), d(1, 4), d(3, 4), 1), malformed);
}

TEST(PickWithTheta, LeastDenominatorAndCorrectFiber) {
    rnd::Rng rng(32);
    for (int n = 2; n <= 4; ++n)
        for (int i = 0; i < 100; ++i) {
            Dyadic lo = rnd::unit_dyadic(rng, 10), hi = rnd::unit_dyadic(rng, 10);
            if (hi < lo) std::swap(lo, hi);
            if (lo == hi) continue;
            const std::uint64_t r = static_cast<std::uint64_t>(rnd::uniform(rng, 1, static_cast<std::int64_t>(orbit_modulus(n))));
            const Dyadic p = pick_with_theta(lo, hi, r, n);
            EXPECT_LT(lo, p);
            EXPECT_LT(p, hi);
            EXPECT_EQ(theta(p, n).orbit_index(), r);
        }
}
