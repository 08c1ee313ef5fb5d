#pragma once

// Higman-Thompson F_{2^n} inside Omega_n: transporters and bumps.
//
// A standard 2^n-adic interval is [j/N^m, (j+1)/N^m] with N = 2^n. Any two
// standard intervals are related by an affine map of slope a power of N,
// and theta(right) - theta(left) = 1 for each. A gap split into p standard
// pieces therefore has p = theta(b) - theta(a) mod N - 1, and splitting one
// piece into its N children adds N - 1 pieces, so gaps with matching theta
// values can be split into equally many pieces and matched in order.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plgroup/cocycle.hpp"
#include "plgroup/dyadic.hpp"
#include "plgroup/error.hpp"
#include "plgroup/plmap.hpp"

namespace plgroup {

namespace detail {

// Greedy split of [a, b] into standard N-adic intervals, returned as the
// list of breakpoints a = p_0 < p_1 < ... < p_k = b.
inline std::vector<Dyadic> standard_split(const Dyadic& a, const Dyadic& b, int n) {
    std::vector<Dyadic> pts{a};
    Dyadic p = a;
    while (p < b) {
        // p is a multiple of N^-m once n*m >= exponent(p).
        std::int64_t m = (p.exponent() + n - 1) / n;
        while (p + Dyadic::normalize(1, n * m) > b) ++m;
        p = p + Dyadic::normalize(1, n * m);
        pts.push_back(p);
    }
    return pts;
}

// Replaces the first piece by its N children.
inline void subdivide_first(std::vector<Dyadic>& pts, int n) {
    const Dyadic step = (pts[1] - pts[0]).times_pow2(-n);
    std::vector<Dyadic> kids;
    for (std::int64_t i = 1; i < (std::int64_t{1} << n); ++i) kids.push_back(pts[0] + step * Dyadic(i));
    pts.insert(pts.begin() + 1, kids.begin(), kids.end());
}

// Appends nodes mapping [a, b] onto [c, d] piecewise with slopes powers of N.
inline void map_gap(const Dyadic& a, const Dyadic& b, const Dyadic& c, const Dyadic& d, int n,
                    std::vector<Node>& out) {
    std::vector<Dyadic> src = standard_split(a, b, n);
    std::vector<Dyadic> dst = standard_split(c, d, n);
    const std::size_t step = (std::size_t{1} << n) - 1;
    if (src.size() % step != dst.size() % step)
        throw refused("gap [" + a.str() + "," + b.str() + "] cannot be matched with [" + c.str() + "," + d.str() +
                      "]: theta mismatch");
    while (src.size() < dst.size()) subdivide_first(src, n);
    while (dst.size() < src.size()) subdivide_first(dst, n);
    for (std::size_t i = 0; i + 1 < src.size(); ++i) out.push_back(Node{src[i], dst[i]});
}

} // namespace detail

/// Element of F_{2^n} sending xs[i] to ys[i]; both tuples strictly increasing in (0, 1).
inline PLMap1P transporter(int n, std::span<const Dyadic> xs, std::span<const Dyadic> ys) {
    if (xs.size() != ys.size()) throw malformed("transporter tuples differ in length");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(Dyadic(0) < xs[i] && xs[i] < Dyadic(1) && Dyadic(0) < ys[i] && ys[i] < Dyadic(1)))
            throw malformed("transporter points must lie in (0, 1)");
        if (i > 0 && (!(xs[i - 1] < xs[i]) || !(ys[i - 1] < ys[i])))
            throw malformed("transporter tuples must be strictly increasing");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (theta(xs[i], n) != theta(ys[i], n))
            throw refused("theta mismatch at position " + std::to_string(i + 1) + ": " +
                          std::to_string(theta(xs[i], n).orbit_index()) + " vs " +
                          std::to_string(theta(ys[i], n).orbit_index()));
    }
    std::vector<Dyadic> a{Dyadic(0)}, c{Dyadic(0)};
    a.insert(a.end(), xs.begin(), xs.end());
    c.insert(c.end(), ys.begin(), ys.end());
    a.push_back(Dyadic(1));
    c.push_back(Dyadic(1));
    std::vector<Node> nodes;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) detail::map_gap(a[i], a[i + 1], c[i], c[i + 1], n, nodes);
    return PLMap1P::from_nodes(std::move(nodes));
}

inline PLMap1P transporter(int n, std::initializer_list<Dyadic> xs, std::initializer_list<Dyadic> ys) {
    return transporter(n, std::span<const Dyadic>(xs.begin(), xs.size()), std::span<const Dyadic>(ys.begin(), ys.size()));
}

/// Two-piece element of F^c supported in [a, b]: slope N^alpha on [a, c], then
/// the complementary power of N on [c, b].
inline PLMap1P bump(int n, const Dyadic& a, const Dyadic& c, const Dyadic& b, std::int64_t alpha) {
    if (!(Dyadic(0) < a && a < c && c < b && b < Dyadic(1))) throw malformed("bump needs 0 < a < c < b < 1");
    const Dyadic c2 = a + (c - a).times_pow2(n * alpha);
    if (!(a < c2 && c2 < b)) throw malformed("bump: image of c leaves (a, b)");
    const auto s = log2_ratio(b - c2, b - c);
    if (!s || *s % n != 0) throw malformed("bump: second slope is not a power of 2^n");
    return PLMap1P::from_nodes({{a, a}, {c, c2}, {b, b}});
}

/// The least-denominator point of (lo, hi) with theta index r, leftmost at that scale.
inline Dyadic pick_with_theta(const Dyadic& lo, const Dyadic& hi, std::uint64_t r, int n) {
    if (!(lo < hi)) throw malformed("pick_with_theta needs lo < hi");
    const bigint mod = orbit_modulus(n);
    for (std::int64_t m = 0; m < 4096; ++m) {
        const Dyadic scale = Dyadic(detail::pow2(n * m));
        bigint j = (lo * scale).floor() + 1;
        bigint shift = (bigint(r) - j) % mod;
        if (shift < 0) shift += mod;
        j += shift;
        const Dyadic p = Dyadic::normalize(j, n * m);
        if (p < hi) return p;
    }
    throw refused("no point of the requested theta index found in the interval");
}

} // namespace plgroup
