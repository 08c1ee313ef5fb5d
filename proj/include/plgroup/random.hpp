#pragma once

// Seeded generators for random elements used by the lemma suite and tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "plgroup/dyadic.hpp"
#include "plgroup/omega.hpp"
#include "plgroup/plmap.hpp"
#include "plgroup/thompson.hpp"

namespace plgroup::rnd {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// m / 2^e in (0, 1) with e in [1, max_exp].
inline Dyadic unit_dyadic(Rng& rng, int max_exp = 10) {
    const int e = static_cast<int>(uniform(rng, 1, max_exp));
    const std::int64_t m = uniform(rng, 1, (std::int64_t{1} << e) - 1);
    return Dyadic::normalize(m, e);
}

/// Dyadic strictly inside (lo, hi).
inline Dyadic between(Rng& rng, const Dyadic& lo, const Dyadic& hi, int extra_bits = 6) {
    return lo + (hi - lo) * Dyadic::normalize(uniform(rng, 1, (std::int64_t{1} << extra_bits) - 1), extra_bits);
}

inline std::vector<Dyadic> sorted_unit_points(Rng& rng, std::size_t k, int max_exp = 10) {
    std::vector<Dyadic> xs;
    while (xs.size() < k) {
        xs.push_back(unit_dyadic(rng, max_exp));
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    return xs;
}

/// Strictly increasing tuples in (0, 1) with equal theta values.
inline std::pair<std::vector<Dyadic>, std::vector<Dyadic>> theta_matched(Rng& rng, int n, std::size_t k) {
    const std::vector<Dyadic> xs = sorted_unit_points(rng, k);
    // Cut (0, 1) into k random cells and pick a matching point in each.
    std::vector<Dyadic> cuts = sorted_unit_points(rng, k - 1);
    cuts.insert(cuts.begin(), Dyadic(0));
    cuts.push_back(Dyadic(1));
    std::vector<Dyadic> ys;
    for (std::size_t i = 0; i < k; ++i) {
        const Dyadic lo = between(rng, cuts[i], cuts[i + 1], 2);
        ys.push_back(pick_with_theta(lo, cuts[i + 1], theta(xs[i], n).orbit_index(), n));
    }
    return {xs, ys};
}

inline PLMap1P transporter_element(Rng& rng, int n, std::size_t max_len = 3) {
    const auto [xs, ys] = theta_matched(rng, n, static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_len))));
    return transporter(n, xs, ys);
}

/// Compactly supported element of F_{2^n}: products of zeta_k^{+-1} conjugated by F.
inline PLMap1P fc_element(Rng& rng, int n, int factors = 2) {
    const std::int64_t kmax = static_cast<std::int64_t>(orbit_modulus(n)) - 1;
    PLMap1P out;
    for (int i = 0; i < factors; ++i) {
        PLMap1P z = make_zeta(n, uniform(rng, 1, kmax));
        if (uniform(rng, 0, 1)) z = invert(z);
        const PLMap1P q = transporter_element(rng, n, 2);
        out = compose(out, product({invert(q), z, q}));
    }
    return out;
}

/// Random word of the given length in tau^{+-1}, zeta_k^{+-1} and transporters.
inline PLMap1P omega_word(Rng& rng, int n, int length) {
    const std::int64_t kmax = static_cast<std::int64_t>(orbit_modulus(n)) - 1;
    PLMap1P out;
    for (int i = 0; i < length; ++i) {
        PLMap1P g;
        switch (uniform(rng, 0, 2)) {
        case 0: g = make_tau(n); break;
        case 1: g = make_zeta(n, uniform(rng, 1, kmax)); break;
        default: g = transporter_element(rng, n, 2); break;
        }
        if (uniform(rng, 0, 1)) g = invert(g);
        out = compose(out, g);
    }
    return out;
}

/// Generic 1-periodic map (slopes powers of 2): a short word over several
/// levels followed by a random dyadic translation.
inline PLMap1P periodic_map(Rng& rng) {
    PLMap1P f = omega_word(rng, static_cast<int>(uniform(rng, 2, 3)), static_cast<int>(uniform(rng, 1, 3)));
    const Dyadic c = Dyadic::normalize(uniform(rng, -64, 64), 4);
    return compose(f, make_translation(c));
}

/// 1-periodic map with a fixed point at a random dyadic.
inline PLMap1P fixed_point_map(Rng& rng) {
    const PLMap1P f = periodic_map(rng);
    const Dyadic x = unit_dyadic(rng, 6);
    return compose(f, make_translation(x - f(x)));
}

/// Non-integer dyadic x in (0, 1) that is not a breakpoint of f.
inline Dyadic regular_point(Rng& rng, const PLMap1P& f) {
    for (;;) {
        const Dyadic x = unit_dyadic(rng, 16);
        const auto s = f.slopes_at(x);
        if (s.first == s.second) return x;
    }
}

} // namespace plgroup::rnd
