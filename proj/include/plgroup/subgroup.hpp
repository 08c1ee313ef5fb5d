#pragma once

// The zeta lattice in V_n, membership in Theta_n and Delta_n, the kernel
// lattice Psi_n, and realization of Xi vectors by explicit bump products.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "plgroup/cocycle.hpp"
#include "plgroup/lattice.hpp"
#include "plgroup/omega.hpp"
#include "plgroup/thompson.hpp"

namespace plgroup {

inline std::vector<bigint> to_big(const XiVector& v, int n) {
    const auto c = to_coords(v, n);
    return {c.begin(), c.end()};
}

inline XiVector from_big(const std::vector<bigint>& c, int n) {
    std::vector<std::int64_t> small;
    for (const bigint& x : c) small.push_back(static_cast<std::int64_t>(x));
    return from_coords(small, n);
}

inline std::size_t xi_dim(int n) { return static_cast<std::size_t>(orbit_modulus(n) - 1); }

inline LatticeBasis lattice_of(const std::vector<XiVector>& vs, int n) {
    IntMatrix rows;
    for (const XiVector& v : vs) rows.push_back(to_big(v, n));
    return LatticeBasis(std::move(rows), xi_dim(n));
}

/// Rows Xi(zeta_1), ..., Xi(zeta_{2^n-2}).
inline LatticeBasis zeta_basis(int n) {
    std::vector<XiVector> vs;
    for (std::int64_t k = 1; k <= static_cast<std::int64_t>(orbit_modulus(n)) - 1; ++k)
        vs.push_back(xi(make_zeta(n, k), n));
    return lattice_of(vs, n);
}

inline const LatticeBasis& cached_zeta_basis(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<LatticeBasis>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<LatticeBasis>(zeta_basis(n));
    return *slot;
}

inline std::optional<std::vector<bigint>> lattice_solve(const XiVector& v, const LatticeBasis& basis, int n) {
    return basis.solve(to_big(v, n));
}

inline std::optional<bigint> lattice_index(const LatticeBasis& basis) { return basis.index(); }

/// Generators of Psi_n: the zeta-lattice vectors killed by varsigma.
inline std::vector<XiVector> psi_basis(int n) {
    const std::size_t m = xi_dim(n);
    const OrbitPartition& part = cached_partition(n);
    std::vector<XiVector> zx;
    IntMatrix sig;
    for (std::size_t k = 1; k <= m; ++k) {
        zx.push_back(xi(make_zeta(n, static_cast<std::int64_t>(k)), n));
        const GimelVector g = varsigma(zx.back(), n);
        std::vector<bigint> row(part.eta(), 0);
        for (const auto& [j, v] : g.entries) row[j - 1] = v.numerator();
        sig.push_back(std::move(row));
    }
    const LatticeBasis sl(std::move(sig), part.eta());
    std::vector<XiVector> out;
    for (const auto& rel : sl.relations()) {
        XiVector v;
        for (std::size_t k = 0; k < m; ++k) v += static_cast<std::int64_t>(rel[k]) * zx[k];
        out.push_back(v);
    }
    return out;
}

struct SubgroupClass {
    bool in_Theta = false;
    bool in_Delta = false;
};

inline SubgroupClass classify_subgroup(const PLMap1P& f, int n) {
    if (!in_thompson_Fc(f, n)) throw refused("classification needs a compactly supported element of F_{2^n}");
    SubgroupClass c;
    c.in_Theta = lattice_solve(xi(f, n), cached_zeta_basis(n), n).has_value();
    c.in_Delta = c.in_Theta && gimel(f, n).is_zero();
    return c;
}

/// zeta-shaped bump at u on the grid of step delta: breakpoints u, u + k d,
/// u + N k d, u + 2 N k d with slopes N, 1, 1/N. Xi = nu_j - 2 nu_{j+k} + nu_{j+2k}
/// for j = theta(u), index 2 dropped.
inline PLMap1P grid_bump(int n, const Dyadic& u, const Dyadic& delta, std::int64_t k) {
    const std::int64_t N = std::int64_t{1} << n;
    const auto at = [&](std::int64_t t) { return u + delta * Dyadic(t); };
    return PLMap1P::from_nodes({{at(0), at(0)}, {at(k), at(N * k)}, {at(N * k), at((2 * N - 1) * k)},
                                {at(2 * N * k), at(2 * N * k)}});
}

/// The realization family for a window: one grid bump per (theta of base, k),
/// on pairwise disjoint slots.
struct BumpFamily {
    std::vector<PLMap1P> elements;
    std::vector<std::pair<std::uint64_t, std::int64_t>> labels; // (theta index of base, k)
    LatticeBasis lattice;
};

inline BumpFamily build_bump_family(int n, const Dyadic& lo, const Dyadic& hi) {
    if (n > 5) throw malformed("bump family is tabulated only for n <= 5");
    if (!(Dyadic(0) <= lo && lo < hi && hi <= Dyadic(1))) throw malformed("window must be an open interval inside (0, 1)");
    const std::int64_t N = std::int64_t{1} << n;
    const std::int64_t mod = N - 1;
    const std::int64_t slot = mod + 2 * N * (N - 2) + 1;
    const std::int64_t count = mod * (N - 2);
    // Find a grid fine enough for count slots strictly inside the window.
    std::int64_t m = 1;
    Dyadic delta;
    bigint start;
    for (;; ++m) {
        delta = Dyadic::normalize(1, n * m);
        start = (lo * Dyadic(detail::pow2(n * m))).floor() + 1;
        if (Dyadic::normalize(start + count * slot, n * m) < hi) break;
    }
    BumpFamily fam;
    std::vector<XiVector> xs;
    std::int64_t s = 0;
    for (std::int64_t j = 1; j <= mod; ++j)
        for (std::int64_t k = 1; k <= N - 2; ++k, ++s) {
            bigint base = start + s * slot;
            bigint shift = (bigint(j) - base) % mod;
            if (shift < 0) shift += mod;
            const Dyadic u = Dyadic::normalize(base + shift, n * m);
            fam.elements.push_back(grid_bump(n, u, delta, k));
            fam.labels.emplace_back(static_cast<std::uint64_t>(j), k);
            xs.push_back(xi(fam.elements.back(), n));
        }
    fam.lattice = lattice_of(xs, n);
    return fam;
}

inline const BumpFamily& cached_bump_family(int n, const Dyadic& lo, const Dyadic& hi) {
    static std::mutex mu;
    static std::map<std::tuple<int, std::string, std::string>, std::unique_ptr<BumpFamily>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{n, lo.str(), hi.str()}];
    if (!slot) slot = std::make_unique<BumpFamily>(build_bump_family(n, lo, hi));
    return *slot;
}

struct Unrealizable {
    std::string hermite_witness;
};

/// An element of F^c supported in (lo, hi) with the given Xi vector, or the
/// Hermite form of the family lattice that excludes it.
inline std::variant<PLMap1P, Unrealizable> realize_xi(const XiVector& v, const Dyadic& lo, const Dyadic& hi, int n) {
    if (v.is_zero()) return PLMap1P::identity();
    const BumpFamily& fam = cached_bump_family(n, lo, hi);
    const auto c = fam.lattice.solve(to_big(v, n));
    if (!c) return Unrealizable{fam.lattice.report()};
    PLMap1P out;
    for (std::size_t i = 0; i < c->size(); ++i)
        if ((*c)[i] != 0) out = compose(out, power(fam.elements[i], static_cast<std::int64_t>((*c)[i])));
    return out;
}

} // namespace plgroup
