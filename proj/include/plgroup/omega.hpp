#pragma once

// Membership in Omega_n, the named elements tau, zeta_k and t_n, canonical
// representatives for Gamma_n = Omega_n / <t_n>, and the degree of a pair.
//
// Omega_n is cut out of the 1-periodic PL maps by the congruence
//     log2 (x.f)' = (x, x.f)_Z   (mod n)
// at every non-dyadic x. Both sides are constant on the open pieces of the
// period obtained by cutting at the breakpoints of f, at the integer point
// and at the preimage of the integer hit by f on the period: the slope is
// constant off breakpoints, and (x, x.f)_Z changes only when x or x.f
// crosses an integer. Evaluating at the dyadic midpoint of each piece
// therefore decides the condition exactly.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plgroup/dyadic.hpp"
#include "plgroup/error.hpp"
#include "plgroup/plmap.hpp"

namespace plgroup {

struct SegmentCheck {
    Dyadic a, b; // [a, b)
    bigint count;
    std::int64_t slope_log2 = 0;
    bool ok = false;
};

struct OmegaCertificate {
    int level = 2;
    std::vector<SegmentCheck> segments;
    bool pass = true;
    std::optional<std::size_t> first_violation;

    /// One line per segment: "seg [a,b): count=c slope_log2=s verdict=ok|FAIL".
    std::string report() const {
        std::ostringstream os;
        for (const SegmentCheck& s : segments)
            os << "seg [" << s.a << ',' << s.b << "): count=" << s.count << " slope_log2=" << s.slope_log2
               << " verdict=" << (s.ok ? "ok" : "FAIL") << '\n';
        os << "omega n=" << level << ' ' << (pass ? "PASS" : "FAIL") << '\n';
        return os.str();
    }
};

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

inline bigint mod_floor(const bigint& a, std::int64_t m) {
    bigint r = a % m;
    if (r < 0) r += m;
    return r;
}

inline OmegaCertificate check_omega(const PLMap1P& f, int n) {
    if (n < 2) throw malformed("level n must be at least 2");
    OmegaCertificate cert;
    cert.level = n;
    std::vector<Dyadic> cuts{Dyadic(0)};
    for (const Node& nd : f.nodes()) cuts.push_back(nd.x);
    const PLMap1P finv = invert(f);
    // f maps [0, 1) onto [f(0), f(0) + 1), which holds exactly one integer.
    cuts.push_back(frac(finv(Dyadic(f(Dyadic(0)).ceil()))));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        SegmentCheck s;
        s.a = cuts[i];
        s.b = i + 1 < cuts.size() ? cuts[i + 1] : Dyadic(1);
        const Dyadic mid = midpoint(s.a, s.b);
        s.count = int_count(mid, f(mid));
        s.slope_log2 = f.slopes_at(mid).second;
        s.ok = mod_floor(bigint(s.slope_log2) - s.count, n) == 0;
        if (!s.ok && cert.pass) {
            cert.pass = false;
            cert.first_violation = cert.segments.size();
        }
        cert.segments.push_back(std::move(s));
    }
    return cert;
}

inline bool in_omega(const PLMap1P& f, int n) { return check_omega(f, n).pass; }

inline void require_omega(const PLMap1P& f, int n) {
    const OmegaCertificate c = check_omega(f, n);
    if (!c.pass) {
        const SegmentCheck& s = c.segments[*c.first_violation];
        throw refused("element is not in Omega_" + std::to_string(n) + ": congruence fails on [" + s.a.str() +
                      "," + s.b.str() + ")");
    }
}

inline PLMap1P make_translation(const Dyadic& c) { return PLMap1P::translation(c); }

/// The central translation t_n : x -> x + n.
inline PLMap1P make_tn(int n) { return PLMap1P::translation(Dyadic(n)); }

/// The special element tau: supported on (-1/2^n, 1/2^(n-1)) + Z, with
/// pieces of slope 2^n, 2 and 2^-n sending 0 to (2^n - 1)/2^(2n-1).
inline PLMap1P make_tau(int n) {
    if (n < 2 || n > 62) throw malformed("tau needs 2 <= n <= 62");
    const bigint N = detail::pow2(n);
    std::vector<Node> nodes{
        {Dyadic::normalize(-1, n), Dyadic::normalize(-1, n)},
        {Dyadic::normalize(1 - N, 2 * n), Dyadic(0)},
        {Dyadic(0), Dyadic::normalize(N - 1, 2 * n - 1)},
        {Dyadic::normalize(1, n - 1), Dyadic::normalize(1, n - 1)},
    };
    return PLMap1P::from_nodes(std::move(nodes));
}

/// zeta_k, 1 <= k <= 2^n - 2: supported on (2/2^(4n), (2 + 2^(n+1) k)/2^(4n)) with
/// slopes 2^n, 1, 2^-n.
inline PLMap1P make_zeta(int n, std::int64_t k) {
    if (n < 2 || n > 15) throw malformed("zeta needs 2 <= n <= 15");
    const std::int64_t N = std::int64_t{1} << n;
    if (k < 1 || k > N - 2) throw malformed("zeta index k must lie in [1, 2^n - 2]");
    const auto at = [&](std::int64_t num) { return Dyadic::normalize(num, 4 * n); };
    std::vector<Node> nodes{
        {at(2), at(2)},
        {at(2 + k), at(2 + N * k)},
        {at(2 + N * k), at(2 + (2 * N - 1) * k)},
        {at(2 + 2 * N * k), at(2 + 2 * N * k)},
    };
    return PLMap1P::from_nodes(std::move(nodes));
}

/// A lift normalized so that 0.rep lies in [0, n). Two lifts give the same
/// element of Gamma_n iff they differ by a power of t_n.
struct GammaElement {
    PLMap1P rep;
    int level = 2;
    friend bool operator==(const GammaElement&, const GammaElement&) = default;
};

/// Shifts every image by the integer m, i.e. composes with x -> x + m.
inline PLMap1P shift_images(const PLMap1P& f, const bigint& m) {
    if (m == 0) return f;
    return compose(f, PLMap1P::translation(Dyadic(m)));
}

inline GammaElement gamma_canonical(const PLMap1P& f, int n) {
    require_omega(f, n);
    const Dyadic z = f(Dyadic(0));
    bigint j = z.floor();
    j = (j >= 0) ? bigint(j / n) : bigint(-((-j + n - 1) / n));
    return GammaElement{shift_images(f, -j * n), n};
}

/// Degree of the pair (f, [a, b]): the residue mod n of the integer m with
/// [a, b].lift inside (m, m + 1). Lift independent.
inline std::int64_t degree(const PLMap1P& lift, const Dyadic& a, const Dyadic& b, int n) {
    if (!(Dyadic(0) < a && a <= b && b < Dyadic(1))) throw malformed("degree needs a closed interval inside (0, 1)");
    const Dyadic fa = lift(a);
    const Dyadic fb = lift(b);
    const bigint m = fa.floor();
    if (fa.is_integer() || fb.ceil() > m + 1 || fb.is_integer())
        throw refused("image of the interval meets an integer; degree undefined");
    return static_cast<std::int64_t>(mod_floor(m, n));
}

inline std::int64_t degree(const GammaElement& f, const Dyadic& a, const Dyadic& b) {
    return degree(f.rep, a, b, f.level);
}

inline bool is_special(const PLMap1P& f, int n) {
    require_omega(f, n);
    const Dyadic z = f(Dyadic(0));
    return Dyadic(0) < z && z < Dyadic(1);
}

} // namespace plgroup
