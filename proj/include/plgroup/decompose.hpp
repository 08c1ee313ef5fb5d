#pragma once

// Constructive procedures: F'-point transporters, transport with a
// prescribed degree, special elements of the derived group, germ
// correction at 0, the near-zero normal form, the disjoint commutator
// trick and the weak generating set for Delta_n.
//
// Conventions: action on the right, so compose(a, b) applies a first and
// a conjugate factor with witnesses (w, p) equals w^-1 p w.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plgroup/cocycle.hpp"
#include "plgroup/omega.hpp"
#include "plgroup/plmap.hpp"
#include "plgroup/subgroup.hpp"
#include "plgroup/thompson.hpp"

namespace plgroup {

/// Element of F'_{2^n} supported in (lo, hi) sending c to t, built as the
/// commutator phi psi^-1 phi^-1 psi of two elements of F with psi moving
/// supp(phi) off itself.
inline PLMap1P fprime_point_transporter(int n, const Dyadic& c, const Dyadic& t, const Dyadic& lo = Dyadic(0),
                                        const Dyadic& hi = Dyadic(1)) {
    if (!(lo < c && c < hi && lo < t && t < hi && Dyadic(0) <= lo && hi <= Dyadic(1)))
        throw malformed("point transporter needs c, t inside (lo, hi) within [0, 1]");
    if (theta(c, n) != theta(t, n)) throw refused("theta mismatch: no element of F' sends " + c.str() + " to " + t.str());
    if (c == t) return PLMap1P::identity();
    const Dyadic mn = std::min(c, t);
    const Dyadic mx = std::max(c, t);
    const Dyadic s = midpoint(lo, mn);
    const Dyadic fix_lo = midpoint(lo, s);
    const Dyadic r = mx + (hi - mx).times_pow2(-2);
    const Dyadic fix_hi = mx + (hi - mx) * Dyadic::normalize(3, 2);
    const Dyadic s2 = pick_with_theta(r, fix_hi, theta(s, n).orbit_index(), n);
    const Dyadic r2 = pick_with_theta(s2, fix_hi, theta(r, n).orbit_index(), n);
    const PLMap1P phi = transporter(n, {s, c, r}, {s, t, r});
    const PLMap1P psi = transporter(n, {fix_lo, s, r, fix_hi}, {fix_lo, s2, r2, fix_hi});
    return product({phi, invert(psi), invert(phi), psi});
}

namespace detail {

// F-element moving the closed interval [a, b] inside (m, m + 1) into
// (lo, hi) + m, toward the least-denominator admissible targets.
inline PLMap1P contract_into(int n, const Dyadic& a, const Dyadic& b, const Dyadic& lo, const Dyadic& hi) {
    const Dyadic fa = frac(a);
    const Dyadic fb = b - Dyadic(a.floor());
    if (lo < fa && fb < hi) return PLMap1P::identity();
    const Dyadic ta = pick_with_theta(lo, hi, theta(fa, n).orbit_index(), n);
    if (fa == fb) return transporter(n, {fa}, {ta});
    const Dyadic tb = pick_with_theta(ta, hi, theta(fb, n).orbit_index(), n);
    return transporter(n, {fa, fb}, {ta, tb});
}

} // namespace detail

/// Omega_n element f with [a, b].f inside (u1, u2) + d, where d = target_degree.
/// Words in tau and F-contractions; at most cap (default 64 n) tau steps.
inline PLMap1P transport(int n, const Dyadic& a, const Dyadic& b, const Dyadic& u1, const Dyadic& u2,
                         std::int64_t target_degree, std::int64_t cap = 0) {
    if (!(a <= b) || !(b - a < Dyadic(1))) throw malformed("transport needs a compact interval of length < 1");
    if (!(Dyadic(0) <= u1 && u1 < u2 && u2 <= Dyadic(1))) throw malformed("transport target must be open inside (0, 1)");
    if (target_degree < 0 || target_degree >= n) throw malformed("target degree must lie in [0, n - 1]");
    if (cap <= 0) cap = 64 * n;
    const PLMap1P tau = make_tau(n);
    PLMap1P word;
    Dyadic ja = a, jb = b;
    std::int64_t steps = 0;
    const auto apply = [&](const PLMap1P& g) {
        word = compose(word, g);
        ja = g(ja);
        jb = g(jb);
    };
    // Lift the interval off the integer it meets, if any.
    const bigint z = ja.ceil();
    if (Dyadic(z) <= jb) {
        const Dyadic eps = Dyadic::normalize(1, 2 * n);
        std::vector<Dyadic> xs, ys;
        if (Dyadic(z) < jb) {
            xs.push_back(jb - Dyadic(z));
            ys.push_back(pick_with_theta(Dyadic(0), eps, theta(xs.back(), n).orbit_index(), n));
        }
        if (ja < Dyadic(z)) {
            xs.push_back(ja - Dyadic(z) + Dyadic(1));
            ys.push_back(pick_with_theta(Dyadic(1) - eps, Dyadic(1), theta(xs.back(), n).orbit_index(), n));
        }
        if (!xs.empty()) apply(transporter(n, std::span<const Dyadic>(xs), std::span<const Dyadic>(ys)));
        apply(tau);
        ++steps;
    }
    // Raise the level one crossing at a time.
    const bigint N = detail::pow2(n);
    const Dyadic window_lo = Dyadic(1) - Dyadic::normalize(N - 1, 2 * n);
    while (mod_floor(ja.floor() - target_degree, n) != 0) {
        if (++steps > cap) throw refused("transport: construction budget exceeded");
        apply(detail::contract_into(n, ja, jb, window_lo, Dyadic(1)));
        apply(tau);
    }
    apply(detail::contract_into(n, ja, jb, u1, u2));
    const bigint m = ja.floor();
    word = shift_images(word, bigint(target_degree) - m);
    return word;
}

enum class FactorTag { head, conjugated_fprime, translation_power };

inline std::string tag_name(FactorTag t) {
    switch (t) {
    case FactorTag::head: return "head-fixing-0-neighborhood";
    case FactorTag::conjugated_fprime: return "conjugated-Fprime";
    case FactorTag::translation_power: return "translation-power";
    }
    return "?";
}

inline FactorTag parse_tag(std::string_view s) {
    if (s == "head-fixing-0-neighborhood") return FactorTag::head;
    if (s == "conjugated-Fprime") return FactorTag::conjugated_fprime;
    if (s == "translation-power") return FactorTag::translation_power;
    throw malformed("unknown factor tag '" + std::string(s) + "'");
}

struct Factor {
    PLMap1P element;
    FactorTag tag = FactorTag::conjugated_fprime;
    PLMap1P w; // conjugated factors only: element = w^-1 p w
    PLMap1P p;
};

inline Factor conjugated(const PLMap1P& w, const PLMap1P& p) {
    return Factor{product({invert(w), p, w}), FactorTag::conjugated_fprime, w, p};
}

inline Factor inverse_factor(const Factor& f) {
    if (f.tag != FactorTag::conjugated_fprime) throw malformed("only conjugated factors are inverted");
    return conjugated(f.w, invert(f.p));
}

struct Factorization {
    PLMap1P target;
    std::vector<Factor> factors;

    PLMap1P recompose() const {
        PLMap1P out;
        for (const Factor& f : factors) out = compose(out, f.element);
        return out;
    }

    std::size_t conjugated_count() const {
        std::size_t k = 0;
        for (const Factor& f : factors) k += f.tag == FactorTag::conjugated_fprime;
        return k;
    }

    /// Empty when every structural claim holds; otherwise the first defect.
    std::string defect(int n) const {
        if (!(recompose() == target)) return "factors do not recompose to the target";
        for (std::size_t i = 0; i < factors.size(); ++i) {
            const Factor& f = factors[i];
            const std::string at = "factor " + std::to_string(i + 1) + ": ";
            switch (f.tag) {
            case FactorTag::head:
                if (!f.element(Dyadic(0)).is_zero() || f.element.slopes_at(Dyadic(0)) != std::pair<std::int64_t, std::int64_t>{0, 0})
                    return at + "head does not fix a neighborhood of 0";
                break;
            case FactorTag::translation_power:
                if (!f.element.is_translation() || !f.element(Dyadic(0)).is_integer() ||
                    mod_floor(f.element(Dyadic(0)).floor(), n) != 0)
                    return at + "not a power of t_n";
                break;
            case FactorTag::conjugated_fprime:
                if (!(product({invert(f.w), f.p, f.w}) == f.element)) return at + "witness does not conjugate to the factor";
                if (!classify_thompson(f.p, n).in_Fprime) return at + "witness p is not in F'";
                break;
            }
        }
        return {};
    }
};

/// Result of the special-element construction: f = w^-1 p w with p in F'.
struct SpecialElement {
    PLMap1P f;
    Factor witness;
};

/// Special f in Omega_n' supported in (lo, hi) + Z, conjugate to F'.
inline SpecialElement special_in_derived(int n, const Dyadic& lo, const Dyadic& hi) {
    if (!(Dyadic::normalize(-1, 2) < lo && lo < Dyadic(0) && Dyadic(0) < hi && hi < Dyadic::normalize(1, 2)))
        throw malformed("window must be an open interval containing 0 inside (-1/4, 1/4)");
    // Closed dyadic J inside the window around 0.
    const Dyadic ja = lo.times_pow2(-1);
    const Dyadic jb = hi.times_pow2(-1);
    const PLMap1P g1 = transport(n, ja, jb, Dyadic(0), Dyadic(1), 0);
    const Dyadic p = g1(ja), q = g1(jb), z = g1(Dyadic(0));
    // J.g1 lies in (0, 1); push 0.g1 to the right inside it by an F' element.
    const Dyadic inner_hi = midpoint(z, q);
    const Dyadic target = pick_with_theta(z, inner_hi, theta(z, n).orbit_index(), n);
    const PLMap1P g2 = fprime_point_transporter(n, z, target, p, q);
    const PLMap1P f = product({g1, g2, invert(g1)});
    SpecialElement out{f, Factor{f, FactorTag::conjugated_fprime, invert(g1), g2}};
    return out;
}

/// Default special element used by the normal form and germ correction.
inline const SpecialElement& standard_special(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SpecialElement>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot)
        slot = std::make_unique<SpecialElement>(special_in_derived(n, Dyadic::normalize(-1, 3), Dyadic::normalize(1, 3)));
    return *slot;
}

namespace detail {

// Bump of F^c on [x, x + L] with right slope N^s at x, or, mirrored, on
// [y - L, y] with left slope N^s at y. Second slope is N^-1 or N.
inline PLMap1P germ_bump(int n, const Dyadic& anchor, std::int64_t s, const Dyadic& u, bool at_left) {
    if (s == 0) return PLMap1P::identity();
    const bigint N = pow2(n);
    const std::int64_t as = s < 0 ? -s : s;
    const bigint geo = (pow2(n * as) - 1) / (N - 1); // 1 + N + ... + N^(|s|-1)
    // Length of the complementary piece measured on the source side.
    const Dyadic L = s > 0 ? u * Dyadic(N * geo) : u.times_pow2(-n * as) * Dyadic(geo);
    const Dyadic moved = u.times_pow2(n * s);
    if (at_left) {
        const Dyadic c = anchor + u;
        return PLMap1P::from_nodes({{anchor, anchor}, {c, anchor + moved}, {c + L, c + L}});
    }
    const Dyadic c = anchor - u;
    return PLMap1P::from_nodes({{c - L, c - L}, {c, anchor - moved}, {anchor, anchor}});
}

// Element of F' supported in (lo, hi) whose germ at lo (at_left) or hi has
// slope N^s: a germ bump times a transported copy of its inverse.
inline PLMap1P germ_fprime(int n, const Dyadic& lo, const Dyadic& hi, std::int64_t s, bool at_left) {
    if (s == 0) return PLMap1P::identity();
    const std::int64_t as = s < 0 ? -s : s;
    const Dyadic room = (hi - lo).times_pow2(-2);
    Dyadic u = Dyadic(1);
    while (u.times_pow2(n * (as + 2)) >= room) u = u.times_pow2(-1);
    const Dyadic anchor = at_left ? lo : hi;
    const PLMap1P e = germ_bump(n, anchor, s, u, at_left);
    const Node first = e.nodes().front();
    const Node last = e.nodes().back();
    const Dyadic ea = std::min(first.x, last.x), eb = std::max(first.x, last.x);
    // Room for the compensating copy on the far side of e.
    const Dyadic far_lo = at_left ? eb : lo + (hi - lo).times_pow2(-1);
    const Dyadic far_hi = at_left ? lo + (hi - lo).times_pow2(-1) : ea;
    const Dyadic c1 = pick_with_theta(far_lo, far_hi, theta(ea, n).orbit_index(), n);
    const Dyadic c2 = pick_with_theta(c1, far_hi, theta(eb, n).orbit_index(), n);
    const PLMap1P q = transporter(n, {ea, eb}, {c1, c2});
    return compose(e, product({invert(q), invert(e), q}));
}

} // namespace detail

struct ZeroFix {
    Factor g1, g2;
};

/// For f fixing 0, conjugates g1, g2 of F' elements with f g1 g2 trivial near 0.
inline ZeroFix zerofix_correctors(const PLMap1P& f, int n) {
    require_omega(f, n);
    if (!f(Dyadic(0)).is_zero()) throw refused("germ correction needs an element fixing 0");
    const auto [left, right] = f.slopes_at(Dyadic(0));
    if (left % n != 0 || right % n != 0) throw refused("slopes at 0 are not powers of 2^n");
    ZeroFix out{Factor{PLMap1P::identity(), FactorTag::conjugated_fprime, {}, {}},
                Factor{PLMap1P::identity(), FactorTag::conjugated_fprime, {}, {}}};
    if (left == 0 && right == 0) return out;
    const PLMap1P& h = standard_special(n).f;
    const PLMap1P hinv = invert(h);
    const Dyadic x = h(Dyadic(0));
    const Dyadic y = hinv(Dyadic(1));
    const Dyadic mid = midpoint(x, y);
    const PLMap1P k1 = detail::germ_fprime(n, x, mid, right / n, true);
    const PLMap1P k2 = detail::germ_fprime(n, mid, y, left / n, false);
    out.g1 = conjugated(hinv, invert(k1));
    out.g2 = conjugated(h, invert(k2));
    return out;
}

/// g = h * (conjugates of F' elements) * t_n^l with h trivial near 0 and at
/// most 2n + 4 conjugated factors.
inline Factorization normal_form_near_zero(const PLMap1P& g, int n) {
    require_omega(g, n);
    Factorization out;
    out.target = g;
    // l with x = 0.g.t^l in (-n, 0].
    const bigint l = detail::floor_div((-g(Dyadic(0))).floor(), n);
    const SpecialElement& alpha = standard_special(n);
    const PLMap1P alpha_inv = invert(alpha.f);
    const Dyadic cross_lo = Dyadic(1) + alpha_inv(Dyadic(0)); // frac of 0.alpha^-1
    const Dyadic alpha0 = alpha.f(Dyadic(0));

    std::vector<Factor> steps; // s_1, ..., s_r applied after g t^l
    PLMap1P cur = shift_images(g, l * n);
    Dyadic x = cur(Dyadic(0));
    if (!x.is_zero()) {
        if (x.is_integer()) {
            steps.push_back(alpha.witness);
            x = alpha.f(x);
        }
        while (x < Dyadic(0)) {
            const Dyadic c = frac(x);
            const Dyadic t = c > cross_lo ? c : pick_with_theta(cross_lo, Dyadic(1), theta(c, n).orbit_index(), n);
            const PLMap1P lam = fprime_point_transporter(n, c, t);
            if (!lam.is_identity()) steps.push_back(Factor{lam, FactorTag::conjugated_fprime, PLMap1P::identity(), lam});
            x = alpha.f(lam(x));
            steps.push_back(alpha.witness);
        }
        const PLMap1P lam = fprime_point_transporter(n, x, alpha0);
        if (!lam.is_identity()) steps.push_back(Factor{lam, FactorTag::conjugated_fprime, PLMap1P::identity(), lam});
        steps.push_back(inverse_factor(alpha.witness));
    }
    for (const Factor& s : steps) cur = compose(cur, s.element);
    const ZeroFix zf = zerofix_correctors(cur, n);
    const PLMap1P head = product({cur, zf.g1.element, zf.g2.element});

    out.factors.push_back(Factor{head, FactorTag::head, {}, {}});
    for (const Factor* b : {&zf.g2, &zf.g1})
        if (!b->element.is_identity()) out.factors.push_back(inverse_factor(*b));
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) out.factors.push_back(inverse_factor(*it));
    if (l != 0) out.factors.push_back(Factor{make_translation(Dyadic(-l * n)), FactorTag::translation_power, {}, {}});
    return out;
}

/// Output of the disjoint-commutator construction for a non-central f.
struct DisjointCommutator {
    PLMap1P alpha1, alpha2;
    PLMap1P inner;  // [f, alpha1]
    PLMap1P result; // [[f, alpha1], alpha2]
};

namespace detail {

// A non-integer point whose image is neither an integer nor congruent to it.
inline std::optional<Dyadic> moved_point(const PLMap1P& f) {
    std::vector<Dyadic> cand;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Dyadic a = f.nodes()[i].x;
        const Dyadic b = i + 1 < f.size() ? f.nodes()[i + 1].x : f.nodes()[0].x + Dyadic(1);
        cand.push_back(a);
        for (int k = 1; k <= 24; ++k) cand.push_back(a + (b - a).times_pow2(-k));
    }
    for (const Dyadic& x : cand) {
        const Dyadic y = f(x);
        if (!x.is_integer() && !y.is_integer() && frac(x) != frac(y)) return x;
    }
    return std::nullopt;
}

// Interval [x - e, x + e] (in (0, 1)) whose images under f avoid integers
// and which is disjoint from its image modulo 1.
inline std::pair<Dyadic, Dyadic> separated_interval(const PLMap1P& f, const Dyadic& x0) {
    const Dyadic x = frac(x0);
    for (std::int64_t k = 2;; ++k) {
        if (k > 4096) throw refused("no separated interval found");
        const Dyadic e = Dyadic::normalize(1, k);
        const Dyadic a = x - e, b = x + e;
        if (!(Dyadic(0) < a && b < Dyadic(1))) continue;
        const Dyadic fa = f(a), fb = f(b);
        if (fa.floor() != fb.floor() || fa.is_integer()) continue;
        const Dyadic ia = frac(fa), ib = fb - Dyadic(fa.floor());
        if (ib < a || b < ia) return {a, b};
    }
}

} // namespace detail

/// For a certified f that is not a translation: alpha1, alpha2 in F' with
/// [[f, alpha1], alpha2] in F' and nontrivial.
inline DisjointCommutator find_disjoint_commutator(const PLMap1P& f, int n) {
    require_omega(f, n);
    const auto x = detail::moved_point(f);
    if (!x) throw refused("element acts as a translation; every commutator with it is trivial");
    const auto [a, b] = detail::separated_interval(f, *x);
    const Dyadic c = midpoint(a, b);
    const Dyadic t = pick_with_theta(c, b, theta(c, n).orbit_index(), n);
    DisjointCommutator out;
    out.alpha1 = fprime_point_transporter(n, c, t, a, b);
    out.inner = commutator(f, out.alpha1);
    // J around c is moved off itself by alpha1.
    Dyadic e = (t - c).times_pow2(-1);
    while (!(out.alpha1(c - e) > c + e)) e = e.times_pow2(-1);
    const Dyadic c2 = midpoint(c - e, c);
    const Dyadic t2 = pick_with_theta(c2, c + e, theta(c2, n).orbit_index(), n);
    out.alpha2 = fprime_point_transporter(n, c2, t2, c - e, c + e);
    out.result = commutator(out.inner, out.alpha2);
    return out;
}

/// The closed interval I_n = [2 / 2^(4n), (2 + 2^(2n+1)) / 2^(4n)] holding every zeta support.
inline std::pair<Dyadic, Dyadic> zeta_window(int n) {
    return {Dyadic::normalize(2, 4 * n), Dyadic::normalize(bigint(2) + detail::pow2(2 * n + 1), 4 * n)};
}

struct WeakGenerators {
    int n = 2;
    PLMap1P f, g;
    std::vector<PLMap1P> commutators; // c_i = zeta_i f^-1 zeta_i^-1 f
    bool xi_difference = true;        // (a)
    bool delta_membership = true;     // (b)
    bool fprime_conjugacy = true;     // (c)
    bool psi_generation = true;       // (d)
    std::vector<std::string> defects;

    bool pass() const { return xi_difference && delta_membership && fprime_conjugacy && psi_generation && defects.empty(); }

    std::string report() const {
        std::ostringstream os;
        const auto yn = [](bool b) { return b ? "PASS" : "FAIL"; };
        os << "weak-generators n=" << n << " count=" << commutators.size() << '\n';
        os << "(a) xi-difference " << yn(xi_difference) << '\n';
        os << "(b) delta-membership " << yn(delta_membership) << '\n';
        os << "(c) fprime-conjugacy " << yn(fprime_conjugacy) << '\n';
        os << "(d) psi-generation " << yn(psi_generation) << '\n';
        for (const std::string& d : defects) os << "defect " << d << '\n';
        os << "overall " << yn(pass()) << '\n';
        return os.str();
    }
};

inline WeakGenerators weak_generators_delta(int n) {
    if (n < 2 || n > 5) throw malformed("weak generators are built for 2 <= n <= 5");
    WeakGenerators out;
    out.n = n;
    const auto [ia, ib] = zeta_window(n);
    // g special with support avoiding I_n + Z.
    out.g = special_in_derived(n, Dyadic::normalize(-1, 3), Dyadic::normalize(1, 4 * n)).f;
    const PLMap1P ginv = invert(out.g);
    // J inside (1.g^-1, 1) has degree 1 under g.
    const Dyadic w = ginv(Dyadic(1));
    const Dyadic ja = w + (Dyadic(1) - w).times_pow2(-2);
    const Dyadic jb = w + (Dyadic(1) - w) * Dyadic::normalize(3, 2);
    const Dyadic ga = out.g(ja) - Dyadic(1), gb = out.g(jb) - Dyadic(1);
    out.f = transport(n, ia, ib, ga, gb, 1);
    const PLMap1P finv = invert(out.f);

    std::vector<XiVector> cx;
    const std::int64_t m = static_cast<std::int64_t>(orbit_modulus(n));
    for (std::int64_t i = 1; i <= m - 1; ++i) {
        const PLMap1P z = make_zeta(n, i);
        const PLMap1P c = product({z, finv, invert(z), out.f});
        out.commutators.push_back(c);
        const std::string tag = "i=" + std::to_string(i) + ": ";
        try {
            const XiVector v = xi(c, n);
            cx.push_back(v);
            const std::int64_t j = (2 * i) % m;
            if (!(v == xi(z, n) - xi(make_zeta(n, j), n))) {
                out.xi_difference = false;
                out.defects.push_back(tag + "xi(c) = " + v.str());
            }
            if (!classify_subgroup(c, n).in_Delta) {
                out.delta_membership = false;
                out.defects.push_back(tag + "not in Delta_n");
            }
        } catch (const std::exception& e) {
            out.xi_difference = out.delta_membership = false;
            out.defects.push_back(tag + e.what());
        }
        if (!classify_thompson(product({out.g, c, ginv}), n).in_Fprime) {
            out.fprime_conjugacy = false;
            out.defects.push_back(tag + "g c g^-1 is not in F'");
        }
    }
    if (out.xi_difference) {
        const LatticeBasis comm = lattice_of(cx, n);
        const std::vector<XiVector> psi = psi_basis(n);
        const LatticeBasis psil = lattice_of(psi, n);
        for (const XiVector& v : cx)
            if (!lattice_solve(v, psil, n)) out.psi_generation = false;
        for (const XiVector& v : psi)
            if (!lattice_solve(v, comm, n)) out.psi_generation = false;
        if (!out.psi_generation) out.defects.push_back("commutator lattice differs from Psi_n");
    } else {
        out.psi_generation = false;
    }
    return out;
}

/// Manifest text plus the files it names; paths are relative to the manifest.
struct ManifestBundle {
    std::string manifest;
    std::vector<std::pair<std::string, std::string>> files;
};

inline ManifestBundle to_manifest(const Factorization& fz, int n, const std::string& stem) {
    ManifestBundle b;
    std::ostringstream os;
    os << "factorization v1 n=" << n << " factors=" << fz.factors.size() << '\n';
    const auto add = [&](const std::string& name, const PLMap1P& f) {
        b.files.emplace_back(name, f.serialize());
        return name;
    };
    os << "target " << add(stem + ".target.plmap", fz.target) << '\n';
    for (std::size_t i = 0; i < fz.factors.size(); ++i) {
        const Factor& f = fz.factors[i];
        const std::string base = stem + ".f" + std::to_string(i + 1);
        os << "factor " << tag_name(f.tag) << ' ' << add(base + ".plmap", f.element);
        if (f.tag == FactorTag::conjugated_fprime)
            os << " w " << add(base + ".w.plmap", f.w) << " p " << add(base + ".p.plmap", f.p);
        os << '\n';
    }
    b.manifest = os.str();
    return b;
}

inline PLMap1P read_plmap_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw malformed("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return PLMap1P::parse(ss.str());
}

/// Parses a manifest written by to_manifest; returns the level and the factorization.
inline std::pair<int, Factorization> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw malformed("cannot read manifest " + path.string());
    const std::filesystem::path dir = path.parent_path();
    std::string line;
    if (!std::getline(in, line)) throw malformed("empty manifest");
    int n = 0;
    std::size_t count = 0;
    if (std::sscanf(line.c_str(), "factorization v1 n=%d factors=%zu", &n, &count) != 2)
        throw malformed("manifest line 1: expected 'factorization v1 n=<n> factors=<k>'");
    Factorization fz;
    std::size_t lineno = 1;
    bool have_target = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        const std::string at = "manifest line " + std::to_string(lineno) + ": ";
        if (kind == "target") {
            std::string file;
            if (!(ls >> file)) throw malformed(at + "missing target file");
            fz.target = read_plmap_file(dir / file);
            have_target = true;
        } else if (kind == "factor") {
            std::string tag, file;
            if (!(ls >> tag >> file)) throw malformed(at + "expected 'factor <tag> <file>'");
            Factor f;
            f.tag = parse_tag(tag);
            f.element = read_plmap_file(dir / file);
            if (f.tag == FactorTag::conjugated_fprime) {
                std::string kw, wf, kp, pf;
                if (!(ls >> kw >> wf >> kp >> pf) || kw != "w" || kp != "p") throw malformed(at + "missing witnesses");
                f.w = read_plmap_file(dir / wf);
                f.p = read_plmap_file(dir / pf);
            }
            fz.factors.push_back(std::move(f));
        } else {
            throw malformed(at + "unknown entry '" + kind + "'");
        }
    }
    if (!have_target) throw malformed("manifest has no target");
    if (fz.factors.size() != count) throw malformed("manifest factor count mismatch");
    return {n, fz};
}

} // namespace plgroup
