#pragma once

// Lower-bound certificates for Ulam and commutator width, and the seeded
// property suite that exercises every module.
//
// A conjugate of a 1-periodic map with a fixed point moves every point by
// less than 1, and a commutator of 1-periodic maps by less than 2. So if
// g = g_1 ... g_k t_n^m then 0.g lies within k (resp. 2k) of nZ, and the
// distance d from 0.g to nZ forces k > d (resp. 2k > d).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "plgroup/cocycle.hpp"
#include "plgroup/decompose.hpp"
#include "plgroup/lattice.hpp"
#include "plgroup/omega.hpp"
#include "plgroup/plmap.hpp"
#include "plgroup/random.hpp"
#include "plgroup/subgroup.hpp"
#include "plgroup/thompson.hpp"

namespace plgroup {

enum class WidthKind { ulam, commutator };

inline std::string kind_name(WidthKind k) { return k == WidthKind::ulam ? "ulam" : "commutator"; }

struct WidthCertificate {
    WidthKind kind = WidthKind::ulam;
    int level = 2;
    Dyadic witness_point_image; // 0.g for the canonical lift
    Dyadic distance_to_nZ;
    std::int64_t bound = 0;
    std::vector<std::string> assumptions;

    std::string report() const {
        std::ostringstream os;
        os << "certificate " << kind_name(kind) << " n=" << level << '\n';
        os << "witness_point_image " << witness_point_image << '\n';
        os << "distance_to_nZ " << distance_to_nZ << '\n';
        for (const std::string& a : assumptions) os << "assumption " << a << '\n';
        os << "bound " << bound << '\n';
        return os.str();
    }
};

/// Distance from x to the nearest multiple of n.
inline Dyadic distance_to_nZ(const Dyadic& x, int n) {
    const Dyadic r = x - Dyadic(detail::floor_div(x.floor(), n) * n);
    return std::min(r, Dyadic(n) - r);
}

/// Least k >= 0 with k * cap > d, or 0 when d = 0.
inline std::int64_t least_factor_count(const Dyadic& d, std::int64_t cap) {
    if (d.is_zero()) return 0;
    return static_cast<std::int64_t>(detail::floor_div(d.floor(), cap)) + 1;
}

namespace detail {

inline WidthCertificate width_certificate(const PLMap1P& g, int n, WidthKind kind) {
    const GammaElement c = gamma_canonical(g, n);
    WidthCertificate out;
    out.kind = kind;
    out.level = n;
    out.witness_point_image = c.rep(Dyadic(0));
    out.distance_to_nZ = distance_to_nZ(out.witness_point_image, n);
    if (kind == WidthKind::ulam) {
        out.bound = least_factor_count(out.distance_to_nZ, 1);
        out.assumptions = {"g = g_1 ... g_k t_n^m with each g_i a conjugate of a 1-periodic map with a fixed point",
                           "each such factor has displacement < 1"};
    } else {
        out.bound = least_factor_count(out.distance_to_nZ, 2);
        out.assumptions = {"g = [h_1, l_1] ... [h_k, l_k] t_n^m with 1-periodic h_i, l_i",
                           "each commutator has displacement < 2"};
    }
    return out;
}

} // namespace detail

inline WidthCertificate ulam_lower_certificate(const PLMap1P& g, int n) {
    return detail::width_certificate(g, n, WidthKind::ulam);
}

inline WidthCertificate commutator_lower_certificate(const PLMap1P& g, int n) {
    return detail::width_certificate(g, n, WidthKind::commutator);
}

/// Element with 0.g in (floor(n/2), floor(n/2) + 1), built by transport.
inline PLMap1P width_witness(int n) {
    return transport(n, Dyadic(0), Dyadic(0), Dyadic(0), Dyadic(1), n / 2);
}

// ---------------------------------------------------------------------------
// Lemma suite

struct SuiteLine {
    std::string anchor;
    int n = 2;
    std::size_t trials = 0, pass = 0, fail = 0;
    std::vector<std::string> notes;          // informational lines
    std::vector<std::string> counterexamples; // serialized failing cases
};

struct SuiteReport {
    std::vector<SuiteLine> lines;

    bool pass() const {
        return std::all_of(lines.begin(), lines.end(), [](const SuiteLine& l) { return l.fail == 0; });
    }

    std::string str() const {
        std::ostringstream os;
        for (const SuiteLine& l : lines) {
            os << "LEMMA " << l.anchor << " n=" << l.n << " trials=" << l.trials << " pass=" << l.pass
               << " fail=" << l.fail << '\n';
            for (const std::string& s : l.notes) os << "  " << s << '\n';
            for (const std::string& s : l.counterexamples) {
                std::istringstream in(s);
                std::string line;
                while (std::getline(in, line)) os << "  | " << line << '\n';
            }
        }
        os << "SUITE " << (pass() ? "PASS" : "FAIL") << '\n';
        return os.str();
    }
};

namespace suite {

// Empty on success, otherwise a description with the offending elements.
using Outcome = std::optional<std::string>;
using Trial = std::function<Outcome(rnd::Rng&, int)>;

inline std::string show(const std::string& name, const PLMap1P& f) { return name + ":\n" + f.serialize(); }

inline Outcome fail_if(bool bad, const std::string& what) { return bad ? Outcome(what) : std::nullopt; }

// Small closed interval around a point of (0, 1) whose image under f avoids integers.
inline std::optional<std::pair<Dyadic, Dyadic>> clean_interval(rnd::Rng& rng, const PLMap1P& f) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        const Dyadic x = rnd::unit_dyadic(rng, 12);
        for (int k = 8; k < 40; ++k) {
            const Dyadic e = Dyadic::normalize(1, k);
            const Dyadic a = x - e, b = x + e;
            if (!(Dyadic(0) < a && b < Dyadic(1))) continue;
            const Dyadic fa = f(a), fb = f(b);
            if (!fa.is_integer() && !fb.is_integer() && fa.floor() == fb.floor()) return std::pair{a, b};
        }
    }
    return std::nullopt;
}

inline Outcome omega_closure(rnd::Rng& rng, int n) {
    const PLMap1P f = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 6)));
    const PLMap1P g = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 3)));
    const PLMap1P fg = compose(f, g);
    const OmegaCertificate c = check_omega(fg, n);
    if (!c.pass) return show("f", f) + show("g", g) + c.report();
    for (int i = 0; i < 10; ++i) {
        const Dyadic x = rnd::unit_dyadic(rng, 14);
        const std::int64_t lhs = fg.slopes_at(x).second;
        const std::int64_t rhs = f.slopes_at(x).second + g.slopes_at(f(x)).second;
        if (lhs != rhs) return "chain rule fails at " + x.str() + "\n" + show("f", f) + show("g", g);
    }
    return std::nullopt;
}

inline Outcome theta_invariance(rnd::Rng& rng, int n) {
    const PLMap1P f = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 4)));
    // Only pairs with x and x.f both in [0, 1] keep their theta value.
    for (int i = 0; i < 64; ++i) {
        const Dyadic x = Dyadic::normalize(rnd::uniform(rng, 0, 4096), 12);
        const Dyadic y = f(x);
        if (y < Dyadic(0) || Dyadic(1) < y) continue;
        if (theta(y, n) != theta(x, n)) return "theta changes at " + x.str() + "\n" + show("f", f);
    }
    return std::nullopt;
}

inline Outcome transporter_law(rnd::Rng& rng, int n) {
    const std::size_t k = static_cast<std::size_t>(rnd::uniform(rng, 1, 4));
    const auto [xs, ys] = rnd::theta_matched(rng, n, k);
    const PLMap1P f = transporter(n, xs, ys);
    for (std::size_t i = 0; i < k; ++i)
        if (f(xs[i]) != ys[i]) return "transporter misses " + xs[i].str() + "\n" + show("f", f);
    if (!in_thompson_F(f, n)) return "transporter leaves F\n" + show("f", f);
    // A mismatched copy must be refused.
    std::vector<Dyadic> bad = ys;
    const std::size_t j = static_cast<std::size_t>(rnd::uniform(rng, 0, static_cast<std::int64_t>(k) - 1));
    const Dyadic lo = j == 0 ? Dyadic(0) : bad[j - 1];
    const Dyadic hi = j + 1 == k ? Dyadic(1) : bad[j + 1];
    const std::uint64_t m = orbit_modulus(n);
    const std::uint64_t r = theta(ys[j], n).orbit_index() % m + 1;
    bad[j] = pick_with_theta(lo, hi, r, n);
    try {
        transporter(n, xs, bad);
        return std::string("mismatched tuple was not refused");
    } catch (const refused&) {
    }
    return std::nullopt;
}

inline Outcome xi_homomorphism(rnd::Rng& rng, int n) {
    const PLMap1P f = rnd::fc_element(rng, n, 2);
    const PLMap1P g = rnd::fc_element(rng, n, 2);
    if (!(xi(compose(f, g), n) == xi(f, n) + xi(g, n))) return "xi is not additive\n" + show("f", f) + show("g", g);
    if (!full_xi_sum_check(f, n)) return "full derivative sum is nonzero\n" + show("f", f);
    return std::nullopt;
}

inline Outcome gimel_factorization(rnd::Rng& rng, int n) {
    const PLMap1P f = rnd::fc_element(rng, n, static_cast<int>(rnd::uniform(rng, 1, 3)));
    const GimelVector a = gimel(f, n), b = varsigma(xi(f, n), n);
    return fail_if(!(a.str() == b.str()), "gimel " + a.str() + " vs varsigma(xi) " + b.str() + "\n" + show("f", f));
}

inline Outcome gimel_vanish(rnd::Rng& rng, int n) {
    const PLMap1P f = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 4)));
    const PLMap1P g = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 4)));
    const GimelVector v = gimel(commutator(f, g), n);
    return fail_if(!v.is_zero(), "gimel of a commutator is " + v.str() + "\n" + show("f", f) + show("g", g));
}

inline Outcome degree_shift(rnd::Rng& rng, int n) {
    const PLMap1P f = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 4)));
    const auto iv = clean_interval(rng, f);
    if (!iv) return std::nullopt;
    const std::int64_t m = rnd::uniform(rng, -3 * n, 3 * n);
    const std::int64_t d0 = degree(f, iv->first, iv->second, n);
    const std::int64_t d1 = degree(shift_images(f, m), iv->first, iv->second, n);
    const std::int64_t d2 = degree(shift_images(f, bigint(m) * n), iv->first, iv->second, n);
    if (d1 != mod_floor(d0 + m, n) || d2 != d0) return "degree does not shift with t\n" + show("f", f);
    return std::nullopt;
}

inline Outcome degree_additivity(rnd::Rng& rng, int n) {
    const PLMap1P f = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 3)));
    const PLMap1P g = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 3)));
    const PLMap1P fg = compose(f, g);
    const auto iv = clean_interval(rng, fg);
    if (!iv) return std::nullopt;
    const Dyadic fa = f(iv->first), fb = f(iv->second);
    if (fa.is_integer() || fb.is_integer() || fa.floor() != fb.floor()) return std::nullopt;
    const Dyadic ga = frac(fa), gb = fb - Dyadic(fa.floor());
    const std::int64_t lhs = degree(fg, iv->first, iv->second, n);
    const std::int64_t rhs = mod_floor(degree(f, iv->first, iv->second, n) + degree(g, ga, gb, n), n);
    return fail_if(lhs != rhs, "degree is not additive\n" + show("f", f) + show("g", g));
}

inline Outcome degree0_conjugation(rnd::Rng& rng, int n) {
    const PLMap1P h = rnd::fc_element(rng, n, 1);
    if (h.is_identity()) return std::nullopt;
    const std::vector<Dyadic> bp = breakpoints(h);
    const Dyadic a = bp.front(), b = bp.back();
    const Dyadic u1 = rnd::unit_dyadic(rng, 4);
    const Dyadic u2 = rnd::between(rng, u1, Dyadic(1));
    const PLMap1P f = transport(n, a, b, u1, u2, 0);
    if (degree(f, a, b, n) != 0) return "transport missed degree 0\n" + show("f", f);
    const PLMap1P c = commutator(h, f);
    return fail_if(!classify_thompson(c, n).in_Fprime, "[h, f] is not in F'\n" + show("h", h) + show("f", f));
}

inline Outcome double_commutator(rnd::Rng& rng, int n) {
    const PLMap1P f = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 4)));
    if (f.is_translation()) return std::nullopt;
    const DisjointCommutator dc = find_disjoint_commutator(f, n);
    if (dc.result.is_identity()) return "double commutator is trivial\n" + show("f", f);
    for (const PLMap1P* p : {&dc.alpha1, &dc.alpha2, &dc.result})
        if (!classify_thompson(*p, n).in_Fprime) return "element outside F'\n" + show("f", f) + show("x", *p);
    return std::nullopt;
}

inline Outcome normal_form(rnd::Rng& rng, int n) {
    PLMap1P f = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 6)));
    f = shift_images(f, bigint(rnd::uniform(rng, -2, 2)) * n);
    const Factorization fz = normal_form_near_zero(f, n);
    const std::string d = fz.defect(n);
    if (!d.empty()) return d + "\n" + show("g", f);
    if (fz.conjugated_count() > static_cast<std::size_t>(2 * n + 4))
        return "normal form uses " + std::to_string(fz.conjugated_count()) + " conjugated factors\n" + show("g", f);
    return std::nullopt;
}

inline Outcome displacement(rnd::Rng& rng, int) {
    const PLMap1P f = rnd::periodic_map(rng), g = rnd::periodic_map(rng);
    const PLMap1P c = commutator(f, g);
    if (!(max_displacement(c) < Dyadic(2))) return "commutator moves a point by >= 2\n" + show("f", f) + show("g", g);
    const PLMap1P h = rnd::fixed_point_map(rng);
    if (!has_fixed_point(h)) return "generator failed to produce a fixed point\n" + show("h", h);
    return fail_if(!(max_displacement(h) < Dyadic(1)), "map with fixed point moves a point by >= 1\n" + show("h", h));
}

inline Outcome certificate_soundness(rnd::Rng& rng, int n) {
    // Products of j conjugates of fixed-point maps never beat the ulam bound,
    // products of j commutators never beat the commutator bound.
    const std::int64_t j = rnd::uniform(rng, 1, 3);
    PLMap1P conj, comm;
    for (std::int64_t i = 0; i < j; ++i) {
        const PLMap1P h = rnd::fixed_point_map(rng), w = rnd::periodic_map(rng);
        conj = compose(conj, product({invert(w), h, w}));
        comm = compose(comm, commutator(rnd::periodic_map(rng), rnd::periodic_map(rng)));
    }
    const Dyadic d1 = distance_to_nZ(conj(Dyadic(0)), n), d2 = distance_to_nZ(comm(Dyadic(0)), n);
    if (least_factor_count(d1, 1) > j) return "product of conjugates beats its certificate\n" + show("g", conj);
    if (least_factor_count(d2, 2) > j) return "product of commutators beats its certificate\n" + show("g", comm);
    // Multiplying by t_n leaves the certificate unchanged.
    const PLMap1P g = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 4)));
    const std::int64_t b = ulam_lower_certificate(g, n).bound;
    if (ulam_lower_certificate(compose(g, make_tn(n)), n).bound != b) return "bound changes under t_n\n" + show("g", g);
    return std::nullopt;
}

struct RandomAnchor {
    const char* name;
    Trial trial;
};

inline const std::vector<RandomAnchor>& random_anchors() {
    static const std::vector<RandomAnchor> list = {
        {"omega-closure", omega_closure},
        {"theta-invariance", theta_invariance},
        {"transporter", transporter_law},
        {"xi-homomorphism", xi_homomorphism},
        {"gimel-factorization", gimel_factorization},
        {"gimel-vanish", gimel_vanish},
        {"degree-shift", degree_shift},
        {"degree-additivity", degree_additivity},
        {"degree0-conjugation", degree0_conjugation},
        {"double-commutator", double_commutator},
        {"normal-form", normal_form},
        {"displacement", displacement},
        {"certificate-soundness", certificate_soundness},
    };
    return list;
}

inline SuiteLine structural(const std::string& anchor, int n, const std::function<void(SuiteLine&)>& body) {
    SuiteLine l{anchor, n, 1, 0, 0, {}, {}};
    try {
        body(l);
    } catch (const std::exception& e) {
        l.counterexamples.push_back(std::string("exception: ") + e.what());
    }
    (l.counterexamples.empty() ? l.pass : l.fail) = 1;
    return l;
}

inline std::vector<SuiteLine> structural_checks(int n) {
    std::vector<SuiteLine> out;
    out.push_back(structural("zeta-table", n, [n](SuiteLine& l) {
        for (std::int64_t k = 1; k <= static_cast<std::int64_t>(orbit_modulus(n)) - 1; ++k) {
            const PLMap1P z = make_zeta(n, k);
            if (!in_omega(z, n) || !(xi(z, n) == zeta_xi_formula(n, k)))
                l.counterexamples.push_back("k=" + std::to_string(k) + "\n" + z.serialize());
        }
    }));
    out.push_back(structural("tau-table", n, [n](SuiteLine& l) {
        const PLMap1P t = make_tau(n);
        const Dyadic expect = Dyadic::normalize(detail::pow2(n) - 1, 2 * n - 1);
        if (!in_omega(t, n) || t(Dyadic(0)) != expect || !is_special(t, n)) l.counterexamples.push_back(t.serialize());
        if (!in_omega(make_tn(n), n) || in_omega(make_translation(Dyadic(1)), n))
            l.counterexamples.push_back("translation membership is wrong");
    }));
    out.push_back(structural("orbit-partition", n, [n](SuiteLine& l) {
        const OrbitPartition& p = cached_partition(n);
        std::vector<int> seen(orbit_modulus(n) + 1, 0);
        for (const auto& cls : p.classes)
            for (std::uint64_t i : cls) {
                ++seen[i];
                if (p.class_of(doubling_step(i, n)) != p.class_of(i)) l.counterexamples.push_back("class not closed");
            }
        for (std::size_t i = 1; i < seen.size(); ++i)
            if (seen[i] != 1) l.counterexamples.push_back("label " + std::to_string(i) + " not covered once");
        l.notes.push_back("eta=" + std::to_string(p.eta()));
    }));
    out.push_back(structural("zeta-lattice", n, [n](SuiteLine& l) {
        const LatticeBasis& b = cached_zeta_basis(n);
        const auto idx = b.index();
        if (!idx) l.counterexamples.push_back("zeta vectors are dependent\n" + b.report());
        else l.notes.push_back("index=" + idx->str());
    }));
    if (n <= 5) {
        out.push_back(structural("weak-generators", n, [n](SuiteLine& l) {
            const WeakGenerators w = weak_generators_delta(n);
            if (!w.pass()) l.counterexamples.push_back(w.report());
        }));
    } else {
        SuiteLine l{"weak-generators", n, 0, 0, 0, {"skipped: tabulated for n <= 5"}, {}};
        out.push_back(l);
    }
    return out;
}

inline std::size_t thread_count(std::size_t jobs) {
    std::size_t t = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PLGROUP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) t = std::min<std::size_t>(t, static_cast<std::size_t>(v));
    }
    return std::max<std::size_t>(1, std::min(t, jobs));
}

} // namespace suite

/// Structural checks plus `iterations` seeded trials of every random property.
/// The report depends only on (n, seed, iterations).
inline SuiteReport run_lemma_suite(int n, std::uint64_t seed, std::size_t iterations) {
    if (n < 2 || n > 6) throw malformed("the lemma suite runs for 2 <= n <= 6");
    SuiteReport rep;
    rep.lines = suite::structural_checks(n);

    const auto& anchors = suite::random_anchors();
    const std::size_t jobs = anchors.size() * iterations;
    std::vector<suite::Outcome> results(jobs);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t job; (job = next.fetch_add(1)) < jobs;) {
            const std::size_t a = job / iterations, t = job % iterations;
            std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                             static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(t)};
            rnd::Rng rng(ss);
            try {
                results[job] = anchors[a].trial(rng, n);
            } catch (const std::exception& e) {
                results[job] = std::string("exception: ") + e.what();
            }
        }
    };
    const std::size_t threads = suite::thread_count(jobs);
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::size_t a = 0; a < anchors.size(); ++a) {
        SuiteLine l{anchors[a].name, n, iterations, 0, 0, {}, {}};
        for (std::size_t t = 0; t < iterations; ++t) {
            const auto& r = results[a * iterations + t];
            if (r) {
                ++l.fail;
                l.counterexamples.push_back("trial " + std::to_string(t) + ": " + *r);
            } else {
                ++l.pass;
            }
        }
        rep.lines.push_back(std::move(l));
    }
    return rep;
}

} // namespace plgroup
