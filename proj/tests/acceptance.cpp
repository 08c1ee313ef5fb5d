// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is 0 only when every criterion passes within its time limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "plgroup/plgroup.hpp"

using namespace plgroup;

namespace {

struct Criterion {
    const char* id;
    const char* title;
    double limit_s;
    std::function<std::string()> run; // empty string means success
};

// Fraction-free elimination; exact integer determinant.
bigint bareiss_det(IntMatrix a) {
    const std::size_t m = a.size();
    bigint prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < m && a[r][k] == 0) ++r;
            if (r == m) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < m; ++i)
            for (std::size_t j = k + 1; j < m; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[m - 1][m - 1];
}

Dyadic distance_oracle(const PLMap1P& g, int n) {
    const Dyadic x = g(Dyadic(0));
    const bigint q = x.floor() / n;
    Dyadic best = abs(x);
    for (bigint m = q - 2; m <= q + 2; ++m) best = std::min(best, abs(x - Dyadic(m * n)));
    return best;
}

std::string c1_zeta_identity() {
    for (int n = 2; n <= 5; ++n)
        for (std::int64_t k = 1; k <= static_cast<std::int64_t>(orbit_modulus(n)) - 1; ++k) {
            XiVector expect;
            expect.add(orbit_index(2 + k, n), -2);
            expect.add(orbit_index(2 + 2 * k, n), 1);
            const XiVector got = xi(make_zeta(n, k), n);
            if (!(got == expect))
                return "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + got.str() + " vs " + expect.str();
        }
    return {};
}

std::string c2_trichotomy() {
    for (int n = 2; n <= 6; ++n) {
        if (!check_omega(make_tau(n), n).pass) return "tau rejected at n=" + std::to_string(n);
        if (!check_omega(make_tn(n), n).pass) return "t_n rejected at n=" + std::to_string(n);
        const OmegaCertificate bad = check_omega(make_translation(1), n);
        if (bad.pass || !bad.first_violation) return "translation(1) accepted at n=" + std::to_string(n);
        const SegmentCheck& s = bad.segments[*bad.first_violation];
        if (s.ok || mod_floor(s.count - s.slope_log2, n) == 0) return "violation certificate is not a violation";
    }
    return {};
}

std::string c3_closure() {
    const int n = 3;
    rnd::Rng rng(3003);
    const std::int64_t zmax = static_cast<std::int64_t>(orbit_modulus(n)) - 1;
    for (int t = 0; t < 1000; ++t) {
        std::vector<PLMap1P> word;
        const int len = static_cast<int>(rnd::uniform(rng, 1, 5));
        for (int i = 0; i < len; ++i) {
            PLMap1P g;
            switch (rnd::uniform(rng, 0, 2)) {
            case 0: g = make_tau(n); break;
            case 1: g = make_zeta(n, rnd::uniform(rng, 1, zmax)); break;
            default: g = rnd::transporter_element(rng, n, 3); break;
            }
            word.push_back(rnd::uniform(rng, 0, 1) ? invert(g) : g);
        }
        const PLMap1P f = product(word);
        if (!check_omega(f, n).pass) return "product " + std::to_string(t) + " fails check_omega";
        for (int j = 0; j < 10; ++j) {
            // Odd numerator over 2^40 avoids every breakpoint of the factors.
            const Dyadic x = Dyadic::normalize(2 * rnd::uniform(rng, -(std::int64_t{1} << 38), std::int64_t{1} << 38) + 1, 40);
            Dyadic y = x;
            std::int64_t sum = 0;
            for (const PLMap1P& g : word) {
                sum += g.slopes_at(y).second;
                y = g(y);
            }
            if (f(x) != y || f.slopes_at(x).second != sum) return "chain rule fails for product " + std::to_string(t);
        }
    }
    return {};
}

std::string c4_transporters() {
    rnd::Rng rng(4004);
    for (int t = 0; t < 500; ++t) {
        const int n = static_cast<int>(rnd::uniform(rng, 2, 5));
        const auto [xs, ys] = rnd::theta_matched(rng, n, static_cast<std::size_t>(rnd::uniform(rng, 1, 5)));
        const PLMap1P f = transporter(n, xs, ys);
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (f(xs[j]) != ys[j]) return "transporter misses a point";
        for (std::int64_t s : f.log2_slopes())
            if (s % n != 0) return "slope is not a power of 2^n";
        if (!f(Dyadic(0)).is_zero() || f(Dyadic(1)) != Dyadic(1)) return "transporter moves an endpoint";
    }
    int refused_count = 0;
    for (int t = 0; t < 500; ++t) {
        const int n = static_cast<int>(rnd::uniform(rng, 2, 5));
        auto [xs, ys] = rnd::theta_matched(rng, n, static_cast<std::size_t>(rnd::uniform(rng, 1, 5)));
        const std::size_t j = static_cast<std::size_t>(rnd::uniform(rng, 0, static_cast<std::int64_t>(ys.size()) - 1));
        const Dyadic lo = j == 0 ? Dyadic(0) : ys[j - 1];
        const Dyadic hi = j + 1 == ys.size() ? Dyadic(1) : ys[j + 1];
        const std::uint64_t mod = orbit_modulus(n);
        const std::uint64_t other = theta(ys[j], n).orbit_index() % mod + 1;
        ys[j] = pick_with_theta(lo, hi, other, n);
        try {
            transporter(n, xs, ys);
        } catch (const refused&) {
            ++refused_count;
        }
    }
    if (refused_count != 500) return std::to_string(500 - refused_count) + " mismatched tuples were not refused";
    return {};
}

std::string c5_partition() {
    const OrbitPartition p2 = orbit_partition(2);
    if (p2.classes.size() != 2 || p2.classes[0] != std::vector<std::uint64_t>{2} ||
        std::set<std::uint64_t>(p2.classes[1].begin(), p2.classes[1].end()) != std::set<std::uint64_t>{1, 3})
        return "n=2 partition:\n" + p2.str();
    const OrbitPartition p3 = orbit_partition(3);
    if (p3.classes != std::vector<std::vector<std::uint64_t>>{{2}, {1, 7, 5}, {3, 4, 6}}) return "n=3 partition:\n" + p3.str();
    for (int n : {3, 5})
        if (orbit_partition(n).eta() != ((std::size_t{1} << n) - 2) / static_cast<std::size_t>(n))
            return "eta mismatch at n=" + std::to_string(n);
    return {};
}

std::string c6_factorization() {
    rnd::Rng rng(6006);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + t % 2;
        const PLMap1P f = rnd::fc_element(rng, n, 3);
        if (!(gimel(f, n) == varsigma(xi(f, n), n))) return "gimel differs from varsigma(xi) on element " + std::to_string(t);
    }
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + t % 2;
        const PLMap1P f = rnd::omega_word(rng, n, 3), g = rnd::omega_word(rng, n, 3);
        if (!gimel(commutator(f, g), n).is_zero()) return "gimel of commutator " + std::to_string(t) + " is nonzero";
    }
    return {};
}

std::string c7_lattice() {
    IntMatrix rows;
    for (std::int64_t k = 1; k <= 2; ++k) rows.push_back(to_big(xi(make_zeta(2, k), 2), 2));
    const LatticeBasis& basis = cached_zeta_basis(2);
    if (basis.index() != bigint(3) || boost::multiprecision::abs(bareiss_det(rows)) != 3) return "index is not 3";
    // Points of the lattice with coefficients in [-40, 40] cover every lattice
    // vector with entries in [-6, 6].
    std::set<std::pair<std::int64_t, std::int64_t>> pts;
    for (std::int64_t a = -40; a <= 40; ++a)
        for (std::int64_t b = -40; b <= 40; ++b)
            pts.emplace(static_cast<std::int64_t>(a * rows[0][0] + b * rows[1][0]),
                        static_cast<std::int64_t>(a * rows[0][1] + b * rows[1][1]));
    std::vector<std::pair<std::int64_t, std::int64_t>> reps;
    for (std::int64_t x = -1; x <= 1; ++x)
        for (std::int64_t y = -1; y <= 1; ++y) {
            bool fresh = true;
            for (const auto& [rx, ry] : reps) fresh &= !pts.count({x - rx, y - ry});
            if (fresh) reps.emplace_back(x, y);
        }
    if (reps.size() != 3) return "enumeration finds " + std::to_string(reps.size()) + " cosets";
    rnd::Rng rng(7007);
    for (int t = 0; t < 100; ++t) {
        const std::int64_t x = rnd::uniform(rng, -6, 6), y = rnd::uniform(rng, -6, 6);
        // Coset by enumeration: the representative r with v - r in the lattice.
        std::size_t coset = reps.size();
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (pts.count({x - reps[i].first, y - reps[i].second})) coset = i;
        if (coset == reps.size()) return "enumeration misses a vector";
        for (std::size_t i = 0; i < reps.size(); ++i) {
            const bool same = lattice_solve(from_coords({x - reps[i].first, y - reps[i].second}, 2), basis, 2).has_value();
            if (same != (i == coset)) return "lattice_solve disagrees at (" + std::to_string(x) + ", " + std::to_string(y) + ")";
        }
    }
    return {};
}

std::string c8_weak_generators() {
    for (int n = 2; n <= 3; ++n) {
        const WeakGenerators w = weak_generators_delta(n);
        if (!w.pass()) return w.report();
    }
    return {};
}

std::string c9_normal_form() {
    const int n = 3;
    rnd::Rng rng(9009);
    for (int t = 0; t < 100; ++t) {
        const PLMap1P g = rnd::omega_word(rng, n, static_cast<int>(rnd::uniform(rng, 1, 4)));
        const Factorization fz = normal_form_near_zero(g, n);
        if (!(fz.recompose() == g)) return "word " + std::to_string(t) + " does not recompose";
        if (fz.conjugated_count() > static_cast<std::size_t>(2 * n + 4))
            return "word " + std::to_string(t) + " uses " + std::to_string(fz.conjugated_count()) + " conjugated factors";
        if (const std::string defect = fz.defect(n); !defect.empty()) return "word " + std::to_string(t) + ": " + defect;
    }
    return {};
}

std::string c10_width() {
    for (int n = 4; n <= 12; ++n) {
        const WidthCertificate c = ulam_lower_certificate(width_witness(n), n);
        if (c.bound < n / 2) return "ulam bound " + std::to_string(c.bound) + " at n=" + std::to_string(n);
    }
    for (int n = 8; n <= 16; ++n) {
        const WidthCertificate c = commutator_lower_certificate(width_witness(n), n);
        if (c.bound < n / 4) return "commutator bound " + std::to_string(c.bound) + " at n=" + std::to_string(n);
    }
    // Every product of j <= 3 factors from a pool of conjugated fixed-point
    // maps, shifted by powers of t_4, stays within its certificate.
    const int n = 4;
    rnd::Rng rng(10010);
    std::vector<PLMap1P> pool;
    for (int i = 0; i < 6; ++i) {
        const PLMap1P h = rnd::fixed_point_map(rng), w = rnd::periodic_map(rng);
        pool.push_back(product({invert(w), h, w}));
    }
    std::vector<PLMap1P> layer{PLMap1P::identity()};
    for (std::int64_t j = 1; j <= 3; ++j) {
        std::vector<PLMap1P> next;
        for (const PLMap1P& g : layer)
            for (const PLMap1P& f : pool) next.push_back(compose(g, f));
        for (const PLMap1P& g : next)
            for (std::int64_t m = -2; m <= 2; ++m)
                if (least_factor_count(distance_oracle(compose(g, make_translation(Dyadic(m * n))), n), 1) > j)
                    return "a product of " + std::to_string(j) + " factors violates its certificate";
        layer = std::move(next);
    }
    return {};
}

std::string c11_displacement() {
    rnd::Rng rng(11011);
    for (int t = 0; t < 500; ++t)
        if (!(max_displacement(commutator(rnd::periodic_map(rng), rnd::periodic_map(rng))) < Dyadic(2)))
            return "commutator " + std::to_string(t) + " moves a point by >= 2";
    for (int t = 0; t < 500; ++t) {
        const PLMap1P h = rnd::fixed_point_map(rng);
        if (!has_fixed_point(h)) return "generator produced a map without fixed point";
        if (!(max_displacement(h) < Dyadic(1))) return "map " + std::to_string(t) + " moves a point by >= 1";
    }
    return {};
}

} // namespace

int main() {
    const std::vector<Criterion> all{
        {"C1", "zeta cocycle identity, n=2..5", 5, c1_zeta_identity},
        {"C2", "membership trichotomy, n=2..6", 1, c2_trichotomy},
        {"C3", "closure and chain rule, 1000 products at n=3", 60, c3_closure},
        {"C4", "transporters: 500 matched, 500 refused", 30, c4_transporters},
        {"C5", "orbit partition and eta", 1, c5_partition},
        {"C6", "gimel = varsigma o xi, gimel of commutators = 0", 60, c6_factorization},
        {"C7", "zeta lattice index 3 and coset enumeration", 5, c7_lattice},
        {"C8", "weak generators of Delta_n, n=2,3", 120, c8_weak_generators},
        {"C9", "normal form, 100 words at n=3", 120, c9_normal_form},
        {"C10", "width certificates and n=4 enumeration", 120, c10_width},
        {"C11", "displacement laws, 500 each", 30, c11_displacement},
    };
    int failures = 0;
    for (const Criterion& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string why;
        try {
            why = c.run();
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (why.empty() && s > c.limit_s) why = "over time limit";
        const bool ok = why.empty();
        failures += !ok;
        std::printf("%-4s %s  %-50s %8.3f s (limit %g s)\n", c.id, ok ? "PASS" : "FAIL", c.title, s, c.limit_s);
        if (!ok) std::printf("     %s\n", why.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
    return failures == 0 ? 0 : 1;
}
