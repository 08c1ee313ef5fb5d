#pragma once

// Derivative cocycles summed over orbits.
//
//   D_f(x)  = log_{2^n} f'(x+) - log_{2^n} f'(x-)
//   Xi_i(f) = sum of D_f over the points of (0,1) with theta index i,
//             defined on compactly supported elements of F_{2^n}; index 2
//             is dropped.
//   gimel_j = sum of D_f over the circle points whose theta index lies in
//             the j-th cycle of i -> 2(i-1) mod 2^n - 1; cycle {2} dropped.
//
// On general Gamma_n elements slopes are powers of 2, not 2^n, so gimel
// entries are rationals with denominator dividing n.

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "plgroup/dyadic.hpp"
#include "plgroup/error.hpp"
#include "plgroup/omega.hpp"
#include "plgroup/plmap.hpp"

namespace plgroup {

/// Integer vector indexed by orbit labels {1, 3, 4, ..., 2^n - 1}.
struct XiVector {
    std::map<std::uint64_t, std::int64_t> entries; // zero entries are never stored

    bool is_zero() const { return entries.empty(); }

    void add(std::uint64_t index, std::int64_t v) {
        if (v == 0) return;
        auto [it, fresh] = entries.try_emplace(index, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) entries.erase(it);
        }
    }

    std::int64_t operator[](std::uint64_t index) const {
        auto it = entries.find(index);
        return it == entries.end() ? 0 : it->second;
    }

    XiVector& operator+=(const XiVector& o) {
        for (const auto& [i, v] : o.entries) add(i, v);
        return *this;
    }
    friend XiVector operator+(XiVector a, const XiVector& b) { return a += b; }
    friend XiVector operator-(const XiVector& a) {
        XiVector r;
        for (const auto& [i, v] : a.entries) r.entries[i] = -v;
        return r;
    }
    friend XiVector operator-(XiVector a, const XiVector& b) { return a += -b; }
    friend XiVector operator*(std::int64_t s, const XiVector& a) {
        XiVector r;
        for (const auto& [i, v] : a.entries) r.add(i, s * v);
        return r;
    }
    friend bool operator==(const XiVector&, const XiVector&) = default;

    /// Sorted "index:value" pairs with explicit signs, e.g. "1:+1 3:-2"; "0" when empty.
    std::string str() const {
        if (entries.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [i, v] : entries) {
            if (!first) os << ' ';
            first = false;
            os << i << ':' << (v > 0 ? "+" : "") << v;
        }
        return os.str();
    }
};

/// Coordinate labels of V_n in order: 1, 3, 4, ..., 2^n - 1.
inline std::vector<std::uint64_t> xi_labels(int n) {
    const std::uint64_t top = orbit_modulus(n);
    std::vector<std::uint64_t> out{1};
    for (std::uint64_t i = 3; i <= top; ++i) out.push_back(i);
    return out;
}

/// nu_k with k read modulo 2^n - 1.
inline XiVector nu(std::int64_t k, int n) {
    XiVector v;
    v.add(orbit_index(k, n), 1);
    return v;
}

/// Dense coordinates in xi_labels order.
inline std::vector<std::int64_t> to_coords(const XiVector& v, int n) {
    std::vector<std::int64_t> out;
    for (std::uint64_t i : xi_labels(n)) out.push_back(v[i]);
    return out;
}

inline XiVector from_coords(const std::vector<std::int64_t>& c, int n) {
    const auto labels = xi_labels(n);
    if (c.size() != labels.size()) throw malformed("coordinate vector has the wrong length");
    XiVector v;
    for (std::size_t i = 0; i < c.size(); ++i) v.add(labels[i], c[i]);
    return v;
}

/// Stabilizer-of-0 classification inside Omega_n.
struct ThompsonClass {
    bool in_F = false;      // fixes Z, slopes powers of 2^n
    bool in_Fc = false;     // additionally trivial germs at Z
    bool in_Fprime = false; // additionally Xi = 0
    friend bool operator==(const ThompsonClass&, const ThompsonClass&) = default;
};

inline bool in_thompson_F(const PLMap1P& f, int n) {
    if (!f(Dyadic(0)).is_zero()) return false;
    for (std::int64_t s : f.log2_slopes())
        if (s % n != 0) return false;
    return true;
}

inline bool in_thompson_Fc(const PLMap1P& f, int n) {
    return in_thompson_F(f, n) && f.slopes_at(Dyadic(0)) == std::pair<std::int64_t, std::int64_t>{0, 0};
}

inline XiVector xi(const PLMap1P& f, int n) {
    if (!in_thompson_Fc(f, n))
        throw refused("Xi is defined on compactly supported elements of F_{2^" + std::to_string(n) + "}");
    XiVector v;
    if (f.is_translation()) return v;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto [l, r] = f.slopes_at(f.nodes()[i].x);
        const std::uint64_t label = theta(f.nodes()[i].x, n).orbit_index();
        if (label == 2) continue;
        v.add(label, (r - l) / n);
    }
    return v;
}

/// Sum of D_f over every breakpoint, index 2 included; zero on F^c.
inline bool full_xi_sum_check(const PLMap1P& f, int n) {
    if (!in_thompson_Fc(f, n)) throw refused("full Xi sum needs a compactly supported element");
    std::int64_t total = 0;
    if (!f.is_translation())
        for (const Node& nd : f.nodes()) {
            const auto [l, r] = f.slopes_at(nd.x);
            total += (r - l) / n;
        }
    return total == 0;
}

inline ThompsonClass classify_thompson(const PLMap1P& f, int n) {
    ThompsonClass c;
    c.in_F = in_thompson_F(f, n);
    c.in_Fc = c.in_F && in_thompson_Fc(f, n);
    c.in_Fprime = c.in_Fc && xi(f, n).is_zero();
    return c;
}

/// Cycles of i -> 2(i - 1) mod 2^n - 1 on {1, ..., 2^n - 1}; classes[0] = {2}.
struct OrbitPartition {
    int n = 2;
    std::vector<std::vector<std::uint64_t>> classes;
    std::vector<std::size_t> class_of_label; // indexed by label 1..2^n-1

    std::size_t eta() const { return classes.size() - 1; }
    std::size_t class_of(std::uint64_t label) const { return class_of_label.at(label); }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t j = 0; j < classes.size(); ++j) {
            os << "chi_" << j << " = {";
            for (std::size_t t = 0; t < classes[j].size(); ++t) os << (t ? ", " : "") << classes[j][t];
            os << "}\n";
        }
        os << "eta = " << eta() << '\n';
        return os.str();
    }
};

inline std::uint64_t doubling_step(std::uint64_t label, int n) {
    const std::uint64_t mod = orbit_modulus(n);
    const std::uint64_t r = (2 * ((label + mod - 1) % mod)) % mod;
    return r == 0 ? mod : r;
}

inline OrbitPartition orbit_partition(int n) {
    const std::uint64_t top = orbit_modulus(n);
    if (n > 24) throw malformed("orbit partition is tabulated only for n <= 24");
    OrbitPartition p;
    p.n = n;
    p.class_of_label.assign(top + 1, SIZE_MAX);
    p.classes.push_back({2});
    p.class_of_label[2] = 0;
    for (std::uint64_t start = 1; start <= top; ++start) {
        if (p.class_of_label[start] != SIZE_MAX) continue;
        std::vector<std::uint64_t> cycle;
        for (std::uint64_t i = start; p.class_of_label[i] == SIZE_MAX; i = doubling_step(i, n)) {
            p.class_of_label[i] = p.classes.size();
            cycle.push_back(i);
        }
        p.classes.push_back(std::move(cycle));
    }
    return p;
}

/// Shared per-level partitions; safe for concurrent readers.
inline const OrbitPartition& cached_partition(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<OrbitPartition>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<OrbitPartition>(orbit_partition(n));
    return *slot;
}

using Rational = boost::rational<long long>;

/// Rational vector indexed by partition classes 1..eta.
struct GimelVector {
    std::map<std::size_t, Rational> entries; // zero entries are never stored

    bool is_zero() const { return entries.empty(); }
    bool integral() const {
        for (const auto& [j, v] : entries)
            if (v.denominator() != 1) return false;
        return true;
    }
    void add(std::size_t j, Rational v) {
        if (v.numerator() == 0) return;
        auto [it, fresh] = entries.try_emplace(j, v);
        if (!fresh) {
            it->second += v;
            if (it->second.numerator() == 0) entries.erase(it);
        }
    }
    Rational operator[](std::size_t j) const {
        auto it = entries.find(j);
        return it == entries.end() ? Rational(0) : it->second;
    }
    friend bool operator==(const GimelVector&, const GimelVector&) = default;

    std::string str() const {
        if (entries.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [j, v] : entries) {
            if (!first) os << ' ';
            first = false;
            os << j << ':' << (v.numerator() > 0 ? "+" : "") << v.numerator();
            if (v.denominator() != 1) os << '/' << v.denominator();
        }
        return os.str();
    }
};

/// gimel of a certified element; any lift gives the same value.
inline GimelVector gimel(const PLMap1P& f, int n) {
    require_omega(f, n);
    const OrbitPartition& part = cached_partition(n);
    GimelVector g;
    if (f.is_translation()) return g;
    for (const Node& nd : f.nodes()) {
        const auto [l, r] = f.slopes_at(nd.x);
        const std::size_t j = part.class_of(theta(nd.x, n).orbit_index());
        if (j == 0) continue;
        g.add(j, Rational(r - l, n));
    }
    return g;
}

inline GimelVector gimel(const GammaElement& f) { return gimel(f.rep, f.level); }

inline GimelVector varsigma(const XiVector& v, int n) {
    const OrbitPartition& part = cached_partition(n);
    GimelVector g;
    for (const auto& [i, val] : v.entries) {
        const std::size_t j = part.class_of(i);
        if (j == 0) throw malformed("Xi vectors carry no index-2 entry");
        g.add(j, Rational(val));
    }
    return g;
}

/// Xi(zeta_k) as given by its closed form -2 nu_{2+k} + nu_{2+2k}.
inline XiVector zeta_xi_formula(int n, std::int64_t k) { return (-2) * nu(2 + k, n) + nu(2 + 2 * k, n); }

} // namespace plgroup
