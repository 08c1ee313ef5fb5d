#pragma once

// Exact arithmetic on the dyadic rationals Z[1/2], plus the residue map
// theta used to label orbits of 2^n-adic points.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "plgroup/error.hpp"

namespace plgroup {

using bigint = boost::multiprecision::cpp_int;

namespace detail {

inline bigint pow2(std::int64_t e) {
    bigint r = 1;
    r <<= static_cast<unsigned>(e);
    return r;
}

// Number of trailing zero bits of a nonzero integer.
inline std::int64_t trailing_zeros(const bigint& m) {
    return static_cast<std::int64_t>(boost::multiprecision::lsb(boost::multiprecision::abs(m)));
}

// floor(m / 2^e) for e >= 0.
inline bigint floor_shift(const bigint& m, std::int64_t e) {
    if (e == 0) return m;
    bigint d = pow2(e);
    bigint q = m / d;
    if (m < 0 && q * d != m) q -= 1;
    return q;
}

} // namespace detail

/// A dyadic rational mantissa / 2^exponent kept in canonical form:
/// exponent == 0, or the mantissa is odd.
class Dyadic {
public:
    Dyadic() = default;

    template <class Int>
        requires std::is_integral_v<Int>
    Dyadic(Int v) : mantissa_(v) {}

    explicit Dyadic(bigint v) : mantissa_(std::move(v)) {}

    /// Value mantissa * 2^-exponent for any sign of exponent.
    static Dyadic normalize(bigint mantissa, std::int64_t exponent) {
        Dyadic d;
        if (mantissa == 0) return d;
        if (exponent < 0) {
            mantissa <<= static_cast<unsigned>(-exponent);
            exponent = 0;
        } else if (exponent > 0) {
            std::int64_t tz = std::min(detail::trailing_zeros(mantissa), exponent);
            mantissa >>= static_cast<unsigned>(tz);
            exponent -= tz;
        }
        d.mantissa_ = std::move(mantissa);
        d.exponent_ = exponent;
        return d;
    }

    const bigint& mantissa() const noexcept { return mantissa_; }
    std::int64_t exponent() const noexcept { return exponent_; }

    int sign() const { return mantissa_.sign(); }
    bool is_zero() const { return mantissa_ == 0; }
    bool is_integer() const { return exponent_ == 0; }

    bigint floor() const { return detail::floor_shift(mantissa_, exponent_); }
    bigint ceil() const { return -detail::floor_shift(-mantissa_, exponent_); }

    /// this * 2^k, exact.
    Dyadic times_pow2(std::int64_t k) const { return normalize(mantissa_, exponent_ - k); }

    Dyadic operator-() const {
        Dyadic d = *this;
        d.mantissa_ = -d.mantissa_;
        return d;
    }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        if (a.exponent_ >= b.exponent_)
            return normalize(a.mantissa_ + (b.mantissa_ << static_cast<unsigned>(a.exponent_ - b.exponent_)),
                             a.exponent_);
        return normalize((a.mantissa_ << static_cast<unsigned>(b.exponent_ - a.exponent_)) + b.mantissa_,
                         b.exponent_);
    }
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        return normalize(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
    }
    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        const std::int64_t e = std::max(a.exponent_, b.exponent_);
        const bigint lhs = a.mantissa_ << static_cast<unsigned>(e - a.exponent_);
        const bigint rhs = b.mantissa_ << static_cast<unsigned>(e - b.exponent_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// "m/2^e", or "m" when e == 0.
    std::string str() const {
        std::string s = mantissa_.str();
        if (exponent_ != 0) s += "/2^" + std::to_string(exponent_);
        return s;
    }

    /// Accepts "m", "m/2^e" and "m/d" with d a power of two.
    static Dyadic parse(std::string_view text);

private:
    bigint mantissa_ = 0;
    std::int64_t exponent_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

inline Dyadic abs(const Dyadic& d) { return d.sign() < 0 ? -d : d; }
inline Dyadic midpoint(const Dyadic& a, const Dyadic& b) { return (a + b).times_pow2(-1); }
inline Dyadic frac(const Dyadic& d) { return d - Dyadic(d.floor()); }

/// Writes a nonzero dyadic as odd * 2^k.
inline std::pair<bigint, std::int64_t> odd_part(const Dyadic& d) {
    if (d.is_zero()) throw malformed("odd_part of zero");
    const std::int64_t tz = detail::trailing_zeros(d.mantissa());
    return {d.mantissa() >> static_cast<unsigned>(tz), tz - d.exponent()};
}

/// log2(num / den) when the ratio is a power of two, otherwise nullopt.
inline std::optional<std::int64_t> log2_ratio(const Dyadic& num, const Dyadic& den) {
    if (num.is_zero() || den.is_zero()) return std::nullopt;
    auto [on, kn] = odd_part(num);
    auto [od, kd] = odd_part(den);
    if (on != od) return std::nullopt;
    return kn - kd;
}

namespace detail {

inline bool parse_bigint(std::string_view s, bigint& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) return false;
    bigint v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = neg ? bigint(-v) : v;
    return true;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace detail

inline Dyadic Dyadic::parse(std::string_view text) {
    const std::string_view s = detail::trim(text);
    const auto bad = [&] { return malformed("not a dyadic rational: '" + std::string(s) + "'"); };
    const auto slash = s.find('/');
    bigint m;
    if (slash == std::string_view::npos) {
        if (!detail::parse_bigint(s, m)) throw bad();
        return Dyadic(m);
    }
    if (!detail::parse_bigint(s.substr(0, slash), m)) throw bad();
    std::string_view den = s.substr(slash + 1);
    if (den.starts_with("2^")) {
        bigint e;
        if (!detail::parse_bigint(den.substr(2), e) || e < 0 || e > 1'000'000) throw bad();
        return normalize(m, static_cast<std::int64_t>(e));
    }
    bigint d;
    if (!detail::parse_bigint(den, d) || d <= 0) throw bad();
    const std::int64_t e = detail::trailing_zeros(d);
    if (d != detail::pow2(e)) throw bad();
    return normalize(m, e);
}

/// Element of Z/(2^n - 1). Value 0 is displayed as orbit index 2^n - 1 so
/// that orbit labels run over {1, ..., 2^n - 1}.
struct Residue {
    std::uint64_t value = 0;
    std::uint64_t modulus = 1;

    std::uint64_t orbit_index() const { return value == 0 ? modulus : value; }
    friend bool operator==(const Residue&, const Residue&) = default;
};

inline std::uint64_t orbit_modulus(int n) {
    if (n < 2 || n > 62) throw malformed("level n must lie in [2, 62]");
    return (std::uint64_t{1} << n) - 1;
}

/// Reduces an orbit index (any integer) to the representative in {1, ..., 2^n - 1}.
inline std::uint64_t orbit_index(std::int64_t k, int n) {
    const auto mod = static_cast<std::int64_t>(orbit_modulus(n));
    std::int64_t r = ((k % mod) + mod) % mod;
    return r == 0 ? static_cast<std::uint64_t>(mod) : static_cast<std::uint64_t>(r);
}

/// theta for base 2^n: write x = k / (2^n)^m and return k mod (2^n - 1).
/// Since 2^n = 1 mod (2^n - 1), this equals mantissa * 2^r with r = (-e) mod n.
inline Residue theta(const Dyadic& x, int n) {
    const std::uint64_t mod = orbit_modulus(n);
    const std::int64_t r = ((-x.exponent()) % n + n) % n;
    bigint k = (x.mantissa() << static_cast<unsigned>(r)) % bigint(mod);
    if (k < 0) k += mod;
    return Residue{static_cast<std::uint64_t>(k), mod};
}

/// Signed count of integers strictly between x and y.
inline bigint int_count(const Dyadic& x, const Dyadic& y) {
    if (x == y) return 0;
    if (x < y) {
        bigint c = y.ceil() - x.floor() - 1;
        return c < 0 ? bigint(0) : c;
    }
    return -int_count(y, x);
}

} // namespace plgroup
