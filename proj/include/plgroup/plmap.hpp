#pragma once

// 1-periodic piecewise-linear homeomorphisms of the real line.
//
// An element is stored by one period of nodes (x_i, y_i) with x_0 in [0, 1)
// and extended by f(x + m) = f(x) + m. The y values are the genuine real
// images (not reduced mod 1); integer crossings of the lift matter for the
// Omega_n congruence and for degrees.
//
// Every segment slope is a power of two. A PL map with dyadic breakpoints
// that maps Z[1/2] onto itself has dyadic slopes with dyadic reciprocals,
// hence powers of two, so the log2 slope is stored as an integer.
//
// Group elements act on the right: compose(f, g) is x -> (x.f).g.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plgroup/dyadic.hpp"
#include "plgroup/error.hpp"

namespace plgroup {

struct Node {
    Dyadic x;
    Dyadic y;
    friend bool operator==(const Node&, const Node&) = default;
};

class PLMap1P {
public:
    /// Identity: single anchor node (0, 0).
    PLMap1P() : nodes_{Node{0, 0}}, slopes_{0} {}

    static PLMap1P identity() { return {}; }

    static PLMap1P translation(const Dyadic& c) {
        PLMap1P f;
        f.nodes_[0].y = c;
        return f;
    }

    /// Validates and canonicalizes an arbitrary list of nodes describing one
    /// period. Nodes may lie outside [0, 1); they are shifted by integers.
    /// Errors name the offending node by its position in the input.
    static PLMap1P from_nodes(std::vector<Node> raw);

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    /// log2 slope of the segment starting at node i (the last wraps to node 0 + 1).
    std::span<const std::int64_t> log2_slopes() const noexcept { return slopes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    Dyadic operator()(const Dyadic& x) const;

    /// (left, right) log2 one-sided slopes at x.
    std::pair<std::int64_t, std::int64_t> slopes_at(const Dyadic& x) const;

    bool is_identity() const { return nodes_.size() == 1 && nodes_[0].x.is_zero() && nodes_[0].y.is_zero(); }
    /// Affine maps x -> x + c are exactly the single-anchor forms.
    bool is_translation() const { return nodes_.size() == 1 && nodes_[0].x.is_zero(); }

    std::string serialize() const;
    static PLMap1P parse(std::string_view text);

    friend bool operator==(const PLMap1P& a, const PLMap1P& b) { return a.nodes_ == b.nodes_; }

private:
    struct Located {
        std::size_t segment;
        Dyadic offset; // t - x_segment, t in [x0, x0 + 1)
        bigint shift;  // x = t + shift
        bool at_node;
    };

    Located locate(const Dyadic& x) const;

    // Sorted, windowed nodes with distinct x; computes slopes and drops
    // nodes where the slope does not change.
    static PLMap1P canonical(std::vector<Node> sorted, const std::vector<std::size_t>* origin);

    std::vector<Node> nodes_;
    std::vector<std::int64_t> slopes_;
};

inline PLMap1P::Located PLMap1P::locate(const Dyadic& x) const {
    const Dyadic& x0 = nodes_.front().x;
    bigint shift = (x - x0).floor();
    Dyadic t = x - Dyadic(shift);
    // t in [x0, x0 + 1)
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                               [](const Dyadic& v, const Node& nd) { return v < nd.x; });
    const auto seg = static_cast<std::size_t>(std::distance(nodes_.begin(), it) - 1);
    Dyadic off = t - nodes_[seg].x;
    return Located{seg, off, std::move(shift), off.is_zero()};
}

inline Dyadic PLMap1P::operator()(const Dyadic& x) const {
    const Located loc = locate(x);
    return nodes_[loc.segment].y + loc.offset.times_pow2(slopes_[loc.segment]) + Dyadic(loc.shift);
}

inline std::pair<std::int64_t, std::int64_t> PLMap1P::slopes_at(const Dyadic& x) const {
    const Located loc = locate(x);
    const std::int64_t right = slopes_[loc.segment];
    if (!loc.at_node) return {right, right};
    const std::size_t prev = loc.segment == 0 ? slopes_.size() - 1 : loc.segment - 1;
    return {slopes_[prev], right};
}

inline PLMap1P PLMap1P::canonical(std::vector<Node> nodes, const std::vector<std::size_t>* origin) {
    const std::size_t k = nodes.size();
    const auto where = [&](std::size_t i) {
        return "node " + std::to_string(origin ? (*origin)[i] + 1 : i + 1);
    };
    std::vector<std::int64_t> slopes(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Node& a = nodes[i];
        const Node next = i + 1 < k ? nodes[i + 1] : Node{nodes[0].x + 1, nodes[0].y + 1};
        const Dyadic dx = next.x - a.x;
        const Dyadic dy = next.y - a.y;
        if (dy.sign() <= 0) throw malformed(where(i) + ": images are not strictly increasing over one period");
        auto s = log2_ratio(dy, dx);
        if (!s) throw malformed(where(i) + ": segment slope is not a power of 2");
        slopes[i] = *s;
    }
    PLMap1P out;
    out.nodes_.clear();
    out.slopes_.clear();
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t left = slopes[i == 0 ? k - 1 : i - 1];
        if (left != slopes[i]) {
            out.nodes_.push_back(std::move(nodes[i]));
            out.slopes_.push_back(slopes[i]);
        }
    }
    if (out.nodes_.empty()) {
        // Affine over the whole period; slope is forced to be 1.
        if (slopes[0] != 0) throw malformed("affine periodic map must have slope 1");
        const Dyadic c = nodes[0].y - nodes[0].x;
        return translation(c);
    }
    return out;
}

inline PLMap1P PLMap1P::from_nodes(std::vector<Node> raw) {
    if (raw.empty()) throw malformed("a map needs at least one node");
    std::vector<std::pair<Node, std::size_t>> tagged;
    tagged.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const Dyadic m(raw[i].x.floor());
        tagged.push_back({Node{raw[i].x - m, raw[i].y - m}, i});
    }
    std::stable_sort(tagged.begin(), tagged.end(),
                     [](const auto& a, const auto& b) { return a.first.x < b.first.x; });
    std::vector<Node> nodes;
    std::vector<std::size_t> origin;
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        if (i > 0 && tagged[i].first.x == tagged[i - 1].first.x) {
            if (tagged[i].first.y == tagged[i - 1].first.y) continue;
            throw malformed("node " + std::to_string(tagged[i].second + 1) + " and node " +
                            std::to_string(tagged[i - 1].second + 1) +
                            " give two images to the same point modulo 1");
        }
        nodes.push_back(tagged[i].first);
        origin.push_back(tagged[i].second);
    }
    return canonical(std::move(nodes), &origin);
}

inline std::string PLMap1P::serialize() const {
    std::ostringstream os;
    os << "plmap1p v1 k=" << nodes_.size() << '\n';
    for (const Node& nd : nodes_) os << nd.x << ' ' << nd.y << '\n';
    return os.str();
}

inline PLMap1P PLMap1P::parse(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n' || c == ';') {
                lines.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        lines.push_back(cur);
    }
    std::size_t li = 0;
    const auto skip_blank = [&] {
        while (li < lines.size() && detail::trim(lines[li]).empty()) ++li;
    };
    skip_blank();
    if (li == lines.size()) throw malformed("empty plmap1p input");
    const std::string_view header = detail::trim(lines[li]);
    const std::string_view prefix = "plmap1p v1 k=";
    if (!header.starts_with(prefix)) throw malformed("line " + std::to_string(li + 1) + ": expected header 'plmap1p v1 k=<count>'");
    bigint k;
    if (!detail::parse_bigint(header.substr(prefix.size()), k) || k < 1 || k > 10'000'000)
        throw malformed("line " + std::to_string(li + 1) + ": bad node count");
    ++li;
    std::vector<Node> nodes;
    for (; li < lines.size(); ++li) {
        const std::string_view line = detail::trim(lines[li]);
        if (line.empty()) continue;
        if (nodes.size() == static_cast<std::size_t>(k))
            throw malformed("line " + std::to_string(li + 1) + ": more nodes than announced");
        const auto sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos) throw malformed("line " + std::to_string(li + 1) + ": expected '<x> <y>'");
        try {
            nodes.push_back(Node{Dyadic::parse(line.substr(0, sp)), Dyadic::parse(line.substr(sp + 1))});
        } catch (const malformed& e) {
            throw malformed("line " + std::to_string(li + 1) + ": " + e.what());
        }
    }
    if (nodes.size() != static_cast<std::size_t>(k)) throw malformed("fewer nodes than announced");
    return from_nodes(std::move(nodes));
}

inline std::ostream& operator<<(std::ostream& os, const PLMap1P& f) { return os << f.serialize(); }

inline Dyadic evaluate(const PLMap1P& f, const Dyadic& x) { return f(x); }

inline PLMap1P invert(const PLMap1P& f) {
    std::vector<Node> swapped;
    swapped.reserve(f.size());
    for (const Node& nd : f.nodes()) swapped.push_back(Node{nd.y, nd.x});
    return PLMap1P::from_nodes(std::move(swapped));
}

/// x -> (x.f).g
inline PLMap1P compose(const PLMap1P& f, const PLMap1P& g) {
    if (f.is_identity()) return g;
    if (g.is_identity()) return f;
    const PLMap1P finv = invert(f);
    std::vector<Dyadic> xs;
    xs.reserve(f.size() + g.size());
    for (const Node& nd : f.nodes()) xs.push_back(nd.x);
    for (const Node& nd : g.nodes()) xs.push_back(frac(finv(nd.x)));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Node> nodes;
    nodes.reserve(xs.size());
    for (Dyadic& x : xs) {
        Dyadic y = g(f(x));
        nodes.push_back(Node{std::move(x), std::move(y)});
    }
    return PLMap1P::from_nodes(std::move(nodes));
}

/// Left-to-right product: product({a, b, c}) = x -> ((x.a).b).c
inline PLMap1P product(std::initializer_list<PLMap1P> factors) {
    PLMap1P out;
    for (const PLMap1P& f : factors) out = compose(out, f);
    return out;
}

inline PLMap1P product(std::span<const PLMap1P> factors) {
    PLMap1P out;
    for (const PLMap1P& f : factors) out = compose(out, f);
    return out;
}

/// [f, g] = f^-1 g^-1 f g
inline PLMap1P commutator(const PLMap1P& f, const PLMap1P& g) {
    return product({invert(f), invert(g), f, g});
}

/// f^k for any integer k.
inline PLMap1P power(const PLMap1P& f, std::int64_t k) {
    const PLMap1P base = k < 0 ? invert(f) : f;
    PLMap1P out;
    for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) out = compose(out, base);
    return out;
}

inline std::pair<std::int64_t, std::int64_t> slopes_at(const PLMap1P& f, const Dyadic& x) { return f.slopes_at(x); }

/// Max over the line of |x.f - x|. The displacement is PL and periodic, so
/// the maximum sits at a node.
inline Dyadic max_displacement(const PLMap1P& f) {
    Dyadic best;
    for (const Node& nd : f.nodes()) best = std::max(best, abs(nd.y - nd.x));
    return best;
}

/// x.f = x for some real x. The displacement is continuous, so a zero
/// exists iff its node values take both signs (or vanish).
inline bool has_fixed_point(const PLMap1P& f) {
    bool le = false, ge = false;
    for (const Node& nd : f.nodes()) {
        const Dyadic d = nd.y - nd.x;
        le = le || d.sign() <= 0;
        ge = ge || d.sign() >= 0;
    }
    return le && ge;
}

/// Points of [0, 1) where the one-sided slopes differ.
inline std::vector<Dyadic> breakpoints(const PLMap1P& f) {
    std::vector<Dyadic> out;
    if (f.is_translation()) return out;
    for (const Node& nd : f.nodes()) out.push_back(nd.x);
    return out;
}

} // namespace plgroup
