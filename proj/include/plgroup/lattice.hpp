#pragma once

// Integer lattices spanned by rows, reduced to Hermite normal form by
// unimodular row operations. H = U * A is kept together with U, so
//   membership  v = y * H  is solved by forward substitution on pivots,
//   coefficients over the original rows are y * U,
//   rows of U paired with zero rows of H span the integer relations.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plgroup/dyadic.hpp"
#include "plgroup/error.hpp"

namespace plgroup {

using IntMatrix = std::vector<std::vector<bigint>>;

namespace detail {

inline bigint floor_div(const bigint& a, const bigint& b) {
    bigint q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

} // namespace detail

class LatticeBasis {
public:
    LatticeBasis() = default;

    /// Rows of `generators` span the lattice inside Z^dim.
    LatticeBasis(IntMatrix generators, std::size_t dim) : gens_(std::move(generators)), dim_(dim) {
        for (const auto& row : gens_)
            if (row.size() != dim_) throw malformed("lattice generator has the wrong dimension");
        reduce();
    }

    static LatticeBasis from_int64(const std::vector<std::vector<std::int64_t>>& rows, std::size_t dim) {
        IntMatrix m;
        for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
        return LatticeBasis(std::move(m), dim);
    }

    const IntMatrix& generators() const noexcept { return gens_; }
    const IntMatrix& hermite() const noexcept { return hnf_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t rank() const noexcept { return pivots_.size(); }

    /// Integer c with c * generators = v, or nullopt when v is not in the lattice.
    std::optional<std::vector<bigint>> solve(const std::vector<bigint>& v) const {
        if (v.size() != dim_) throw malformed("vector has the wrong dimension");
        std::vector<bigint> residual = v;
        std::vector<bigint> y(gens_.size(), 0);
        for (std::size_t r = 0; r < pivots_.size(); ++r) {
            const std::size_t p = pivots_[r];
            if (residual[p] % hnf_[r][p] != 0) return std::nullopt;
            y[r] = residual[p] / hnf_[r][p];
            if (y[r] != 0)
                for (std::size_t j = p; j < dim_; ++j) residual[j] -= y[r] * hnf_[r][j];
        }
        for (const bigint& x : residual)
            if (x != 0) return std::nullopt;
        std::vector<bigint> c(gens_.size(), 0);
        for (std::size_t r = 0; r < gens_.size(); ++r)
            if (y[r] != 0)
                for (std::size_t j = 0; j < gens_.size(); ++j) c[j] += y[r] * unimod_[r][j];
        return c;
    }

    bool contains(const std::vector<bigint>& v) const { return solve(v).has_value(); }

    /// Index in Z^dim: product of pivots at full rank, nullopt (infinite) otherwise.
    std::optional<bigint> index() const {
        if (rank() != dim_) return std::nullopt;
        bigint d = 1;
        for (std::size_t r = 0; r < pivots_.size(); ++r) d *= hnf_[r][pivots_[r]];
        return d;
    }

    /// Basis of the integer relations {c : c * generators = 0}.
    IntMatrix relations() const {
        IntMatrix out;
        for (std::size_t r = pivots_.size(); r < gens_.size(); ++r) out.push_back(unimod_[r]);
        return out;
    }

    std::string report() const {
        std::ostringstream os;
        os << "hermite " << hnf_.size() << "x" << dim_ << " rank=" << rank() << '\n';
        for (const auto& row : hnf_) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
            os << '\n';
        }
        const auto idx = index();
        os << "index " << (idx ? idx->str() : std::string("infinite")) << '\n';
        return os.str();
    }

private:
    void swap_rows(std::size_t a, std::size_t b) {
        std::swap(hnf_[a], hnf_[b]);
        std::swap(unimod_[a], unimod_[b]);
    }
    // row[a] -= q * row[b]
    void sub_row(std::size_t a, std::size_t b, const bigint& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < dim_; ++j) hnf_[a][j] -= q * hnf_[b][j];
        for (std::size_t j = 0; j < unimod_[a].size(); ++j) unimod_[a][j] -= q * unimod_[b][j];
    }
    void negate_row(std::size_t a) {
        for (auto& x : hnf_[a]) x = -x;
        for (auto& x : unimod_[a]) x = -x;
    }

    void reduce() {
        const std::size_t m = gens_.size();
        hnf_ = gens_;
        unimod_.assign(m, std::vector<bigint>(m, 0));
        for (std::size_t i = 0; i < m; ++i) unimod_[i][i] = 1;
        std::size_t r = 0;
        for (std::size_t col = 0; col < dim_ && r < m; ++col) {
            // Euclid on column col over rows r..m-1.
            for (;;) {
                std::size_t best = m;
                for (std::size_t i = r; i < m; ++i)
                    if (hnf_[i][col] != 0 &&
                        (best == m || boost::multiprecision::abs(hnf_[i][col]) < boost::multiprecision::abs(hnf_[best][col])))
                        best = i;
                if (best == m) break;
                swap_rows(r, best);
                bool done = true;
                for (std::size_t i = r + 1; i < m; ++i) {
                    if (hnf_[i][col] == 0) continue;
                    sub_row(i, r, hnf_[i][col] / hnf_[r][col]);
                    if (hnf_[i][col] != 0) done = false;
                }
                if (done) break;
            }
            if (hnf_[r][col] == 0) continue;
            if (hnf_[r][col] < 0) negate_row(r);
            for (std::size_t i = 0; i < r; ++i) sub_row(i, r, detail::floor_div(hnf_[i][col], hnf_[r][col]));
            pivots_.push_back(col);
            ++r;
        }
    }

    IntMatrix gens_;
    std::size_t dim_ = 0;
    IntMatrix hnf_;
    IntMatrix unimod_;
    std::vector<std::size_t> pivots_;
};

} // namespace plgroup
