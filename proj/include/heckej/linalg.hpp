#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "heckej/numbers.hpp"
#include "heckej/quad_ext.hpp"

namespace heckej {

/// Exact square root of a non-negative rational, if it has one.
inline std::optional<Rational> rational_sqrt(const Rational& x) {
    if (x < 0) return std::nullopt;
    BigInt n = boost::multiprecision::numerator(x);
    BigInt d = boost::multiprecision::denominator(x);
    BigInt rn = boost::multiprecision::sqrt(n);
    BigInt rd = boost::multiprecision::sqrt(d);
    if (rn * rn != n || rd * rd != d) return std::nullopt;
    return Rational(rn, rd);
}

/// Rank of a matrix whose entries are a0 + a1*v, read in the field Q(q^{1/2})
/// with v the positive square root of q.
///
/// When q is a rational square the entries are first evaluated at v = sqrt(q)
/// so the elimination runs over Q; otherwise Q[v]/(v^2 - q) is a field and
/// QuadExt::inverse never fails.
inline std::size_t rank_over_sqrt_field(std::vector<std::vector<QuadExt>> rows, const Rational& q) {
    if (auto root = rational_sqrt(q)) {
        for (auto& row : rows)
            for (auto& e : row) e = QuadExt(e.a0 + e.a1 * *root, 0, q);
    }
    std::size_t rank = 0;
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        QuadExt inv = rows[rank][c].inverse();
        for (std::size_t k = c; k < cols; ++k) rows[rank][k] *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c].is_zero()) continue;
            QuadExt f = rows[r][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace heckej
