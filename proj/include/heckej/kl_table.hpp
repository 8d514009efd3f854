#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "heckej/ball.hpp"
#include "heckej/error.hpp"
#include "heckej/laurent.hpp"
#include "heckej/numbers.hpp"
#include "heckej/weyl.hpp"

namespace heckej {

/// Dense polynomial in q, lowest degree first, no trailing zeros.
using QPoly = std::vector<BigInt>;

namespace detail {

inline void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

/// acc += c * q^shift * p
inline void add_shifted(QPoly& acc, const QPoly& p, int shift, const BigInt& c) {
    if (p.empty() || c == 0) return;
    std::size_t need = p.size() + static_cast<std::size_t>(shift);
    if (acc.size() < need) acc.resize(need);
    auto off = static_cast<std::size_t>(shift);
    if (c == 1) {
        for (std::size_t i = 0; i < p.size(); ++i) acc[i + off] += p[i];
    } else if (c == -1) {
        for (std::size_t i = 0; i < p.size(); ++i) acc[i + off] -= p[i];
    } else {
        for (std::size_t i = 0; i < p.size(); ++i) acc[i + off] += c * p[i];
    }
}

struct QPolyHash {
    std::size_t operator()(const QPoly& p) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ull ^ p.size();
        for (const auto& c : p) {
            auto low = static_cast<std::uint64_t>(c.convert_to<long long>());
            h = (h ^ low) * 0x100000001b3ull;
        }
        return h;
    }
};

}  // namespace detail

/// Kazhdan-Lusztig polynomials P_{y,w} for all y, w in a ball of the Coxeter
/// part, computed by the descent recursion
///
///   P_{y,w} = q^{1-c} P_{sy,v} + q^c P_{y,v} - sum_z mu(z,v) q^{(l(w)-l(z))/2} P_{y,z}
///
/// with s the first letter of w, v = sw, c = [sy < y], and z running over
/// z < v with sz < z. The recursion gives zero for y not below w, so no
/// Bruhat test is needed. Distinct polynomials are interned: entries are
/// 32-bit ids into a pool (id 0 is zero, id 1 is one).
///
/// Built once; read-only afterwards.
class KLTable {
public:
    using PolyId = std::uint32_t;
    struct MuEdge {
        std::uint32_t z;
        BigInt mu;
    };

    KLTable(GroupHandle group, int radius) : ball_(std::make_shared<const Ball>(std::move(group), radius)) {
        init_storage();
        // column w reads mu-edges of sw, which has a smaller index
        for (std::uint32_t w = 1; w < ball_->size(); ++w) {
            compute_column(w);
            compute_mu(w);
        }
    }

    /// Rebuilds a table from stored entries (y < w, nonzero P). Used by the
    /// cache loader; callers are expected to have checked the descriptor.
    KLTable(GroupHandle group, int radius, const std::vector<std::tuple<std::uint32_t, std::uint32_t, QPoly>>& entries)
        : ball_(std::make_shared<const Ball>(std::move(group), radius)) {
        init_storage();
        for (const auto& [y, w, p] : entries) {
            if (w >= ball_->size() || y >= ball_->count_below(ball_->length(w)))
                throw ParseError("KL cache entry out of range");
            cell(y, w) = intern(p);
        }
        for (std::uint32_t w = 0; w < ball_->size(); ++w) compute_mu(w);
    }

    const Ball& ball() const { return *ball_; }
    const std::shared_ptr<const Ball>& ball_ptr() const { return ball_; }
    const GroupHandle& group() const { return ball_->group(); }
    int radius() const { return ball_->radius(); }

    PolyId id(std::uint32_t y, std::uint32_t w) const {
        if (y == w) return 1;
        if (ball_->length(y) >= ball_->length(w)) return 0;
        return storage_[offset_[w] + y];
    }
    const QPoly& poly(std::uint32_t y, std::uint32_t w) const { return pool_[id(y, w)]; }
    const QPoly& pool_entry(PolyId id) const { return pool_[id]; }
    std::size_t pool_size() const { return pool_.size(); }

    /// z < w with mu(z, w) != 0, increasing z.
    const std::vector<MuEdge>& mu_edges(std::uint32_t w) const { return mu_[w]; }

    /// P_{y,w} as a Laurent polynomial in v (even exponents, q = v^2).
    /// Elements of an extended group pair up only when their Omega parts agree.
    LaurentInt polynomial(const GroupElement& y, const GroupElement& w) const {
        auto yi = ball_->index_of(y);
        auto wi = ball_->index_of(w);
        if (y.omega != w.omega) return {};
        return to_laurent(poly(yi, wi));
    }

    static LaurentInt to_laurent(const QPoly& p) {
        std::vector<LaurentInt::term_type> terms;
        for (std::size_t k = 0; k < p.size(); ++k)
            if (p[k] != 0) terms.emplace_back(2 * static_cast<int>(k), p[k]);
        return LaurentInt::from_terms(std::move(terms));
    }

    /// Number of nonzero stored pairs with y < w.
    std::size_t nonzero_count() const {
        std::size_t n = 0;
        for (auto id : storage_) n += id != 0;
        return n;
    }

private:
    void init_storage() {
        pool_.push_back({});
        pool_.push_back({BigInt(1)});
        pool_index_.emplace(pool_[0], 0);
        pool_index_.emplace(pool_[1], 1);
        std::size_t n = ball_->size();
        offset_.resize(n);
        std::size_t total = 0;
        for (std::uint32_t w = 0; w < n; ++w) {
            offset_[w] = total;
            total += ball_->count_below(ball_->length(w));
        }
        storage_.assign(total, 0);
        mu_.resize(n);
    }

    PolyId& cell(std::uint32_t y, std::uint32_t w) { return storage_[offset_[w] + y]; }

    PolyId intern(QPoly p) {
        detail::trim(p);
        auto it = pool_index_.find(p);
        if (it != pool_index_.end()) return it->second;
        auto id = static_cast<PolyId>(pool_.size());
        pool_.push_back(p);
        pool_index_.emplace(std::move(p), id);
        return id;
    }

    void compute_column(std::uint32_t w) {
        const Ball& b = *ball_;
        int s = b.word(w).front();
        std::uint32_t v = b.left(w, s);
        int lw = b.length(w);
        // mu-edges of v that survive the condition sz < z
        std::vector<const MuEdge*> edges;
        for (const auto& e : mu_[v])
            if (b.is_left_descent(e.z, s)) edges.push_back(&e);
        std::uint32_t below = b.count_below(lw);
        for (std::uint32_t y = 0; y < below; ++y) {
            bool c = b.is_left_descent(y, s);
            std::uint32_t sy = b.left(y, s);
            PolyId first = id(sy, v);
            PolyId second = id(y, v);
            bool any_sum = false;
            for (const auto* e : edges) {
                if (id(y, e->z) != 0) {
                    any_sum = true;
                    break;
                }
            }
            if (!any_sum) {
                // common case: a single shifted term or nothing
                if (first == 0 && second == 0) continue;
                if (first == 0 || second == 0) {
                    int shift = first != 0 ? (c ? 0 : 1) : (c ? 1 : 0);
                    PolyId src = first != 0 ? first : second;
                    if (shift == 0) {
                        cell(y, w) = src;
                        continue;
                    }
                }
            }
            QPoly acc;
            detail::add_shifted(acc, pool_[first], c ? 0 : 1, BigInt(1));
            detail::add_shifted(acc, pool_[second], c ? 1 : 0, BigInt(1));
            for (const auto* e : edges) {
                PolyId pz = id(y, e->z);
                if (pz == 0) continue;
                int shift = (lw - b.length(e->z)) / 2;
                detail::add_shifted(acc, pool_[pz], shift, BigInt(-e->mu));
            }
            cell(y, w) = intern(std::move(acc));
        }
    }

    void compute_mu(std::uint32_t w) {
        const Ball& b = *ball_;
        int lw = b.length(w);
        std::uint32_t below = b.count_below(lw);
        for (std::uint32_t z = 0; z < below; ++z) {
            int gap = lw - b.length(z);
            if (gap % 2 == 0) continue;
            const QPoly& p = poly(z, w);
            auto k = static_cast<std::size_t>((gap - 1) / 2);
            if (k < p.size() && p[k] != 0) mu_[w].push_back({z, p[k]});
        }
    }

    std::shared_ptr<const Ball> ball_;
    std::vector<QPoly> pool_;
    std::unordered_map<QPoly, PolyId, detail::QPolyHash> pool_index_;
    std::vector<std::size_t> offset_;
    std::vector<PolyId> storage_;
    std::vector<std::vector<MuEdge>> mu_;
};

/// P_{y,w} from a table; RadiusExceeded when w lies outside it.
inline LaurentInt kl_polynomial(const GroupElement& y, const GroupElement& w, const KLTable& table) {
    if (w.length() > table.radius())
        throw RadiusExceeded("kl_polynomial: l(w) = " + std::to_string(w.length()) + " exceeds table radius " +
                             std::to_string(table.radius()));
    if (y.length() > w.length()) {
        table.group()->check(y);
        return {};
    }
    return table.polynomial(y, w);
}

}  // namespace heckej
