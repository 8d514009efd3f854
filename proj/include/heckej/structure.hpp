#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "heckej/ball.hpp"
#include "heckej/error.hpp"
#include "heckej/kl_table.hpp"
#include "heckej/laurent.hpp"
#include "heckej/numbers.hpp"

namespace heckej {

/// Which Kazhdan-Lusztig basis structure constants refer to.
///
/// Signed is C_w = sum (-1)^{l(w)-l(y)} v^{l(w)-l(y)} P_{y,w}(v^{-2}) ~T_y;
/// unsigned is C'_w = sum v^{l(y)-l(w)} P_{y,w}(v^2) ~T_y. The ring
/// automorphism v -> -v^{-1}, ~T_w -> ~T_w sends C'_w to C_w, so both obey the
/// same W-graph rule and differ only in the descent eigenvalue
/// (v + v^{-1} for C', -(v + v^{-1}) for C).
enum class SignConvention : std::uint8_t { Signed, Unsigned };

inline const char* to_string(SignConvention s) { return s == SignConvention::Signed ? "signed" : "unsigned"; }

/// Coefficient vector over the C basis: (z index, Laurent coefficient),
/// increasing z.
using CRow = std::vector<std::pair<std::uint32_t, LaurentInt>>;

namespace detail {

struct Overflow {};

inline void mul_add(std::int64_t& acc, std::int64_t a, std::int64_t b) {
    std::int64_t p;
    if (__builtin_mul_overflow(a, b, &p) || __builtin_add_overflow(acc, p, &acc)) throw Overflow{};
}

inline void mul_add(BigInt& acc, const BigInt& a, const BigInt& b) { acc += a * b; }

inline bool is_zero(std::int64_t c) { return c == 0; }
inline bool is_zero(const BigInt& c) { return c == 0; }

template <class C>
struct FlatTerm {
    std::uint32_t z;
    std::int32_t e;
    C c;
};

template <class C>
using FlatRow = std::vector<FlatTerm<C>>;

template <class C>
C from_big(const BigInt& b) {
    if constexpr (std::is_same_v<C, BigInt>) {
        return b;
    } else {
        if (b > std::numeric_limits<std::int64_t>::max() || b < std::numeric_limits<std::int64_t>::min())
            throw Overflow{};
        return static_cast<std::int64_t>(b);
    }
}

/// Dense accumulator over (z, exponent) with a list of touched rows.
template <class C>
class Accumulator {
public:
    Accumulator(std::size_t rows, int max_abs_exponent)
        : width_(2 * max_abs_exponent + 1), offset_(max_abs_exponent), cells_(rows * static_cast<std::size_t>(width_)),
          touched_(rows, 0) {}

    void add(std::uint32_t z, int e, const C& a, const C& b) {
        if (!touched_[z]) {
            touched_[z] = 1;
            rows_.push_back(z);
        }
        mul_add(cells_[static_cast<std::size_t>(z) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(e + offset_)], a, b);
    }

    /// Drains into a sorted flat row and resets.
    FlatRow<C> take() {
        std::sort(rows_.begin(), rows_.end());
        FlatRow<C> out;
        for (auto z : rows_) {
            C* row = &cells_[static_cast<std::size_t>(z) * static_cast<std::size_t>(width_)];
            for (int k = 0; k < width_; ++k) {
                if (!is_zero(row[k])) {
                    out.push_back({z, k - offset_, std::move(row[k])});
                    row[k] = C(0);
                }
            }
            touched_[z] = 0;
        }
        rows_.clear();
        return out;
    }

private:
    int width_;
    int offset_;
    std::vector<C> cells_;
    std::vector<char> touched_;
    std::vector<std::uint32_t> rows_;
};

}  // namespace detail

/// Structure constants of the Kazhdan-Lusztig bases by left multiplication
/// on the W-graph:
///
///   C_s C_w = eps (v + v^{-1}) C_w                       if sw < w
///   C_s C_w = C_{sw} + sum_{z < w, sz < z} mu(z,w) C_z   if sw > w
///
/// and C_x = C_s C_{sx} - sum mu(z, sx) C_z for the first letter s of x.
/// Rows C_x C_y are computed for a fixed y over a set of x closed under this
/// recursion. Arithmetic runs in checked 64-bit integers and is redone in
/// arbitrary precision if anything overflows.
class ProductEngine {
public:
    explicit ProductEngine(std::shared_ptr<const KLTable> kl) : kl_(std::move(kl)) {
        const Ball& b = kl_->ball();
        int r = b.group()->rank();
        edges_.resize(b.size() * static_cast<std::size_t>(r));
        for (std::uint32_t w = 0; w < b.size(); ++w) {
            for (int s = 0; s < r; ++s) {
                if (b.is_left_descent(w, s)) continue;
                auto& list = edges_[w * static_cast<std::size_t>(r) + static_cast<std::size_t>(s)];
                for (const auto& e : kl_->mu_edges(w))
                    if (b.is_left_descent(e.z, s)) list.push_back({e.z, e.mu});
            }
        }
        edges64_.resize(edges_.size());
        small_mu_ = true;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            for (const auto& e : edges_[i]) {
                if (e.mu > std::numeric_limits<std::int32_t>::max() || e.mu < std::numeric_limits<std::int32_t>::min()) {
                    small_mu_ = false;
                    break;
                }
                edges64_[i].push_back({e.z, static_cast<std::int64_t>(e.mu)});
            }
        }
    }

    const KLTable& kl() const { return *kl_; }
    const Ball& ball() const { return kl_->ball(); }
    const std::shared_ptr<const KLTable>& kl_ptr() const { return kl_; }

    /// Sorted closure of `xs` under x -> sx and x -> z for mu-edges used by
    /// the recursion; always contains the identity.
    std::vector<std::uint32_t> closure(std::span<const std::uint32_t> xs) const {
        const Ball& b = ball();
        std::vector<char> seen(b.size(), 0);
        std::vector<std::uint32_t> stack(xs.begin(), xs.end());
        stack.push_back(0);
        std::vector<std::uint32_t> out;
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            if (seen[x]) continue;
            seen[x] = 1;
            out.push_back(x);
            if (x == 0) continue;
            int s = b.word(x).front();
            auto xp = b.left(x, s);
            stack.push_back(xp);
            for (const auto& e : edge_list(xp, s)) stack.push_back(e.z);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Calls visit(x, row) with row = C_x C_y for every x in `xs_closed`
    /// (which must be sorted and closed, see `closure`). Rows are expressed
    /// over z indices of the ball. Requires l(x) + l(y) <= radius.
    void for_each_product(std::uint32_t y, std::span<const std::uint32_t> xs_closed, SignConvention sign,
                          const std::function<void(std::uint32_t, const CRow&)>& visit) const {
        check_radius(y, xs_closed);
        if (small_mu_) {
            std::vector<detail::FlatRow<std::int64_t>> rows;
            bool ok = true;
            try {
                rows = run<std::int64_t>(y, xs_closed, sign, [](std::uint32_t, const auto&) {});
            } catch (const detail::Overflow&) {
                ok = false;
            }
            if (ok) {
                for (std::size_t i = 0; i < xs_closed.size(); ++i) visit(xs_closed[i], to_crow(rows[i]));
                return;
            }
        }
        auto rows = run<BigInt>(y, xs_closed, sign, [](std::uint32_t, const auto&) {});
        for (std::size_t i = 0; i < xs_closed.size(); ++i) visit(xs_closed[i], to_crow(rows[i]));
    }

    /// Streams (x, z, lowest exponent of the C_z coefficient of C_x C_y) for
    /// every x in `xs_closed`. Triples may be repeated if the 64-bit pass has
    /// to be redone, so the consumer must be idempotent (e.g. a running max).
    void for_each_lowest_exponent(std::uint32_t y, std::span<const std::uint32_t> xs_closed, SignConvention sign,
                                  const std::function<void(std::uint32_t, std::uint32_t, int)>& visit) const {
        check_radius(y, xs_closed);
        auto stream = [&](std::uint32_t x, const auto& flat) {
            std::uint32_t last = Ball::npos;
            for (const auto& t : flat) {
                if (t.z != last) visit(x, t.z, t.e);  // terms are sorted by (z, e)
                last = t.z;
            }
        };
        if (small_mu_) {
            try {
                run<std::int64_t>(y, xs_closed, sign, stream);
                return;
            } catch (const detail::Overflow&) {
            }
        }
        run<BigInt>(y, xs_closed, sign, stream);
    }

    /// C_x C_y as a C-row.
    CRow product(std::uint32_t x, std::uint32_t y, SignConvention sign) const {
        std::array<std::uint32_t, 1> one{x};
        auto xs = closure(one);
        CRow result;
        for_each_product(y, xs, sign, [&](std::uint32_t xi, const CRow& row) {
            if (xi == x) result = row;
        });
        return result;
    }

    /// Left multiplication of a C-row by C_s (used by tests and the Hecke
    /// layer to cross-check the rule itself).
    CRow left_multiply_generator(int s, const CRow& row, SignConvention sign) const {
        const Ball& b = ball();
        std::map<std::uint32_t, LaurentInt> acc;
        LaurentInt eig = sign == SignConvention::Unsigned ? v_plus_vinv() : -v_plus_vinv();
        for (const auto& [w, c] : row) {
            if (b.is_left_descent(w, s)) {
                acc[w] += eig * c;
                continue;
            }
            auto sw = b.left(w, s);
            if (sw == Ball::npos) throw RadiusExceeded("C_s C_w leaves the table");
            acc[sw] += c;
            for (const auto& e : edge_list(w, s)) acc[e.z] += c.scaled(e.mu);
        }
        CRow out;
        for (auto& [z, c] : acc)
            if (!c.is_zero()) out.emplace_back(z, std::move(c));
        return out;
    }

private:
    struct Edge {
        std::uint32_t z;
        BigInt mu;
    };
    struct Edge64 {
        std::uint32_t z;
        std::int64_t mu;
    };

    const std::vector<Edge>& edge_list(std::uint32_t w, int s) const {
        return edges_[w * static_cast<std::size_t>(ball().group()->rank()) + static_cast<std::size_t>(s)];
    }

    template <class C>
    const auto& typed_edges(std::uint32_t w, int s) const {
        std::size_t i = w * static_cast<std::size_t>(ball().group()->rank()) + static_cast<std::size_t>(s);
        if constexpr (std::is_same_v<C, BigInt>) return edges_[i];
        else return edges64_[i];
    }

    void check_radius(std::uint32_t y, std::span<const std::uint32_t> xs) const {
        const Ball& b = ball();
        int maxx = 0;
        for (auto x : xs) maxx = std::max(maxx, b.length(x));
        if (maxx + b.length(y) > kl_->radius())
            throw RadiusExceeded("product of lengths " + std::to_string(maxx) + " + " + std::to_string(b.length(y)) +
                                 " exceeds KL table radius " + std::to_string(kl_->radius()));
    }

    template <class C, class F>
    std::vector<detail::FlatRow<C>> run(std::uint32_t y, std::span<const std::uint32_t> xs, SignConvention sign,
                                        F&& on_row) const {
        const Ball& b = ball();
        int max_len = 0;
        for (auto x : xs) max_len = std::max(max_len, b.length(x));
        detail::Accumulator<C> acc(b.size(), max_len + 1);
        std::vector<std::uint32_t> slot(b.size(), Ball::npos);
        std::vector<detail::FlatRow<C>> rows(xs.size());
        const C one(1);
        const C eps(sign == SignConvention::Unsigned ? 1 : -1);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::uint32_t x = xs[i];
            slot[x] = static_cast<std::uint32_t>(i);
            if (x == 0) {
                rows[i] = {{y, 0, C(1)}};
            } else {
                int s = b.word(x).front();
                std::uint32_t xp = b.left(x, s);
                for (const auto& t : rows[slot[xp]]) {
                    if (b.is_left_descent(t.z, s)) {
                        acc.add(t.z, t.e + 1, eps, t.c);
                        acc.add(t.z, t.e - 1, eps, t.c);
                        continue;
                    }
                    acc.add(b.left(t.z, s), t.e, one, t.c);
                    for (const auto& e : typed_edges<C>(t.z, s)) acc.add(e.z, t.e, C(e.mu), t.c);
                }
                for (const auto& e : typed_edges<C>(xp, s)) {
                    C neg = C(-e.mu);
                    for (const auto& t : rows[slot[e.z]]) acc.add(t.z, t.e, neg, t.c);
                }
                rows[i] = acc.take();
            }
            on_row(x, rows[i]);
        }
        return rows;
    }

    template <class C>
    static CRow to_crow(const detail::FlatRow<C>& flat) {
        CRow out;
        std::size_t i = 0;
        while (i < flat.size()) {
            std::size_t j = i;
            std::vector<LaurentInt::term_type> terms;
            while (j < flat.size() && flat[j].z == flat[i].z) {
                terms.emplace_back(flat[j].e, BigInt(flat[j].c));
                ++j;
            }
            out.emplace_back(flat[i].z, LaurentInt::from_terms(std::move(terms)));
            i = j;
        }
        return out;
    }

    std::shared_ptr<const KLTable> kl_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<std::vector<Edge64>> edges64_;
    bool small_mu_ = true;
};

}  // namespace heckej
