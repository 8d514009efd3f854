#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "heckej/error.hpp"
#include "heckej/hecke.hpp"
#include "heckej/kl_table.hpp"
#include "heckej/laurent.hpp"
#include "heckej/linalg.hpp"
#include "heckej/quad_ext.hpp"
#include "heckej/structure.hpp"
#include "heckej/weyl.hpp"

namespace heckej {

/// Scan radius at which a(z) is taken as exact: l(z) + 2 l(w0) + 2.
inline int certification_bound(const GroupDescriptor& desc, int length) {
    return length + 2 * desc.finite_longest_length() + 2;
}

/// Lower bound for a(z) from all pairs with l(x), l(y) <= scan_radius.
struct AValue {
    GroupElement z;
    int value = 0;
    int scan_radius = 0;
    bool certified = false;
};

/// Integer combination of t_w, with the radius it was certified at.
struct JElement {
    std::map<GroupElement, BigInt> terms;
    int radius = 0;

    void add(const GroupElement& g, const BigInt& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.try_emplace(g, c);
        if (fresh) return;
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }

    /// Equality of the combinations; radii are metadata.
    bool same_terms(const JElement& o) const { return terms == o.terms; }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string out;
        for (const auto& [g, c] : terms) {
            if (!out.empty()) out += " + ";
            out += (c == 1 ? std::string() : heckej::to_string(c) + "*") + "t[" + format_element(g) + "]";
        }
        return out;
    }
};

/// Combination of t_w with Laurent coefficients (an element of J over A).
struct JTensorAElement {
    std::map<GroupElement, LaurentInt> terms;
    int radius = 0;

    void add(const GroupElement& g, const LaurentInt& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms.try_emplace(g, c);
        if (fresh) return;
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }

    bool same_terms(const JTensorAElement& o) const { return terms == o.terms; }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string out;
        for (const auto& [g, c] : terms) {
            if (!out.empty()) out += " + ";
            out += "(" + c.to_string() + ")*t[" + format_element(g) + "]";
        }
        return out;
    }
};

/// The a-function, the gamma constants and the ring J for one group, from a
/// single scan over all products C_x C_y with l(x), l(y) <= S.
///
/// The scan needs a KL table of radius 2S. a(z) is certified for
/// l(z) <= S - 2 l(w0) - 2; every gamma, J-product and phi value that needs an
/// uncertified a-value throws RadiusExceeded instead of guessing.
///
/// Structure constants are invariant under diagram automorphisms
/// (h_{sx,sy,sz} = h_{x,y,z}), so only one y per orbit is multiplied out and
/// each pole found is recorded for the whole orbit of z.
class AsymptoticContext {
public:
    AsymptoticContext(GroupHandle group, int scan_radius)
        : AsymptoticContext(std::make_shared<const KLTable>(std::move(group), 2 * checked(scan_radius)), scan_radius) {}

    AsymptoticContext(std::shared_ptr<const KLTable> kl, int scan_radius)
        : engine_(std::make_shared<ProductEngine>(std::move(kl))), scan_radius_(checked(scan_radius)) {
        if (engine_->kl().radius() < 2 * scan_radius_)
            throw RadiusExceeded("a-function scan at radius " + std::to_string(scan_radius_) +
                                 " needs a KL table of radius " + std::to_string(2 * scan_radius_));
        scan();
    }

    const ProductEngine& engine() const { return *engine_; }
    const Ball& ball() const { return engine_->ball(); }
    const Group& group() const { return *ball().group(); }
    int scan_radius() const { return scan_radius_; }

    /// Longest z whose a-value is certified by the scan.
    int certified_length() const {
        return scan_radius_ - 2 * group().descriptor().finite_longest_length() - 2;
    }

    AValue a_value(const GroupElement& z) const { return a_value(z, scan_radius_); }

    /// a(z) as seen by pairs with l(x), l(y) <= s, for s up to the context's
    /// scan radius. Nondecreasing in s.
    AValue a_value(const GroupElement& z, int s) const {
        if (s > scan_radius_)
            throw RadiusExceeded("scan radius " + std::to_string(s) + " exceeds the context's " + std::to_string(scan_radius_));
        if (s < z.length())
            throw Error("a_value: scan radius " + std::to_string(s) + " is below l(z) = " + std::to_string(z.length()));
        std::uint32_t zi = ball().index_of(z);
        AValue out;
        out.z = z;
        out.value = prefix_[static_cast<std::size_t>(s)][zi];
        out.scan_radius = s;
        out.certified = s >= certification_bound(group().descriptor(), z.length());
        return out;
    }

    LaurentInt h(const GroupElement& x, const GroupElement& y, const GroupElement& z, SignConvention sign) const {
        auto all = h_constants(x, y, sign, *engine_);
        auto it = all.find(z);
        return it == all.end() ? LaurentInt{} : it->second;
    }

    /// Constant term of v^{a(z)} h_{x,y,z}.
    BigInt gamma(const GroupElement& x, const GroupElement& y, const GroupElement& z, SignConvention sign) const {
        group().check(z);
        int a = certified_a(z);
        return constant_term_after_shift(h(x, y, z, sign), a);
    }

    JElement j_multiply(const JElement& a, const JElement& b, SignConvention sign) const {
        JElement out;
        out.radius = certified_length();
        for (const auto& [x, cx] : a.terms)
            for (const auto& [y, cy] : b.terms)
                for_each_gamma(x, y, sign, [&](const GroupElement& z, const BigInt& g) { out.add(z, g * cx * cy); });
        return out;
    }

    JTensorAElement multiply(const JTensorAElement& a, const JTensorAElement& b, SignConvention sign) const {
        JTensorAElement out;
        out.radius = std::min(a.radius, b.radius);
        for (const auto& [x, cx] : a.terms) {
            for (const auto& [y, cy] : b.terms) {
                LaurentInt c = cx * cy;
                for_each_gamma(x, y, sign, [&](const GroupElement& z, const BigInt& g) { out.add(z, c.scaled(g)); });
            }
        }
        return out;
    }

    /// Involutions d with l(d) <= radius and a(d) = l(d) - 2 deg P_{e,d}.
    std::vector<GroupElement> distinguished_involutions(int radius) const {
        if (radius > certified_length())
            throw RadiusExceeded("distinguished involutions up to length " + std::to_string(radius) +
                                 " need a(d) certified there; certified length is " + std::to_string(certified_length()));
        const Ball& b = ball();
        std::vector<GroupElement> out;
        for (std::uint32_t d = 0; d < b.count_below(radius + 1); ++d) {
            if (b.inverse(d) != d) continue;
            int deg = static_cast<int>(engine_->kl().poly(0, d).size()) - 1;
            if (prefix_[static_cast<std::size_t>(scan_radius_)][d] == b.length(d) - 2 * deg) out.push_back(b.element(d));
        }
        return out;
    }

    /// phi(C_x) = sum over distinguished d with l(x) + l(d) <= radius and over
    /// z with a(z) = a(d) of n_d h_{x,d,z} t_z.
    ///
    /// n_d = gamma_{d,d,d} is 1 for C' and (-1)^{l(d)} for the signed basis,
    /// where the unit of J is sum_d n_d t_d.
    JTensorAElement phi(const GroupElement& x, int radius, SignConvention sign) const {
        group().check(x);
        if (x.length() > radius) throw RadiusExceeded("phi: l(x) exceeds radius " + std::to_string(radius));
        JTensorAElement out;
        out.radius = radius;
        for (const auto& d : distinguished_involutions(radius - x.length())) {
            int ad = certified_a(d);
            bool flip = sign == SignConvention::Signed && d.length() % 2 == 1;
            for (const auto& [z, c] : h_constants(x, d, sign, *engine_))
                if (certified_a(z) == ad) out.add(z, flip ? -c : c);
        }
        return out;
    }

    /// phi of sum_w c_w C_w (C_w in the given convention).
    JTensorAElement phi(const std::map<GroupElement, LaurentInt>& combination, int radius, SignConvention sign) const {
        JTensorAElement out;
        out.radius = radius;
        for (const auto& [w, c] : combination)
            for (const auto& [z, cz] : phi(w, radius, sign).terms) out.add(z, cz * c);
        return out;
    }

    std::map<GroupElement, QuadExt> phi_specialized(const GroupElement& x, const Rational& q, int radius,
                                                     SignConvention sign) const {
        std::map<GroupElement, QuadExt> out;
        for (const auto& [z, c] : phi(x, radius, sign).terms) {
            QuadExt e = specialize(c, q);
            if (!e.is_zero()) out.emplace(z, e);
        }
        return out;
    }

    /// Rank over Q(q^{1/2}) of the specialized images of C_x, x in xs.
    std::size_t phi_rank(const std::vector<GroupElement>& xs, const Rational& q, int radius, SignConvention sign) const {
        std::vector<std::map<GroupElement, QuadExt>> images;
        std::map<GroupElement, std::size_t> column;
        for (const auto& x : xs) {
            images.push_back(phi_specialized(x, q, radius, sign));
            for (const auto& [z, e] : images.back()) column.emplace(z, 0);
        }
        std::size_t k = 0;
        for (auto& [z, c] : column) c = k++;
        std::vector<std::vector<QuadExt>> rows;
        for (const auto& img : images) {
            std::vector<QuadExt> row(column.size(), QuadExt(0, 0, q));
            for (const auto& [z, e] : img) row[column[z]] = e;
            rows.push_back(std::move(row));
        }
        return rank_over_sqrt_field(std::move(rows), q);
    }

private:
    struct GammaColumn {
        // rows[x] = (z, gamma_{x,y,z}) for x in the ball of length limit
        std::vector<std::vector<std::pair<std::uint32_t, BigInt>>> rows;
    };

    static int checked(int scan_radius) {
        if (scan_radius < 0) throw Error("negative scan radius");
        return scan_radius;
    }

    int certified_a(const GroupElement& z) const {
        if (z.length() > certified_length())
            throw RadiusExceeded("a(" + format_element(z) + ") is not certified at scan radius " +
                                 std::to_string(scan_radius_) + " (needs " +
                                 std::to_string(certification_bound(group().descriptor(), z.length())) + ")");
        return prefix_[static_cast<std::size_t>(scan_radius_)][ball().index_of(z)];
    }

    /// Calls f(z, gamma_{x,y,z}) for the nonzero gammas; Omega parts relabel
    /// as t_{x w} t_{y w'} = sum gamma_{x, w y w^{-1}, z} t_{z w w'}.
    template <class F>
    void for_each_gamma(const GroupElement& x, const GroupElement& y, SignConvention sign, F&& f) const {
        const Group& g = group();
        g.check(x);
        g.check(y);
        int limit = certified_length();
        if (x.length() + y.length() > limit)
            throw RadiusExceeded("t_x t_y with l(x) + l(y) = " + std::to_string(x.length() + y.length()) +
                                 " needs a-values beyond the certified length " + std::to_string(limit));
        std::vector<std::uint8_t> conj;
        for (auto s : y.word) conj.push_back(static_cast<std::uint8_t>(g.omega_apply(x.omega, s)));
        std::uint32_t yi = ball().index_of(g.element(conj));
        std::uint32_t xi = ball().index_of(g.element(x.word));
        int omega = g.omega_compose(x.omega, y.omega);
        const GammaColumn& col = column(yi, sign);
        for (const auto& [z, c] : col.rows[xi]) f(ball().element(z, omega), c);
    }

    const GammaColumn& column(std::uint32_t y, SignConvention sign) const {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(y, static_cast<int>(sign));
        auto it = columns_.find(key);
        if (it != columns_.end()) return *it->second;
        const Ball& b = ball();
        int xlen = certified_length() - b.length(y);
        std::vector<std::uint32_t> xs(b.count_below(xlen + 1));
        std::iota(xs.begin(), xs.end(), 0u);
        auto col = std::make_unique<GammaColumn>();
        col->rows.resize(xs.size());
        const auto& a = prefix_[static_cast<std::size_t>(scan_radius_)];
        engine_->for_each_product(y, xs, sign, [&](std::uint32_t x, const CRow& row) {
            for (const auto& [z, c] : row) {
                BigInt gz = constant_term_after_shift(c, a[z]);
                if (gz != 0) col->rows[x].emplace_back(z, std::move(gz));
            }
        });
        return *columns_.emplace(key, std::move(col)).first->second;
    }

    /// Diagram automorphisms of the Coxeter graph as index permutations of
    /// the ball.
    std::vector<std::vector<std::uint32_t>> automorphisms() const {
        const Ball& b = ball();
        const Group& g = group();
        int r = g.rank();
        std::vector<int> perm(static_cast<std::size_t>(r));
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::vector<std::uint32_t>> out;
        do {
            bool ok = true;
            for (int i = 0; i < r && ok; ++i)
                for (int j = 0; j < r && ok; ++j)
                    ok = g.cartan(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) == g.cartan(i, j);
            if (!ok) continue;
            std::vector<std::uint32_t> map(b.size());
            for (std::uint32_t w = 0; w < b.size(); ++w) {
                std::vector<std::uint8_t> word;
                for (auto s : b.word(w)) word.push_back(static_cast<std::uint8_t>(perm[s]));
                map[w] = b.find(g.normal_form(word));
            }
            out.push_back(std::move(map));
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }

    void scan() {
        const Ball& b = ball();
        const int S = scan_radius_;
        auto autos = automorphisms();
        // best[s][z]: deepest pole among pairs with max(l(x), l(y)) == s
        std::vector<std::vector<int>> best(static_cast<std::size_t>(S + 1), std::vector<int>(b.size(), 0));
        std::vector<std::uint32_t> xs(b.count_below(S + 1));
        std::iota(xs.begin(), xs.end(), 0u);
        for (std::uint32_t y = 0; y < b.count_below(S + 1); ++y) {
            bool representative = true;
            for (const auto& m : autos) representative = representative && m[y] >= y;
            if (!representative) continue;
            int ly = b.length(y);
            engine_->for_each_lowest_exponent(y, xs, SignConvention::Unsigned, [&](std::uint32_t x, std::uint32_t z, int e) {
                auto& level = best[static_cast<std::size_t>(std::max(ly, b.length(x)))];
                if (-e <= level[z]) return;
                for (const auto& m : autos) level[m[z]] = std::max(level[m[z]], -e);
            });
        }
        prefix_ = std::move(best);
        for (std::size_t s = 1; s < prefix_.size(); ++s)
            for (std::size_t z = 0; z < b.size(); ++z) prefix_[s][z] = std::max(prefix_[s][z], prefix_[s - 1][z]);
    }

    std::shared_ptr<ProductEngine> engine_;
    int scan_radius_;
    std::vector<std::vector<int>> prefix_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<std::uint32_t, int>, std::unique_ptr<GammaColumn>> columns_;
};

}  // namespace heckej
