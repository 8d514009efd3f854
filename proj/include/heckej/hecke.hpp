#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>

#include "heckej/error.hpp"
#include "heckej/kl_table.hpp"
#include "heckej/laurent.hpp"
#include "heckej/structure.hpp"
#include "heckej/weyl.hpp"

namespace heckej {

enum class Basis : std::uint8_t { T, Ttilde, Csigned, Cprime };

inline const char* to_string(Basis b) {
    switch (b) {
        case Basis::T: return "T";
        case Basis::Ttilde: return "Ttilde";
        case Basis::Csigned: return "C";
        case Basis::Cprime: return "Cprime";
    }
    return "?";
}

inline Basis parse_basis(std::string_view s) {
    if (s == "T") return Basis::T;
    if (s == "Ttilde" || s == "~T") return Basis::Ttilde;
    if (s == "C" || s == "Csigned") return Basis::Csigned;
    if (s == "Cprime" || s == "C'") return Basis::Cprime;
    throw ParseError("unknown basis '" + std::string(s) + "' (expected T, Ttilde, C, Cprime)");
}

inline Basis c_basis(SignConvention s) { return s == SignConvention::Signed ? Basis::Csigned : Basis::Cprime; }

/// Finite sum of basis symbols with Laurent coefficients. Zero coefficients
/// are never stored.
struct HeckeElement {
    Basis basis = Basis::Ttilde;
    std::map<GroupElement, LaurentInt> terms;

    HeckeElement() = default;
    explicit HeckeElement(Basis b) : basis(b) {}

    void add(const GroupElement& g, const LaurentInt& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms.try_emplace(g, c);
        if (fresh) return;
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }

    LaurentInt coeff(const GroupElement& g) const {
        auto it = terms.find(g);
        return it == terms.end() ? LaurentInt{} : it->second;
    }

    bool is_zero() const { return terms.empty(); }

    friend bool operator==(const HeckeElement&, const HeckeElement&) = default;

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string out;
        const char* sym = heckej::to_string(basis);
        for (const auto& [g, c] : terms) {
            if (!out.empty()) out += " + ";
            out += "(" + c.to_string() + ")*" + sym + "[" + format_element(g) + "]";
        }
        return out;
    }
};

/// The Iwahori-Hecke algebra of a group over A = Z[v, v^{-1}].
///
/// Products are formed in the ~T basis from
///   ~T_w ~T_s = ~T_{ws}                          if l(ws) > l(w)
///   ~T_w ~T_s = ~T_{ws} + (v - v^{-1}) ~T_w      otherwise
/// and ~T_w ~T_omega = ~T_{w omega}, which is T_s^2 = (q-1) T_s + q with
/// T_w = v^{l(w)} ~T_w. The C bases need a KL table covering every element
/// involved; the T bases do not.
class HeckeAlgebra {
public:
    explicit HeckeAlgebra(GroupHandle group, std::shared_ptr<const KLTable> kl = nullptr)
        : group_(std::move(group)), kl_(std::move(kl)) {
        if (kl_ && kl_->group().get() != group_.get() && kl_->group()->descriptor() != group_->descriptor())
            throw GroupMismatch("KL table belongs to a different group");
    }

    explicit HeckeAlgebra(std::shared_ptr<const KLTable> kl) : HeckeAlgebra(kl->group(), kl) {}

    const Group& group() const { return *group_; }
    const GroupHandle& group_handle() const { return group_; }

    HeckeElement basis_element(Basis b, const GroupElement& w) const {
        group_->check(w);
        HeckeElement h(b);
        h.add(w, LaurentInt(1));
        return h;
    }

    /// C_w (signed) or C'_w in the ~T basis; C_{w omega} = C_w T_omega.
    HeckeElement c_basis_element(const GroupElement& w, SignConvention sign) const {
        const KLTable& kl = table();
        std::uint32_t wi = kl.ball().index_of(w);
        int lw = w.length();
        HeckeElement h(Basis::Ttilde);
        for (std::uint32_t y = 0; y < kl.ball().count_below(lw + 1); ++y) {
            const QPoly& p = kl.poly(y, wi);
            if (p.empty()) continue;
            int d = lw - kl.ball().length(y);
            std::vector<LaurentInt::term_type> terms;
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (p[k] == 0) continue;
                int two_k = 2 * static_cast<int>(k);
                if (sign == SignConvention::Signed) terms.emplace_back(d - two_k, d % 2 ? -p[k] : p[k]);
                else terms.emplace_back(two_k - d, p[k]);
            }
            h.add(kl.ball().element(y, w.omega), LaurentInt::from_terms(std::move(terms)));
        }
        return h;
    }

    HeckeElement convert(const HeckeElement& h, Basis target) const {
        if (h.basis == target) return h;
        return from_ttilde(to_ttilde(h), target);
    }

    /// Product in the basis of h1.
    HeckeElement multiply(const HeckeElement& h1, const HeckeElement& h2) const { return multiply(h1, h2, h1.basis); }

    HeckeElement multiply(const HeckeElement& h1, const HeckeElement& h2, Basis out) const {
        HeckeElement a = to_ttilde(h1);
        HeckeElement b = to_ttilde(h2);
        HeckeElement result(Basis::Ttilde);
        for (const auto& [y, cy] : b.terms) {
            HeckeElement partial = a;
            for (auto s : y.word) partial = right_multiply_generator(partial, s);
            for (const auto& [w, cw] : partial.terms)
                result.add(group_->multiply(w, group_->omega(y.omega)), cw * cy);
        }
        return from_ttilde(result, out);
    }

    /// bar(v) = v^{-1}, bar(~T_w) = (~T_{w^{-1}})^{-1}; result in the basis of h.
    HeckeElement bar(const HeckeElement& h) const {
        HeckeElement t = to_ttilde(h);
        HeckeElement result(Basis::Ttilde);
        for (const auto& [w, c] : t.terms) {
            // bar(~T_{u omega}) = ~T_{s1}^{-1} ... ~T_{sk}^{-1} T_omega
            HeckeElement img = basis_element(Basis::Ttilde, group_->identity());
            for (auto s : w.word) img = right_multiply_inverse_generator(img, s);
            LaurentInt cb = c.bar();
            for (const auto& [g, cg] : img.terms)
                result.add(group_->multiply(g, group_->omega(w.omega)), cg * cb);
        }
        return from_ttilde(result, h.basis);
    }

private:
    const KLTable& table() const {
        if (!kl_) throw RadiusExceeded("C basis requested but no KL table was supplied");
        return *kl_;
    }

    HeckeElement right_multiply_generator(const HeckeElement& h, int s) const {
        HeckeElement out(Basis::Ttilde);
        GroupElement gs = group_->generator(s);
        LaurentInt diff = LaurentInt::var(1) - LaurentInt::var(-1);
        for (const auto& [w, c] : h.terms) {
            GroupElement ws = group_->multiply(w, gs);
            out.add(ws, c);
            if (ws.length() < w.length()) out.add(w, c * diff);
        }
        return out;
    }

    /// ~T_s^{-1} = ~T_s - (v - v^{-1}).
    HeckeElement right_multiply_inverse_generator(const HeckeElement& h, int s) const {
        HeckeElement out = right_multiply_generator(h, s);
        LaurentInt diff = LaurentInt::var(-1) - LaurentInt::var(1);
        for (const auto& [w, c] : h.terms) out.add(w, c * diff);
        return out;
    }

    HeckeElement to_ttilde(const HeckeElement& h) const {
        for (const auto& [g, c] : h.terms) group_->check(g);
        switch (h.basis) {
            case Basis::Ttilde: return h;
            case Basis::T: {
                HeckeElement out(Basis::Ttilde);
                for (const auto& [g, c] : h.terms) out.add(g, c.shifted(g.length()));
                return out;
            }
            case Basis::Csigned:
            case Basis::Cprime: {
                SignConvention sign = h.basis == Basis::Csigned ? SignConvention::Signed : SignConvention::Unsigned;
                HeckeElement out(Basis::Ttilde);
                for (const auto& [g, c] : h.terms) {
                    HeckeElement cw = c_basis_element(g, sign);
                    for (const auto& [y, cy] : cw.terms) out.add(y, cy * c);
                }
                return out;
            }
        }
        return h;
    }

    HeckeElement from_ttilde(HeckeElement h, Basis target) const {
        switch (target) {
            case Basis::Ttilde: return h;
            case Basis::T: {
                HeckeElement out(Basis::T);
                for (const auto& [g, c] : h.terms) out.add(g, c.shifted(-g.length()));
                return out;
            }
            case Basis::Csigned:
            case Basis::Cprime: {
                // unitriangular: peel off the longest remaining term
                SignConvention sign = target == Basis::Csigned ? SignConvention::Signed : SignConvention::Unsigned;
                HeckeElement out(target);
                while (!h.terms.empty()) {
                    auto top = std::prev(h.terms.end());
                    GroupElement w = top->first;
                    LaurentInt c = top->second;
                    out.add(w, c);
                    HeckeElement cw = c_basis_element(w, sign);
                    for (const auto& [y, cy] : cw.terms) h.add(y, -(cy * c));
                }
                return out;
            }
        }
        return h;
    }

    GroupHandle group_;
    std::shared_ptr<const KLTable> kl_;
};

/// h_{x,y,z} with C_x C_y = sum_z h_{x,y,z} C_z in the given convention.
///
/// For extended groups C_{x omega} C_{y omega'} = C_x C_{omega y omega^{-1}} T_{omega omega'},
/// so the Omega parts only relabel the result.
inline std::map<GroupElement, LaurentInt> h_constants(const GroupElement& x, const GroupElement& y, SignConvention sign,
                                                      const ProductEngine& engine) {
    const Ball& b = engine.ball();
    const Group& g = *b.group();
    g.check(x);
    g.check(y);
    if (x.length() + y.length() > b.radius())
        throw RadiusExceeded("h_constants: l(x) + l(y) = " + std::to_string(x.length() + y.length()) +
                             " exceeds table radius " + std::to_string(b.radius()));
    std::vector<std::uint8_t> conj;
    for (auto s : y.word) conj.push_back(static_cast<std::uint8_t>(g.omega_apply(x.omega, s)));
    GroupElement yc = g.element(conj);
    int omega = g.omega_compose(x.omega, y.omega);
    CRow row = engine.product(b.index_of(g.element(x.word)), b.index_of(yc), sign);
    std::map<GroupElement, LaurentInt> out;
    for (auto& [z, c] : row) out.emplace(b.element(z, omega), std::move(c));
    return out;
}

}  // namespace heckej
