#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "heckej/error.hpp"
#include "heckej/numbers.hpp"

namespace heckej {

/// Sparse Laurent polynomial in one variable with exact coefficients.
///
/// Terms are kept sorted by exponent with no zero coefficients, so two equal
/// polynomials have identical term vectors.
template <class Coeff>
class Laurent {
public:
    using coeff_type = Coeff;
    using term_type = std::pair<int, Coeff>;

    Laurent() = default;

    Laurent(const Coeff& c) {  // NOLINT: implicit constants read naturally in formulas
        if (c != 0) terms_.emplace_back(0, c);
    }

    Laurent(int c) : Laurent(Coeff(c)) {}  // NOLINT

    static Laurent monomial(const Coeff& c, int exponent) {
        Laurent p;
        if (c != 0) p.terms_.emplace_back(exponent, c);
        return p;
    }

    /// The variable raised to `exponent`.
    static Laurent var(int exponent = 1) { return monomial(Coeff(1), exponent); }

    /// Builds from arbitrary (exponent, coefficient) pairs, merging duplicates.
    static Laurent from_terms(std::vector<term_type> terms) {
        std::sort(terms.begin(), terms.end(),
                  [](const term_type& a, const term_type& b) { return a.first < b.first; });
        Laurent p;
        for (auto& [e, c] : terms) {
            if (!p.terms_.empty() && p.terms_.back().first == e) {
                p.terms_.back().second += c;
                if (p.terms_.back().second == 0) p.terms_.pop_back();
            } else if (c != 0) {
                p.terms_.emplace_back(e, std::move(c));
            }
        }
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    const std::vector<term_type>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Lowest exponent; only meaningful for nonzero polynomials.
    int min_exponent() const { return terms_.front().first; }
    int max_exponent() const { return terms_.back().first; }

    Coeff coeff(int exponent) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                                   [](const term_type& t, int e) { return t.first < e; });
        if (it != terms_.end() && it->first == exponent) return it->second;
        return Coeff(0);
    }

    /// Multiplies by var^k.
    Laurent shifted(int k) const {
        Laurent p = *this;
        for (auto& t : p.terms_) t.first += k;
        return p;
    }

    /// p(v) -> p(v^{-1}).
    Laurent bar() const {
        Laurent p;
        p.terms_.reserve(terms_.size());
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) p.terms_.emplace_back(-it->first, it->second);
        return p;
    }

    /// p(v) -> p(-v).
    Laurent negate_variable() const {
        Laurent p = *this;
        for (auto& t : p.terms_)
            if (t.first % 2 != 0) t.second = -t.second;
        return p;
    }

    /// p(v) -> p(v^k) for k != 0.
    Laurent substitute_power(int k) const {
        std::vector<term_type> out;
        out.reserve(terms_.size());
        for (const auto& [e, c] : terms_) out.emplace_back(e * k, c);
        return from_terms(std::move(out));
    }

    Laurent operator-() const {
        Laurent p = *this;
        for (auto& t : p.terms_) t.second = -t.second;
        return p;
    }

    Laurent& operator+=(const Laurent& o) { return axpy(Coeff(1), o, 0); }
    Laurent& operator-=(const Laurent& o) { return axpy(Coeff(-1), o, 0); }

    /// *this += c * var^shift * o, merged in one pass.
    Laurent& axpy(const Coeff& c, const Laurent& o, int shift) {
        if (o.terms_.empty() || c == 0) return *this;
        std::vector<term_type> out;
        out.reserve(terms_.size() + o.terms_.size());
        auto a = terms_.begin();
        auto b = o.terms_.begin();
        while (a != terms_.end() || b != o.terms_.end()) {
            if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first + shift)) {
                out.push_back(std::move(*a++));
            } else if (a == terms_.end() || b->first + shift < a->first) {
                out.emplace_back(b->first + shift, c * b->second);
                ++b;
            } else {
                Coeff s = a->second + c * b->second;
                if (s != 0) out.emplace_back(a->first, std::move(s));
                ++a;
                ++b;
            }
        }
        terms_ = std::move(out);
        return *this;
    }

    Laurent& operator*=(const Laurent& o) {
        *this = *this * o;
        return *this;
    }

    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (b.terms_.size() == 1) return a.scaled(b.terms_[0].second, b.terms_[0].first);
        if (a.terms_.size() == 1) return b.scaled(a.terms_[0].second, a.terms_[0].first);
        int lo = a.min_exponent() + b.min_exponent();
        int hi = a.max_exponent() + b.max_exponent();
        std::vector<Coeff> dense(static_cast<std::size_t>(hi - lo + 1));
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) dense[static_cast<std::size_t>(ea + eb - lo)] += ca * cb;
        Laurent p;
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i] != 0) p.terms_.emplace_back(lo + static_cast<int>(i), std::move(dense[i]));
        return p;
    }

    /// c * var^shift * (*this).
    Laurent scaled(const Coeff& c, int shift = 0) const {
        Laurent p;
        if (c == 0) return p;
        p.terms_.reserve(terms_.size());
        for (const auto& [e, x] : terms_) p.terms_.emplace_back(e + shift, x * c);
        return p;
    }

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

    /// Human readable form, highest exponent first, e.g. "v^2 - 1 + 3*v^-1".
    std::string to_string(const char* variable = "v") const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            auto [e, c] = *it;
            bool negative = c < 0;
            Coeff mag = negative ? Coeff(-c) : c;
            if (first) {
                if (negative) os << "-";
            } else {
                os << (negative ? " - " : " + ");
            }
            first = false;
            if (e == 0) {
                os << mag;
                continue;
            }
            if (mag != 1) os << mag << "*";
            os << variable;
            if (e != 1) os << "^" << e;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Laurent& p) { return os << p.to_string(); }

private:
    std::vector<term_type> terms_;
};

using LaurentInt = Laurent<BigInt>;

/// The variable v of the coefficient ring Z[v, v^{-1}].
inline LaurentInt v_pow(int e) { return LaurentInt::var(e); }

/// v + v^{-1}, the eigenvalue of C'_s on elements with s as a descent.
inline LaurentInt v_plus_vinv() { return v_pow(1) + v_pow(-1); }

/// True iff no negative exponent occurs (membership in Z[v]).
template <class C>
bool in_A_plus(const Laurent<C>& p) {
    return p.is_zero() || p.min_exponent() >= 0;
}

/// Coefficient of v^0 in v^a * p; throws NotInAPlus when v^a * p has a pole.
template <class C>
C constant_term_after_shift(const Laurent<C>& p, int a) {
    if (!p.is_zero() && p.min_exponent() + a < 0)
        throw NotInAPlus("v^" + std::to_string(a) + " * (" + p.to_string() + ") is not in Z[v]");
    return p.coeff(-a);
}

/// Order of the pole at v = 0 (0 when p is in Z[v]).
template <class C>
int pole_order(const Laurent<C>& p) {
    if (p.is_zero()) return 0;
    return std::max(0, -p.min_exponent());
}

}  // namespace heckej
