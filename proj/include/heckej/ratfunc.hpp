#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heckej/error.hpp"
#include "heckej/numbers.hpp"

namespace heckej {

/// Polynomial in q over Q, lowest degree first, no trailing zeros.
class RationalPoly {
public:
    RationalPoly() = default;
    RationalPoly(Rational c) {  // NOLINT: constants
        if (c != 0) c_.push_back(std::move(c));
    }

    static RationalPoly monomial(Rational c, int degree) {
        RationalPoly p;
        if (c == 0) return p;
        p.c_.assign(static_cast<std::size_t>(degree) + 1, Rational(0));
        p.c_.back() = std::move(c);
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Rational& lead() const { return c_.back(); }
    Rational coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : Rational(0); }

    friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
        RationalPoly r;
        r.c_.resize(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] += b.c_[i];
        r.trim();
        return r;
    }
    RationalPoly operator-() const {
        RationalPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) { return a + (-b); }
    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
        RationalPoly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    friend bool operator==(const RationalPoly&, const RationalPoly&) = default;

    /// Quotient and remainder; divisor must be nonzero.
    static std::pair<RationalPoly, RationalPoly> divmod(RationalPoly a, const RationalPoly& b) {
        if (b.is_zero()) throw Error("polynomial division by zero");
        RationalPoly quot;
        while (!a.is_zero() && a.degree() >= b.degree()) {
            RationalPoly t = monomial(a.lead() / b.lead(), a.degree() - b.degree());
            quot = quot + t;
            a = a - t * b;
        }
        return {quot, a};
    }

    static RationalPoly gcd(RationalPoly a, RationalPoly b) {
        while (!b.is_zero()) {
            auto r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.is_zero() ? a : a.scaled(Rational(1) / a.lead());
    }

    RationalPoly scaled(const Rational& k) const {
        RationalPoly r = *this;
        for (auto& x : r.c_) x *= k;
        r.trim();
        return r;
    }

    Rational evaluate(const Rational& q) const {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + *it;
        return acc;
    }

    /// "q^2 - 3*q + 1/2", highest degree first.
    std::string to_string() const {
        if (c_.empty()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            Rational c = c_[static_cast<std::size_t>(k)];
            if (c == 0) continue;
            bool neg = c < 0;
            if (neg) c = -c;
            if (out.empty()) out = neg ? "-" : "";
            else out += neg ? " - " : " + ";
            std::string mono = k == 0 ? "" : (k == 1 ? "q" : "q^" + std::to_string(k));
            if (mono.empty()) out += heckej::to_string(c);
            else if (c == 1) out += mono;
            else out += heckej::to_string(c) + "*" + mono;
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// Element of Q(q) as num/den in lowest terms with a monic denominator.
class RatFunc {
public:
    RatFunc() : den_(Rational(1)) {}
    RatFunc(Rational c) : num_(std::move(c)), den_(Rational(1)) {}  // NOLINT: constants
    RatFunc(int c) : RatFunc(Rational(c)) {}                         // NOLINT
    RatFunc(RationalPoly num, RationalPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    /// c * q^k for any integer k.
    static RatFunc monomial(Rational c, int k) {
        if (k >= 0) return {RationalPoly::monomial(std::move(c), k), RationalPoly(Rational(1))};
        return {RationalPoly(std::move(c)), RationalPoly::monomial(1, -k)};
    }
    static RatFunc q() { return monomial(1, 1); }

    const RationalPoly& num() const { return num_; }
    const RationalPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    /// If this is c * q^k, returns (c, k).
    std::optional<std::pair<Rational, int>> as_monomial() const {
        auto single = [](const RationalPoly& p) -> std::optional<std::pair<Rational, int>> {
            if (p.is_zero()) return std::nullopt;
            for (int k = 0; k < p.degree(); ++k)
                if (p.coeff(k) != 0) return std::nullopt;
            return std::make_pair(p.lead(), p.degree());
        };
        auto n = single(num_);
        auto d = single(den_);
        if (!n || !d) return std::nullopt;
        return std::make_pair(n->first / d->first, n->second - d->second);
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    RatFunc operator-() const { return {-num_, den_}; }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw Error("rational function division by zero");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }

    RatFunc pow(int e) const {
        RatFunc base = e >= 0 ? *this : RatFunc(1) / *this;
        RatFunc r(1);
        for (int k = e >= 0 ? e : -e; k > 0; --k) r = r * base;
        return r;
    }

    friend bool operator==(const RatFunc&, const RatFunc&) = default;

    Rational evaluate(const Rational& q) const {
        Rational d = den_.evaluate(q);
        if (d == 0) throw Error("rational function has a pole at q = " + heckej::to_string(q));
        return num_.evaluate(q) / d;
    }

    /// "num" when the denominator is 1, otherwise "num/den" with multi-term parts parenthesized.
    std::string to_string() const {
        if (den_ == RationalPoly(Rational(1))) return num_.to_string();
        auto wrap = [](const RationalPoly& p) {
            std::string t = p.to_string();
            bool single = t.find(' ') == std::string::npos && t.find('/') == std::string::npos;
            return single ? t : "(" + t + ")";
        };
        return wrap(num_) + "/" + wrap(den_);
    }

private:
    void normalize() {
        if (den_.is_zero()) throw Error("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = RationalPoly(Rational(1));
            return;
        }
        RationalPoly g = RationalPoly::gcd(num_, den_);
        num_ = RationalPoly::divmod(num_, g).first;
        den_ = RationalPoly::divmod(den_, g).first;
        Rational lead = den_.lead();
        num_ = num_.scaled(Rational(1) / lead);
        den_ = den_.scaled(Rational(1) / lead);
    }

    RationalPoly num_;
    RationalPoly den_;
};

}  // namespace heckej
