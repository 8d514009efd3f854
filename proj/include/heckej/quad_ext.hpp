#pragma once

#include <string>

#include "heckej/error.hpp"
#include "heckej/laurent.hpp"
#include "heckej/numbers.hpp"

namespace heckej {

/// a0 + a1*v in Q(v) with v^2 = q, q a positive rational.
///
/// When q is not a rational square this is a field; when it is a square the
/// ring has zero divisors and `inverse` may throw.
struct QuadExt {
    Rational a0;
    Rational a1;
    Rational q = 1;

    QuadExt() = default;
    QuadExt(Rational rational_part, Rational v_part, Rational q_value)
        : a0(std::move(rational_part)), a1(std::move(v_part)), q(std::move(q_value)) {}

    static QuadExt constant(Rational c, Rational q_value) { return {std::move(c), 0, std::move(q_value)}; }

    bool is_zero() const { return a0 == 0 && a1 == 0; }

    QuadExt operator-() const { return {-a0, -a1, q}; }

    QuadExt& operator+=(const QuadExt& o) {
        check(o);
        a0 += o.a0;
        a1 += o.a1;
        return *this;
    }
    QuadExt& operator-=(const QuadExt& o) {
        check(o);
        a0 -= o.a0;
        a1 -= o.a1;
        return *this;
    }
    QuadExt& operator*=(const QuadExt& o) {
        check(o);
        Rational r0 = a0 * o.a0 + a1 * o.a1 * q;
        Rational r1 = a0 * o.a1 + a1 * o.a0;
        a0 = std::move(r0);
        a1 = std::move(r1);
        return *this;
    }

    friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
    friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
    friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }

    /// a0^2 - q*a1^2; nonzero for nonzero elements when q is not a square.
    Rational norm() const { return a0 * a0 - q * a1 * a1; }

    QuadExt inverse() const {
        Rational n = norm();
        if (n == 0) throw Error("QuadExt element " + to_string() + " is not invertible");
        return {a0 / n, -a1 / n, q};
    }

    friend bool operator==(const QuadExt& a, const QuadExt& b) {
        return a.a0 == b.a0 && a.a1 == b.a1 && a.q == b.q;
    }

    std::string to_string() const {
        return heckej::to_string(a0) + " + (" + heckej::to_string(a1) + ")*v";
    }

private:
    void check(const QuadExt& o) const {
        if (o.q != q) throw Error("QuadExt operands specialized at different q");
    }
};

/// Evaluates p at v = q^{1/2}: even powers land in a0, odd powers in a1.
inline QuadExt specialize(const LaurentInt& p, const Rational& q) {
    if (q <= 0) throw Error("specialize: q must be positive");
    QuadExt r(0, 0, q);
    for (const auto& [e, c] : p.terms()) {
        // v^e = q^{floor(e/2)} * v^{e mod 2}
        int odd = ((e % 2) + 2) % 2;
        int half = (e - odd) / 2;
        Rational term = Rational(c) * pow(q, half);
        if (odd) r.a1 += term;
        else r.a0 += term;
    }
    return r;
}

}  // namespace heckej
