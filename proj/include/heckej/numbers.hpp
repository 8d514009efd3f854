#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "heckej/error.hpp"

namespace heckej {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt parse_bigint(std::string_view text) {
    if (text.empty()) throw ParseError("empty integer literal");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) throw ParseError("malformed integer literal '" + std::string(text) + "'");
    for (std::size_t k = i; k < text.size(); ++k) {
        if (text[k] < '0' || text[k] > '9')
            throw ParseError("malformed integer literal '" + std::string(text) + "'");
    }
    return BigInt(std::string(text));
}

/// Parses "a" or "a/b" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_bigint(text));
    BigInt den = parse_bigint(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_bigint(text.substr(0, slash)), den);
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const Rational& x) {
    if (boost::multiprecision::denominator(x) == 1) return boost::multiprecision::numerator(x).str();
    return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

inline Rational pow(const Rational& base, int e) {
    Rational result = 1;
    Rational b = e >= 0 ? base : Rational(1) / base;
    for (int k = e >= 0 ? e : -e; k > 0; --k) result *= b;
    return result;
}

}  // namespace heckej
