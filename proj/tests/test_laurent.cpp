#include <random>

#include "catch_amalgamated.hpp"

#include "heckej/laurent.hpp"
#include "heckej/linalg.hpp"
#include "heckej/quad_ext.hpp"

using namespace heckej;

namespace {

LaurentInt random_laurent(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(0, 5), ex(-6, 6), co(-20, 20);
    std::vector<LaurentInt::term_type> terms;
    for (int k = len(rng); k > 0; --k) terms.emplace_back(ex(rng), BigInt(co(rng)));
    return LaurentInt::from_terms(std::move(terms));
}

// Dense evaluation at an integer point; exact in Q.
Rational eval(const LaurentInt& p, const Rational& v) {
    Rational acc = 0;
    for (const auto& [e, c] : p.terms()) acc += Rational(c) * pow(v, e);
    return acc;
}

}  // namespace

TEST_CASE("Laurent arithmetic examples", "[laurent]") {
    const auto v = LaurentInt::var();
    const auto vi = LaurentInt::var(-1);
    CHECK((v + vi).to_string() == "v + v^-1");
    CHECK((v + vi) * (v - vi) == v_pow(2) - v_pow(-2));
    CHECK((LaurentInt() * (v + 3)).is_zero());
    CHECK(LaurentInt::from_terms({{1, 2}, {1, -2}}).is_zero());
}

TEST_CASE("A+ membership and shifted constant terms", "[laurent]") {
    CHECK(in_A_plus(v_pow(2) + 1));
    CHECK_FALSE(in_A_plus(v_plus_vinv()));
    CHECK(in_A_plus(LaurentInt()));
    CHECK(constant_term_after_shift(v_plus_vinv(), 1) == 1);
    CHECK(constant_term_after_shift(-v_plus_vinv(), 1) == -1);
    CHECK(constant_term_after_shift(LaurentInt(1), 1) == 0);
    CHECK_THROWS_AS(constant_term_after_shift(v_pow(-2), 1), NotInAPlus);
    CHECK(pole_order(v_pow(-3) + v_pow(4)) == 3);
}

TEST_CASE("specialization at v = sqrt(q)", "[laurent]") {
    CHECK(specialize(v_pow(2) + 1, 4) == QuadExt{5, 0, 4});
    CHECK(specialize(v_plus_vinv(), 4) == QuadExt{0, Rational(5, 4), 4});
    CHECK(specialize(v_pow(3), 2) == QuadExt{0, 2, 2});
    CHECK(specialize(v_plus_vinv(), 1).a1 == 2);
}

TEST_CASE("Laurent ring axioms on random inputs", "[laurent][property]") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 10000; ++trial) {
        auto a = random_laurent(rng), b = random_laurent(rng), c = random_laurent(rng);
        REQUIRE(a + b == b + a);
        REQUIRE(a * b == b * a);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE((a - a).is_zero());
        REQUIRE(a.bar().bar() == a);
        REQUIRE((a * b).bar() == a.bar() * b.bar());
    }
}

TEST_CASE("Laurent products agree with evaluation", "[laurent][property]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        auto a = random_laurent(rng), b = random_laurent(rng);
        for (Rational v : {Rational(2), Rational(-3, 5)}) REQUIRE(eval(a * b, v) == eval(a, v) * eval(b, v));
    }
}

TEST_CASE("specialize is a ring homomorphism", "[laurent][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        auto a = random_laurent(rng), b = random_laurent(rng);
        for (Rational q : {Rational(2), Rational(3), Rational(4), Rational(9, 4)}) {
            REQUIRE(specialize(a * b, q) == specialize(a, q) * specialize(b, q));
            REQUIRE(specialize(a + b, q) == specialize(a, q) + specialize(b, q));
        }
    }
}

TEST_CASE("quadratic extension inverses", "[laurent]") {
    QuadExt x{3, 1, 2};
    CHECK(x * x.inverse() == QuadExt{1, 0, 2});
    CHECK_THROWS(QuadExt{2, 1, 4}.inverse());  // 2 - sqrt(4) = 0
}

TEST_CASE("rank over Q(sqrt q)", "[laurent]") {
    Rational q = 2;
    auto c = [&](Rational a0, Rational a1) { return QuadExt{a0, a1, q}; };
    // rows (1, v) and (v, 2) are proportional since v^2 = 2; at q = 4, v = 2
    CHECK(rank_over_sqrt_field({{c(1, 0), c(0, 1)}, {c(0, 1), c(2, 0)}}, q) == 1);
    CHECK(rank_over_sqrt_field({{c(1, 0), c(0, 1)}, {c(0, 1), c(3, 0)}}, q) == 2);
    Rational four = 4;
    CHECK(rank_over_sqrt_field({{QuadExt{0, 1, four}, QuadExt{2, 0, four}}, {QuadExt{1, 0, four}, QuadExt{1, 0, four}}}, four) == 1);
    CHECK(rational_sqrt(Rational(9, 4)) == Rational(3, 2));
    CHECK_FALSE(rational_sqrt(Rational(2)).has_value());
}
