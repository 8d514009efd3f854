#include "catch_amalgamated.hpp"

#include "heckej/sl2.hpp"

using namespace heckej;
using namespace heckej::sl2;

namespace {

const RatFunc q = RatFunc::q();
const RatFunc q1 = RatFunc::q() + RatFunc(1);

Rational abs(const Rational& x) { return x < 0 ? -x : x; }

}  // namespace

TEST_CASE("rational functions", "[sl2]") {
    CHECK((q * q - 1) / (q - 1) == q + 1);
    CHECK(qpow(-3) * qpow(3) == RatFunc(1));
    CHECK(qpow(-2).to_string() == "1/q^2");
    CHECK((q1 / (q - 1)).to_string() == "(q + 1)/(q - 1)");
    CHECK((-qpow(-1)).to_string() == "-1/q");
    CHECK(RatFunc(Rational(1, 2)).to_string() == "1/2");
    CHECK(qpow(-2).evaluate(3) == Rational(1, 9));
    CHECK_THROWS((RatFunc(1) / (q - 2)).evaluate(2));
    auto m = (RatFunc(3) * qpow(-2)).as_monomial();
    REQUIRE(m);
    CHECK(m->first == 3);
    CHECK(m->second == -2);
    CHECK_FALSE(q1.as_monomial());
}

TEST_CASE("coefficients of f", "[sl2]") {
    CHECK(gamma_n(0) == RatFunc(1));
    CHECK(gamma_n(1) == -qpow(-1));
    CHECK(gamma_n(-1) == qpow(-2));
    CHECK(gamma_n(3) == -qpow(-5));
    CHECK(gamma_n(-3) == qpow(-6));
}

TEST_CASE("volume lemma", "[sl2]") {
    CHECK(volume_ratio(1) == q);
    CHECK(volume_ratio(-1) == q * q);
    CHECK(volume_ratio(0) == RatFunc(1));
    CHECK(volume_ratio(2) == qpow(3));
    CHECK(volume_ratio(-2) == qpow(4));
    for (int n = 1; n < 10; ++n) CHECK(volume_ratio(n + 1) == q * q * volume_ratio(n));
    for (int n = 0; n > -10; --n) CHECK(volume_ratio(n - 1) == q * q * volume_ratio(n));
}

TEST_CASE("single cell convolution tables", "[sl2]") {
    CHECK(conv_cell_value(2, 3, Lattice::Std).is_zero());
    CHECK(conv_cell_value(1, -1, Lattice::Std) == q1 * q);
    CHECK(conv_cell_value(1, 0, Lattice::Std) == q);
    CHECK(conv_cell_value(0, 0, Lattice::Std) == q1);
    CHECK(conv_cell_value(0, 1, Lattice::Std).is_zero());
    // O + tO at n > 0 vanishes exactly from r = n on
    CHECK(conv_cell_value(2, 1, Lattice::Sub) == q);
    CHECK(conv_cell_value(2, 2, Lattice::Sub).is_zero());
}

TEST_CASE("convolutions with f", "[sl2]") {
    CHECK(conv_f_value(2, Lattice::Std).is_zero());
    CHECK(conv_f_value(-1, Lattice::Std) == q1);
    CHECK(conv_f_value(0, Lattice::Sub).is_zero());
    for (int r = -8; r <= 8; ++r) {
        CHECK(conv_f_value(r, Lattice::Std) == (r <= 0 ? q1 : RatFunc(0)));
        CHECK(conv_f_value(r, Lattice::Sub).is_zero());
    }
}

TEST_CASE("relations between the coefficients", "[sl2]") {
    CHECK((gamma_n(1) + q * gamma_n(-1)).is_zero());
    CHECK((q * gamma_n(1) + gamma_n(0)).is_zero());
    auto rep = verify_relations(50);
    CHECK(rep.checks.size() == 101);
    CHECK(rep.failed() == 0);
    CHECK_THROWS(verify_relations(0));
}

TEST_CASE("partial sums converge within the remainder bound", "[sl2][property]") {
    for (int r = -4; r <= 4; ++r)
        for (auto L : {Lattice::Std, Lattice::Sub}) {
            auto terms = conv_terms(r, L);
            RatFunc total = terms.sum();
            int N0 = std::abs(r) + 2;
            REQUIRE(terms.remainder(N0) == total - terms.partial_sum(N0));
            for (Rational qv : {Rational(2), Rational(3), Rational(5)}) {
                Rational exact = total.evaluate(qv);
                Rational partial = 0;
                for (int n = -N0 + 1; n < N0; ++n) partial += terms.value(n).evaluate(qv);
                Rational prev_bound = -1;
                for (int N = N0; N <= 30; ++N) {
                    partial += terms.value(N).evaluate(qv) + terms.value(-N).evaluate(qv);
                    Rational bound = terms.remainder_bound(N, qv);
                    REQUIRE(abs(exact - partial) <= bound);
                    if (prev_bound >= 0) REQUIRE(bound <= prev_bound);
                    prev_bound = bound;
                }
            }
        }
}

TEST_CASE("tail remainders are exact geometric sums", "[sl2]") {
    auto f = f_function();
    // sum_{n > N} gamma_n = -q^{-2N-1} / (1 - q^-2)
    RatFunc pos = f.pos_tail().initial * f.pos_tail().ratio.pow(4) / (RatFunc(1) - qpow(-2));
    RatFunc neg = f.neg_tail().initial * f.neg_tail().ratio.pow(5) / (RatFunc(1) - qpow(-2));
    CHECK(f.remainder(4) == pos + neg);
    CHECK(pos == -qpow(-9) / (RatFunc(1) - qpow(-2)));
    CHECK(f.sum() == (RatFunc(1) - qpow(-1)) / (RatFunc(1) - qpow(-2)));
}

TEST_CASE("divergent tails are rejected", "[sl2]") {
    CellFunction grow({}, Tail{1, RatFunc(1), q}, Tail{0, RatFunc(1), qpow(-1)});
    CHECK_THROWS_AS(grow.sum(), DivergentTail);
    CHECK_THROWS_AS(grow.remainder_bound(3, 2), DivergentTail);
    CellFunction flat({}, Tail{1, RatFunc(1), RatFunc(1)}, Tail{0, RatFunc(0), RatFunc(1)});
    CHECK_THROWS_AS(flat.sum(), DivergentTail);
    CHECK_THROWS(CellFunction({{5, RatFunc(1)}}, Tail{1, RatFunc(0), q}, Tail{0, RatFunc(0), q}));
}

TEST_CASE("decay of the coefficients", "[sl2]") {
    auto d2 = schwartz_decay_check(10, 2);
    CHECK(d2.report.failed() == 0);
    CHECK(d2.max_weighted == 1);
    auto d3 = schwartz_decay_check(10, 3);
    CHECK(d3.report.failed() == 0);
    CHECK(pow(Rational(3), 1) * abs(gamma_n(1).evaluate(3)) == 1);
    CHECK(pow(Rational(2), 1) * abs(gamma_n(-1).evaluate(2)) == Rational(1, 2));
}

TEST_CASE("counting oracle examples", "[sl2]") {
    CountingOracle oracle;
    CHECK(oracle.count(2, 4, 1, 0, Lattice::Std) == Rational(1, 3));
    CHECK(oracle.count(3, 3, 0, 0, Lattice::Std) == 1);
    CHECK(oracle.count(2, 4, 1, 2, Lattice::Std) == 0);
    // the histogram is reused across queries
    auto used = oracle.enumerated();
    CHECK(oracle.count(2, 4, 2, 1, Lattice::Sub) >= 0);
    CHECK(oracle.enumerated() == used);
    CHECK_THROWS_AS(oracle.count(2, 2, 2, 1, Lattice::Std), DepthTooSmall);
    CHECK_THROWS_AS(CountingOracle(1000).count(3, 3, 0, 0, Lattice::Std), BudgetExceeded);
    CHECK_THROWS(oracle.count(4, 2, 0, 0, Lattice::Std));
}

TEST_CASE("group order of SL(2, Z/p^m)", "[sl2]") {
    // |SL(2, Z/p^m)| = p^{3m} (1 - p^-2); the index of the Iwahori subgroup is p + 1
    CountingOracle oracle;
    for (auto [p, m] : {std::pair{2u, 3}, std::pair{3u, 2}, std::pair{5u, 1}}) {
        CHECK(oracle.subgroup_fraction(p, m, 0) == Rational(1, p + 1));
        CHECK(oracle.volume_ratio(p, m, 0) == 1);
    }
}

TEST_CASE("volumes and convolutions against the counting oracle", "[sl2][property]") {
    CountingOracle oracle;
    for (auto [p, m] : {std::pair{2u, 4}, std::pair{3u, 3}}) {
        for (int n = -1; n <= 1; ++n) CHECK(oracle.volume_ratio(p, m, n) == volume_ratio(n).evaluate(p));
        for (int n = -2; n <= 2; ++n)
            for (int r = -3; r <= 3; ++r)
                for (auto L : {Lattice::Std, Lattice::Sub}) {
                    Rational frac;
                    try {
                        frac = oracle.count(p, m, n, r, L);
                    } catch (const DepthTooSmall&) {
                        continue;
                    }
                    Rational predicted = conv_cell_value(n, r, L).evaluate(p);
                    REQUIRE(volume_ratio(n).evaluate(p) * Rational(p + 1) * frac == predicted);
                }
    }
}
