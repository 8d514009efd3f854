#include "catch_amalgamated.hpp"

#include "heckej/hecke.hpp"
#include "heckej/json_io.hpp"
#include "heckej/kl_table.hpp"
#include "heckej/structure.hpp"

using namespace heckej;

namespace {

GroupHandle group(const char* type, bool ext = false) { return make_group(GroupDescriptor::parse(type, ext)); }

LaurentInt v(int e = 1) { return v_pow(e); }

// C'_w from bar-invariance alone: p_{w,w} = 1 and, going down in length,
// p_y is the negative-degree part of sum_{z > y} bar(p_z) r_{y,z}, where
// bar(~T_z) = sum_y r_{y,z} ~T_y.
std::map<GroupElement, LaurentInt> kl_oracle(const HeckeAlgebra& H, const GroupElement& w) {
    const Group& g = H.group();
    std::vector<GroupElement> below;
    for (const auto& y : g.enumerate_ball(w.length()))
        if (y.omega == 0 && g.bruhat_leq(y, g.element(w.word))) below.push_back(y);
    std::map<GroupElement, HeckeElement> bars;
    for (const auto& z : below) bars.emplace(z, H.bar(H.basis_element(Basis::Ttilde, z)));
    std::map<GroupElement, LaurentInt> p;
    p[g.element(w.word)] = LaurentInt(1);
    for (auto it = below.rbegin(); it != below.rend(); ++it) {
        const auto& y = *it;
        if (p.count(y)) continue;
        LaurentInt acc;
        for (const auto& [z, pz] : p) acc += pz.bar() * bars.at(z).coeff(y);
        std::vector<LaurentInt::term_type> neg;
        for (const auto& [e, c] : acc.terms())
            if (e < 0) neg.emplace_back(e, c);
        p[y] = LaurentInt::from_terms(std::move(neg));
    }
    std::erase_if(p, [](const auto& kv) { return kv.second.is_zero(); });
    return p;
}

}  // namespace

TEST_CASE("quadratic relation", "[hecke]") {
    auto g = group("A1~");
    HeckeAlgebra H(g);
    auto s0 = g->generator(0), e = g->identity();
    auto T = H.multiply(H.basis_element(Basis::T, s0), H.basis_element(Basis::T, s0));
    CHECK(T.coeff(s0) == v(2) - 1);
    CHECK(T.coeff(e) == v(2));
    auto Tt = H.multiply(H.basis_element(Basis::Ttilde, s0), H.basis_element(Basis::Ttilde, s0));
    CHECK(Tt.coeff(s0) == v(1) - v(-1));
    CHECK(Tt.coeff(e) == 1);
    auto h = H.basis_element(Basis::T, g->parse("0101"));
    h.add(s0, v(3) + 2);
    CHECK(H.multiply(H.basis_element(Basis::T, e), h) == h);
}

TEST_CASE("T-basis products are associative", "[hecke][property]") {
    for (auto g : {group("A1~", true), group("A2~", true)}) {
        HeckeAlgebra H(g);
        auto ball = g->enumerate_ball(2);
        for (const auto& x : ball)
            for (const auto& y : ball)
                for (const auto& z : ball) {
                    auto a = H.basis_element(Basis::T, x), b = H.basis_element(Basis::T, y), c = H.basis_element(Basis::T, z);
                    REQUIRE(H.multiply(H.multiply(a, b), c) == H.multiply(a, H.multiply(b, c)));
                }
    }
}

TEST_CASE("KL polynomial examples", "[hecke]") {
    auto g = group("A1~");
    KLTable t(g, 8);
    CHECK(kl_polynomial(g->parse("010"), g->parse("010"), t) == 1);
    CHECK(kl_polynomial(g->parse("e"), g->parse("010"), t) == 1);
    CHECK(kl_polynomial(g->parse("01"), g->parse("10"), t).is_zero());
    for (std::uint32_t w = 0; w < t.ball().size(); ++w)
        for (std::uint32_t y = 0; y < t.ball().size(); ++y) {
            bool le = g->bruhat_leq(t.ball().element(y), t.ball().element(w));
            REQUIRE(t.polynomial(t.ball().element(y), t.ball().element(w)) == (le ? LaurentInt(1) : LaurentInt()));
        }
    // a non-trivial A2~ polynomial
    auto g2 = group("A2~");
    KLTable t2(g2, 4);
    CHECK(kl_polynomial(g2->parse("e"), g2->parse("0120"), t2) == v(2) + 1);
}

TEST_CASE("C basis elements", "[hecke]") {
    auto g = group("A1~");
    HeckeAlgebra H(std::make_shared<const KLTable>(g, 6));
    auto s0 = g->generator(0), e = g->identity();
    auto C = H.c_basis_element(s0, SignConvention::Signed);
    CHECK(C.coeff(s0) == 1);
    CHECK(C.coeff(e) == -v());
    auto Cp = H.c_basis_element(s0, SignConvention::Unsigned);
    CHECK(Cp.coeff(s0) == 1);
    CHECK(Cp.coeff(e) == v(-1));
    CHECK(H.c_basis_element(e, SignConvention::Signed) == H.basis_element(Basis::Ttilde, e));
}

TEST_CASE("bar involution examples", "[hecke]") {
    auto g = group("A1~");
    HeckeAlgebra H(std::make_shared<const KLTable>(g, 4));
    auto s0 = g->generator(0), e = g->identity();
    HeckeElement h(Basis::Ttilde);
    h.add(e, v());
    CHECK(H.bar(h).coeff(e) == v(-1));
    auto b = H.bar(H.basis_element(Basis::Ttilde, s0));
    CHECK(b.coeff(s0) == 1);
    CHECK(b.coeff(e) == v(-1) - v());
    auto C = H.basis_element(Basis::Csigned, s0);
    CHECK(H.bar(C) == C);
}

TEST_CASE("KL basis is bar-invariant with the degree bound", "[hecke][property]") {
    for (auto [g, L] : {std::pair{group("A1~"), 10}, std::pair{group("A2~"), 6}, std::pair{group("A2~", true), 4}}) {
        auto t = std::make_shared<const KLTable>(g, L);
        HeckeAlgebra H(t);
        for (const auto& w : g->enumerate_ball(L)) {
            for (auto sign : {SignConvention::Signed, SignConvention::Unsigned}) {
                auto C = H.c_basis_element(w, sign);
                REQUIRE(H.bar(C) == C);
            }
            for (const auto& y : g->enumerate_ball(w.length())) {
                if (y.omega != w.omega) continue;
                auto P = kl_polynomial(y, w, *t);
                if (y == w) {
                    REQUIRE(P == 1);
                } else if (!P.is_zero()) {
                    REQUIRE(g->bruhat_leq(y, w));
                    REQUIRE(P.min_exponent() >= 0);
                    REQUIRE(P.coeff(0) == 1);
                    REQUIRE(P.max_exponent() <= w.length() - y.length() - 1);
                }
            }
        }
    }
}

TEST_CASE("KL basis agrees with the bar-invariance oracle", "[hecke][property]") {
    for (auto [g, L] : {std::pair{group("A1~"), 7}, std::pair{group("A2~"), 5}}) {
        HeckeAlgebra H(std::make_shared<const KLTable>(g, L));
        for (const auto& w : g->enumerate_ball(L)) REQUIRE(H.c_basis_element(w, SignConvention::Unsigned).terms == kl_oracle(H, w));
    }
}

TEST_CASE("basis conversions round-trip", "[hecke][property]") {
    auto g = group("A2~", true);
    HeckeAlgebra H(std::make_shared<const KLTable>(g, 5));
    for (const auto& w : g->enumerate_ball(4)) {
        HeckeElement h(Basis::T);
        h.add(w, v(2) - 3);
        h.add(g->identity(), v(-1));
        for (auto b : {Basis::T, Basis::Ttilde, Basis::Csigned, Basis::Cprime}) {
            auto c = H.convert(h, b);
            REQUIRE(c.basis == b);
            REQUIRE(H.convert(c, Basis::T) == h);
        }
    }
}

TEST_CASE("bar is a ring automorphism", "[hecke][property]") {
    auto g = group("A2~", true);
    HeckeAlgebra H(g);
    auto ball = g->enumerate_ball(3);
    for (std::size_t i = 0; i < ball.size(); i += 3)
        for (std::size_t j = 1; j < ball.size(); j += 4) {
            HeckeElement a(Basis::Ttilde), b(Basis::Ttilde);
            a.add(ball[i], v(2) + 1);
            b.add(ball[j], v(-1) - 4);
            REQUIRE(H.bar(H.multiply(a, b)) == H.multiply(H.bar(a), H.bar(b)));
            REQUIRE(H.bar(H.bar(a)) == a);
        }
}

TEST_CASE("structure constant examples", "[hecke]") {
    auto g = group("A1~");
    ProductEngine engine(std::make_shared<const KLTable>(g, 6));
    auto s0 = g->generator(0), s1 = g->generator(1);
    auto hs = h_constants(s0, s0, SignConvention::Signed, engine);
    REQUIRE(hs.size() == 1);
    CHECK(hs.at(s0) == -v_plus_vinv());
    auto hu = h_constants(s0, s0, SignConvention::Unsigned, engine);
    CHECK(hu.at(s0) == v_plus_vinv());
    auto h01 = h_constants(s0, s1, SignConvention::Unsigned, engine);
    REQUIRE(h01.size() == 1);
    CHECK(h01.at(g->parse("01")) == 1);
    CHECK_THROWS_AS(h_constants(g->parse("0101"), g->parse("010"), SignConvention::Signed, engine), RadiusExceeded);
}

TEST_CASE("structure constants match direct multiplication", "[hecke][property]") {
    for (auto [g, L] : {std::pair{group("A1~", true), 4}, std::pair{group("A2~"), 3}, std::pair{group("A2~", true), 2}}) {
        auto t = std::make_shared<const KLTable>(g, 2 * L);
        HeckeAlgebra H(t);
        ProductEngine engine(t);
        auto ball = g->enumerate_ball(L);
        for (const auto& x : ball)
            for (const auto& y : ball) {
                auto hs = h_constants(x, y, SignConvention::Signed, engine);
                auto hu = h_constants(x, y, SignConvention::Unsigned, engine);
                auto direct = H.multiply(H.basis_element(Basis::Csigned, x), H.basis_element(Basis::Csigned, y));
                REQUIRE(direct.terms == hs);
                auto direct_u = H.multiply(H.basis_element(Basis::Cprime, x), H.basis_element(Basis::Cprime, y));
                REQUIRE(direct_u.terms == hu);
                REQUIRE(hs.size() == hu.size());
                for (const auto& [z, c] : hu) {
                    REQUIRE(z.length() <= x.length() + y.length());
                    REQUIRE(c.bar() == c);
                    bool odd = (x.length() + y.length() + z.length()) % 2;
                    REQUIRE(hs.at(z) == (odd ? -c : c));
                }
            }
    }
}

TEST_CASE("KL table JSON round-trip", "[hecke]") {
    auto g = group("A2~", true);
    KLTable t(g, 5);
    auto j = kl_table_to_json(t);
    auto back = kl_table_from_json(json::parse(j.dump()), g);
    CHECK(kl_table_to_json(*back).dump() == j.dump());
    CHECK_THROWS_AS(kl_table_from_json(j, group("A1~")), GroupMismatch);

    // any JSON layout is accepted, not just the compact one
    std::istringstream pretty(j.dump(2));
    CHECK(kl_table_to_json(*read_kl_table(pretty, g)) == j);
    std::istringstream truncated(j.dump().substr(0, 200));
    CHECK_THROWS_AS(read_kl_table(truncated, g), ParseError);
    auto bad = j;
    bad["entries"][0]["P"] = json::array({json::array({1, "1"})});
    CHECK_THROWS_AS(kl_table_from_json(bad, g), ParseError);
    bad = j;
    bad["version"] = 2;
    CHECK_THROWS_AS(kl_table_from_json(bad, g), ParseError);
}
