#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <random>

#include "supergeo/isocheck.hpp"
#include "supergeo/linebundle.hpp"

using namespace supergeo;

namespace {

AtlasPtr P12() {
    return std::make_shared<Atlas>(build_projective_superspace(1, 2));
}

SuperPoly rand_odd(std::mt19937& rng, const RingPtr& r, int deg) {
    SuperPoly p(r);
    for (auto& m : monomials_up_to(r, deg, 1))
        p.add_term(m, rat(static_cast<long>(rng() % 5) - 2));
    return p;
}

}  // namespace

TEST_CASE("O(-1) on P^1 has g_01 = u") {
    auto p1 = std::make_shared<Atlas>(build_projective_superspace(1, 0));
    auto L = standard_cocycle_proj(p1, -1);
    RingPtr loc = p1->overlap_ring(0, 1);
    CHECK(L.at(0, 1) == SuperPoly::even_gen(loc, 0, 1));
    L.verify();
}

TEST_CASE("Ber(S) on G(1|0,2|2) equals the O(-1) pattern") {
    auto g = std::make_shared<Atlas>(build_supergrassmannian(1, 0, 2, 2));
    auto L = berezinian_cocycle(g, 1);
    RingPtr loc = g->overlap_ring(0, 1);
    CHECK(L.at(0, 1) == SuperPoly::even_gen(loc, g->overlaps.at({0, 1}).inverted[0], 1));
}

TEST_CASE("Ber(S) on G(1|1,2|2) reduces to O(-1) boxtimes O(1)") {
    auto g = std::make_shared<Atlas>(build_supergrassmannian(1, 1, 2, 2));
    auto L = berezinian_cocycle(g, 1);
    auto red = std::make_shared<Atlas>(truncate_atlas(*g, 1));
    auto Lred = reduce_cocycle(L, red);

    auto p1 = std::make_shared<Atlas>(build_projective_superspace(1, 0));
    auto prod = std::make_shared<Atlas>(atlas_product(*p1, *p1));
    auto Lprod = external_cocycle(prod, standard_cocycle_proj(p1, -1),
                                  standard_cocycle_proj(p1, 1));
    // compare exponent patterns positionally: chart (i,j) of G matches
    // product chart i*2+j, and the reduced even generators line up
    for (const auto& [key, gval] : Lprod.g) {
        const SuperPoly& bval = Lred.at(key.first, key.second);
        REQUIRE(gval.terms().size() == 1);
        REQUIRE(bval.terms().size() == 1);
        CHECK(gval.terms().begin()->first.even == bval.terms().begin()->first.even);
        CHECK(gval.terms().begin()->second == bval.terms().begin()->second);
    }
}

TEST_CASE("trivial cocycle: phi = 0 is a connection with curvature 0") {
    auto x = P12();
    auto v = pi_field_projective(*x);
    auto L = trivial_cocycle(x);
    auto conn = connection_solve(L, v, 1);
    REQUIRE(conn.has_value());
    auto c = curvature(L, v, *conn);
    CHECK(c.constant);
    CHECK(c.value == 0);
}

TEST_CASE("canonical connection on O(-1) over P^{1|2}: exists, unique, curvature -1") {
    auto x = P12();
    auto v = pi_field_projective(*x);
    auto L = standard_cocycle_proj(x, -1);
    auto conn = connection_solve(L, v, 1);
    REQUIRE(conn.has_value());
    // unique because there are no nonzero global odd functions
    CHECK(connection_kernel_dim(L, v, 1) == 0);
    CHECK(global_functions(*x, 1, 3).empty());
    auto c = curvature(L, v, *conn);
    REQUIRE(c.constant);
    CHECK(c.value == rat(-1));
    // literal solution phi_0 = h0
    CHECK(conn->phi[0] == SuperPoly::gen(x->charts[0].ring, "h0"));
}

TEST_CASE("O(n) curvature has magnitude n for |n| <= 5") {
    auto x = P12();
    auto v = pi_field_projective(*x);
    for (int n = -5; n <= 5; ++n) {
        auto L = standard_cocycle_proj(x, n);
        auto conn = connection_solve(L, v, 1);
        REQUIRE(conn.has_value());
        auto c = curvature(L, v, *conn);
        REQUIRE(c.constant);
        CHECK(c.value == rat(n));
    }
}

TEST_CASE("tensor powers: curvature is additive, O(-1)^n has curvature -n") {
    auto x = P12();
    auto v = pi_field_projective(*x);
    auto L1 = standard_cocycle_proj(x, -1);
    auto c1 = connection_solve(L1, v, 1);
    REQUIRE(c1.has_value());
    LineCocycle L = L1;
    VConnection conn = *c1;
    for (int n = 2; n <= 4; ++n) {
        L = tensor_cocycle(L, L1);
        conn = tensor_connection(conn, *c1);
        verify_connection(L, v, conn);
        auto c = curvature(L, v, conn);
        REQUIRE(c.constant);
        CHECK(c.value == rat(-n));
    }
}

TEST_CASE("product space: O(n1) boxtimes O(n2) with v1+v2 is flat iff n1+n2=0") {
    auto x = P12();
    auto xx = std::make_shared<Atlas>(atlas_product(*x, *x));
    auto v = pi_field_projective(*x);
    auto vv = field_sum(*xx, *x, v, *x, v);
    for (int n1 = -2; n1 <= 2; ++n1)
        for (int n2 = -2; n2 <= 2; ++n2) {
            auto L = external_cocycle(xx, standard_cocycle_proj(x, n1),
                                      standard_cocycle_proj(x, n2));
            auto conn = connection_solve(L, vv, 1);
            REQUIRE(conn.has_value());
            auto c = curvature(L, vv, *conn);
            REQUIRE(c.constant);
            CHECK(c.value == rat(n1 + n2));
            auto flat = connection_solve(L, vv, 1, true);
            CHECK(flat.has_value() == (n1 + n2 == 0));
        }
}

TEST_CASE("gauge covariance: c(nabla + phi) = c(nabla) + v(phi) exactly") {
    std::mt19937 rng(500);
    // affine test spaces carry plenty of global odd functions
    Atlas aff = build_affine_space({"z1", "z2"}, {"t1", "t2"});
    OddDerivation d;
    d.ring = aff.charts[0].ring;
    d.even_images = {SuperPoly::gen(d.ring, "t1"), SuperPoly::gen(d.ring, "t2")};
    d.odd_images = {SuperPoly::zero(d.ring), SuperPoly::zero(d.ring)};
    GlobalField v{{HomologicalField::certify(std::move(d))}};
    auto ap = std::make_shared<Atlas>(aff);
    auto L = trivial_cocycle(ap);
    VConnection base{{SuperPoly::gen(aff.charts[0].ring, "t1")}};
    auto c0 = curvature(L, v, base);
    for (int i = 0; i < 100; ++i) {
        SuperPoly phi = rand_odd(rng, aff.charts[0].ring, 3);
        VConnection shifted{{base.phi[0] + phi}};
        auto c1 = curvature(L, v, shifted);
        CHECK(c1.per_chart[0] == c0.per_chart[0] + v.fields[0].apply(phi));
    }
}

TEST_CASE("flat descent") {
    auto x = P12();
    auto v = pi_field_projective(*x);
    auto q = build_quotient_atlas(*x, v, 1);
    auto s = std::make_shared<Atlas>(standalone_quotient(q, 4));

    // trivial bundle descends to the trivial cocycle
    auto r0 = flat_descend(trivial_cocycle(x), v, q, s, 2);
    REQUIRE(std::holds_alternative<Descended>(r0));
    for (const auto& [key, gd] : std::get<Descended>(r0).cocycle.g) CHECK(gd.is_invertible());

    // O(n), n != 0 is obstructed with the curvature constant as certificate
    for (int n : {1, -1, 2, 3}) {
        auto r = flat_descend(standard_cocycle_proj(x, n), v, q, s, 2);
        REQUIRE(std::holds_alternative<Obstructed>(r));
        CHECK(std::get<Obstructed>(r).curvature_value == rat(n));
    }

    // O(1) (x) O(-1) is trivial and descends
    auto L = tensor_cocycle(standard_cocycle_proj(x, 1), standard_cocycle_proj(x, -1));
    auto r1 = flat_descend(L, v, q, s, 2);
    CHECK(std::holds_alternative<Descended>(r1));
}

TEST_CASE("gq1 arithmetic") {
    auto r = RingDescriptor::make({"x"}, {"t1", "t2"}, {"x"});
    auto t1 = SuperPoly::gen(r, "t1");
    auto t2 = SuperPoly::gen(r, "t2");
    auto one = SuperPoly::one(r);

    // (1+t1)(1+t2) = (1+t1t2)(1+(t1+t2))
    auto lhs = gq1_mul(GQ1Element{one, t1}, GQ1Element{one, t2});
    auto rhs = gq1_mul(GQ1Element{one + t1 * t2, SuperPoly::zero(r)},
                       GQ1Element{one, t1 + t2});
    CHECK(lhs.a0 == rhs.a0);
    CHECK(lhs.a1 == rhs.a1);

    // identity element and centrality of the scalar part
    GQ1Element x{SuperPoly::gen(r, "x") + t1 * t2, t1 + SuperPoly::gen(r, "x") * t2};
    auto e = gq1_one(r);
    auto xe = gq1_mul(x, e);
    CHECK(xe.a0 == x.a0);
    CHECK(xe.a1 == x.a1);
    GQ1Element lam{SuperPoly::constant(r, rat(3)), SuperPoly::zero(r)};
    auto a = gq1_mul(lam, x);
    auto b = gq1_mul(x, lam);
    CHECK(a.a0 == b.a0);
    CHECK(a.a1 == b.a1);

    // projection is a group homomorphism to the additive odd line
    std::mt19937 rng(77);
    for (int i = 0; i < 30; ++i) {
        auto mk = [&]() {
            SuperPoly a0 = SuperPoly::even_gen(r, 0, static_cast<int>(rng() % 3) - 1) *
                           rat(1 + static_cast<long>(rng() % 3));
            a0 = a0 + t1 * t2 * rat(static_cast<long>(rng() % 3) - 1);
            SuperPoly a1 = t1 * rat(static_cast<long>(rng() % 3) - 1) +
                           t2 * rat(static_cast<long>(rng() % 3) - 1);
            return GQ1Element{a0, a1};
        };
        auto xx = mk();
        auto yy = mk();
        CHECK(gq1_project(gq1_mul(xx, yy)) == gq1_project(xx) + gq1_project(yy));
    }

    // 2-cocycle identity c(a,b) c(a+b,d) = c(b,d) c(a,b+d)
    auto rr = RingDescriptor::make({}, {"s1", "s2", "s3", "s4", "s5", "s6"});
    std::mt19937 rng2(99);
    for (int i = 0; i < 30; ++i) {
        auto mko = [&]() {
            SuperPoly p(rr);
            for (auto& m : monomials_up_to(rr, 0, 1))
                p.add_term(m, rat(static_cast<long>(rng2() % 3) - 1));
            return p;
        };
        auto a = mko(), b = mko(), d = mko();
        CHECK(gq1_cocycle(a, b) * gq1_cocycle(a + b, d) ==
              gq1_cocycle(b, d) * gq1_cocycle(a, b + d));
    }
}
