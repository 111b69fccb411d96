#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "supergeo/atlas.hpp"

using namespace supergeo;

TEST_CASE("P^1: two charts glued by u -> 1/u") {
    Atlas p1 = build_projective_superspace(1, 0);
    REQUIRE(p1.n_charts() == 2);
    const Overlap* ov = p1.overlap(0, 1);
    REQUIRE(ov != nullptr);
    RingPtr loc = p1.overlap_ring(0, 1);
    CHECK(ov->transition.even_images[0] == SuperPoly::even_gen(loc, 0, -1));
    auto rep = p1.verify();
    CHECK(rep.ok);
    CHECK(rep.pairs_checked == 2);
}

TEST_CASE("P^{1|2}: literal transition and certification") {
    Atlas x = build_projective_superspace(1, 2);
    const Overlap* ov = x.overlap(0, 1);
    REQUIRE(ov != nullptr);
    RingPtr loc = x.overlap_ring(0, 1);
    auto uinv = SuperPoly::even_gen(loc, 0, -1);
    CHECK(ov->transition.even_images[0] == uinv);
    CHECK(ov->transition.odd_images[0] == SuperPoly::gen(loc, "h0") * uinv);
    CHECK(ov->transition.odd_images[1] == SuperPoly::gen(loc, "h1") * uinv);
    CHECK(x.verify().ok);
}

TEST_CASE("P^2: triple-overlap cocycle condition holds") {
    Atlas p2 = build_projective_superspace(2, 0);
    auto rep = p2.verify();
    CHECK(rep.ok);
    CHECK(rep.triples_checked == 6);
    CHECK(rep.triples_skipped == 0);
}

TEST_CASE("G(1|0,2|0) reproduces the P^1 atlas") {
    Atlas g = build_supergrassmannian(1, 0, 2, 0);
    REQUIRE(g.n_charts() == 2);
    CHECK(g.charts[0].ring->n_even() == 1);
    CHECK(g.charts[0].ring->n_odd() == 0);
    const Overlap* ov = g.overlap(0, 1);
    REQUIRE(ov != nullptr);
    RingPtr loc = g.overlap_ring(0, 1);
    CHECK(ov->transition.even_images[0] == SuperPoly::even_gen(loc, 0, -1));
    CHECK(g.verify().ok);
}

TEST_CASE("G(1|0,2|2): chart shape and certification") {
    Atlas g = build_supergrassmannian(1, 0, 2, 2);
    REQUIRE(g.n_charts() == 2);
    CHECK(g.charts[0].ring->n_even() == 1);
    CHECK(g.charts[0].ring->n_odd() == 2);
    CHECK(g.verify().ok);
}

TEST_CASE("G(1|1,2|2): 4 charts of dimension 2|2, all pairs representable") {
    Atlas g = build_supergrassmannian(1, 1, 2, 2);
    REQUIRE(g.n_charts() == 4);
    for (const auto& c : g.charts) {
        CHECK(c.ring->n_even() == 2);
        CHECK(c.ring->n_odd() == 2);
    }
    int pairs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j && g.pair_representable(i, j)) ++pairs;
    CHECK(pairs == 12);
    auto rep = g.verify();
    CHECK(rep.ok);
    CHECK(rep.triples_checked > 0);
}

TEST_CASE("G(2|1,4|4): coordinate count a(m-a)+b(n-b) | a(n-b)+b(m-a)") {
    Atlas g = build_supergrassmannian(2, 1, 4, 4);
    REQUIRE(g.n_charts() == 24);
    for (const auto& c : g.charts) {
        CHECK(c.ring->n_even() == 2 * 2 + 1 * 3);
        CHECK(c.ring->n_odd() == 2 * 3 + 1 * 2);
    }
}

TEST_CASE("pi field on G(1|0,2|2) gives the literal chart derivation") {
    Atlas g = build_supergrassmannian(1, 0, 2, 2);
    auto v = pi_action_field(g, PiSymmetry::standard(2));
    const RingPtr& r = g.charts[0].ring;
    auto u = SuperPoly::gen(r, "f_e1_e0");
    auto h0 = SuperPoly::gen(r, "f_o0_e0");
    auto h1 = SuperPoly::gen(r, "f_o1_e0");
    const OddDerivation& d = v.fields[0].der();
    CHECK(d.even_images[r->even_index("f_e1_e0")] == h1 - u * h0);
    CHECK(d.odd_images[r->odd_index("f_o0_e0")] == -SuperPoly::one(r));
    CHECK(d.odd_images[r->odd_index("f_o1_e0")] == -u + h1 * h0);
    CHECK(field_compatible(g, v));
}

TEST_CASE("pi field on G(1|1,2|2): homological on every chart, compatible") {
    Atlas g = build_supergrassmannian(1, 1, 2, 2);
    auto v = pi_action_field(g, PiSymmetry::standard(2));  // certify checks v^2 = 0
    REQUIRE(static_cast<int>(v.fields.size()) == 4);
    CHECK(field_compatible(g, v));
}

TEST_CASE("pi_field_projective matches the literal P^{1|2} formulas") {
    Atlas x = build_projective_superspace(1, 2);
    auto v = pi_field_projective(x);
    const RingPtr& r = x.charts[0].ring;
    auto u = SuperPoly::gen(r, "u1");
    auto h0 = SuperPoly::gen(r, "h0");
    auto h1 = SuperPoly::gen(r, "h1");
    CHECK(v.fields[0].der().even_images[0] == h1 - u * h0);
    CHECK(v.fields[0].der().odd_images[0] == -SuperPoly::one(r));
    CHECK(v.fields[0].der().odd_images[1] == -u + h1 * h0);
    CHECK(field_compatible(x, v));
}

TEST_CASE("global freeness: free iff a != b") {
    {
        Atlas g = build_supergrassmannian(1, 0, 2, 2);
        auto v = pi_action_field(g, PiSymmetry::standard(2));
        auto fr = global_freeness(g, v, 1);
        CHECK(fr.kind == FreenessResult::Free);
        for (int i = 0; i < g.n_charts(); ++i)
            CHECK(v.fields[i].apply(*fr.per_chart[i].witness) == SuperPoly::one(g.charts[i].ring));
    }
    {
        Atlas g = build_supergrassmannian(1, 1, 2, 2);
        auto v = pi_action_field(g, PiSymmetry::standard(2));
        auto fr = global_freeness(g, v, 1);
        REQUIRE(fr.kind == FreenessResult::NotFree);
        // certificate point kills the reduced image of every generator
        const auto& cert = fr.per_chart.back();
        const auto& vd = v.fields[fr.chart].der();
        for (const auto& img : vd.odd_images)
            CHECK(img.reduced_part().eval_reduced(cert.point) == 0);
        for (const auto& img : vd.even_images) CHECK(img.reduced_part().is_zero());
    }
}

TEST_CASE("product atlas: P^1 x P^1 certifies; diagonal field is compatible") {
    Atlas p1 = build_projective_superspace(1, 0);
    Atlas prod = atlas_product(p1, p1);
    REQUIRE(prod.n_charts() == 4);
    CHECK(prod.verify().ok);

    Atlas x = build_projective_superspace(1, 2);
    Atlas xx = atlas_product(x, x);
    auto v = pi_field_projective(x);
    auto vv = field_sum(xx, x, v, x, v);
    CHECK(field_compatible(xx, vv));
    auto fr = global_freeness(xx, vv, 1);
    CHECK(fr.kind == FreenessResult::Free);
}

TEST_CASE("truncate: killing all odd variables of P^{1|2} gives P^1") {
    Atlas x = build_projective_superspace(1, 2);
    Atlas t = truncate_atlas(x, 1);
    Atlas p1 = build_projective_superspace(1, 0);
    REQUIRE(t.n_charts() == p1.n_charts());
    for (int i = 0; i < t.n_charts(); ++i)
        CHECK(t.charts[i].ring->same_as(*p1.charts[i].ring));
    for (const auto& [key, ov] : p1.overlaps) {
        const Overlap* tv = t.overlap(key.first, key.second);
        REQUIRE(tv != nullptr);
        for (size_t g = 0; g < ov.transition.even_images.size(); ++g)
            CHECK(tv->transition.even_images[g].terms() == ov.transition.even_images[g].terms());
    }
    CHECK(t.verify().ok);
}

TEST_CASE("truncate: idempotence") {
    Atlas x = build_projective_superspace(1, 2);
    Atlas t2 = truncate_atlas(x, 2);
    Atlas t22 = truncate_atlas(t2, 2);
    for (int i = 0; i < t2.n_charts(); ++i)
        CHECK(t2.charts[i].ring->same_as(*t22.charts[i].ring));
    for (const auto& [key, ov] : t2.overlaps) {
        const Overlap* sv = t22.overlap(key.first, key.second);
        REQUIRE(sv != nullptr);
        for (size_t g = 0; g < ov.transition.even_images.size(); ++g)
            CHECK(sv->transition.even_images[g].terms() == ov.transition.even_images[g].terms());
        for (size_t g = 0; g < ov.transition.odd_images.size(); ++g)
            CHECK(sv->transition.odd_images[g].terms() == ov.transition.odd_images[g].terms());
    }
    CHECK(t2.verify().ok);
}

TEST_CASE("CY truncation: n=1 splits, odd transforms as a 1-form") {
    Atlas cy = build_cy_truncation(1);
    REQUIRE(cy.n_charts() == 2);
    const Overlap* ov = cy.overlap(0, 1);
    REQUIRE(ov != nullptr);
    RingPtr loc = cy.overlap_ring(0, 1);
    // even twist vanishes in Lambda^2 of rank 1
    CHECK(ov->transition.even_images[0] == SuperPoly::even_gen(loc, 0, -1));
    // h -> -u^-2 h
    CHECK(ov->transition.odd_images[0] ==
          -(SuperPoly::even_gen(loc, 0, -2) * SuperPoly::odd_gen(loc, 0)));
    CHECK(cy.verify().ok);
}

TEST_CASE("CY truncation: n=2 gluing cocycle holds and the twist is nonzero") {
    Atlas cy = build_cy_truncation(2);
    REQUIRE(cy.n_charts() == 3);
    auto rep = cy.verify();
    CHECK(rep.ok);
    CHECK(rep.triples_checked == 6);
    bool twist_seen = false;
    for (const auto& [key, ov] : cy.overlaps)
        for (const auto& img : ov.transition.even_images)
            if (!img.nilpotent_part().is_zero()) twist_seen = true;
    CHECK(twist_seen);
}

TEST_CASE("pi symmetry validation") {
    auto p = PiSymmetry::standard(2);
    p.validate();
    PiSymmetry bad = p;
    bad.mat[2][0] = 2;  // p^2 != -id
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    Atlas g = build_supergrassmannian(1, 0, 2, 2);
    CHECK_THROWS_AS(pi_action_field(g, bad), std::domain_error);
}
