#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "supergeo/superpoly.hpp"

using namespace supergeo;

namespace {

RingPtr ring_xt2() { return RingDescriptor::make({"x"}, {"t1", "t2"}, {"x"}); }

SuperPoly rand_poly(std::mt19937& rng, const RingPtr& r, int max_terms, int max_deg,
                    bool allow_neg = false) {
    SuperPoly p(r);
    int nt = 1 + static_cast<int>(rng() % max_terms);
    for (int t = 0; t < nt; ++t) {
        Monomial m;
        m.even.resize(r->n_even());
        for (int i = 0; i < r->n_even(); ++i) {
            int e = static_cast<int>(rng() % (max_deg + 1));
            if (allow_neg && r->is_invertible(i) && (rng() & 1)) e = -e;
            m.even[i] = e;
        }
        for (int o = 0; o < r->n_odd(); ++o)
            if (rng() & 1) m.odd.push_back(o);
        long c = static_cast<long>(rng() % 9) - 4;
        p.add_term(std::move(m), rat(c));
    }
    return p;
}

SuperPoly rand_homogeneous(std::mt19937& rng, const RingPtr& r, int parity, int max_terms,
                           int max_deg) {
    for (int tries = 0; tries < 200; ++tries) {
        SuperPoly p = rand_poly(rng, r, max_terms, max_deg).parity_part(parity);
        if (!p.is_zero()) return p;
    }
    return SuperPoly::zero(r);
}

}  // namespace

TEST_CASE("Koszul sign on odd generators") {
    auto r = ring_xt2();
    auto t1 = SuperPoly::gen(r, "t1");
    auto t2 = SuperPoly::gen(r, "t2");
    CHECK((t1 * t2).str() == "t1*t2");
    CHECK((t2 * t1).str() == "-t1*t2");
    CHECK((t1 * t1).is_zero());
    CHECK((t2 * t1) == -(t1 * t2));
}

TEST_CASE("nilpotent units: (1+t1t2)(1-t1t2) = 1") {
    auto r = ring_xt2();
    auto one = SuperPoly::one(r);
    auto n = SuperPoly::gen(r, "t1") * SuperPoly::gen(r, "t2");
    CHECK((one + n) * (one - n) == one);
}

TEST_CASE("(x+t1)^2 = x^2 + 2x t1") {
    auto r = ring_xt2();
    auto x = SuperPoly::gen(r, "x");
    auto t1 = SuperPoly::gen(r, "t1");
    auto f = x + t1;
    CHECK(f * f == x * x + rat(2) * (x * t1));
}

TEST_CASE("invert_even on 1 + t1t2 and on Laurent monomials") {
    auto r = ring_xt2();
    auto one = SuperPoly::one(r);
    auto n = SuperPoly::gen(r, "t1") * SuperPoly::gen(r, "t2");
    CHECK((one + n).invert_even() == one - n);

    auto x = SuperPoly::gen(r, "x");
    CHECK(x.invert_even() == SuperPoly::even_gen(r, 0, -1));

    // x + t1t2 -> x^-1 - x^-2 t1 t2, checked literally and by multiplying back
    auto f = x + n;
    auto finv = f.invert_even();
    auto expect = SuperPoly::even_gen(r, 0, -1) - SuperPoly::even_gen(r, 0, -2) * n;
    CHECK(finv == expect);
    CHECK(f * finv == one);
    CHECK(finv * f == one);

    auto rr = RingDescriptor::make({"y"}, {"s"});
    CHECK_THROWS_AS(SuperPoly::gen(rr, "y").invert_even(), std::domain_error);
    CHECK_THROWS_AS(SuperPoly::gen(rr, "s").invert_even(), std::domain_error);
    CHECK_THROWS_AS((SuperPoly::gen(rr, "y") + SuperPoly::one(rr)).invert_even(),
                    std::domain_error);
}

TEST_CASE("parity classification") {
    auto r = ring_xt2();
    CHECK(SuperPoly::zero(r).parity_class() == ParityClass::Zero);
    CHECK(SuperPoly::gen(r, "x").parity_class() == ParityClass::Even);
    CHECK(SuperPoly::gen(r, "t1").parity_class() == ParityClass::Odd);
    CHECK((SuperPoly::gen(r, "x") + SuperPoly::gen(r, "t1")).parity_class() == ParityClass::Mixed);
    auto n = SuperPoly::gen(r, "t1") * SuperPoly::gen(r, "t2");
    CHECK(n.parity_class() == ParityClass::Even);
}

TEST_CASE("odd elements square to zero") {
    std::mt19937 rng(7);
    auto r = RingDescriptor::make({"x", "y"}, {"t1", "t2", "t3"}, {"x"});
    for (int i = 0; i < 30; ++i) {
        auto f = rand_homogeneous(rng, r, 1, 4, 2);
        CHECK((f * f).is_zero());
    }
}

TEST_CASE("supercommutativity and associativity on random homogeneous elements") {
    std::mt19937 rng(99);
    auto r = RingDescriptor::make({"x", "y"}, {"t1", "t2", "t3"}, {"x"});
    for (int i = 0; i < 40; ++i) {
        int pf = static_cast<int>(rng() & 1), pg = static_cast<int>(rng() & 1);
        auto f = rand_homogeneous(rng, r, pf, 3, 2);
        auto g = rand_homogeneous(rng, r, pg, 3, 2);
        auto fg = f * g;
        auto gf = g * f;
        if (pf == 1 && pg == 1)
            CHECK(fg == -gf);
        else
            CHECK(fg == gf);

        auto h = rand_poly(rng, r, 3, 2);
        CHECK((f * g) * h == f * (g * h));
    }
}

TEST_CASE("parity grading: product of homogeneous is homogeneous of summed parity") {
    std::mt19937 rng(4242);
    auto r = RingDescriptor::make({"x"}, {"t1", "t2", "t3"});
    for (int i = 0; i < 30; ++i) {
        int pf = static_cast<int>(rng() & 1), pg = static_cast<int>(rng() & 1);
        auto f = rand_homogeneous(rng, r, pf, 3, 2);
        auto g = rand_homogeneous(rng, r, pg, 3, 2);
        auto fg = f * g;
        if (!fg.is_zero()) {
            auto want = (pf + pg) % 2 ? ParityClass::Odd : ParityClass::Even;
            CHECK(fg.parity_class() == want);
        }
    }
}

TEST_CASE("hom_apply: identity, kill-odds, P1 transition") {
    auto r = ring_xt2();
    std::mt19937 rng(11);
    auto f = rand_poly(rng, r, 5, 3, true);
    auto id = GenAssignment::identity(r);
    CHECK(id.apply(f) == f);

    // all odd generators to zero gives the reduced part
    GenAssignment kill;
    kill.source = r;
    kill.target = r;
    kill.even_images = {SuperPoly::gen(r, "x")};
    kill.odd_images = {SuperPoly::zero(r), SuperPoly::zero(r)};
    kill.validate();
    CHECK(kill.apply(f) == f.reduced_part());

    // u -> u^-1 applied to u^2 + 1
    auto ru = RingDescriptor::make({"u"}, {}, {"u"});
    GenAssignment inv;
    inv.source = ru;
    inv.target = ru;
    inv.even_images = {SuperPoly::even_gen(ru, 0, -1)};
    inv.validate();
    auto uu = SuperPoly::even_gen(ru, 0, 2) + SuperPoly::one(ru);
    CHECK(inv.apply(uu) == SuperPoly::even_gen(ru, 0, -2) + SuperPoly::one(ru));
    // involution: applying twice is the identity
    CHECK(inv.then(inv).apply(uu) == uu);
}

TEST_CASE("hom_apply validation errors") {
    auto r = ring_xt2();
    GenAssignment bad;
    bad.source = r;
    bad.target = r;
    bad.even_images = {SuperPoly::gen(r, "t1")};  // odd image for even generator
    bad.odd_images = {SuperPoly::gen(r, "t1"), SuperPoly::gen(r, "t2")};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);

    GenAssignment noninv;
    noninv.source = r;
    noninv.target = r;
    // x is invertible but its image 1 + x is not
    noninv.even_images = {SuperPoly::one(r) + SuperPoly::gen(r, "x")};
    noninv.odd_images = {SuperPoly::gen(r, "t1"), SuperPoly::gen(r, "t2")};
    CHECK_THROWS_AS(noninv.validate(), std::domain_error);
}

TEST_CASE("hom composition: apply(g then f) == apply stepwise") {
    std::mt19937 rng(31337);
    auto r = RingDescriptor::make({"x", "y"}, {"t1", "t2"}, {"x"});
    GenAssignment a;
    a.source = r;
    a.target = r;
    a.even_images = {SuperPoly::even_gen(r, 0, -1),
                     SuperPoly::gen(r, "y") + SuperPoly::gen(r, "t1") * SuperPoly::gen(r, "t2")};
    a.odd_images = {SuperPoly::gen(r, "t2"), -SuperPoly::gen(r, "t1")};
    a.validate();
    GenAssignment b;
    b.source = r;
    b.target = r;
    b.even_images = {SuperPoly::gen(r, "x") * SuperPoly::gen(r, "x"),
                     SuperPoly::gen(r, "y") + SuperPoly::one(r)};
    b.odd_images = {SuperPoly::gen(r, "t1") + SuperPoly::gen(r, "y") * SuperPoly::gen(r, "t2"),
                    SuperPoly::gen(r, "t2")};
    b.validate();
    auto ab = a.then(b);
    for (int i = 0; i < 20; ++i) {
        auto f = rand_poly(rng, r, 4, 2, true);
        CHECK(ab.apply(f) == b.apply(a.apply(f)));
    }
}

TEST_CASE("canonical form independent of evaluation order") {
    std::mt19937 rng(5150);
    auto r = RingDescriptor::make({"x", "y"}, {"t1", "t2", "t3", "t4"});
    for (int i = 0; i < 25; ++i) {
        auto f = rand_poly(rng, r, 3, 2);
        auto g = rand_poly(rng, r, 3, 2);
        auto h = rand_poly(rng, r, 3, 2);
        auto lhs = (f * g) * h;
        auto rhs = f * (g * h);
        CHECK(lhs == rhs);
        CHECK(lhs.terms() == rhs.terms());
    }
}

TEST_CASE("truncated rings drop high odd degree") {
    auto r = RingDescriptor::make({"x"}, {"t1", "t2", "t3"}, {}, 2);
    auto t1 = SuperPoly::gen(r, "t1");
    auto t2 = SuperPoly::gen(r, "t2");
    CHECK((t1 * t2).is_zero());
    CHECK(!t1.is_zero());
    auto full = RingDescriptor::make({"x"}, {"t1", "t2", "t3"});
    auto f = SuperPoly::gen(full, "t1") * SuperPoly::gen(full, "t2") + SuperPoly::one(full);
    CHECK(f.with_ring(r) == SuperPoly::one(r));
}

TEST_CASE("eval_reduced") {
    auto r = ring_xt2();
    auto x = SuperPoly::gen(r, "x");
    auto f = x * x + rat(2) * x + SuperPoly::gen(r, "t1") * SuperPoly::gen(r, "t2");
    CHECK(f.eval_reduced({rat(3)}) == rat(15));
    CHECK(SuperPoly::even_gen(r, 0, -1).eval_reduced({rat(2)}) == rat(1, 2));
    CHECK_THROWS_AS(SuperPoly::even_gen(r, 0, -1).eval_reduced({rat(0)}), std::domain_error);
}
