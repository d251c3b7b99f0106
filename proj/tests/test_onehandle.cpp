#include <catch2/catch_amalgamated.hpp>

#include "skein/onehandle.hpp"

using namespace skein;
using F2 = Fp<2>;
using F3 = Fp<3>;

namespace {

TangleWord trivial_11() {
    TangleWord w;
    w.bottom = {1};
    return w;
}

template <class F>
ChainMap<F> dot_endo(const Complex<F>& m) {
    CobShape dot = identity_shape(identity_tangle(1));
    dot.dots[0] = 1;
    ChainMap<F> f;
    f.dq = 2;
    for (int i = 0; i < m.nobj(); ++i) f.set(i, i, cob_term<F>(dot));
    return f;
}

} // namespace

TEST_CASE("hom spaces mod homotopy of the C_k complexes") {
    auto c0 = ck_complex<Rational>(0);
    auto c1 = ck_complex<Rational>(1);
    REQUIRE(c0.verify());
    REQUIRE(c1.verify());
    for (int k = 0; k <= 3; ++k) {
        auto ck = ck_complex<Rational>(k);
        REQUIRE(hom_mod_homotopy(ck, ck, 0, 0).dim() == 1);
    }
    // no degree-zero maps C_0 -> C_1, one projection the other way
    REQUIRE(hom_mod_homotopy(c0, c1, 0, 0).dim() == 0);
    REQUIRE(hom_mod_homotopy(c1, c0, 0, 0).dim() == 1);
    // the dot endomorphism of C_1 survives in one dimension
    REQUIRE(hom_mod_homotopy(c1, c1, 0, 2).dim() == 1);

    auto end0 = hom_mod_homotopy(c1, c1, 0, 0);
    auto cls = end0.project(end0.ambient(identity_map(c1)));
    REQUIRE(cls.size() == 1);
    REQUIRE(cls[0] == Rational(1));
    auto back = end0.materialize(cls);
    REQUIRE(verify_chain_map(c1, c1, back));
}

TEST_CASE("trace classes of the two-point ball") {
    auto classes = hh0_two_point<Rational>();
    REQUIRE(classes.size() == 4);
    REQUIRE(classes[0].label == "Id_C0");
    REQUIRE(classes[1].label == "Id_C1");
    REQUIRE(classes[2].label == "RX_C0");
    REQUIRE(classes[3].label == "RX_C1");
    REQUIRE(classes[0].bidegree == std::pair(0, 0));
    REQUIRE(classes[1].bidegree == std::pair(0, 0));
    REQUIRE(classes[2].bidegree == std::pair(0, 2));
    REQUIRE(classes[3].bidegree == std::pair(1, 4));

    // same answer in positive characteristic
    auto mod3 = hh0_two_point<F3>();
    REQUIRE(mod3.size() == 4);
    for (size_t n = 0; n < 4; ++n) {
        REQUIRE(mod3[n].label == classes[n].label);
        REQUIRE(mod3[n].bidegree == classes[n].bidegree);
    }

    auto empty = hh0_points<Rational>(0);
    REQUIRE(empty.size() == 1);
    REQUIRE(empty[0].label == "Id_empty");
    REQUIRE(empty[0].bidegree == std::pair(0, 0));

    REQUIRE_THROWS_AS(hh0_points<Rational>(2), std::invalid_argument);
}

TEST_CASE("decompose_11 on the identity tangle") {
    auto pats = decompose_11<Rational>(trivial_11());
    REQUIRE(pats == std::vector<CkPattern>{{0, 0, 0, 1}});
}

TEST_CASE("decompose_11 on the long trefoil over Q and F2") {
    TangleWord w = two_bridge_open({3});
    auto rational = decompose_11<Rational>(w);
    REQUIRE(rational == std::vector<CkPattern>{{0, 0, -2, 1}, {1, 2, -6, 1}});

    // the integral differential on the would-be C_1 block is twice the dot,
    // so over F_2 the block falls apart into shifted copies of C_0
    auto mod2 = decompose_11<F2>(w);
    REQUIRE(mod2 ==
            std::vector<CkPattern>{{0, 0, -2, 1}, {0, 2, -6, 1}, {0, 3, -8, 1}});
}

TEST_CASE("decompose_11 on the long figure-eight") {
    auto pats = decompose_11<Rational>(two_bridge_open({2, 2}));
    REQUIRE(pats ==
            std::vector<CkPattern>{{0, 0, 0, 1}, {1, -2, 4, 1}, {1, 1, -2, 1}});
}

TEST_CASE("closing the decomposition reproduces the link homology") {
    for (auto& cf : std::vector<std::vector<int>>{
             {3}, {2, 2}, {5}, {2, 3}, {4, 2}, {3, 1, 2}, {2, 1, 1, 2}}) {
        INFO("continued fraction [" << cf.size() << " terms]");
        auto pats = decompose_11<Rational>(two_bridge_open(cf));
        int rank = 0;
        for (auto& p : pats) rank += (p.k + 1) * p.multiplicity;
        auto closed = homology_table<Rational>(two_bridge(cf));
        REQUIRE(ck_closure_table(pats) == closed);
        REQUIRE(2 * pats.size() == closed.total());
        REQUIRE(rank >= static_cast<int>(pats.size()));
    }
}

TEST_CASE("decompose_11 error modes") {
    TangleWord braid;
    braid.bottom = {1, 1};
    REQUIRE_THROWS_AS(decompose_11<Rational>(braid), std::invalid_argument);

    // a C_2 block is not allowed in the two-point category
    auto c2 = ck_complex<Rational>(2);
    try {
        decompose_complex_11(c2);
        FAIL("expected CkPatternError");
    } catch (const CkPatternError& e) {
        REQUIRE(e.found() == std::vector<CkPattern>{{2, 0, 0, 1}});
    }

    // an invertible entry means the complex was never minimal
    Complex<Rational> sloppy;
    FlatTangle arc = identity_tangle(1);
    sloppy.objs.push_back({0, 0, arc});
    sloppy.objs.push_back({1, 0, arc});
    sloppy.set_entry(0, 1, cob_term<Rational>(identity_shape(arc)));
    REQUIRE_THROWS_AS(decompose_complex_11(sloppy), std::invalid_argument);
}

TEST_CASE("trace_class reads off multiplicities") {
    auto sc = scan_word<Rational>(two_bridge_open({3}));
    const Complex<Rational>& m = sc.result;

    auto id_cls = trace_class(m, identity_map(m));
    REQUIRE(id_cls == std::array<Rational, 4>{1, 1, 0, 0});

    auto sc1 = scan_word<Rational>(trivial_11());
    auto dot_cls = trace_class(sc1.result, dot_endo(sc1.result));
    REQUIRE(dot_cls == std::array<Rational, 4>{0, 0, 1, 0});

    ChainMap<Rational> zero;
    auto zero_cls = trace_class(m, zero);
    REQUIRE(zero_cls == std::array<Rational, 4>{0, 0, 0, 0});

    // dot endomorphism of the long trefoil: RX_C0 from the C_0 block, while
    // on the C_1 block the dot is nullhomotopic
    auto dot_tref = trace_class(m, dot_endo(m));
    REQUIRE(dot_tref == std::array<Rational, 4>{0, 0, 1, 0});

    ChainMap<Rational> bad;
    bad.m[{0, 0}] = cob_term<Rational>(identity_shape(identity_tangle(1)));
    bad.dq = 2;
    REQUIRE_THROWS_AS(trace_class(m, bad), std::invalid_argument);
}

TEST_CASE("trace_class is symmetric under swapping a composition") {
    auto sc = scan_word<Rational>(two_bridge_open({3}));
    const Complex<Rational>& a = sc.result;
    auto c1 = ck_complex<Rational>(1);

    // the trefoil complex contains a shifted C_1 summand; project and include
    auto fwd = hom_mod_homotopy(a, c1, -2, 6);
    auto bwd = hom_mod_homotopy(c1, a, 2, -6);
    REQUIRE(fwd.dim() == 1);
    REQUIRE(bwd.dim() == 1);
    std::vector<Rational> unit{1};
    auto f = fwd.materialize(unit);
    auto g = bwd.materialize(unit);

    auto on_c1 = trace_class(c1, compose_maps(f, g));
    auto on_a = trace_class(a, compose_maps(g, f));
    REQUIRE(on_c1 == on_a);
    // and the composite is the identity class of C_1 up to a scalar
    REQUIRE(on_c1[0] == 0);
    REQUIRE(on_c1[1] != 0);
    REQUIRE(on_c1[2] == 0);
    REQUIRE(on_c1[3] == 0);
}

TEST_CASE("lefschetz traces of identity movies count states") {
    TangleWord unknot{{}, {cup(1, false), cap(1)}, {}};
    REQUIRE(lefschetz_trace(Movie<Rational>(unknot)) == Rational(2));

    TangleWord empty_link;
    REQUIRE(lefschetz_trace(Movie<Rational>(empty_link)) == Rational(1));

    REQUIRE(lefschetz_trace(Movie<Rational>(two_bridge({2}))) == Rational(4));
    REQUIRE(lefschetz_trace(Movie<Rational>(braid_closure(2, {}))) == Rational(4));
    REQUIRE(lefschetz_trace(Movie<Rational>(braid_closure(2, {1, 1, 1}))) ==
            Rational(2));
    REQUIRE(lefschetz_trace(Movie<Rational>(braid_closure(3, {1, -2, 1, -2}))) ==
            Rational(2));
}

TEST_CASE("lefschetz trace of a dotted endomorphism vanishes off degree zero") {
    TangleWord unknot{{}, {cup(1, false), cap(1)}, {}};
    Movie<Rational> mv(unknot);
    mv.dot_frame(1, 1);
    REQUIRE(lefschetz_trace(mv) == Rational(0));
}

TEST_CASE("lefschetz trace rejects non-endomorphisms") {
    TangleWord unknot{{}, {cup(1, false), cap(1)}, {}};
    Movie<Rational> mv(unknot);
    mv.birth(2, 1);
    REQUIRE_THROWS_AS(lefschetz_trace(mv), std::invalid_argument);

    auto sc = scan_word<Rational>(trivial_11());
    REQUIRE_THROWS_AS(lefschetz_trace(sc.result, identity_map(sc.result)),
                      std::invalid_argument);
}

TEST_CASE("k0 lower bounds from powers of the braid generator") {
    auto cert = k0_lower_bound<Rational>(2, 3);
    REQUIRE(cert.bound == 4);
    REQUIRE(cert.collisions.empty());
    REQUIRE(cert.entries.size() == 4);
    for (int k = 0; k <= 3; ++k) {
        const auto& e = cert.entries[k];
        REQUIRE(e.power == k);
        REQUIRE(e.end0_dim == 1);
        int objects = 0;
        for (auto& [sig, n] : e.signature) objects += n;
        REQUIRE(objects == k + 1);
    }

    int prev = 0;
    for (int m = 0; m <= 3; ++m) {
        int b = k0_lower_bound<Rational>(2, m).bound;
        REQUIRE(b == m + 1);
        REQUIRE(b > prev);
        prev = b;
    }

    REQUIRE_THROWS_AS(k0_lower_bound<Rational>(1, 2), std::invalid_argument);
}
