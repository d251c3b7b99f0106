#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracle_kh.hpp"
#include "skein/complex.hpp"

using namespace skein;
using F2 = Fp<2>;

namespace {

TangleWord random_braid_word(std::mt19937& rng, int strands, int len) {
    std::vector<int> braid;
    for (int i = 0; i < len; ++i) {
        int j = 1 + static_cast<int>(rng() % (strands - 1));
        braid.push_back((rng() % 2) ? j : -j);
    }
    return braid_closure(strands, braid);
}

template <class F>
void check_against_oracle(const TangleWord& w) {
    auto expected = oracle::cube_homology<F>(w);
    auto got = homology_table<F>(w);
    INFO("oracle:\n" << expected.table() << "engine:\n" << got.table());
    REQUIRE(got == expected);
}

} // namespace

TEST_CASE("letter complexes are well formed") {
    TangleWord tre = braid_closure(2, {1, 1, 1});
    auto vw = validate(tre);
    for (size_t k = 0; k < tre.letters.size(); ++k) {
        auto c = letter_complex<Rational>(tre.letters[k], vw.width_at(static_cast<int>(k)),
                                          vw.sign[k]);
        REQUIRE(c.verify());
    }
    TangleWord neg = braid_closure(2, {-1});
    auto vn = validate(neg);
    auto c = letter_complex<Rational>(neg.letters[2], vn.width_at(2), vn.sign[2]);
    REQUIRE(c.objs[0].h == -1);
    REQUIRE(c.objs[0].q == 2);
    REQUIRE(c.objs[1].q == 1);
    REQUIRE(c.verify());
}

TEST_CASE("stacked complexes satisfy d2 = 0 and degree homogeneity") {
    TangleWord w = braid_closure(2, {1, -1});
    auto vw = validate(w);
    Complex<Rational> cur;
    cur.objs.push_back({0, 0, identity_tangle(0)});
    for (size_t k = 0; k < w.letters.size(); ++k) {
        auto lc = letter_complex<Rational>(w.letters[k], vw.width_at(static_cast<int>(k)),
                                           vw.sign[k]);
        cur = stack_complex(cur, lc);
        REQUIRE(cur.verify());
    }
}

TEST_CASE("simplify tracks mutually inverse equivalences") {
    TangleWord w = braid_closure(2, {1, 1});
    auto vw = validate(w);
    Complex<Rational> cur;
    cur.objs.push_back({0, 0, identity_tangle(0)});
    for (size_t k = 0; k < w.letters.size(); ++k) {
        auto lc = letter_complex<Rational>(w.letters[k], vw.width_at(static_cast<int>(k)),
                                           vw.sign[k]);
        Complex<Rational> big = stack_complex(cur, lc);
        auto simp = simplify(big, true);
        REQUIRE(simp.c.verify());
        REQUIRE(verify_chain_map(big, simp.c, simp.p));
        REQUIRE(verify_chain_map(simp.c, big, simp.s));
        REQUIRE(compose_maps(simp.p, simp.s) == identity_map(simp.c));
        cur = simp.c;
    }
    // Hopf link: minimal complex has four objects and zero differential
    REQUIRE(cur.nobj() == 4);
    REQUIRE(cur.d.empty());
}

TEST_CASE("engine matches oracle on the frozen links, both fields") {
    std::vector<TangleWord> words;
    words.push_back(TangleWord{{}, {cup(1, false), cap(1)}, {}}); // unknot
    words.push_back(braid_closure(2, {1, 1}));                    // Hopf+
    words.push_back(braid_closure(2, {-1, -1}));                  // Hopf-
    words.push_back(braid_closure(2, {1, 1, 1}));                 // right trefoil
    words.push_back(braid_closure(2, {-1, -1, -1}));              // left trefoil
    words.push_back(braid_closure(3, {1, -2, 1, -2}));            // figure-eight
    for (auto& w : words) {
        check_against_oracle<Rational>(w);
        check_against_oracle<F2>(w);
    }
}

TEST_CASE("engine matches oracle on random braid closures") {
    std::mt19937 rng(20260817);
    for (int trial = 0; trial < 10; ++trial) {
        int strands = 2 + static_cast<int>(rng() % 3);
        int len = 3 + static_cast<int>(rng() % 6);
        TangleWord w = random_braid_word(rng, strands, len);
        INFO("strands " << strands << " length " << len << " trial " << trial);
        check_against_oracle<Rational>(w);
        check_against_oracle<F2>(w);
    }
}

TEST_CASE("elimination order does not change the minimal object table") {
    std::mt19937 seed(7);
    TangleWord w = braid_closure(3, {1, -2, 1, -2});
    auto base = homology_table<Rational>(w);
    for (int trial = 0; trial < 3; ++trial) {
        std::mt19937 rng(seed());
        auto sc = scan_word<Rational>(w, false, &rng);
        REQUIRE(sc.result.d.empty());
        REQUIRE(sc.result.object_table() == base);
    }
}

TEST_CASE("two-bridge knots match the oracle through the engine") {
    for (auto& cf : std::vector<std::vector<int>>{{3}, {2, 2}, {2, 3}}) {
        TangleWord w = two_bridge(cf);
        check_against_oracle<Rational>(w);
    }
}
