#include <catch2/catch_amalgamated.hpp>

#include "skein/cable.hpp"
#include "skein/field.hpp"

using namespace skein;
using F2 = Fp<2>;

namespace {

TangleWord unknot_word(int framing = 0) {
    TangleWord w;
    w.letters = {cup(1, true), cap(1)};
    w.framing = {framing};
    return w;
}

TangleWord nested_three() {
    TangleWord w;
    w.letters = {cup(1, true), cup(2, true), cup(3, true), cap(3), cap(2), cap(1)};
    w.framing = {0, 0, 0};
    return w;
}

CableSpec spec1(int km, int kp) {
    CableSpec s;
    s.per = {{km, kp}};
    return s;
}

// the permutation chain map sending generator i to generator pi[i] with
// coefficient 1; on a crossingless diagram's minimal complex every object
// has the empty tangle, so the entries are empty-cobordism identities
template <class F>
ChainMap<F> permutation_map(const Complex<F>& c, const std::vector<int>& pi) {
    ChainMap<F> m;
    for (int i = 0; i < c.nobj(); ++i) {
        REQUIRE(c.objs[i].tangle == c.objs[pi[i]].tangle);
        m.set(i, pi[i], cob_term<F>(identity_shape(c.objs[i].tangle)));
    }
    return m;
}

} // namespace

TEST_CASE("cable: identity cabling reproduces the companion word", "[cable]") {
    for (const TangleWord& w :
         {braid_closure(2, {1, 1, 1}), braid_closure(2, {1, 1}), two_bridge({2, 2})}) {
        TangleWord c = cable(w, identity_cabling(validate(w).n_components));
        REQUIRE(c.letters == w.letters);
    }
    REQUIRE(cable(unknot_word(5), identity_cabling(1)).letters == unknot_word().letters);
}

TEST_CASE("cable: (1,1)-cable of the round unknot", "[cable]") {
    TangleWord c = cable(unknot_word(), spec1(1, 1));
    std::vector<Letter> expect = {cup(1, false), cup(2, true), cap(2), cap(1)};
    REQUIRE(c.letters == expect);
}

TEST_CASE("cable: framing excess becomes a full twist", "[cable]") {
    TangleWord plus = cable(unknot_word(1), spec1(1, 1));
    std::vector<Letter> eplus = {cup(1, false), cup(2, true), xpos(3), xpos(3), cap(2), cap(1)};
    REQUIRE(plus.letters == eplus);

    TangleWord minus = cable(unknot_word(-1), spec1(1, 1));
    std::vector<Letter> eminus = {cup(1, false), cup(2, true), xneg(3), xneg(3), cap(2), cap(1)};
    REQUIRE(minus.letters == eminus);

    // the antiparallel clasp pair is a Hopf link: framing +1 gives the
    // negative oriented Hopf, framing -1 the positive one
    BigradedDims hminus, hplus;
    hminus.add(-2, 4);
    hminus.add(-2, 6);
    hminus.add(0, 0);
    hminus.add(0, 2);
    hplus.add(0, 0);
    hplus.add(0, -2);
    hplus.add(2, -4);
    hplus.add(2, -6);
    REQUIRE(homology_table<Rational>(plus) == hminus);
    REQUIRE(homology_table<Rational>(minus) == hplus);
    REQUIRE(homology_table<F2>(plus) == hminus);
}

TEST_CASE("cable: mirror commutes with cabling", "[cable]") {
    TangleWord tref = two_bridge({3});
    tref.framing = {2};
    CableSpec s = spec1(1, 2);
    REQUIRE(cable(mirror(tref), s).letters == mirror(cable(tref, s)).letters);
}

TEST_CASE("cable: rejects bad input", "[cable]") {
    TangleWord open;
    open.bottom = {1, -1};
    REQUIRE_THROWS_AS(cable(open, identity_cabling(1)), std::invalid_argument);
    REQUIRE_THROWS_AS(cable(unknot_word(), identity_cabling(2)), std::invalid_argument);
    REQUIRE_THROWS_AS(cable(unknot_word(), spec1(-1, 2)), std::invalid_argument);

    REQUIRE_THROWS_AS(annulus_map<Rational>(unknot_word(), spec1(0, 1), 0, -1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(annulus_map<Rational>(unknot_word(), spec1(0, 1), 1, 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(braid_generator_map<Rational>(unknot_word(), spec1(0, 2), 0, 2),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(braid_generator_map<Rational>(unknot_word(), spec1(0, 2), 0, 0),
                      std::invalid_argument);

    // crossings in the cable word (knotted companion, or twisted framing)
    REQUIRE_THROWS_AS(braid_generator_map<Rational>(two_bridge({3}), spec1(0, 2), 0, 1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(annulus_map<Rational>(unknot_word(1), spec1(1, 1), 0, 0),
                      std::invalid_argument);
}

TEST_CASE("cable: annulus map is the dotted coevaluation", "[cable]") {
    // from the empty cable: 1 |-> 1 (x) X + X (x) 1, X (x) X, 0 as dots grow
    auto psi0 = annulus_map<Rational>(unknot_word(), spec1(0, 0), 0, 0);
    REQUIRE(psi0.src.nobj() == 1);
    REQUIRE(psi0.tgt.nobj() == 4);
    REQUIRE(psi0.map.dq == 0);
    ChainMap<Rational> e0;
    e0.m[{0, 1}] = cob_term<Rational>(identity_shape(psi0.tgt.objs[1].tangle));
    e0.m[{0, 2}] = cob_term<Rational>(identity_shape(psi0.tgt.objs[2].tangle));
    REQUIRE(psi0.map.m == e0.m);

    auto psi1 = annulus_map<Rational>(unknot_word(), spec1(0, 0), 0, 1);
    REQUIRE(psi1.map.dq == 2);
    REQUIRE(psi1.map.m.size() == 1);
    REQUIRE(psi1.map.entry(0, 3) != nullptr);
    REQUIRE(psi1.tgt.objs[3].q == 2);

    auto psi2 = annulus_map<Rational>(unknot_word(), spec1(0, 0), 0, 2);
    REQUIRE(psi2.map.dq == 4);
    REQUIRE(psi2.map.m.empty());

    // from level (0,1): v |-> v (x) (1 (x) X + X (x) 1) on the new pair
    auto psi = annulus_map<Rational>(unknot_word(), spec1(0, 1), 0, 0);
    REQUIRE(psi.src.nobj() == 2);
    REQUIRE(psi.tgt.nobj() == 8);
    std::vector<std::pair<int, int>> entries = {{0, 1}, {0, 2}, {1, 5}, {1, 6}};
    REQUIRE(psi.map.m.size() == entries.size());
    for (auto [i, j] : entries) {
        REQUIRE(psi.map.entry(i, j) != nullptr);
        REQUIRE(psi.src.objs[i].q == psi.tgt.objs[j].q);
    }
}

TEST_CASE("cable: braid generators act as strand transpositions", "[cable]") {
    auto b = braid_generator_map<Rational>(unknot_word(), spec1(0, 2), 0, 1);
    REQUIRE(b.src.nobj() == 4);
    REQUIRE(b.map.dh == 0);
    REQUIRE(b.map.dq == 0);
    REQUIRE(b.map == permutation_map<Rational>(b.src, {0, 2, 1, 3}));
    REQUIRE(compose_maps(b.map, b.map) == identity_map(b.src));

    // parallel block of the (1,2)-cable
    auto c = braid_generator_map<Rational>(unknot_word(), spec1(1, 2), 0, 2);
    REQUIRE(c.src.nobj() == 8);
    REQUIRE(c.map == permutation_map<Rational>(c.src, {0, 1, 3, 2, 5, 4, 6, 7}));

    // at the orientation interface only the doubled generator exists; it
    // acts as the identity
    auto d = braid_generator_map<Rational>(unknot_word(), spec1(1, 1), 0, 1);
    REQUIRE(d.map == identity_map(d.src));
    auto e = braid_generator_map<F2>(unknot_word(), spec1(1, 2), 0, 1);
    REQUIRE(e.map == identity_map(e.src));
}

TEST_CASE("cable: maps on a nested multi-circle companion", "[cable]") {
    CableSpec s;
    s.per = {{0, 2}, {0, 1}, {0, 1}};
    auto b = braid_generator_map<Rational>(nested_three(), s, 0, 1);
    REQUIRE(b.src.nobj() == 16);
    REQUIRE(compose_maps(b.map, b.map) == identity_map(b.src));
    REQUIRE(b.map != identity_map(b.src));
    long moved = 0;
    for (auto& [ij, v] : b.map.m) moved += ij.first != ij.second;
    REQUIRE(moved == 8); // transposing one circle pair fixes half the basis

    auto psi = annulus_map<F2>(nested_three(), s, 1, 1);
    REQUIRE(psi.src.nobj() == 16);
    REQUIRE(psi.tgt.nobj() == 64);
    REQUIRE(psi.map.dq == 2);
    REQUIRE(psi.map.m.size() == 16); // v |-> v (x) X(x)X is injective on the basis
    for (auto& [ij, v] : psi.map.m) {
        REQUIRE(psi.src.objs[ij.first].q + 2 == psi.tgt.objs[ij.second].q);
        REQUIRE(v.terms.size() == 1);
        REQUIRE(v.terms[0].second == F2(1));
    }
}
