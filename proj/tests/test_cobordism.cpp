#include <catch2/catch_amalgamated.hpp>

#include <skein/cobordism.hpp>
#include <skein/field.hpp>

using namespace skein;
using F = Rational;
using F2 = Fp<2>;

namespace {

FlatTangle circle_tangle(int n = 1) {
    FlatTangle t;
    t.circles = n;
    return t;
}

template <class K>
CobLin<K> lin(CobShape s) {
    return cob_term<K>(std::move(s));
}

} // namespace

TEST_CASE("raw degrees of the generating shapes") {
    REQUIRE(raw_degree(identity_shape(identity_tangle(4))) == 0);
    REQUIRE(raw_degree(min_shape(identity_tangle(2), turnback_tangle(2, 1))) == 1); // saddle
    REQUIRE(raw_degree(birth_shape(circle_tangle(), 0, false)) == -1);
    REQUIRE(raw_degree(death_shape(circle_tangle(), 0, true)) == 1);
    CobShape dotted = identity_shape(identity_tangle(1));
    dotted.dots[0] = 1;
    REQUIRE(raw_degree(dotted) == 2);
}

TEST_CASE("sphere evaluations") {
    auto birth = lin<F>(birth_shape(circle_tangle(), 0, false));
    auto birth_dot = lin<F>(birth_shape(circle_tangle(), 0, true));
    auto death = lin<F>(death_shape(circle_tangle(), 0, false));
    auto death_dot = lin<F>(death_shape(circle_tangle(), 0, true));
    auto id_empty = lin<F>(identity_shape(FlatTangle{}));

    REQUIRE(compose(death, birth).is_zero());          // sphere = 0
    REQUIRE(compose(death_dot, birth) == id_empty);    // one dot = 1
    REQUIRE(compose(death, birth_dot) == id_empty);
    REQUIRE(compose(death_dot, birth_dot).is_zero());  // two dots = 0
}

TEST_CASE("torus evaluates to 2, and to 0 in characteristic 2") {
    // eps . m . delta . eta built from explicit shapes
    auto run = [](auto zero) {
        using K = decltype(zero);
        CobShape delta; // circle => two circles, one pair of pants
        delta.src = circle_tangle(1);
        delta.tgt = circle_tangle(2);
        delta.comp = {0, 0, 0};
        delta.dots = {0};
        CobShape m; // two circles => circle
        m.src = circle_tangle(2);
        m.tgt = circle_tangle(1);
        m.comp = {0, 0, 0};
        m.dots = {0};
        auto eta = lin<K>(birth_shape(circle_tangle(), 0, false));
        auto eps = lin<K>(death_shape(circle_tangle(), 0, false));
        return compose(eps, compose(lin<K>(m), compose(lin<K>(delta), eta)));
    };
    auto over_q = run(F(0));
    REQUIRE(over_q == lin<F>(identity_shape(FlatTangle{})) * F(2));
    REQUIRE(run(F2(0)).is_zero());
}

TEST_CASE("X^2 = 0: two dots on a component kill the term") {
    CobShape d = identity_shape(identity_tangle(1));
    d.dots[0] = 1;
    auto dot = lin<F>(d);
    REQUIRE(compose(dot, dot).is_zero());
}

TEST_CASE("neck cutting: tube equals sum of dotted disk pairs") {
    // saddle up then saddle back down on two parallel strands
    FlatTangle id2 = identity_tangle(2);
    FlatTangle tb = turnback_tangle(2, 1);
    auto up = lin<F>(min_shape(id2, tb));
    auto down = lin<F>(min_shape(tb, id2));
    auto tube = compose(down, up);

    CobShape dot1 = identity_shape(id2);
    dot1.dots[0] = 1;
    CobShape dot2 = identity_shape(id2);
    dot2.dots[1] = 1;
    REQUIRE(tube == lin<F>(dot1) + lin<F>(dot2));
}

TEST_CASE("identity on a circle normalizes to the delooped resolution of the identity") {
    // id_annulus = iota_minus . pi_minus + iota_plus . pi_plus
    auto id_c = lin<F>(identity_shape(circle_tangle()));
    auto cut = compose(lin<F>(birth_shape(circle_tangle(), 0, false)),
                       lin<F>(death_shape(circle_tangle(), 0, true))) +
               compose(lin<F>(birth_shape(circle_tangle(), 0, true)),
                       lin<F>(death_shape(circle_tangle(), 0, false)));
    REQUIRE(id_c == cut);
    REQUIRE(compose(id_c, id_c) == id_c);
}

TEST_CASE("composition is associative") {
    FlatTangle id2 = identity_tangle(2);
    FlatTangle tb = turnback_tangle(2, 1);
    CobShape dot = identity_shape(tb);
    dot.dots[0] = 1;
    auto f = lin<F>(min_shape(id2, tb));
    auto g = lin<F>(dot) + lin<F>(identity_shape(tb)) * F(3);
    auto h = lin<F>(min_shape(tb, id2));
    REQUIRE(compose(h, compose(g, f)) == compose(compose(h, g), f));
}

TEST_CASE("stacking: units, interchange, degree additivity") {
    // stack glues g's tangles on top of f's, so stacking two single-strand
    // identities yields the identity over the composite single strand.
    FlatTangle id1 = identity_tangle(1);
    auto id_c = lin<F>(identity_shape(id1));
    REQUIRE(stack(id_c, id_c) == id_c);

    CobShape d = identity_shape(id1);
    d.dots[0] = 1;
    auto dot = lin<F>(d);

    // two dots land on the same glued strand: X^2 = 0
    REQUIRE(stack(dot, dot).is_zero());
    auto one_dot = stack(dot, id_c);
    REQUIRE(one_dot == stack(id_c, dot));
    REQUIRE(one_dot.terms.size() == 1);
    REQUIRE(raw_degree(one_dot.terms[0].first) == 2);

    // interchange law over a cup / saddle pair
    auto cup_id = lin<F>(identity_shape(cup_tangle(0, 1)));
    CobShape dcup = identity_shape(cup_tangle(0, 1));
    dcup.dots[0] = 1;
    auto cup_dot = lin<F>(dcup);
    auto saddle = lin<F>(min_shape(identity_tangle(2), turnback_tangle(2, 1)));
    auto tb_id = lin<F>(identity_shape(turnback_tangle(2, 1)));
    REQUIRE(stack(cup_dot, saddle) ==
            compose(stack(cup_dot, tb_id), stack(cup_id, saddle)));
    REQUIRE(stack(cup_dot, saddle) ==
            compose(stack(cup_id, saddle), stack(cup_dot, lin<F>(identity_shape(identity_tangle(2))))));

    // stacking over a cup: saddle raw degree is preserved additively
    auto st = stack(cup_id, saddle);
    REQUIRE(!st.is_zero());
    for (auto& [shape, coeff] : st.terms) REQUIRE(raw_degree(shape) == 1);
}

TEST_CASE("closing a circle through stacking produces and evaluates circles") {
    // stack cup-cob and cap-cob: birth of a circle from gluing
    FlatTangle cupt = cup_tangle(0, 1);  // 0 -> 2
    FlatTangle capt = cap_tangle(2, 1);  // 2 -> 0
    auto f = lin<F>(identity_shape(cupt));
    auto g = lin<F>(identity_shape(capt));
    auto closed = stack(f, g); // identity on tangle with one circle
    REQUIRE(closed.terms.size() == 2); // delooped: two dotted-disk-pair terms
    for (auto& [shape, coeff] : closed.terms) {
        REQUIRE(shape.src == circle_tangle());
        REQUIRE(shape.tgt == circle_tangle());
        REQUIRE(coeff == F(1));
    }
}

TEST_CASE("hom space basis dimension is 2^cycles") {
    FlatTangle id1 = identity_tangle(1);
    auto endo1 = hom_shapes(id1, id1);
    REQUIRE(endo1.size() == 2); // id and dotted id

    FlatTangle id2 = identity_tangle(2);
    REQUIRE(hom_shapes(id2, id2).size() == 4);
    REQUIRE(hom_shapes(id2, turnback_tangle(2, 1)).size() == 2); // one cycle

    REQUIRE(hom_shapes_of_degree(id1, id1, 0).size() == 1);
    REQUIRE(hom_shapes_of_degree(id1, id1, 2).size() == 1);
}

TEST_CASE("normalize is idempotent") {
    FlatTangle id2 = identity_tangle(2);
    CobShape tube = identity_shape(id2);
    tube.comp = {0, 1, 0, 1};
    tube.comp = {0, 0, 0, 0}; // everything one component: double tube
    tube.dots = {0};
    auto v = lin<F>(tube);
    auto w = v;
    w.normalize();
    REQUIRE(v == w);
    REQUIRE(!v.terms.empty());
    for (auto& [shape, c] : v.terms) REQUIRE(shape.ncomp() == 2);
}

TEST_CASE("identity_coefficient detects exactly single undotted identities") {
    FlatTangle id2 = identity_tangle(2);
    auto idl = lin<F>(identity_shape(id2)) * F(-5);
    auto c = identity_coefficient(idl);
    REQUIRE(c.has_value());
    REQUIRE(*c == F(-5));
    CobShape dotted = identity_shape(id2);
    dotted.dots[1] = 1;
    REQUIRE_FALSE(identity_coefficient(lin<F>(dotted)).has_value());
    REQUIRE_FALSE(identity_coefficient(lin<F>(min_shape(id2, turnback_tangle(2, 1)))).has_value());
}
