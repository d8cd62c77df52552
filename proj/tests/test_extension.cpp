#include <catch2/catch_amalgamated.hpp>

#include "fball/extension.hpp"

using namespace fball;

TEST_CASE("cyclotomic rings") {
    auto R = make_cyclotomic_ring(3, 1, 30);
    REQUIRE(R->degree() == 2);
    // shifted modulus T^2 + 3T + 3 for zeta_3 - 1
    auto m = R->modulus();
    REQUIRE(m[0].lift() == 3);
    REQUIRE(m[1].lift() == 3);
    REQUIRE(m[2].lift() == 1);
    REQUIRE(R->gen_valuation() == ratl(1, 2));

    auto R9 = make_cyclotomic_ring(3, 2, 30);
    REQUIRE(R9->degree() == 6);
    REQUIRE(R9->gen_valuation() == ratl(1, 6));

    // zeta = 1 + gen is a unit of order p: (1+gen)^3 = 1
    auto zeta = R->one().add(R->gen());
    REQUIRE(pow_elem(zeta, bigint(3)).equals(R->one()));
    REQUIRE(!pow_elem(zeta, bigint(1)).equals(R->one()));
}

TEST_CASE("conjugation and upward embedding") {
    auto R = make_cyclotomic_ring(3, 1, 30);
    auto R9 = make_cyclotomic_ring(3, 2, 30);
    auto t = R->gen();

    // a = 2 is an involution on level 1
    auto c2 = t.conjugate(2);
    REQUIRE(c2.conjugate(2).equals(t));
    REQUIRE(*c2.valuation() == ratl(1, 2));

    // galois orbits preserve valuation through the embedding
    auto e = embed_cyclotomic(t, R9);
    REQUIRE(*e.valuation() == ratl(1, 2));

    // embedded element satisfies the level-1 relation inside level 2
    auto ze = e.add(R9->one());
    REQUIRE(pow_elem(ze, bigint(3)).equals(R9->one()));
}

TEST_CASE("units and inverses in extensions") {
    auto R = make_cyclotomic_ring(3, 1, 30);
    auto t = R->gen();
    auto u = R->one().add(t);
    auto iu = u.inv();
    REQUIRE(u.mul(iu).equals(R->one()));

    // inverting a non-unit scales by the valuation
    auto inv_t = t.inv();
    REQUIRE(*inv_t.valuation() == ratl(-1, 2));
    REQUIRE(t.mul(inv_t).equals(R->one()));

    // embed interacts with scalar arithmetic
    auto five = padic_scalar::from_integer(3, 5, 30);
    REQUIRE(R->embed(five).mul(R->embed(five.inv())).equals(R->one()));
}

TEST_CASE("kummer rings") {
    auto K = make_kummer_ring(3, 1, padic_scalar::from_integer(3, 4, 25), 25);
    REQUIRE(K->degree() == 3);
    REQUIRE(K->best_effort());
    REQUIRE(*K->gen().valuation() == 0);

    // v(T - 1) through the norm: (X+1)^3 - 4 has constant term -3
    auto km1 = K->gen().sub(K->one());
    REQUIRE(*km1.valuation() == ratl(1, 3));

    auto kinv = K->gen().inv();
    REQUIRE(K->gen().mul(kinv).equals(K->one()));
}

TEST_CASE("tower rings") {
    auto inner = make_cyclotomic_ring(3, 1, 25);
    std::vector<qelem> om(4, inner->zero());
    om[0] = inner->embed(padic_scalar::from_integer(3, -4, 25));
    om[3] = inner->one();
    auto TW = make_tower_ring(inner, om);
    REQUIRE(TW->degree() == 3);
    REQUIRE(*TW->gen().valuation() == 0);

    // T a cube root of 4 = 1 + 3: v(T - 1) = 1/3
    auto tx = TW->gen().sub(TW->one());
    REQUIRE(*tx.valuation() == ratl(1, 3));

    // twisting by the inner root of unity keeps the valuation
    auto zeta = TW->embed_coeff(inner->one().add(inner->gen()));
    auto tw = zeta.mul(TW->gen()).sub(TW->one());
    REQUIRE(*tw.valuation() == ratl(1, 3));

    // and the twisted point still cubes back to 4
    auto back = pow_elem(tw.add(TW->one()), bigint(3));
    REQUIRE(back.equals(TW->embed(padic_scalar::from_integer(3, 4, 25))));
}

TEST_CASE("geometric inverse of one plus small") {
    auto R = make_cyclotomic_ring(5, 1, 20);
    auto t = R->gen();
    auto u = R->one().add(t);
    auto iu = inv_one_plus(t);
    REQUIRE(u.mul(iu).equals(R->one()));
}
