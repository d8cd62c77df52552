#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "fball/scalar.hpp"

using namespace fball;

TEST_CASE("construction and normalization") {
    auto a = padic_scalar::from_integer(3, 63, 20);
    REQUIRE(a.exact_valuation() == 2);
    REQUIRE(a.unit() == 7);
    REQUIRE(a.prec() == 20);

    // excess p factors in the unit migrate into the valuation
    auto b = padic_scalar::from_unit(3, 1, 18, 10);
    REQUIRE(b.exact_valuation() == 3);
    REQUIRE(b.unit() == 2);

    // a unit that is divisible past the window collapses to zero
    auto z = padic_scalar::from_unit(3, 2, pow_z(3, 8), 10);
    REQUIRE(z.is_zero());
    REQUIRE(z.prec() == 10);

    // negative valuation is fine while relative precision stays positive
    auto neg = padic_scalar::from_unit(3, -2, 5, 1);
    REQUIRE(neg.exact_valuation() == -2);

    bool threw = false;
    try {
        padic_scalar::from_unit(3, 5, 1, 5);
    } catch (const error& e) {
        threw = e.code() == errc::precision_exhausted;
    }
    REQUIRE(threw);

    threw = false;
    try {
        padic_scalar::from_integer(4, 1, 10);
    } catch (const error& e) {
        threw = e.code() == errc::bad_input;
    }
    REQUIRE(threw);
}

TEST_CASE("ring operations against integer arithmetic") {
    long p = 3, N = 24;
    bigint pn = pow_z(p, N);
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 50; ++t) {
        bigint x = bigint(static_cast<unsigned long>(rng())) % pn;
        bigint y = bigint(static_cast<unsigned long>(rng())) % pn;
        auto a = padic_scalar::from_integer(p, x, N);
        auto b = padic_scalar::from_integer(p, y, N);
        REQUIRE(a.add(b).equals(padic_scalar::from_integer(p, x + y, N)));
        REQUIRE(a.sub(b).equals(padic_scalar::from_integer(p, x - y, N)));
        REQUIRE(a.mul(b).equals(padic_scalar::from_integer(p, x * y, N)));
    }
}

TEST_CASE("precision propagation") {
    // mul: N = min(N1 + v2, N2 + v1)
    auto x = padic_scalar::from_unit(3, 1, 5, 8);
    auto y = padic_scalar::from_unit(3, 2, 2, 9);
    auto xy = x.mul(y);
    REQUIRE(xy.exact_valuation() == 3);
    REQUIRE(xy.prec() == std::min(8 + 2, 9 + 1));

    // add: min precision, possible valuation gain
    auto s = x.add(x.neg());
    REQUIRE(s.is_zero());
    REQUIRE(s.prec() == 8);

    // truncation never raises precision
    auto t = x.truncated(20);
    REQUIRE(t.prec() == 8);
    REQUIRE(x.truncated(3).prec() == 3);
}

TEST_CASE("division and powers") {
    long p = 5, N = 18;
    auto a = padic_scalar::from_integer(p, 7, N);
    auto ia = a.inv();
    REQUIRE(a.mul(ia).equals(padic_scalar::one(p, N)));

    // pow vs powmod oracle on a unit
    auto b = padic_scalar::from_integer(p, 12, N);
    auto b7 = b.pow(7);
    REQUIRE(b7.equals(padic_scalar::from_integer(p, powmod_z(12, 7, pow_z(p, N)), N)));

    // negative exponent composes pow with inv
    auto bm2 = b.pow(-2);
    REQUIRE(bm2.mul(b.pow(2)).equals(padic_scalar::one(p, N)));

    // dividing by p shifts the valuation down
    auto c = padic_scalar::from_integer(p, 50, N);
    auto q = c.div(padic_scalar::from_integer(p, 5, N));
    REQUIRE(q.exact_valuation() == 1);
    REQUIRE(q.unit() == 2);

    bool threw = false;
    try {
        a.div(padic_scalar::zero(p, N));
    } catch (const error& e) {
        threw = e.code() == errc::division_by_zero_to_precision;
    }
    REQUIRE(threw);
}

TEST_CASE("lifts and rendering") {
    auto a = padic_scalar::from_integer(3, -60, 40);
    REQUIRE(a.lift() == pow_z(3, 40) - 60);
    REQUIRE(a.lift_mod(5) == mod_z(bigint(-60), pow_z(3, 5)));

    bool threw = false;
    try {
        a.lift_mod(41);
    } catch (const error& e) {
        threw = e.code() == errc::precision_exhausted;
    }
    REQUIRE(threw);

    auto frac = padic_scalar::from_ratio(3, 1, 9, 6);
    REQUIRE(frac.exact_valuation() == -2);
    REQUIRE(frac.decimal_str() == "1/9");

    auto half = padic_scalar::from_ratio(3, 1, 2, 6);
    REQUIRE(half.add(half).equals(padic_scalar::one(3, 6)));

    // zero renders with its certificate
    REQUIRE(padic_scalar::zero(3, 7).is_zero());
    REQUIRE(val_str(padic_scalar::zero(3, 7).valuation()) == "inf");
}

TEST_CASE("comparison is subtraction") {
    long p = 3;
    auto a = padic_scalar::from_integer(p, 10, 6);
    auto b = padic_scalar::from_integer(p, 10 + 729, 8);  // differ beyond 3^6
    REQUIRE(a.equals(b));
    auto c = padic_scalar::from_integer(p, 11, 8);
    REQUIRE(!a.equals(c));
}
