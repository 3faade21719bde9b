#include <catch2/catch.hpp>

#include "scottkit/polynomial.hpp"

using namespace scottkit;

namespace {

const CoeffRing Z{0};
const CoeffRing F2{2};
const CoeffRing F3{3};

MPoly var(int n, int i, const CoeffRing& R = Z) { return MPoly::variable(n, i, R); }
MPoly con(int n, long z, const CoeffRing& R = Z) { return MPoly::constant(n, z, R); }

} // namespace

TEST_CASE("constants and variables", "[polynomial]") {
    CHECK(con(3, 0).is_zero());
    CHECK(con(3, 5).is_constant());
    CHECK(con(3, 5).constant_value() == 5);
    CHECK_FALSE(var(3, 1).is_constant());
    CHECK(con(2, 3, F3).is_zero());
}

TEST_CASE("arithmetic identities", "[polynomial]") {
    auto b1 = var(2, 0), b2 = var(2, 1);
    auto s = MPoly::add(b1, b2, Z);
    auto d = MPoly::sub(b1, b2, Z);
    auto prod = MPoly::mul(s, d, Z);
    // (b1+b2)(b1-b2) = b1^2 - b2^2
    auto expect = MPoly::sub(MPoly::mul(b1, b1, Z), MPoly::mul(b2, b2, Z), Z);
    CHECK(prod == expect);
    CHECK(MPoly::add(prod, MPoly::neg(prod, Z), Z).is_zero());
}

TEST_CASE("exact division succeeds and fails correctly", "[polynomial]") {
    auto b1 = var(2, 0), b2 = var(2, 1);
    auto s = MPoly::add(b1, b2, Z);
    auto sq = MPoly::mul(s, s, Z);
    auto q = MPoly::try_divide(sq, s, Z);
    REQUIRE(q.has_value());
    CHECK(*q == s);

    auto diff_sq = MPoly::sub(MPoly::mul(b1, b1, Z), MPoly::mul(b2, b2, Z), Z);
    auto q2 = MPoly::try_divide(diff_sq, s, Z);
    REQUIRE(q2.has_value());
    CHECK(*q2 == MPoly::sub(b1, b2, Z));

    // b1^2 + 1 has no factor b1 + 1 over Z ...
    auto one = con(2, 1);
    auto p = MPoly::add(MPoly::mul(b1, b1, Z), one, Z);
    CHECK_FALSE(MPoly::try_divide(p, MPoly::add(b1, one, Z), Z).has_value());
    // ... but (b1+1)^2 = b1^2 + 1 in characteristic 2
    auto p2 = MPoly::add(MPoly::mul(var(2, 0, F2), var(2, 0, F2), F2), con(2, 1, F2), F2);
    auto d2 = MPoly::add(var(2, 0, F2), con(2, 1, F2), F2);
    auto q3 = MPoly::try_divide(p2, d2, F2);
    REQUIRE(q3.has_value());
    CHECK(*q3 == d2);
}

TEST_CASE("content and lead", "[polynomial]") {
    auto b1 = var(1, 0);
    auto p = MPoly::mul(con(1, 6), MPoly::add(b1, con(1, 2), Z), Z);   // 6*b1 + 12
    CHECK(p.content() == 6);
    CHECK(p.lead() == 6);
}

TEST_CASE("rational functions normalize", "[polynomial]") {
    auto b1 = var(2, 0), b2 = var(2, 1);
    // (b1^2 - b2^2) / (b1 + b2) clears to b1 - b2
    auto num = MPoly::sub(MPoly::mul(b1, b1, Z), MPoly::mul(b2, b2, Z), Z);
    auto den = MPoly::add(b1, b2, Z);
    auto r = RationalFunction::make(num, den, Z);
    CHECK(r.num == MPoly::sub(b1, b2, Z));
    CHECK(r.den == con(2, 1));

    // joint content reduction and sign normalization
    auto r2 = RationalFunction::make(MPoly::mul(con(2, 4), b1, Z),
                                     MPoly::mul(con(2, -2), b2, Z), Z);
    CHECK(r2.num == MPoly::mul(con(2, -2), b1, Z));
    CHECK(r2.den == b2);
    CHECK(r2.den.lead() > 0);
}

TEST_CASE("rational function arithmetic", "[polynomial]") {
    auto b1 = var(2, 0), b2 = var(2, 1);
    auto one = con(2, 1);
    auto x = RationalFunction::make(one, b1, Z);   // 1/b1
    auto y = RationalFunction::make(one, b2, Z);   // 1/b2
    auto sum = RationalFunction::add(x, y, Z);
    auto expect = RationalFunction::make(MPoly::add(b1, b2, Z), MPoly::mul(b1, b2, Z), Z);
    CHECK(RationalFunction::equal(sum, expect, Z));
    CHECK(sum == expect);   // canonical forms coincide

    auto prod = RationalFunction::mul(x, RationalFunction::inv(x, Z), Z);
    CHECK(RationalFunction::equal(prod, RationalFunction::constant(2, 1, Z), Z));
    CHECK(prod.num == one);
    CHECK(prod.den == one);
}

TEST_CASE("division by zero throws", "[polynomial]") {
    auto z = con(1, 0);
    CHECK_THROWS_AS(RationalFunction::make(con(1, 1), z, Z), InvalidInput);
    CHECK_THROWS_AS(RationalFunction::inv(RationalFunction::constant(1, 0, Z), Z), InvalidInput);
    CHECK_THROWS_AS(MPoly::try_divide(con(1, 1), z, Z), InvalidInput);
}

TEST_CASE("prime-field coefficients stay reduced and monic", "[polynomial]") {
    auto b1 = var(1, 0, F3);
    auto r = RationalFunction::make(b1, MPoly::mul(con(1, 2, F3), b1, F3), F3);
    CHECK(r.den.lead() == 1);   // monic denominator
    CHECK(RationalFunction::equal(r, RationalFunction::constant(1, 2, F3), F3));   // 1/2 = 2 mod 3
}

TEST_CASE("polynomial JSON round trips", "[polynomial]") {
    auto b1 = var(3, 0), b3 = var(3, 2);
    auto p = MPoly::add(MPoly::mul(b1, b3, Z), con(3, -7), Z);
    CHECK(MPoly::from_json(p.to_json(), 3, Z) == p);

    auto r = RationalFunction::make(p, MPoly::add(b3, con(3, 1), Z), Z);
    CHECK(RationalFunction::from_json(r.to_json(), 3, Z) == r);
}
