#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prt/intpoly.hpp"

using namespace prt;

namespace {
IntPoly P(const std::string& s) { return IntPoly::parse(s); }
}  // namespace

TEST_CASE("parse: coefficient list and product form agree") {
    IntPoly a = P("-13,0,1");
    IntPoly b = P("x^2-13");
    CHECK(a == b);
    CHECK(a.degree() == 2);
    CHECK(a.coeff(0) == -13);

    IntPoly prod = P("(x^2-13)(x^2-17)(x^2-221)");
    CHECK(prod.degree() == 6);
    // Spot values: product of the three factors evaluated directly.
    for (long x : {-3L, 0L, 1L, 2L, 10L}) {
        mpz_class v = (mpz_class(x) * x - 13) * (mpz_class(x) * x - 17) * (mpz_class(x) * x - 221);
        CHECK(prod(mpz_class(x)) == v);
    }
    CHECK(P("(x^3-19)(x^2+x+1)").degree() == 5);
    CHECK(P("0").is_zero());
    CHECK_THROWS(P("(x^2-13"));
    CHECK_THROWS(P(""));
}

TEST_CASE("taylor_shift examples") {
    // h=x^2, b=1, m=3 -> 9x^2+6x+1
    CHECK(taylor_shift(P("0,0,1"), 1, 3) == P("1,6,9"));
    // identity case
    IntPoly h = P("7,-5,0,3");
    CHECK(taylor_shift(h, 0, 1) == h);
    // h=x^3-19, b=2, m=5 -> 125x^3+150x^2+60x-11, cross-checked by values
    IntPoly s = taylor_shift(P("-19,0,0,1"), 2, 5);
    CHECK(s == P("-11,60,150,125"));
    for (long x = -4; x <= 4; ++x) {
        mpz_class arg = 2 + 5 * mpz_class(x);
        CHECK(s(mpz_class(x)) == P("-19,0,0,1")(arg));
    }
}

TEST_CASE("taylor_shift round trip") {
    IntPoly h = P("3,-1,0,0,2");
    for (long b : {-7L, -1L, 0L, 4L, 23L}) {
        CHECK(taylor_shift(taylor_shift(h, b, 1), -b, 1) == h);
    }
}

TEST_CASE("content_nonconstant") {
    CHECK(content_nonconstant(P("5,4,6")) == 2);  // 6x^2+4x+5
    CHECK(content_nonconstant(P("0,0,0,1")) == 1);
    CHECK(content_nonconstant(P("1,-4,3")) == 1);  // 3x^2-4x+1
    CHECK_THROWS_AS(content_nonconstant(P("42")), std::domain_error);
}

TEST_CASE("exact division and gcd") {
    IntPoly a = P("(x^2-1)(x^2-1)(x+3)");
    IntPoly b = P("x^2-1");
    CHECK(a.divide_exact(b) == P("(x^2-1)(x+3)"));
    CHECK_THROWS(P("x^2+1").divide_exact(P("x-1")));
    CHECK(poly_gcd(P("(x-1)(x+2)"), P("(x-1)(x-5)")) == P("x-1"));
    CHECK(poly_gcd(P("x^2-1"), P("x^2-4")).degree() == 0);
}

TEST_CASE("squarefree decomposition") {
    // h = (x-1)^2 (x-3)
    auto dec = squarefree_decomposition(P("(x-1)(x-1)(x-3)"));
    REQUIRE(dec.size() == 2);
    bool saw1 = false, saw2 = false;
    for (const auto& [g, e] : dec) {
        if (e == 1) {
            CHECK(g == P("x-3"));
            saw1 = true;
        }
        if (e == 2) {
            CHECK(g == P("x-1"));
            saw2 = true;
        }
    }
    CHECK(saw1);
    CHECK(saw2);

    auto sq = squarefree_decomposition(P("(x^2-13)(x^2-17)(x^2-221)"));
    REQUIRE(sq.size() == 1);
    CHECK(sq[0].second == 1);
    CHECK(sq[0].first.degree() == 6);
}

TEST_CASE("derivative and evaluation") {
    IntPoly h = P("-19,0,0,1");
    CHECK(h.derivative() == P("0,0,3"));
    CHECK(h(mpz_class(3)) == 8);
    CHECK(h.eval_double(3.0) == doctest::Approx(8.0));
}
