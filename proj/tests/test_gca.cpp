#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradedq/gca.hpp"
#include "support/generators.hpp"
#include "support/word_oracle.hpp"

using namespace gradedq;
using namespace gradedq::testing;

namespace {

ChartPtr small_chart() {
    return make_chart({{"x1", 0}, {"x2", 0}, {"xi1", 1}, {"xi2", 1}, {"xi3", 1}, {"p", 2}});
}

int sgn_pow(int e) { return (e & 1) ? -1 : 1; }

}  // namespace

TEST_CASE("chart validation") {
    CHECK_THROWS_AS(make_chart({{"a", 0}, {"a", 1}}), Error);
    CHECK_THROWS_AS(make_chart({{"a", -1}}), Error);
    auto c = small_chart();
    CHECK(c->index_of("xi2") == 3);
    CHECK(c->odd(2));
    CHECK_FALSE(c->odd(5));
}

TEST_CASE("odd generators square to zero and anticommute") {
    auto c = small_chart();
    auto xi1 = GPoly::generator(c, "xi1"), xi2 = GPoly::generator(c, "xi2");
    CHECK((xi1 * xi1).is_zero());
    CHECK(xi1 * xi2 == -(xi2 * xi1));
    auto x1 = GPoly::generator(c, "x1");
    CHECK(x1 * xi1 == xi1 * x1);
    auto p = GPoly::generator(c, "p");
    CHECK(p * xi2 == xi2 * p);
}

TEST_CASE("left derivative sign convention") {
    auto c = small_chart();
    auto xi1 = GPoly::generator(c, "xi1"), xi2 = GPoly::generator(c, "xi2");
    auto f = xi1 * xi2;
    CHECK(poly_partial(f, c->index_of("xi2")) == -xi1);
    CHECK(poly_partial(f, c->index_of("xi1")) == xi2);
    auto g = parse_poly("x1^3 xi1", c);
    CHECK(poly_partial(g, 0) == parse_poly("3 x1^2 xi1", c));
}

TEST_CASE("text round trip") {
    auto c = small_chart();
    auto f = parse_poly("3/2 * x1^2 xi1 xi3 - xi2 + 2 x2 p - 1/3", c);
    CHECK(parse_poly(f.to_string(), c) == f);
    CHECK(parse_poly("xi3 xi1", c) == -parse_poly("xi1 xi3", c));
    CHECK(parse_poly("(x1 + 1)(x1 - 1)", c) == parse_poly("x1^2 - 1", c));
    CHECK(parse_poly("0", c).is_zero());
    CHECK_THROWS_AS(parse_poly("x1 + y", c), ParseError);
    CHECK_THROWS_AS(parse_poly("x1 +", c), ParseError);
    CHECK_THROWS_AS(parse_poly("x1^a", c), ParseError);
}

TEST_CASE("unicode generator names") {
    auto c = make_chart({{"x", 0}, {"ξ1", 1}, {"ξ2", 1}});
    auto f = parse_poly("2 x ξ2 ξ1", c);
    CHECK(f.to_string() == "-2 x ξ1 ξ2");
}

TEST_CASE("restriction") {
    auto c = small_chart();
    auto f = parse_poly("x1^2 xi1 + x2 + xi1 xi2", c);
    CHECK(poly_restrict(f, {{0, Rational(2)}}) == parse_poly("4 xi1 + x2 + xi1 xi2", c));
    CHECK(poly_restrict(f, {{2, Rational(0)}}) == parse_poly("x2", c));
    CHECK_THROWS_AS(poly_restrict(f, {{2, Rational(1)}}), InvalidRestriction);
}

TEST_CASE("degree_of") {
    auto c = small_chart();
    auto h = parse_poly("x1 xi1 xi2 + p", c);
    CHECK(degree_of(h).homogeneous);
    CHECK(*degree_of(h).degree == 2);
    auto m = parse_poly("xi1 + p", c);
    CHECK_FALSE(degree_of(m).homogeneous);
    CHECK_FALSE(m.degree().has_value());
}

TEST_CASE("transport reorders odd factors") {
    auto a = make_chart({{"u", 1}, {"v", 1}});
    auto b = make_chart({{"v", 1}, {"w", 0}, {"u", 1}});
    auto f = parse_poly("u v", a);
    CHECK(transport(f, b) == parse_poly("u v", b));
    CHECK(transport(f, b) == -parse_poly("v u", b));
}

TEST_CASE("substitution is an algebra map") {
    auto c = make_chart({{"x", 0}, {"a", 1}, {"b", 1}});
    std::vector<GPoly> img{parse_poly("x + 1", c), parse_poly("b", c), parse_poly("a + x b", c)};
    auto f = parse_poly("a b", c);
    CHECK(poly_substitute(f, img, c) == parse_poly("b a", c));
}

TEST_CASE("product and derivative agree with the word model") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        auto c = random_chart(rng, 3, 6);
        auto f = random_poly(rng, c), g = random_poly(rng, c);
        CHECK(poly_mul(f, g) == normalize(word_mul(to_words(f), to_words(g)), c));
        std::size_t z = std::uniform_int_distribution<std::size_t>(0, c->size() - 1)(rng);
        auto fg_words = word_mul(to_words(f), to_words(g));
        CHECK(poly_partial(poly_mul(f, g), z) == normalize(word_partial(fg_words, z, *c), c));
    }
}

TEST_CASE("kernel laws on random homogeneous input") {
    Rng rng(5);
    std::uniform_int_distribution<int> deg(0, 4);
    for (int trial = 0; trial < 300; ++trial) {
        auto c = random_chart(rng, 3, 6);
        auto f = random_homogeneous(rng, c, deg(rng));
        auto g = random_homogeneous(rng, c, deg(rng));
        auto h = random_homogeneous(rng, c, deg(rng));
        int df = f.is_zero() ? 0 : *f.degree(), dg = g.is_zero() ? 0 : *g.degree();
        CHECK(f * g == Rational(sgn_pow(df * dg)) * (g * f));
        CHECK((f * g) * h == f * (g * h));
        std::size_t z = std::uniform_int_distribution<std::size_t>(0, c->size() - 1)(rng);
        std::size_t w = std::uniform_int_distribution<std::size_t>(0, c->size() - 1)(rng);
        int dz = c->degree(z), dw = c->degree(w);
        CHECK(poly_partial(f * g, z) ==
              poly_partial(f, z) * g + Rational(sgn_pow(dz * df)) * (f * poly_partial(g, z)));
        CHECK(poly_partial(poly_partial(f, w), z) ==
              Rational(sgn_pow(dz * dw)) * poly_partial(poly_partial(f, z), w));
    }
}
