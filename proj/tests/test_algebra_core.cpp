#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mindex/lincomb.hpp"
#include "mindex/ode.hpp"
#include "mindex/rational.hpp"

#include <random>
#include <string>

using namespace mindex;

using StrComb = LinComb<std::string>;

namespace {

Rational random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 12);
    return Rational(Integer(num(rng)), Integer(den(rng)));
}

StrComb random_comb(std::mt19937& rng) {
    static const char* keys[] = {"u", "v", "w", "x", "y"};
    std::uniform_int_distribution<int> nterms(0, 4);
    StrComb c;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i)
        c.add_term(keys[rng() % 5], random_rational(rng));
    return c;
}

} // namespace

TEST_CASE("rational invariants") {
    Rational r(Integer(4), Integer(-6));
    CHECK(r.num() == -2);
    CHECK(r.den() == 3);
    CHECK(Rational(0).den() == 1);
    CHECK_THROWS_AS(Rational(Integer(1), Integer(0)), std::domain_error);
    CHECK(Rational(Integer(1), Integer(2)) + Rational(Integer(1), Integer(3)) ==
          Rational(Integer(5), Integer(6)));
    CHECK(Rational(Integer(1), Integer(2)).str() == "1/2");
    CHECK(Rational(-7).str() == "-7");
}

TEST_CASE("rational arithmetic is exact") {
    std::mt19937 rng(12345);
    for (int i = 0; i < 500; ++i) {
        Rational a = random_rational(rng), b = random_rational(rng);
        CHECK((a + b) - b == a);
        if (!b.is_zero())
            CHECK((a * b) / b == a);
    }
}

TEST_CASE("factorial and binomial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(6) == 720);
    CHECK(factorial(20) == Integer("2432902008176640000"));
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(3, 5) == 0);
}

TEST_CASE("lincomb add") {
    StrComb a = StrComb::single("x", 2);
    StrComb b = StrComb::single("x", -2);
    CHECK((a + b).is_zero());

    StrComb c = StrComb::single("x", 2) + StrComb::single("y", 3);
    CHECK(c.coefficient_of("x") == Rational(2));
    CHECK(c.coefficient_of("y") == Rational(3));

    StrComb d = StrComb::single("x", Rational(Integer(1), Integer(2))) +
                StrComb::single("x", Rational(Integer(1), Integer(3)));
    CHECK(d.coefficient_of("x") == Rational(Integer(5), Integer(6)));
}

TEST_CASE("lincomb scale") {
    StrComb a = StrComb::single("x") + StrComb::single("y");
    CHECK(scale(Rational(0), a).is_zero());
    CHECK(scale(Rational(1), a) == a);
    CHECK(scale(Rational(Integer(1), Integer(3)), StrComb::single("x", 3)) ==
          StrComb::single("x"));
}

TEST_CASE("coefficient_of") {
    StrComb a = StrComb::single("x", 2) + StrComb::single("y", 3);
    CHECK(coefficient_of(a, std::string("x")) == Rational(2));
    CHECK(coefficient_of(StrComb::single("x", 2), std::string("y")) == Rational(0));
}

TEST_CASE("coefficient_of through a derivation") {
    // D(z0 z1) = z1^2 + z0 z2 by the Leibniz rule.
    OdeMultiIndex m = OdeMultiIndex::letter(0) * OdeMultiIndex::letter(1);
    auto d = derivation_D(m);
    CHECK(d.coefficient_of(OdeMultiIndex::letter(0) * OdeMultiIndex::letter(2)) ==
          Rational(1));
    CHECK(d.coefficient_of(OdeMultiIndex::letter(1) * OdeMultiIndex::letter(1)) ==
          Rational(1));
    CHECK(d.size() == 2);
}

TEST_CASE("tensor bilinearity") {
    StrComb l = StrComb::single("x", 2);
    StrComb r = StrComb::single("y", 3);
    auto t = tensor(l, r);
    CHECK(t.coefficient_of(Tensor2<std::string, std::string>{"x", "y"}) == Rational(6));

    CHECK(tensor(StrComb{}, r).is_zero());

    auto sum = tensor(StrComb::single("x") + StrComb::single("y"), StrComb::single("z"));
    CHECK(sum.size() == 2);

    std::mt19937 rng(777);
    for (int i = 0; i < 100; ++i) {
        StrComb a = random_comb(rng), b = random_comb(rng), c = random_comb(rng);
        CHECK(tensor(a + b, c) == tensor(a, c) + tensor(b, c));
    }
}

TEST_CASE("algebraic laws on random combinations") {
    std::mt19937 rng(4242);
    for (int i = 0; i < 200; ++i) {
        StrComb a = random_comb(rng), b = random_comb(rng), c = random_comb(rng);
        Rational s = random_rational(rng);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(scale(s, a + b) == scale(s, a) + scale(s, b));
    }
}
