#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mindex/laws.hpp"
#include "mindex/ode_calculus.hpp"

using namespace mindex;

namespace {

OdeMultiIndex mi(std::initializer_list<std::pair<const unsigned, unsigned>> exps) {
    return OdeMultiIndex(OdeMultiIndex::exp_map(exps));
}

const OdeMultiIndex z0 = mi({{0, 1}});
const OdeMultiIndex z1 = mi({{1, 1}});
const OdeMultiIndex z0z1 = mi({{0, 1}, {1, 1}});

OdeTensor term(const OdeForest& f, const OdeMultiIndex& m) { return OdeTensor{f, m}; }

} // namespace

TEST_CASE("enumerate_populated") {
    auto n1 = enumerate_populated(1);
    REQUIRE(n1.size() == 1);
    CHECK(n1[0] == z0);

    auto n2 = enumerate_populated(2);
    REQUIRE(n2.size() == 2);
    CHECK(n2[1] == z0z1);

    auto n3 = enumerate_populated(3);
    REQUIRE(n3.size() == 4);
    CHECK(std::count(n3.begin(), n3.end(), mi({{0, 1}, {1, 2}})) == 1);
    CHECK(std::count(n3.begin(), n3.end(), mi({{0, 2}, {2, 1}})) == 1);

    for (const auto& m : enumerate_populated(6))
        CHECK(is_populated(m));
}

TEST_CASE("enumerate_predecessors") {
    auto p = enumerate_predecessors(mi({{0, 1}, {1, 1}, {2, 1}}), 1);
    REQUIRE(p.size() == 2);
    CHECK(std::count(p.begin(), p.end(), mi({{0, 2}, {2, 1}})) == 1);
    CHECK(std::count(p.begin(), p.end(), mi({{0, 1}, {1, 2}})) == 1);

    auto q = enumerate_predecessors(z1, 1);
    REQUIRE(q.size() == 1);
    CHECK(q[0] == z0);

    CHECK(enumerate_predecessors(z0, 1).empty());
}

TEST_CASE("enumerate_splittings") {
    // The 5 proper splittings of z0^2 z1 z2 plus the full extraction.
    auto sp = enumerate_splittings(mi({{0, 2}, {1, 1}, {2, 1}}));
    REQUIRE(sp.size() == 6);
    std::set<OdeForest> parts;
    for (const auto& s : sp) {
        CHECK(s.parts.merged_product() * s.remainder == mi({{0, 2}, {1, 1}, {2, 1}}));
        parts.insert(s.parts);
    }
    CHECK(parts.count(OdeForest::singleton(z0)) == 1);
    CHECK(parts.count(OdeForest::singleton(z0z1)) == 1);
    CHECK(parts.count(OdeForest::singleton(mi({{0, 2}, {2, 1}}))) == 1);
    CHECK(parts.count(OdeForest({z0, z0})) == 1);
    CHECK(parts.count(OdeForest({z0, z0z1})) == 1);
    CHECK(parts.count(OdeForest::singleton(mi({{0, 2}, {1, 1}, {2, 1}}))) == 1);

    auto single = enumerate_splittings(z0);
    REQUIRE(single.size() == 1);
    CHECK(single[0].parts == OdeForest::singleton(z0));
    CHECK(single[0].remainder.is_unit());

    CHECK(enumerate_splittings(z1).empty());
}

TEST_CASE("star2") {
    auto g = star2(OdeForest::singleton(z0), z0z1);
    CHECK(g.coefficient_of(mi({{0, 1}, {1, 2}})) == Rational(1));
    CHECK(g.coefficient_of(mi({{0, 2}, {2, 1}})) == Rational(1));

    CHECK(star2(OdeForest{}, z0) == LinComb<OdeMultiIndex>::single(z0));

    // <D^2(z0 z1), z1 z2> / S(z1 z2) = 3, the coefficient of the z0 z1 term.
    auto d2 = star2(OdeForest({z0, z0}), z0z1);
    CHECK(d2.coefficient_of(mi({{0, 2}, {1, 1}, {2, 1}})) == Rational(3));
}

TEST_CASE("insert") {
    auto a = insert(z0, z0z1);
    CHECK(a == LinComb<OdeMultiIndex>::single(z0z1, 2));

    CHECK(insert(z0, z0) == LinComb<OdeMultiIndex>::single(z0));
    CHECK(insert(z0z1, z0) == LinComb<OdeMultiIndex>::single(z0z1));

    CHECK_THROWS_AS(insert(OdeMultiIndex::unit(), z0), std::invalid_argument);
    CHECK_THROWS_AS(insert(z1, z0), std::invalid_argument);

    for (const auto& a2 : enumerate_populated(3))
        for (const auto& b2 : enumerate_populated(3))
            for (const auto& [k, c] : insert(a2, b2))
                CHECK(is_populated(k));
}

TEST_CASE("star1") {
    auto s = star1(OdeForest({z0, z0z1}), z0z1);
    CHECK(s.coefficient_of(mi({{0, 1}, {1, 2}})) == Rational(2));
    CHECK(s.coefficient_of(mi({{0, 2}, {2, 1}})) == Rational(1));

    CHECK(star1(OdeForest::singleton(z0), z0) == LinComb<OdeMultiIndex>::single(z0));

    // Against the extraction example: <{z0,z0,z0} *1 z0^2 z2, z0^2 z2> must
    // match <F (x) a, Dminus(z0^2 z2)> = 1 * S(F) * S(a) = 12.
    auto t = star1(OdeForest({z0, z0, z0}), mi({{0, 2}, {2, 1}}));
    CHECK(inner_product(t, mi({{0, 2}, {2, 1}})) == Rational(12));

    CHECK_THROWS_AS(star1(OdeForest::singleton(z0), z0z1), std::invalid_argument);
}

TEST_CASE("delta golden example z0^2 z1 z2") {
    OdeMultiIndex beta = mi({{0, 2}, {1, 1}, {2, 1}});
    auto d = delta_primal(beta);

    CHECK(d.coefficient_of(term(OdeForest{}, beta)) == Rational(1));
    CHECK(d.coefficient_of(term(OdeForest::singleton(beta), OdeMultiIndex::unit())) ==
          Rational(1));
    CHECK(d.coefficient_of(term(OdeForest::singleton(z0), mi({{0, 2}, {2, 1}}))) ==
          Rational(2));
    CHECK(d.coefficient_of(term(OdeForest::singleton(z0), mi({{0, 1}, {1, 2}}))) ==
          Rational(4));
    CHECK(d.coefficient_of(term(OdeForest::singleton(z0z1), z0z1)) == Rational(2));
    CHECK(d.coefficient_of(term(OdeForest::singleton(mi({{0, 2}, {2, 1}})), z0)) ==
          Rational(1));
    CHECK(d.coefficient_of(term(OdeForest({z0, z0}), z0z1)) == Rational(3));
    CHECK(d.coefficient_of(term(OdeForest({z0, z0z1}), z0)) == Rational(2));
    CHECK(d.size() == 8);

    CHECK(delta_adjoint(beta) == d);
    CHECK(oracle_delta(beta) == d);
}

TEST_CASE("delta small cases") {
    auto d0 = delta_primal(z0);
    CHECK(d0.size() == 2);
    CHECK(d0.coefficient_of(term(OdeForest{}, z0)) == Rational(1));
    CHECK(d0.coefficient_of(term(OdeForest::singleton(z0), OdeMultiIndex::unit())) ==
          Rational(1));
    CHECK(delta_adjoint(z0) == d0);

    // Delta(z0 z1^2), cross-checked by the duality oracle.
    OdeMultiIndex beta = mi({{0, 1}, {1, 2}});
    auto d = delta_primal(beta);
    CHECK(d.coefficient_of(term(OdeForest::singleton(z0), z0z1)) == Rational(1));
    CHECK(d.coefficient_of(term(OdeForest::singleton(z0z1), z0)) == Rational(1));
    CHECK(d.size() == 4);
    CHECK(oracle_delta(beta) == d);

    CHECK_THROWS_AS(delta_primal(z1), std::invalid_argument);
}

TEST_CASE("delta_minus golden example z0^2 z2") {
    OdeMultiIndex beta = mi({{0, 2}, {2, 1}});
    auto d = delta_minus_primal(beta);

    CHECK(d.coefficient_of(term(OdeForest::singleton(beta), z0)) == Rational(1));
    CHECK(d.coefficient_of(term(OdeForest({z0, z0z1}), z0z1)) == Rational(2));
    CHECK(d.coefficient_of(term(OdeForest({z0, z0, z0}), beta)) == Rational(1));
    CHECK(d.size() == 3);

    CHECK(delta_minus_adjoint(beta) == d);
    CHECK(oracle_delta_minus(beta) == d);
}

TEST_CASE("delta_minus small cases") {
    auto d = delta_minus_primal(z0);
    CHECK(d.size() == 1);
    CHECK(d.coefficient_of(term(OdeForest::singleton(z0), z0)) == Rational(1));
    CHECK(delta_minus_adjoint(z0) == d);
    CHECK(oracle_delta_minus(z0) == d);

    CHECK_THROWS_AS(delta_minus_primal(z1), std::invalid_argument);
}

TEST_CASE("formula equivalence and oracle sweep") {
    for (const auto& beta : enumerate_populated(4)) {
        auto dp = delta_primal(beta);
        CHECK(dp == delta_adjoint(beta));
        CHECK(dp == oracle_delta(beta));
        auto dm = delta_minus_primal(beta);
        CHECK(dm == delta_minus_adjoint(beta));
        CHECK(dm == oracle_delta_minus(beta));
    }
}

TEST_CASE("duality identities") {
    // <F *2 bar, beta> = <F (x) bar, Delta beta> for |beta| <= 4 here (the
    // full |beta| <= 5 sweep runs in the acceptance suite).
    for (const auto& beta : enumerate_populated(4)) {
        auto d = delta_primal(beta);
        std::vector<OdeForest> forests{OdeForest{}};
        for (const auto& sp : enumerate_splittings(beta))
            forests.push_back(sp.parts);
        for (const auto& f : forests) {
            for (const auto& bar : enumerate_populated(norm(beta))) {
                Rational lhs = star2(f, bar).coefficient_of(beta) * Rational(symmetry(beta));
                Rational rhs = d.coefficient_of(term(f, bar)) *
                               Rational(forest_symmetry(f)) * Rational(symmetry(bar));
                CHECK(lhs == rhs);
            }
        }
    }

    // <F *1 alpha, beta> = <F (x) alpha, Dminus beta> for |beta| <= 3.
    for (const auto& beta : enumerate_populated(3)) {
        auto d = delta_minus_primal(beta);
        for (const auto& f : enumerate_populated_forests(norm(beta))) {
            for (const auto& alpha : enumerate_populated(norm(beta))) {
                if (norm(alpha) != f.size())
                    continue;
                Rational lhs = star1(f, alpha).coefficient_of(beta) * Rational(symmetry(beta));
                Rational rhs = d.coefficient_of(term(f, alpha)) *
                               Rational(forest_symmetry(f)) * Rational(symmetry(alpha));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("delta support structure") {
    for (const auto& beta : enumerate_populated(4)) {
        for (const auto& [t, c] : delta_primal(beta)) {
            CHECK(t.left.merged_product().divides(beta));
            for (const auto& [mem, r] : t.left.members())
                CHECK(is_populated(mem));
            if (!t.right.is_unit())
                CHECK(is_populated(t.right));
        }
    }
}
