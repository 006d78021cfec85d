#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mindex/laws.hpp"
#include "mindex/spde.hpp"

#include <random>

using namespace mindex;

namespace {

// d = 1 throughout: vectors in N^2, directions 0 (time) and 1 (space).
const NVec N{1, 0};
const NVec M{0, 1};
const NVec Z{0, 0};

CanonicalWord cw(NVec u, std::vector<NVec> letters) {
    CanonicalWord::letter_map v;
    for (const auto& l : letters)
        ++v[l];
    return CanonicalWord(std::move(u), std::move(v));
}

SpdeVariable var(NVec u, std::vector<NVec> letters, unsigned label = 1) {
    return SpdeVariable{label, cw(std::move(u), std::move(letters))};
}

SpdeMultiIndex mono(std::vector<std::pair<SpdeVariable, unsigned>> factors) {
    SpdeMultiIndex m;
    for (const auto& [v, e] : factors)
        m = m.with_raised(v, static_cast<int>(e));
    return m;
}

const SpdeVariable z_b0 = var({1, 0}, {});
const SpdeVariable z_n = var({0, 0}, {N});
const SpdeVariable z_b1mm = var({0, 1}, {M, M});
const SpdeVariable z_mm = var({0, 0}, {M, M});
const SpdeVariable z_empty = var({0, 0}, {});

// the running example target: z_{b0}^2 z_n z_{b1 m m}
const SpdeMultiIndex target = mono({{z_b0, 2}, {z_n, 1}, {z_b1mm, 1}});

} // namespace

TEST_CASE("canonicalize") {
    // n b0 = b0 n + (n - e0)
    auto c = canonicalize(RawWord{N, 0u}, 1, 2);
    CHECK(c.coefficient_of(var({1, 0}, {N})) == Rational(1));
    CHECK(c.coefficient_of(var({0, 0}, {Z})) == Rational(1));
    CHECK(c.size() == 2);

    // m b0: the m - e0 branch leaves N^2 and is dropped
    auto c2 = canonicalize(RawWord{M, 0u}, 1, 2);
    CHECK(c2 == LinComb<SpdeVariable>::single(var({1, 0}, {M})));

    // already canonical
    auto c3 = canonicalize(RawWord{0u, 1u, M, M}, 1, 2);
    CHECK(c3 == LinComb<SpdeVariable>::single(var({1, 1}, {M, M})));

    CHECK(canonicalize(RawWord{}, 1, 2) ==
          LinComb<SpdeVariable>::single(var({0, 0}, {})));
}

namespace {

// independent rewriter resolving a randomly chosen adjacency at each step
LinComb<SpdeVariable> shuffled_canonicalize(const RawWord& rw, unsigned label,
                                            std::size_t dims, std::mt19937& rng) {
    LinComb<SpdeVariable> out;
    std::function<void(const RawWord&)> reduce = [&](const RawWord& word) {
        std::vector<std::size_t> spots;
        for (std::size_t i = 0; i + 1 < word.size(); ++i)
            if (std::holds_alternative<NVec>(word[i]) &&
                std::holds_alternative<unsigned>(word[i + 1]))
                spots.push_back(i);
        if (spots.empty()) {
            RawWord sorted = word; // all b's already left of all letters
            out += canonicalize(sorted, label, dims);
            return;
        }
        std::size_t i = spots[rng() % spots.size()];
        const NVec& n = std::get<NVec>(word[i]);
        unsigned b = std::get<unsigned>(word[i + 1]);
        RawWord swapped = word;
        std::swap(swapped[i], swapped[i + 1]);
        reduce(swapped);
        if (n[b] >= 1) {
            NVec shrunk = n;
            --shrunk[b];
            RawWord merged(word.begin(), word.begin() + static_cast<long>(i));
            merged.push_back(shrunk);
            merged.insert(merged.end(), word.begin() + static_cast<long>(i) + 2,
                          word.end());
            reduce(merged);
        }
    };
    reduce(rw);
    return out;
}

} // namespace

TEST_CASE("canonicalize is confluent and idempotent") {
    std::mt19937 rng(2024);
    std::vector<RawLetter> alphabet{0u, 1u, RawLetter(N), RawLetter(M),
                                    RawLetter(NVec{1, 1})};
    for (int trial = 0; trial < 60; ++trial) {
        RawWord w;
        unsigned len = rng() % 5;
        for (unsigned i = 0; i < len; ++i)
            w.push_back(alphabet[rng() % alphabet.size()]);
        auto reference = canonicalize(w, 1, 2);
        for (int s = 0; s < 3; ++s)
            CHECK(shuffled_canonicalize(w, 1, 2, rng) == reference);
        // idempotence: every support variable is already canonical
        for (const auto& [v, c] : reference) {
            RawWord canon;
            for (std::size_t i = 0; i < 2; ++i)
                for (unsigned r = 0; r < v.word.u()[i]; ++r)
                    canon.push_back(static_cast<unsigned>(i));
            for (const auto& [l, r] : v.word.v())
                for (unsigned k = 0; k < r; ++k)
                    canon.push_back(l);
            CHECK(canonicalize(canon, 1, 2) == LinComb<SpdeVariable>::single(v));
        }
    }
}

TEST_CASE("population degree") {
    CHECK(population_degree_spde(target) == 1);
    CHECK(is_populated_spde(target));
    CHECK(population_degree_spde(SpdeMultiIndex::unit()) == 0);

    // (1-6)*2 + (1-3)*3 + (1-0)*17 = 1
    SpdeVariable w1 = var({0, 0}, {N, N, N, M, M, M});
    SpdeVariable w2 = var({1, 0}, {N, M, M});
    SpdeVariable w3 = var({0, 2}, {});
    CHECK(population_degree_spde(mono({{w1, 2}, {w2, 3}, {w3, 17}})) == 1);
}

TEST_CASE("symmetry") {
    CHECK(symmetry_spde(SpdeMultiIndex::variable(z_b1mm)) == 2);
    CHECK(symmetry_spde(SpdeMultiIndex::variable(var({2, 0}, {N}))) == 2);
    CHECK(symmetry_spde(SpdeMultiIndex::unit()) == 1);
    CHECK(symmetry_spde(target) == 2);
}

TEST_CASE("symmetry is multiplicative") {
    auto all = enumerate_populated_spde(2, 1, 2, 3, 1);
    for (const auto& a : all)
        for (const auto& b : all)
            CHECK(symmetry_spde(a * b) == symmetry_spde(a) * symmetry_spde(b));
}

TEST_CASE("forest symmetry and s_ext") {
    SpdeForest f1({0, 1});
    f1.insert(SpdeMultiIndex::variable(z_b0), {2, 0});
    CHECK(forest_symmetry_spde(f1) == 1);
    CHECK(s_ext_spde(f1) == Rational(1));

    SpdeForest f2({2, 0});
    f2.insert(SpdeMultiIndex::variable(z_b0), N);
    CHECK(forest_symmetry_spde(f2) == 2);

    SpdeForest f3({0, 0});
    f3.insert(SpdeMultiIndex::variable(z_b0), N, 2);
    CHECK(forest_symmetry_spde(f3) == 2);
    CHECK(s_ext_spde(f3) == Rational(2));

    CHECK_THROWS_AS(s_ext_spde(SpdeForest::unit(2)), std::invalid_argument);
}

TEST_CASE("inner product") {
    SpdeMultiIndex a = SpdeMultiIndex::variable(z_b1mm);
    CHECK(inner_product_spde(a, a) == Rational(2));
    CHECK(inner_product_spde(SpdeMultiIndex::variable(z_b0),
                             SpdeMultiIndex::variable(var({0, 1}, {}))) == Rational(0));
    CHECK(inner_product_spde(SpdeMultiIndex::unit(), SpdeMultiIndex::unit()) ==
          Rational(1));
}

TEST_CASE("derivation Dn") {
    // D^(n) z_{b0} = z_{b0 n} + z_{(n - e0)}
    auto d = derivation_Dn(SpdeMultiIndex::variable(z_b0), N);
    CHECK(d.coefficient_of(SpdeMultiIndex::variable(var({1, 0}, {N}))) == Rational(1));
    CHECK(d.coefficient_of(SpdeMultiIndex::variable(var({0, 0}, {Z}))) == Rational(1));
    CHECK(d.size() == 2);

    // no b0 available: single term
    auto d2 = derivation_Dn(SpdeMultiIndex::variable(z_b0), M);
    CHECK(d2 == LinComb<SpdeMultiIndex>::single(
                    SpdeMultiIndex::variable(var({1, 0}, {M}))));

    CHECK(derivation_Dn(SpdeMultiIndex::variable(z_empty), N) ==
          LinComb<SpdeMultiIndex>::single(SpdeMultiIndex::variable(z_n)));
    CHECK(derivation_Dn(SpdeMultiIndex::unit(), N).is_zero());
}

TEST_CASE("derivation partial") {
    CHECK(derivation_partial(SpdeMultiIndex::variable(z_n), 0) ==
          LinComb<SpdeMultiIndex>::single(SpdeMultiIndex::variable(var({1, 0}, {N}))));

    auto d = derivation_partial(mono({{z_b0, 1}, {z_empty, 1}}), 1);
    CHECK(d.coefficient_of(mono({{var({1, 1}, {}), 1}, {z_empty, 1}})) == Rational(1));
    CHECK(d.coefficient_of(mono({{z_b0, 1}, {var({0, 1}, {}), 1}})) == Rational(1));
    CHECK(d.size() == 2);

    CHECK(derivation_partial(SpdeMultiIndex::unit(), 0).is_zero());
}

TEST_CASE("adjoint partial") {
    // the worked value: partialbar^{(0,1)} (z_{b0} z_n z_{b1 m m}) = z_{b0} z_n z_{m m}
    SpdeMultiIndex hat1 = mono({{z_b0, 1}, {z_n, 1}, {z_b1mm, 1}});
    auto a = adjoint_partial_k(hat1, {0, 1});
    CHECK(a == LinComb<SpdeMultiIndex>::single(
                   mono({{z_b0, 1}, {z_n, 1}, {z_mm, 1}})));

    CHECK(adjoint_partial_k(target, {0, 0}) ==
          LinComb<SpdeMultiIndex>::single(target));
    CHECK(adjoint_partial_k(SpdeMultiIndex::variable(z_n), {1, 0}).is_zero());
}

TEST_CASE("adjoint Dn") {
    // Dbar^(n+e0) (z_{b0} z_n z_{mm}) = 2 z_{b0}^2 z_{mm} + ...
    SpdeMultiIndex in = mono({{z_b0, 1}, {z_n, 1}, {z_mm, 1}});
    auto a = adjoint_Dn(in, {2, 0});
    CHECK(a.coefficient_of(mono({{z_b0, 2}, {z_mm, 1}})) == Rational(2));

    CHECK(adjoint_Dn(SpdeMultiIndex::unit(), N).is_zero());
    CHECK(adjoint_Dn(SpdeMultiIndex::variable(var({0, 0}, {M})), M) ==
          LinComb<SpdeMultiIndex>::single(SpdeMultiIndex::variable(z_empty)));
}

TEST_CASE("D_word") {
    SpdeMultiIndex e = SpdeMultiIndex::variable(z_empty);
    CHECK(D_word(e, cw({0, 0}, {})) == LinComb<SpdeMultiIndex>::single(e));
    CHECK(D_word(e, cw({0, 0}, {N})) ==
          LinComb<SpdeMultiIndex>::single(SpdeMultiIndex::variable(z_n)));
    CHECK(D_word(e, cw({1, 0}, {N})) ==
          LinComb<SpdeMultiIndex>::single(SpdeMultiIndex::variable(var({1, 0}, {N}))));
}

TEST_CASE("grading") {
    CHECK(grading(SpdeMultiIndex::variable(z_empty)) == std::pair(0u, 1u));
    CHECK(grading(SpdeMultiIndex::variable(z_n)) == std::pair(1u, 2u));
    SpdeForest f({0, 1});
    f.insert(SpdeMultiIndex::variable(z_b0), {2, 0});
    CHECK(first_grade(f) == 3);
}

TEST_CASE("noncommutation of Dn and partial") {
    // D^(n) partial_i = partial_i D^(n) + D^(n - e_i)
    auto sweep = enumerate_populated_spde(2, 1, 2, 3, 2);
    for (const auto& m : sweep) {
        for (const NVec& n : nvec_with_mass_at_most(2, 3)) {
            for (unsigned i = 0; i < 2; ++i) {
                auto lhs = derivation_partial(m, i).map(
                    [&](const SpdeMultiIndex& x) { return derivation_Dn(x, n); });
                auto rhs = derivation_Dn(m, n).map(
                    [&](const SpdeMultiIndex& x) { return derivation_partial(x, i); });
                if (n[i] >= 1) {
                    NVec shrunk = n;
                    --shrunk[i];
                    rhs += derivation_Dn(m, shrunk);
                }
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("binomial basis expansion") {
    // D^(m) partial^u = sum_l (u choose l) partial^{u-l} D^(m-l) on z_{(l,0)}
    SpdeMultiIndex e = SpdeMultiIndex::variable(z_empty);
    for (const NVec& u : nvec_with_mass_at_most(2, 3)) {
        for (const NVec& mm : nvec_with_mass_at_most(2, 3)) {
            auto lhs = derivation_partial_k(e, u).map(
                [&](const SpdeMultiIndex& x) { return derivation_Dn(x, mm); });
            LinComb<SpdeMultiIndex> rhs;
            NVec bound = u;
            for (std::size_t i = 0; i < 2; ++i)
                bound[i] = std::min(bound[i], mm[i]);
            for (const NVec& l : nvec_range(bound)) {
                auto piece =
                    derivation_Dn(e, *nvec_sub(mm, l))
                        .map([&](const SpdeMultiIndex& x) {
                            return derivation_partial_k(x, *nvec_sub(u, l));
                        });
                rhs += piece.scaled(Rational(nvec_binomial(u, l)));
            }
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("adjointness of the SPDE operators") {
    auto sweep = enumerate_populated_spde(2, 1, 3, 4, 2);
    std::vector<NVec> ks = nvec_with_mass_at_most(2, 2);
    for (const auto& a : sweep) {
        for (const NVec& k : ks) {
            auto img = derivation_partial_k(a, k);
            for (const auto& [b, c] : img)
                CHECK(inner_product_spde(img, b) ==
                      inner_product_spde(adjoint_partial_k(b, k), a));
        }
        for (const NVec& n : nvec_with_mass_at_most(2, 2)) {
            auto img = derivation_Dn(a, n);
            for (const auto& [b, c] : img)
                CHECK(inner_product_spde(img, b) ==
                      inner_product_spde(adjoint_Dn(b, n), a));
        }
    }
}
