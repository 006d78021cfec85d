#include "mindex/laws.hpp"
#include "mindex/io.hpp"

#include <json.hpp>

#include <functional>
#include <random>
#include <sstream>

namespace mindex {

namespace {

const IoSession kSpdeIo{2, {"l"}};
const IoSession kOdeIo{1, {"l"}};

struct Checker {
    LawReport rep;

    void check(bool ok, const std::string& input, const std::string& expected,
               const std::string& actual) {
        ++rep.instances;
        if (!ok)
            rep.failures.push_back({input, expected, actual});
    }

    template <class T, class Render>
    void expect_eq(const T& expected, const T& actual, const std::string& input,
                   Render render_value) {
        check(expected == actual, input, render_value(expected), render_value(actual));
    }
};

std::string txt(const Rational& r) { return render(r, Format::text); }
std::string txt(const LinComb<OdeMultiIndex>& c) { return render(c, Format::text); }
std::string txt(const LinComb<OdeTensor>& c) { return render(c, Format::text); }
std::string txt(const LinComb<SpdeMultiIndex>& c) {
    return render(c, Format::text, kSpdeIo);
}
std::string txt(const LinComb<SpdeTensor>& c) {
    return render(c, Format::text, kSpdeIo);
}

// --- ode laws ----------------------------------------------------------------

LawReport law_ode_adjointness(unsigned bound) {
    Checker ck;
    ck.rep.law = "ode-adjointness";
    for (unsigned n = 1; n <= bound; ++n)
        for (const auto& a : enumerate_populated(n)) {
            for (const auto& [b, c] : derivation_D(a))
                ck.expect_eq(inner_product(derivation_D(a), b),
                             inner_product(adjoint_Dbar(b), a),
                             "<D " + render(a, Format::text) + ", " +
                                 render(b, Format::text) + ">",
                             [](const Rational& r) { return txt(r); });
            for (const auto& [b, c] : adjoint_Dbar(a))
                ck.expect_eq(inner_product(derivation_D(b), a),
                             inner_product(adjoint_Dbar(a), b),
                             "<D " + render(b, Format::text) + ", " +
                                 render(a, Format::text) + ">",
                             [](const Rational& r) { return txt(r); });
        }
    return ck.rep;
}

LawReport law_ode_derivation_leibniz(unsigned bound) {
    Checker ck;
    ck.rep.law = "ode-derivation-leibniz";
    for (unsigned n1 = 1; n1 < bound; ++n1)
        for (unsigned n2 = 1; n1 + n2 <= bound; ++n2)
            for (const auto& a : enumerate_populated(n1))
                for (const auto& b : enumerate_populated(n2)) {
                    auto lhs = derivation_D(a * b);
                    auto rhs =
                        multiply(derivation_D(a), LinComb<OdeMultiIndex>::single(b)) +
                        multiply(LinComb<OdeMultiIndex>::single(a), derivation_D(b));
                    ck.expect_eq(lhs, rhs,
                                 "D(" + render(a * b, Format::text) + ")",
                                 [](const LinComb<OdeMultiIndex>& c) { return txt(c); });
                }
    return ck.rep;
}

LawReport law_symmetry_multiplicativity(unsigned bound) {
    Checker ck;
    ck.rep.law = "symmetry-multiplicativity";
    for (unsigned n1 = 1; n1 < bound; ++n1)
        for (unsigned n2 = 1; n1 + n2 <= bound; ++n2)
            for (const auto& a : enumerate_populated(n1))
                for (const auto& b : enumerate_populated(n2))
                    ck.check(symmetry(a * b) == symmetry(a) * symmetry(b),
                             "S(" + render(a * b, Format::text) + ")",
                             Rational(symmetry(a) * symmetry(b)).str(),
                             Rational(symmetry(a * b)).str());
    return ck.rep;
}

LawReport law_ode_formula_equivalence(unsigned bound) {
    Checker ck;
    ck.rep.law = "ode-formula-equivalence";
    for (unsigned n = 1; n <= bound; ++n)
        for (const auto& m : enumerate_populated(n)) {
            ck.expect_eq(delta_primal(m), delta_adjoint(m),
                         "delta(" + render(m, Format::text) + ")",
                         [](const LinComb<OdeTensor>& c) { return txt(c); });
            ck.expect_eq(delta_primal(m), oracle_delta(m),
                         "delta vs oracle (" + render(m, Format::text) + ")",
                         [](const LinComb<OdeTensor>& c) { return txt(c); });
            if (n <= 4) {
                ck.expect_eq(delta_minus_primal(m), delta_minus_adjoint(m),
                             "delta_minus(" + render(m, Format::text) + ")",
                             [](const LinComb<OdeTensor>& c) { return txt(c); });
                ck.expect_eq(delta_minus_primal(m), oracle_delta_minus(m),
                             "delta_minus vs oracle (" + render(m, Format::text) + ")",
                             [](const LinComb<OdeTensor>& c) { return txt(c); });
            }
        }
    return ck.rep;
}

LawReport law_ode_duality_star2(unsigned bound) {
    Checker ck;
    ck.rep.law = "ode-duality-star2";
    for (unsigned n = 1; n <= bound; ++n)
        for (const auto& m : enumerate_populated(n)) {
            auto d = delta_primal(m);
            Rational s_m(symmetry(m));
            std::vector<OdeForest> forests{OdeForest{}};
            for (const auto& sp : enumerate_splittings(m))
                forests.push_back(sp.parts);
            for (const auto& f : forests)
                for (const auto& bar : enumerate_populated(n)) {
                    Rational lhs = star2(f, bar).coefficient_of(m) * s_m;
                    Rational rhs = d.coefficient_of(OdeTensor{f, bar}) *
                                   Rational(forest_symmetry(f)) *
                                   Rational(symmetry(bar));
                    ck.check(lhs == rhs,
                             "<" + render(f, Format::text) + " *2 " +
                                 render(bar, Format::text) + ", " +
                                 render(m, Format::text) + ">",
                             lhs.str(), rhs.str());
                }
        }
    return ck.rep;
}

LawReport law_ode_duality_star1(unsigned bound) {
    Checker ck;
    ck.rep.law = "ode-duality-star1";
    for (unsigned n = 1; n <= bound; ++n)
        for (const auto& m : enumerate_populated(n)) {
            auto d = delta_minus_primal(m);
            Rational s_m(symmetry(m));
            for (const auto& f : enumerate_populated_forests(n))
                for (const auto& alpha : enumerate_populated(n)) {
                    if (norm(alpha) != f.size())
                        continue;
                    Rational lhs = star1(f, alpha).coefficient_of(m) * s_m;
                    Rational rhs = d.coefficient_of(OdeTensor{f, alpha}) *
                                   Rational(forest_symmetry(f)) *
                                   Rational(symmetry(alpha));
                    ck.check(lhs == rhs,
                             "<" + render(f, Format::text) + " *1 " +
                                 render(alpha, Format::text) + ", " +
                                 render(m, Format::text) + ">",
                             lhs.str(), rhs.str());
                }
        }
    return ck.rep;
}

// --- spde laws ----------------------------------------------------------------

LawReport law_spde_noncommutation(unsigned bound) {
    Checker ck;
    ck.rep.law = "spde-noncommutation";
    auto sweep = enumerate_populated_spde(2, 1, std::min(bound, 2u), 3, 2);
    for (const auto& m : sweep)
        for (const NVec& n : nvec_with_mass_at_most(2, bound))
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
                ck.expect_eq(lhs, rhs,
                             "D" + render(LinComb<SpdeMultiIndex>::single(m),
                                          Format::text, kSpdeIo) +
                                 " n=(" + std::to_string(n[0]) + "," +
                                 std::to_string(n[1]) + ") i=" + std::to_string(i),
                             [](const LinComb<SpdeMultiIndex>& c) { return txt(c); });
            }
    return ck.rep;
}

LawReport law_spde_binomial_expansion(unsigned bound) {
    Checker ck;
    ck.rep.law = "spde-binomial-expansion";
    SpdeMultiIndex e =
        SpdeMultiIndex::variable(SpdeVariable{1, CanonicalWord::empty(2)});
    for (const NVec& u : nvec_with_mass_at_most(2, bound))
        for (const NVec& n : nvec_with_mass_at_most(2, bound)) {
            auto lhs = derivation_partial_k(e, u).map(
                [&](const SpdeMultiIndex& x) { return derivation_Dn(x, n); });
            LinComb<SpdeMultiIndex> rhs;
            NVec top = u;
            for (std::size_t i = 0; i < 2; ++i)
                top[i] = std::min(top[i], n[i]);
            for (const NVec& l : nvec_range(top))
                rhs += derivation_Dn(e, *nvec_sub(n, l))
                           .map([&](const SpdeMultiIndex& x) {
                               return derivation_partial_k(x, *nvec_sub(u, l));
                           })
                           .scaled(Rational(nvec_binomial(u, l)));
            ck.expect_eq(lhs, rhs,
                         "u=(" + std::to_string(u[0]) + "," + std::to_string(u[1]) +
                             ") n=(" + std::to_string(n[0]) + "," +
                             std::to_string(n[1]) + ")",
                         [](const LinComb<SpdeMultiIndex>& c) { return txt(c); });
        }
    return ck.rep;
}

LawReport law_spde_adjointness(unsigned bound) {
    Checker ck;
    ck.rep.law = "spde-adjointness";
    auto sweep = enumerate_populated_spde(2, 1, bound, bound + 1, 2);
    for (const auto& a : sweep) {
        for (const NVec& k : nvec_with_mass_at_most(2, 2)) {
            auto img = derivation_partial_k(a, k);
            for (const auto& [b, c] : img)
                ck.check(inner_product_spde(img, b) ==
                             inner_product_spde(adjoint_partial_k(b, k), a),
                         "<partial^k " + render(a, Format::text, kSpdeIo) + ", " +
                             render(b, Format::text, kSpdeIo) + ">",
                         inner_product_spde(img, b).str(),
                         inner_product_spde(adjoint_partial_k(b, k), a).str());
        }
        for (const NVec& n : nvec_with_mass_at_most(2, 2)) {
            auto img = derivation_Dn(a, n);
            for (const auto& [b, c] : img)
                ck.check(inner_product_spde(img, b) ==
                             inner_product_spde(adjoint_Dn(b, n), a),
                         "<D^(n) " + render(a, Format::text, kSpdeIo) + ", " +
                             render(b, Format::text, kSpdeIo) + ">",
                         inner_product_spde(img, b).str(),
                         inner_product_spde(adjoint_Dn(b, n), a).str());
        }
    }
    return ck.rep;
}

LawReport law_spde_canonicalize_confluence(unsigned bound, std::uint64_t seed) {
    Checker ck;
    ck.rep.law = "spde-canonicalize-confluence";
    std::mt19937_64 rng(seed);

    // rewriter that resolves a random reducible adjacency each step
    std::function<LinComb<SpdeVariable>(const RawWord&)> shuffled =
        [&](const RawWord& word) -> LinComb<SpdeVariable> {
        std::vector<std::size_t> spots;
        for (std::size_t i = 0; i + 1 < word.size(); ++i)
            if (std::holds_alternative<NVec>(word[i]) &&
                std::holds_alternative<unsigned>(word[i + 1]))
                spots.push_back(i);
        if (spots.empty())
            return canonicalize(word, 1, 2);
        std::size_t i = spots[std::uniform_int_distribution<std::size_t>(
            0, spots.size() - 1)(rng)];
        const NVec& n = std::get<NVec>(word[i]);
        unsigned b = std::get<unsigned>(word[i + 1]);
        RawWord swapped = word;
        std::swap(swapped[i], swapped[i + 1]);
        LinComb<SpdeVariable> out = shuffled(swapped);
        if (n[b] >= 1) {
            NVec shrunk = n;
            --shrunk[b];
            RawWord merged(word.begin(), word.begin() + static_cast<long>(i));
            merged.push_back(shrunk);
            merged.insert(merged.end(), word.begin() + static_cast<long>(i) + 2,
                          word.end());
            out += shuffled(merged);
        }
        return out;
    };

    std::vector<NVec> letters = nvec_with_mass_at_most(2, 2);
    for (unsigned trial = 0; trial < 50 * bound; ++trial) {
        std::size_t len = std::uniform_int_distribution<std::size_t>(0, bound)(rng);
        RawWord w;
        for (std::size_t i = 0; i < len; ++i) {
            if (std::uniform_int_distribution<int>(0, 1)(rng))
                w.push_back(static_cast<unsigned>(
                    std::uniform_int_distribution<int>(0, 1)(rng)));
            else
                w.push_back(letters[std::uniform_int_distribution<std::size_t>(
                    0, letters.size() - 1)(rng)]);
        }
        auto a = canonicalize(w, 1, 2);
        auto b = shuffled(w);
        std::ostringstream in;
        in << "raw word of length " << len << " (trial " << trial << ")";
        ck.check(a == b, in.str(), "leftmost rewriting", "randomized rewriting");
    }
    return ck.rep;
}

LawReport law_spde_duality(unsigned bound) {
    Checker ck;
    ck.rep.law = "spde-duality";
    GradeBound g{bound};
    for (const auto& beta : enumerate_populated_spde(2, 1, 2, 3, 1)) {
        auto d = delta_spde_primal(beta, g);
        Rational s_beta(symmetry_spde(beta));
        for (const auto& f : enumerate_spde_forests(beta, g)) {
            SpdeMultiIndex hat = beta - f.merged_product();
            for (const auto& bar : detail::spde_predecessors(hat, f)) {
                Rational lhs = star2_spde(f, bar).coefficient_of(beta) * s_beta;
                Rational rhs = d.coefficient_of(SpdeTensor{f, bar}) *
                               Rational(forest_symmetry_spde(f)) *
                               Rational(symmetry_spde(bar));
                ck.check(lhs == rhs,
                         "<" + render(f, Format::text, kSpdeIo) + " *2 " +
                             render(bar, Format::text, kSpdeIo) + ", " +
                             render(beta, Format::text, kSpdeIo) + ">",
                         lhs.str(), rhs.str());
            }
        }
    }
    return ck.rep;
}

LawReport law_spde_formula_equivalence(unsigned bound) {
    Checker ck;
    ck.rep.law = "spde-formula-equivalence";
    GradeBound g{std::min(bound, 2u)};
    for (const auto& m : enumerate_populated_spde(2, 1, 2, 3, 1)) {
        ck.expect_eq(delta_spde_primal(m, g), delta_spde_adjoint(m, g),
                     "delta(" + render(m, Format::text, kSpdeIo) + ")",
                     [](const LinComb<SpdeTensor>& c) { return txt(c); });
        ck.expect_eq(delta_spde_primal(m, g), oracle_delta_spde(m, g),
                     "delta vs oracle (" + render(m, Format::text, kSpdeIo) + ")",
                     [](const LinComb<SpdeTensor>& c) { return txt(c); });
        GradeBound g1{std::min(bound, 1u)};
        ck.expect_eq(delta_minus_spde_primal(m, g1), delta_minus_spde_adjoint(m, g1),
                     "delta_minus(" + render(m, Format::text, kSpdeIo) + ")",
                     [](const LinComb<SpdeTensor>& c) { return txt(c); });
        ck.expect_eq(delta_minus_spde_primal(m, g1), oracle_delta_minus_spde(m, g1),
                     "delta_minus vs oracle (" + render(m, Format::text, kSpdeIo) + ")",
                     [](const LinComb<SpdeTensor>& c) { return txt(c); });
    }
    return ck.rep;
}

LawReport law_spde_truncation(unsigned bound) {
    Checker ck;
    ck.rep.law = "spde-truncation";
    auto primitive = [](const SpdeTensor& t) {
        return t.left.is_unit() || t.right.is_unit();
    };
    for (const auto& m : enumerate_populated_spde(2, 1, 2, 3, 1))
        for (unsigned g = 0; g < std::min(bound, 3u); ++g) {
            auto lo = delta_spde_primal(m, GradeBound{g});
            auto hi = delta_spde_primal(m, GradeBound{g + 1});
            LinComb<SpdeTensor> restricted;
            for (const auto& [t, c] : hi)
                if (primitive(t) || first_grade(t.left) <= g)
                    restricted.add_term(t, c);
            ck.expect_eq(lo, restricted,
                         "delta(" + render(m, Format::text, kSpdeIo) +
                             ") at grade " + std::to_string(g),
                         [](const LinComb<SpdeTensor>& c) { return txt(c); });
        }
    return ck.rep;
}

LawReport law_ode_embedding(unsigned bound) {
    Checker ck;
    ck.rep.law = "ode-embedding";
    for (unsigned k = 0; k <= bound; ++k) {
        OdeMultiIndex a = OdeMultiIndex::letter(k);
        LinComb<SpdeMultiIndex> d_img, dbar_img;
        for (const auto& [x, c] : derivation_D(a))
            d_img.add_term(embed_ode(x), c);
        for (const auto& [x, c] : adjoint_Dbar(a))
            dbar_img.add_term(embed_ode(x), c);
        ck.expect_eq(derivation_Dn(embed_ode(a), NVec{1}), d_img,
                     "embedded D(z" + std::to_string(k) + ")",
                     [](const LinComb<SpdeMultiIndex>& c) {
                         return render(c, Format::text, kOdeIo);
                     });
        ck.expect_eq(adjoint_Dn(embed_ode(a), NVec{1}), dbar_img,
                     "embedded Dbar(z" + std::to_string(k) + ")",
                     [](const LinComb<SpdeMultiIndex>& c) {
                         return render(c, Format::text, kOdeIo);
                     });
        ck.check(symmetry_spde(embed_ode(a)) == symmetry(a),
                 "embedded S(z" + std::to_string(k) + ")",
                 Rational(symmetry(a)).str(), Rational(symmetry_spde(embed_ode(a))).str());
    }
    return ck.rep;
}

} // namespace

std::vector<std::string> known_laws() {
    return {"ode-adjointness",
            "ode-derivation-leibniz",
            "symmetry-multiplicativity",
            "ode-formula-equivalence",
            "ode-duality-star2",
            "ode-duality-star1",
            "spde-noncommutation",
            "spde-binomial-expansion",
            "spde-adjointness",
            "spde-canonicalize-confluence",
            "spde-duality",
            "spde-formula-equivalence",
            "spde-truncation",
            "ode-embedding"};
}

LawReport run_law_suite(const std::string& name, unsigned bound, std::uint64_t seed) {
    if (name == "ode-adjointness")
        return law_ode_adjointness(bound);
    if (name == "ode-derivation-leibniz")
        return law_ode_derivation_leibniz(bound);
    if (name == "symmetry-multiplicativity")
        return law_symmetry_multiplicativity(bound);
    if (name == "ode-formula-equivalence")
        return law_ode_formula_equivalence(bound);
    if (name == "ode-duality-star2")
        return law_ode_duality_star2(bound);
    if (name == "ode-duality-star1")
        return law_ode_duality_star1(bound);
    if (name == "spde-noncommutation")
        return law_spde_noncommutation(bound);
    if (name == "spde-binomial-expansion")
        return law_spde_binomial_expansion(bound);
    if (name == "spde-adjointness")
        return law_spde_adjointness(bound);
    if (name == "spde-canonicalize-confluence")
        return law_spde_canonicalize_confluence(bound, seed);
    if (name == "spde-duality")
        return law_spde_duality(bound);
    if (name == "spde-formula-equivalence")
        return law_spde_formula_equivalence(bound);
    if (name == "spde-truncation")
        return law_spde_truncation(bound);
    if (name == "ode-embedding")
        return law_ode_embedding(bound);
    throw std::invalid_argument("unknown law: " + name);
}

std::string render_report_text(const LawReport& r) {
    std::ostringstream os;
    os << "law:       " << r.law << "\n"
       << "instances: " << r.instances << "\n"
       << "status:    " << (r.passed() ? "pass" : "fail") << "\n";
    for (const auto& f : r.failures)
        os << "  FAIL " << f.input << "\n"
           << "    expected: " << f.expected << "\n"
           << "    actual:   " << f.actual << "\n";
    return os.str();
}

std::string render_report_json(const LawReport& r) {
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : r.failures)
        fails.push_back({{"input", f.input},
                         {"expected", f.expected},
                         {"actual", f.actual}});
    return nlohmann::json{{"law", r.law},
                          {"instances", r.instances},
                          {"status", r.passed() ? "pass" : "fail"},
                          {"failures", fails}}
        .dump();
}

} // namespace mindex
