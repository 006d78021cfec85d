// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Every comparison is exact.
#include "mindex/io.hpp"
#include "mindex/laws.hpp"

#include <iostream>
#include <string>

using namespace mindex;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what
              << "\n";
    if (!ok)
        ++failures;
}

OdeMultiIndex mi(std::initializer_list<std::pair<const unsigned, unsigned>> exps) {
    return OdeMultiIndex(OdeMultiIndex::exp_map(exps));
}

const IoSession kIo{2, {"l"}};

bool criterion1_golden_delta() {
    OdeMultiIndex beta = mi({{0, 2}, {1, 1}, {2, 1}});
    auto d = delta_primal(beta);
    OdeMultiIndex z0 = mi({{0, 1}});
    OdeMultiIndex z0z1 = mi({{0, 1}, {1, 1}});
    auto c = [&](const OdeForest& f, const OdeMultiIndex& r) {
        return d.coefficient_of(OdeTensor{f, r});
    };
    return d.size() == 8 && c(OdeForest{}, beta) == Rational(1) &&
           c(OdeForest::singleton(beta), OdeMultiIndex::unit()) == Rational(1) &&
           c(OdeForest::singleton(z0), mi({{0, 1}, {1, 2}})) == Rational(4) &&
           c(OdeForest::singleton(z0), mi({{0, 2}, {2, 1}})) == Rational(2) &&
           c(OdeForest({z0, z0z1}), z0) == Rational(2) &&
           c(OdeForest({z0, z0}), z0z1) == Rational(3) &&
           c(OdeForest::singleton(z0z1), z0z1) == Rational(2) &&
           c(OdeForest::singleton(mi({{0, 2}, {2, 1}})), z0) == Rational(1);
}

bool criterion2_golden_dbar() {
    OdeMultiIndex m = mi({{0, 1}, {1, 2}, {2, 1}});
    auto img = adjoint_Dbar(m);
    OdeMultiIndex a = mi({{0, 2}, {1, 1}, {2, 1}});
    OdeMultiIndex b = mi({{0, 1}, {1, 3}});
    return img.size() == 2 && img.coefficient_of(a) == Rational(2) &&
           img.coefficient_of(b) == Rational(6) &&
           inner_product(img, a) == Rational(4) && inner_product(img, b) == Rational(6);
}

bool criterion3_golden_delta_minus() {
    OdeMultiIndex beta = mi({{0, 2}, {2, 1}});
    auto d = delta_minus_primal(beta);
    OdeMultiIndex z0 = mi({{0, 1}});
    OdeMultiIndex z0z1 = mi({{0, 1}, {1, 1}});
    auto c = [&](const OdeForest& f, const OdeMultiIndex& r) {
        return d.coefficient_of(OdeTensor{f, r});
    };
    return d.size() == 3 && c(OdeForest::singleton(beta), z0) == Rational(1) &&
           c(OdeForest({z0, z0z1}), z0z1) == Rational(2) &&
           c(OdeForest({z0, z0, z0}), beta) == Rational(1) &&
           d == oracle_delta_minus(beta);
}

bool criterion4_formula_equivalence() {
    for (unsigned n = 1; n <= 5; ++n)
        for (const auto& m : enumerate_populated(n)) {
            if (delta_primal(m) != delta_adjoint(m))
                return false;
            if (delta_minus_primal(m) != delta_minus_adjoint(m))
                return false;
        }
    return true;
}

bool criterion5_duality() {
    return run_law_suite("ode-duality-star2", 5).passed() &&
           run_law_suite("ode-duality-star1", 4).passed();
}

bool criterion6_spde_operator_laws() {
    return run_law_suite("spde-noncommutation", 3).passed() &&
           run_law_suite("spde-binomial-expansion", 3).passed();
}

bool criterion7_spde_adjointness() {
    return run_law_suite("spde-adjointness", 3).passed();
}

bool criterion8_spde_golden_terms() {
    SpdeMultiIndex target = parse_spde_multiindex(
        "z[l; b0; -]^2 z[l; -; (1,0)] z[l; b1; (0,1)^2]", kIo);
    auto d = delta_spde_primal(target, GradeBound{3});
    SpdeMultiIndex z_b0 = parse_spde_multiindex("z[l; b0; -]", kIo);
    SpdeForest f2({0, 1});
    f2.insert(z_b0, {2, 0});
    if (d.coefficient_of(SpdeTensor{
            f2, parse_spde_multiindex("z[l; b0; -]^2 z[l; -; (0,1)^2]", kIo)}) !=
        Rational(2))
        return false;
    // the 1/l! family inside the bound, skipping l = (1,0)
    for (const NVec& l : nvec_with_mass_at_most(2, 1)) {
        if (l == NVec{1, 0})
            continue;
        SpdeForest fl({0, 1});
        fl.insert(z_b0, nvec_add(NVec{1, 0}, l));
        SpdeMultiIndex bar =
            SpdeMultiIndex::variable(SpdeVariable{1, CanonicalWord(l, {})}) * z_b0 *
            parse_spde_multiindex("z[l; -; (0,1)^2]", kIo);
        if (d.coefficient_of(SpdeTensor{fl, bar}) !=
            Rational(1) / Rational(nvec_factorial(l)))
            return false;
    }
    return true;
}

bool criterion9_ode_embedding() {
    // criterion 1 through the embedding
    OdeMultiIndex beta = mi({{0, 2}, {1, 1}, {2, 1}});
    auto d = delta_spde_primal(embed_ode(beta), GradeBound{7});
    for (const auto& [t, c] : delta_primal(beta)) {
        SpdeForest f = t.left.empty() && !t.right.is_unit()
                           ? SpdeForest::unit(1)
                           : (t.right.is_unit()
                                  ? SpdeForest::singleton(1, embed_ode(beta), NVec{0})
                                  : embed_ode_forest_marked(t.left));
        if (d.coefficient_of(SpdeTensor{f, embed_ode(t.right)}) != c)
            return false;
    }
    // criterion 2
    OdeMultiIndex m = mi({{0, 1}, {1, 2}, {2, 1}});
    auto img = adjoint_Dn(embed_ode(m), NVec{1});
    if (inner_product_spde(img, embed_ode(mi({{0, 2}, {1, 1}, {2, 1}}))) !=
            Rational(4) ||
        inner_product_spde(img, embed_ode(mi({{0, 1}, {1, 3}}))) != Rational(6))
        return false;
    // criterion 3
    OdeMultiIndex b2 = mi({{0, 2}, {2, 1}});
    auto dm = delta_minus_spde_primal(embed_ode(b2), GradeBound{4});
    for (const auto& [t, c] : delta_minus_primal(b2))
        if (dm.coefficient_of(SpdeTensor{embed_ode_forest_bare(t.left),
                                         embed_ode_trunk(t.right)}) != c)
            return false;
    return true;
}

bool criterion10_engineering() {
    // json round-trip and byte-determinism on representative outputs of every
    // operation family; all coefficients are exact rationals end to end
    OdeMultiIndex beta = mi({{0, 2}, {1, 1}, {2, 1}});
    auto d = delta_primal(beta);
    if (parse_json_ode_tensor_comb(render(d, Format::json)) != d)
        return false;
    if (render(d, Format::json) != render(delta_primal(beta), Format::json))
        return false;
    if (render(d, Format::text) != render(delta_primal(beta), Format::text))
        return false;
    auto dm = delta_minus_primal(mi({{0, 2}, {2, 1}}));
    if (parse_json_ode_tensor_comb(render(dm, Format::json)) != dm)
        return false;
    if (parse_ode_multiindex(render(beta, Format::text)) != beta)
        return false;

    SpdeMultiIndex target = parse_spde_multiindex(
        "z[l; b0; -]^2 z[l; -; (1,0)] z[l; b1; (0,1)^2]", kIo);
    auto ds = delta_spde_primal(target, GradeBound{3});
    if (parse_json_spde_tensor_comb(render(ds, Format::json, kIo)) != ds)
        return false;
    if (render(ds, Format::json, kIo) !=
        render(delta_spde_primal(target, GradeBound{3}), Format::json, kIo))
        return false;
    if (parse_spde_multiindex(render(target, Format::text, kIo), kIo) != target)
        return false;
    auto dms = delta_minus_spde_primal(target, GradeBound{2});
    return parse_json_spde_tensor_comb(render(dms, Format::json, kIo)) == dms;
}

} // namespace

int main() {
    report(1, "golden coproduct of z0^2 z1 z2 (8 exact coefficients)",
           criterion1_golden_delta());
    report(2, "golden adjoint derivation and pairings 4, 6", criterion2_golden_dbar());
    report(3, "golden extraction-contraction coproduct of z0^2 z2 (1, 2, 1)",
           criterion3_golden_delta_minus());
    report(4, "primal/adjoint formula equivalence on every populated norm <= 5",
           criterion4_formula_equivalence());
    report(5, "duality sweeps for both products (norm <= 5 / <= 4)",
           criterion5_duality());
    report(6, "word-calculus operator laws (noncommutation, binomial expansion)",
           criterion6_spde_operator_laws());
    report(7, "word-calculus adjointness on first grading <= 3",
           criterion7_spde_adjointness());
    report(8, "word-calculus golden terms (coefficient 2 and the 1/l! family)",
           criterion8_spde_golden_terms());
    report(9, "one-dimensional embedding reproduces criteria 1-3",
           criterion9_ode_embedding());
    report(10, "round-trip identity, byte-determinism, exact arithmetic",
           criterion10_engineering());
    return failures == 0 ? 0 : 1;
}
