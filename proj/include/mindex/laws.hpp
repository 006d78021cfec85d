#ifndef MINDEX_LAWS_HPP
#define MINDEX_LAWS_HPP

#include "mindex/ode_calculus.hpp"
#include "mindex/spde_calculus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mindex {

/// Outcome of one algebraic-law verification sweep.
struct LawReport {
    std::string law;
    unsigned long instances = 0;
    struct Failure {
        std::string input;
        std::string expected;
        std::string actual;
    };
    std::vector<Failure> failures;

    bool passed() const { return failures.empty(); }
};

std::vector<std::string> known_laws();

/// Runs a named law suite up to the given bound. Randomized suites use the
/// seed; exhaustive ones ignore it. Throws on an unknown name.
LawReport run_law_suite(const std::string& name, unsigned bound, std::uint64_t seed = 20240901);

std::string render_report_text(const LawReport& r);
std::string render_report_json(const LawReport& r);

/// All multisets of populated multi-indices (of norm <= total) whose norms
/// sum to exactly `total`. Candidate left factors for the oracles.
inline std::vector<OdeForest> enumerate_populated_forests(unsigned total) {
    std::vector<OdeMultiIndex> pool = enumerate_populated(total);
    std::vector<OdeForest> out;
    std::function<void(std::size_t, OdeForest&, unsigned)> rec =
        [&](std::size_t from, OdeForest& acc, unsigned left) {
            if (left == 0) {
                out.push_back(acc);
                return;
            }
            for (std::size_t i = from; i < pool.size(); ++i) {
                unsigned nm = norm(pool[i]);
                if (nm > left)
                    continue;
                OdeForest next = acc;
                next.insert(pool[i]);
                rec(i, next, left - nm);
            }
        };
    OdeForest acc;
    rec(0, acc, total);
    return out;
}

/// Duality oracle for the BCK-type coproduct: reconstructs every coefficient
/// of Delta(m) as <F *2 bar, m> / (S(F) S(bar)) over a candidate sweep. Never
/// touches either coproduct formula, so a mismatch localizes the bug.
inline LinComb<OdeTensor> oracle_delta(const OdeMultiIndex& m) {
    require_populated(m, "oracle_delta");
    LinComb<OdeTensor> out;
    // Forest candidates: sub-multisets of m (left factors never exceed m
    // componentwise) plus the empty forest.
    std::vector<OdeForest> forests{OdeForest{}};
    for (const auto& sp : enumerate_splittings(m))
        forests.push_back(sp.parts);
    std::sort(forests.begin(), forests.end());
    forests.erase(std::unique(forests.begin(), forests.end()), forests.end());

    std::vector<OdeMultiIndex> bars = enumerate_populated(norm(m));
    Rational s_m(symmetry(m));
    for (const auto& f : forests) {
        Rational s_f(forest_symmetry(f));
        // bar = z^0: the convention pairs the forest against m directly,
        // which contributes exactly the primitive term m (x) z^0.
        if (f == OdeForest::singleton(m))
            out.add_term(OdeTensor{f, OdeMultiIndex::unit()}, s_m / s_f);
        for (const auto& bar : bars) {
            Rational pairing = star2(f, bar).coefficient_of(m) * s_m;
            if (pairing.is_zero())
                continue;
            out.add_term(OdeTensor{f, bar}, pairing / (s_f * Rational(symmetry(bar))));
        }
    }
    return out;
}

/// Duality oracle for the extraction-contraction coproduct, via *1.
inline LinComb<OdeTensor> oracle_delta_minus(const OdeMultiIndex& m) {
    require_populated(m, "oracle_delta_minus");
    LinComb<OdeTensor> out;
    Rational s_m(symmetry(m));
    std::vector<OdeMultiIndex> trunks = enumerate_populated(norm(m));
    for (const auto& f : enumerate_populated_forests(norm(m))) {
        Rational s_f(forest_symmetry(f));
        for (const auto& alpha : trunks) {
            if (norm(alpha) != f.size())
                continue;
            Rational pairing = star1(f, alpha).coefficient_of(m) * s_m;
            if (pairing.is_zero())
                continue;
            out.add_term(OdeTensor{f, alpha},
                         pairing / (s_f * Rational(symmetry(alpha))));
        }
    }
    return out;
}

/// The one-dimensional-word image of the letter z_k: u = 0 and k copies of
/// the letter (1).
inline CanonicalWord embedded_word(unsigned k) {
    CanonicalWord w = CanonicalWord::empty(1);
    if (k)
        w = w.with_letter(NVec{1}, static_cast<int>(k));
    return w;
}

inline SpdeMultiIndex embed_ode(const OdeMultiIndex& m, unsigned label = 1) {
    SpdeMultiIndex out;
    for (const auto& [k, e] : m.exponents())
        out = out.with_raised(SpdeVariable{label, embedded_word(k)},
                              static_cast<int>(e));
    return out;
}

inline SpdeTrunk embed_ode_trunk(const OdeTrunk& t) {
    SpdeTrunk out;
    for (const auto& [k, e] : t.exponents())
        out = out.with_raised(SpdeVariable{0, embedded_word(k)}, static_cast<int>(e));
    return out;
}

/// The grafting-side forest image: every member carries one D^((1)) marker,
/// matching the single D each member contributes on the one-dimensional side.
inline SpdeForest embed_ode_forest_marked(const OdeForest& f, unsigned label = 1) {
    SpdeForest out(nvec_zero(1));
    for (const auto& [m, r] : f.members())
        out.insert(embed_ode(m, label), NVec{1}, r);
    return out;
}

inline SpdeForest embed_ode_forest_bare(const OdeForest& f, unsigned label = 1) {
    SpdeForest out(nvec_zero(1));
    for (const auto& [m, r] : f.members())
        out.insert(embed_ode(m, label), nvec_zero(1), r);
    return out;
}

/// All populated SPDE multi-indices over one label within the given budgets:
/// letter mass <= max_mass (first grade), letter count + variable count <=
/// max_second, total b-letter count <= max_b. All three bounds are needed to
/// make the family finite.
inline std::vector<SpdeMultiIndex> enumerate_populated_spde(std::size_t dims,
                                                            unsigned label,
                                                            unsigned max_mass,
                                                            unsigned max_second,
                                                            unsigned max_b) {
    // candidate variables
    std::vector<SpdeVariable> pool;
    std::vector<NVec> letters = nvec_with_mass_at_most(dims, max_mass);
    std::sort(letters.begin(), letters.end());
    unsigned max_letters = max_second > 0 ? max_second - 1 : 0;
    std::function<void(std::size_t, CanonicalWord::letter_map&, unsigned, unsigned)>
        words = [&](std::size_t from, CanonicalWord::letter_map& v, unsigned mass_left,
                    unsigned count_left) {
            for (const NVec& u : nvec_with_mass_at_most(dims, max_b))
                pool.push_back(SpdeVariable{label, CanonicalWord(u, v)});
            if (count_left == 0)
                return;
            for (std::size_t i = from; i < letters.size(); ++i) {
                unsigned lm = nvec_norm1(letters[i]);
                if (lm > mass_left)
                    continue;
                ++v[letters[i]];
                words(i, v, mass_left - lm, count_left - 1);
                --v[letters[i]];
                if (v[letters[i]] == 0)
                    v.erase(letters[i]);
            }
        };
    CanonicalWord::letter_map v;
    words(0, v, max_mass, max_letters);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    std::vector<SpdeMultiIndex> out;
    std::function<void(std::size_t, SpdeMultiIndex&, unsigned, unsigned, unsigned)> rec =
        [&](std::size_t from, SpdeMultiIndex& acc, unsigned mass_left,
            unsigned second_left, unsigned b_left) {
            if (is_populated_spde(acc))
                out.push_back(acc);
            for (std::size_t i = from; i < pool.size(); ++i) {
                unsigned lm = pool[i].word.letter_mass();
                unsigned sc = pool[i].word.length() + 1;
                unsigned bm = nvec_norm1(pool[i].word.u());
                if (lm > mass_left || sc > second_left || bm > b_left)
                    continue;
                SpdeMultiIndex next = acc.with_raised(pool[i], +1);
                rec(i, next, mass_left - lm, second_left - sc, b_left - bm);
            }
        };
    SpdeMultiIndex acc;
    rec(0, acc, max_mass, max_second, max_b);
    std::sort(out.begin(), out.end());
    return out;
}

/// Duality oracle for the SPDE BCK-type coproduct: every coefficient is
/// reconstructed as <F *2 bar, m> / (S(F) S(bar)). The coefficient path goes
/// exclusively through star2_spde; neither coproduct formula is touched.
inline LinComb<SpdeTensor> oracle_delta_spde(const SpdeMultiIndex& m, GradeBound g) {
    require_populated_spde(m, "oracle_delta_spde");
    std::size_t dims = dims_of(m);
    LinComb<SpdeTensor> out;
    Rational s_m(symmetry_spde(m));
    for (const auto& f : enumerate_spde_forests(m, g)) {
        Rational s_f(forest_symmetry_spde(f));
        // bar = z^0: by the convention the forest pairs against m directly,
        // contributing exactly the primitive right-unit term.
        if (f.has_trivial_markers() && !f.empty() && f.merged_product() == m)
            out.add_term(SpdeTensor{f, SpdeMultiIndex::unit()}, s_m / s_f);
        SpdeMultiIndex hat = m - f.merged_product();
        for (const auto& bar : detail::spde_predecessors(hat, f)) {
            Rational pairing = star2_spde(f, bar).coefficient_of(m) * s_m;
            if (pairing.is_zero())
                continue;
            out.add_term(SpdeTensor{f, bar},
                         pairing / (s_f * Rational(symmetry_spde(bar))));
        }
    }
    return out;
}

/// Duality oracle for the SPDE extraction-contraction coproduct, via star1.
inline LinComb<SpdeTensor> oracle_delta_minus_spde(const SpdeMultiIndex& m,
                                                   GradeBound g) {
    require_populated_spde(m, "oracle_delta_minus_spde");
    std::size_t dims = dims_of(m);
    Rational s_m(symmetry_spde(m));
    std::set<std::pair<SpdeForest, SpdeTrunk>> candidates;
    for (const auto& cfg : detail::enumerate_spde_insertion_configs(m, g))
        candidates.insert({cfg.forest(dims), cfg.trunk()});
    LinComb<SpdeTensor> out;
    for (const auto& [f, alpha] : candidates) {
        std::vector<SpdeMultiIndex> members;
        for (const auto& [it, r] : f.items())
            for (unsigned i = 0; i < r; ++i)
                members.push_back(it.first);
        Rational pairing = star1_spde(members, alpha).coefficient_of(m) * s_m;
        if (pairing.is_zero())
            continue;
        out.add_term(SpdeTensor{f, alpha},
                     pairing / (Rational(forest_symmetry_spde(f)) *
                                Rational(symmetry_spde(alpha))));
    }
    return out;
}

} // namespace mindex

#endif
