#ifndef MINDEX_SPDE_CALCULUS_HPP
#define MINDEX_SPDE_CALCULUS_HPP

#include "mindex/spde.hpp"

#include <functional>
#include <set>

namespace mindex {

/// Trunk of the SPDE extraction-contraction coproduct: a monomial in the
/// reserved label-0 variables z_{(0,w)}.
using SpdeTrunk = SpdeMultiIndex;

using SpdeTensor = Tensor2<SpdeForest, SpdeMultiIndex>;

/// Truncation control: coproduct outputs keep the primitive part plus every
/// term whose left factor (Delta) or trunk (Delta-minus) has first bigrading
/// component at most max_first_grade.
struct GradeBound {
    unsigned max_first_grade = 0;
};

inline void require_populated_spde(const SpdeMultiIndex& m, const char* who) {
    if (!is_populated_spde(m))
        throw std::invalid_argument(std::string(who) + ": input is not populated");
}

inline std::size_t dims_of(const SpdeMultiIndex& m) {
    if (m.is_unit())
        throw std::invalid_argument("dims_of: empty multi-index");
    return m.exponents().begin()->first.word.dims();
}

inline LinComb<SpdeMultiIndex> multiply(const LinComb<SpdeMultiIndex>& a,
                                        const LinComb<SpdeMultiIndex>& b) {
    LinComb<SpdeMultiIndex> out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b)
            out.add_term(ka * kb, ca * cb);
    return out;
}

/// All nonzero sub-multi-indices, optionally restricted to populated ones.
inline std::vector<SpdeMultiIndex> enumerate_sub_spde(const SpdeMultiIndex& m,
                                                      bool populated_only) {
    std::vector<std::pair<SpdeVariable, unsigned>> entries(m.exponents().begin(),
                                                           m.exponents().end());
    std::vector<SpdeMultiIndex> out;
    std::function<void(std::size_t, SpdeMultiIndex&)> rec = [&](std::size_t i,
                                                                SpdeMultiIndex& acc) {
        if (i == entries.size()) {
            if (!acc.is_unit() && (!populated_only || is_populated_spde(acc)))
                out.push_back(acc);
            return;
        }
        for (unsigned e = 0; e <= entries[i].second; ++e) {
            SpdeMultiIndex next = acc;
            if (e)
                next = next.with_raised(entries[i].first, static_cast<int>(e));
            rec(i + 1, next);
        }
    };
    SpdeMultiIndex acc;
    rec(0, acc);
    std::sort(out.begin(), out.end());
    return out;
}

/// All forests d^k {(beta_i, n_i)} with populated members whose merged
/// product divides m and with first grading <= g. Includes the unit forest.
/// Deterministic order.
inline std::vector<SpdeForest> enumerate_spde_forests(const SpdeMultiIndex& m,
                                                      GradeBound g) {
    std::size_t dims = dims_of(m);
    std::vector<SpdeMultiIndex> parts = enumerate_sub_spde(m, /*populated_only=*/true);
    std::vector<NVec> markers = nvec_with_mass_at_most(dims, g.max_first_grade);

    std::set<SpdeForest> out;
    // member multisets with merged product dividing m, then marker choices
    std::function<void(std::size_t, std::vector<SpdeMultiIndex>&, const SpdeMultiIndex&,
                       unsigned)>
        pick_members = [&](std::size_t from, std::vector<SpdeMultiIndex>& acc,
                           const SpdeMultiIndex& rest, unsigned mass_used) {
            // assign markers to acc (multiset-canonical: non-decreasing on runs
            // of equal members) and a global k within the remaining budget
            unsigned budget = g.max_first_grade - mass_used;
            std::vector<NVec> chosen(acc.size());
            std::function<void(std::size_t, unsigned)> pick_markers = [&](std::size_t i,
                                                                          unsigned left) {
                if (i == acc.size()) {
                    for (const NVec& k : nvec_with_mass_at_most(dims, left)) {
                        SpdeForest f(k);
                        for (std::size_t j = 0; j < acc.size(); ++j)
                            f.insert(acc[j], chosen[j]);
                        out.insert(f);
                    }
                    return;
                }
                for (const NVec& n : markers) {
                    unsigned nm = nvec_norm1(n);
                    if (nm > left)
                        continue;
                    if (i > 0 && acc[i] == acc[i - 1] && n < chosen[i - 1])
                        continue;
                    chosen[i] = n;
                    pick_markers(i + 1, left - nm);
                }
            };
            pick_markers(0, budget);

            for (std::size_t i = from; i < parts.size(); ++i) {
                unsigned pm = letter_mass(parts[i]);
                if (mass_used + pm > g.max_first_grade)
                    continue;
                if (!parts[i].divides(rest))
                    continue;
                acc.push_back(parts[i]);
                pick_members(i, acc, rest - parts[i], mass_used + pm);
                acc.pop_back();
            }
        };
    std::vector<SpdeMultiIndex> acc;
    pick_members(0, acc, m, 0);
    return {out.begin(), out.end()};
}

/// Grafting product on forests: d^k prod (z^{beta_i} D^(n_i)) *2 z^beta =
/// prod z^{beta_i} . d^k prod D^(n_i) z^beta, with the unit conventions.
inline LinComb<SpdeMultiIndex> star2_spde(const SpdeForest& f, const SpdeMultiIndex& m) {
    if (f.is_unit())
        return LinComb<SpdeMultiIndex>::single(m);
    if (m.is_unit()) {
        if (!f.has_trivial_markers())
            throw std::invalid_argument(
                "star2_spde: grafting a marked forest onto the empty multi-index");
        return LinComb<SpdeMultiIndex>::single(f.merged_product());
    }
    LinComb<SpdeMultiIndex> cur = LinComb<SpdeMultiIndex>::single(m);
    for (const auto& it : f.flattened())
        cur = cur.map([&](const SpdeMultiIndex& x) { return derivation_Dn(x, it.second); });
    cur = cur.map([&](const SpdeMultiIndex& x) { return derivation_partial_k(x, f.k()); });
    SpdeMultiIndex prod = f.merged_product();
    LinComb<SpdeMultiIndex> out;
    for (const auto& [k, c] : cur)
        out.add_term(prod * k, c);
    return out;
}

namespace detail {

/// Structural preimages of hat under d^k prod D^(n_i): undo the b-letter
/// additions, then each letter addition, keeping populated results. Pure
/// support enumeration, no coefficients.
inline std::vector<SpdeMultiIndex> spde_predecessors(const SpdeMultiIndex& hat,
                                                     const SpdeForest& f) {
    std::set<SpdeMultiIndex> cur{hat};
    for (std::size_t dir = 0; dir < f.k().size(); ++dir)
        for (unsigned s = 0; s < f.k()[dir]; ++s) {
            std::set<SpdeMultiIndex> next;
            for (const auto& m : cur)
                for (const auto& [var, e] : m.exponents()) {
                    if (var.word.u()[dir] == 0)
                        continue;
                    NVec u = var.word.u();
                    --u[dir];
                    SpdeVariable pre{var.label, var.word.with_u(u)};
                    next.insert(m.with_raised(var, -1).with_raised(pre, +1));
                }
            cur = std::move(next);
        }
    for (const auto& it : f.flattened()) {
        const NVec& n = it.second;
        std::set<SpdeMultiIndex> next;
        for (const auto& m : cur)
            for (const auto& [var, e] : m.exponents())
                for (const auto& [ml, mult] : var.word.v()) {
                    auto l = nvec_sub(n, ml);
                    if (!l)
                        continue;
                    SpdeVariable pre{var.label,
                                     var.word.with_letter(ml, -1).with_u(
                                         nvec_add(var.word.u(), *l))};
                    next.insert(m.with_raised(var, -1).with_raised(pre, +1));
                }
        cur = std::move(next);
    }
    std::vector<SpdeMultiIndex> out;
    for (const auto& m : cur)
        if (is_populated_spde(m))
            out.push_back(m);
    return out;
}

/// d^k prod D^(n_i) applied to a basis element, expanded exactly.
inline LinComb<SpdeMultiIndex> apply_forest_operators(const SpdeForest& f,
                                                      const SpdeMultiIndex& m) {
    LinComb<SpdeMultiIndex> cur = LinComb<SpdeMultiIndex>::single(m);
    for (const auto& it : f.flattened())
        cur = cur.map([&](const SpdeMultiIndex& x) { return derivation_Dn(x, it.second); });
    return cur.map([&](const SpdeMultiIndex& x) { return derivation_partial_k(x, f.k()); });
}

} // namespace detail

/// BCK-type coproduct, direct formula: primitive part plus, per forest and
/// predecessor beta-bar, S(beta)/(S(forest)S(beta-bar)) times the pairing
/// quotient <d^k prod D^(n_i) beta-bar, beta-hat>/S(beta-hat). Truncated to
/// left factors of first grading <= g.
inline LinComb<SpdeTensor> delta_spde_primal(const SpdeMultiIndex& m, GradeBound g) {
    require_populated_spde(m, "delta_spde_primal");
    std::size_t dims = dims_of(m);
    LinComb<SpdeTensor> out;
    out.add_term(SpdeTensor{SpdeForest::unit(dims), m}, Rational(1));
    out.add_term(SpdeTensor{SpdeForest::singleton(dims, m, nvec_zero(dims)),
                            SpdeMultiIndex::unit()},
                 Rational(1));
    Rational s_beta(symmetry_spde(m));
    for (const auto& f : enumerate_spde_forests(m, g)) {
        if (f.is_unit())
            continue;
        SpdeMultiIndex hat = m - f.merged_product();
        Rational s_forest(forest_symmetry_spde(f));
        for (const auto& bar : detail::spde_predecessors(hat, f)) {
            Rational pairing =
                detail::apply_forest_operators(f, bar).coefficient_of(hat);
            if (pairing.is_zero())
                continue;
            Rational c = s_beta / (s_forest * Rational(symmetry_spde(bar))) * pairing;
            out.add_term(SpdeTensor{f, bar}, c);
        }
    }
    return out;
}

/// BCK-type coproduct via the adjoints: primitive part plus
/// (1/S_ext(forest)) forest (x) prod Dbar^(n_i) partialbar^k beta-hat.
inline LinComb<SpdeTensor> delta_spde_adjoint(const SpdeMultiIndex& m, GradeBound g) {
    require_populated_spde(m, "delta_spde_adjoint");
    std::size_t dims = dims_of(m);
    LinComb<SpdeTensor> out;
    out.add_term(SpdeTensor{SpdeForest::unit(dims), m}, Rational(1));
    out.add_term(SpdeTensor{SpdeForest::singleton(dims, m, nvec_zero(dims)),
                            SpdeMultiIndex::unit()},
                 Rational(1));
    for (const auto& f : enumerate_spde_forests(m, g)) {
        if (f.is_unit())
            continue;
        SpdeMultiIndex hat = m - f.merged_product();
        Rational inv_sext = Rational(1) / s_ext_spde(f);
        LinComb<SpdeMultiIndex> bar = adjoint_partial_k(hat, f.k());
        for (const auto& it : f.flattened())
            bar = bar.map([&](const SpdeMultiIndex& x) { return adjoint_Dn(x, it.second); });
        for (const auto& [b, c] : bar)
            out.add_term(SpdeTensor{f, b}, inv_sext * c);
    }
    return out;
}

/// Insertion a |> t = sum_w (D^w a)(d/dz_{(0,w)} t).
inline LinComb<SpdeMultiIndex> insert_spde(const SpdeMultiIndex& a, const SpdeTrunk& t) {
    if (a.is_unit())
        throw std::invalid_argument("insert_spde: cannot insert the empty multi-index");
    require_populated_spde(a, "insert_spde");
    require_populated_spde(t, "insert_spde");
    LinComb<SpdeMultiIndex> out;
    for (const auto& [var, e] : t.exponents()) {
        if (var.label != 0)
            throw std::invalid_argument("insert_spde: trunk variables must carry label 0");
        LinComb<SpdeMultiIndex> image = D_word(a, var.word);
        SpdeMultiIndex rest = t.with_raised(var, -1);
        for (const auto& [k, c] : image)
            out.add_term(k * rest, c * Rational(e));
    }
    return out;
}

/// Simultaneous insertion of the members into all variables of the trunk:
/// sum over ordered word assignments exhausting the trunk, weighted alpha!.
inline LinComb<SpdeMultiIndex> star1_spde(const std::vector<SpdeMultiIndex>& members,
                                          const SpdeTrunk& t) {
    if (members.size() != variable_count(t))
        throw std::invalid_argument("star1_spde: member count must equal trunk size");
    require_populated_spde(t, "star1_spde");
    for (const auto& m : members) {
        if (m.is_unit())
            throw std::invalid_argument(
                "star1_spde: cannot insert the empty multi-index");
        require_populated_spde(m, "star1_spde");
    }
    Rational alpha_fact(1);
    for (const auto& [var, e] : t.exponents()) {
        if (var.label != 0)
            throw std::invalid_argument("star1_spde: trunk variables must carry label 0");
        alpha_fact *= Rational(factorial(e));
    }
    LinComb<SpdeMultiIndex> out;
    std::function<void(std::size_t, SpdeMultiIndex, const LinComb<SpdeMultiIndex>&)> rec =
        [&](std::size_t i, SpdeMultiIndex left, const LinComb<SpdeMultiIndex>& acc) {
            if (i == members.size()) {
                if (left.is_unit())
                    out += acc.scaled(alpha_fact);
                return;
            }
            for (const auto& [var, e] : left.exponents())
                rec(i + 1, left.with_raised(var, -1),
                    multiply(acc, D_word(members[i], var.word)));
        };
    rec(0, t, LinComb<SpdeMultiIndex>::single(SpdeMultiIndex::unit()));
    return out;
}

/// A canonical extraction configuration: a multiset of (populated member,
/// word) pairs whose word monomial is a populated trunk.
struct SpdeInsertionConfig {
    std::vector<std::pair<SpdeMultiIndex, CanonicalWord>> pairs; // sorted

    SpdeForest forest(std::size_t dims) const {
        std::vector<SpdeMultiIndex> members;
        for (const auto& [m, w] : pairs)
            members.push_back(m);
        return SpdeForest::bare(dims, members);
    }
    SpdeTrunk trunk() const {
        SpdeTrunk t;
        for (const auto& [m, w] : pairs)
            t = t.with_raised(SpdeVariable{0, w}, +1);
        return t;
    }
    Rational multiplicity() const {
        std::map<SpdeMultiIndex, unsigned> member_mult;
        std::map<std::pair<SpdeMultiIndex, CanonicalWord>, unsigned> pair_mult;
        for (const auto& p : pairs) {
            ++member_mult[p.first];
            ++pair_mult[p];
        }
        Integer num = 1;
        for (const auto& [m, r] : member_mult)
            num *= factorial(r);
        Integer den = 1;
        for (const auto& [p, r] : pair_mult)
            den *= factorial(r);
        return Rational(num, den);
    }
};

namespace detail {

/// Viable (member, word) pairs for the extraction of m: preimages of the
/// nonzero subs of m under D^w, for every word reachable within the letter
/// budget and the trunk grade bound.
inline std::vector<std::pair<SpdeMultiIndex, CanonicalWord>>
viable_spde_pairs(const SpdeMultiIndex& m, GradeBound g) {
    std::size_t dims = dims_of(m);
    unsigned max_letters = variable_count(m) > 0 ? variable_count(m) - 1 : 0;
    std::set<std::pair<SpdeMultiIndex, CanonicalWord>> res;
    for (const auto& hat : enumerate_sub_spde(m, /*populated_only=*/false)) {
        NVec btotal = nvec_zero(dims);
        for (const auto& [var, e] : hat.exponents())
            for (std::size_t i = 0; i < dims; ++i)
                btotal[i] += e * var.word.u()[i];
        for (const NVec& u : nvec_range(btotal)) {
            // undo partial^u
            std::set<SpdeMultiIndex> cur{hat};
            for (std::size_t dir = 0; dir < dims; ++dir)
                for (unsigned s = 0; s < u[dir]; ++s) {
                    std::set<SpdeMultiIndex> next;
                    for (const auto& x : cur)
                        for (const auto& [var, e] : x.exponents()) {
                            if (var.word.u()[dir] == 0)
                                continue;
                            NVec lu = var.word.u();
                            --lu[dir];
                            SpdeVariable pre{var.label, var.word.with_u(lu)};
                            next.insert(x.with_raised(var, -1).with_raised(pre, +1));
                        }
                    cur = std::move(next);
                }
            // undo the letter additions, accumulating the word's v-part
            std::function<void(const SpdeMultiIndex&, const CanonicalWord::letter_map&,
                               unsigned, unsigned)>
                rec = [&](const SpdeMultiIndex& x, const CanonicalWord::letter_map& v,
                          unsigned mass_left, unsigned letters_left) {
                    if (is_populated_spde(x))
                        res.insert({x, CanonicalWord(u, v)});
                    if (letters_left == 0)
                        return;
                    for (const auto& [var, e] : x.exponents())
                        for (const auto& [ml, mult] : var.word.v()) {
                            unsigned base = nvec_norm1(ml);
                            if (base > mass_left)
                                continue;
                            for (const NVec& l :
                                 nvec_with_mass_at_most(dims, mass_left - base)) {
                                NVec n = nvec_add(ml, l);
                                SpdeVariable pre{var.label,
                                                 var.word.with_letter(ml, -1).with_u(
                                                     nvec_add(var.word.u(), l))};
                                SpdeMultiIndex y =
                                    x.with_raised(var, -1).with_raised(pre, +1);
                                CanonicalWord::letter_map nv = v;
                                ++nv[n];
                                rec(y, nv, mass_left - nvec_norm1(n),
                                    letters_left - 1);
                            }
                        }
                };
            for (const auto& x : cur)
                rec(x, {}, g.max_first_grade, max_letters);
        }
    }
    return {res.begin(), res.end()};
}

inline std::vector<SpdeInsertionConfig>
enumerate_spde_insertion_configs(const SpdeMultiIndex& m, GradeBound g) {
    auto viable = viable_spde_pairs(m, g);
    unsigned total_vars = variable_count(m);
    std::vector<SpdeInsertionConfig> out;
    std::function<void(std::size_t, SpdeInsertionConfig&, unsigned, long, unsigned)> rec =
        [&](std::size_t from, SpdeInsertionConfig& acc, unsigned vars_left, long pop,
            unsigned mass_left) {
            if (vars_left == 0) {
                if (pop == 1 && !acc.pairs.empty())
                    out.push_back(acc);
                return;
            }
            for (std::size_t i = from; i < viable.size(); ++i) {
                unsigned nv = variable_count(viable[i].first);
                unsigned wm = viable[i].second.letter_mass();
                if (nv > vars_left || wm > mass_left)
                    continue;
                acc.pairs.push_back(viable[i]);
                rec(i, acc, vars_left - nv,
                    pop + 1 - static_cast<long>(viable[i].second.length()),
                    mass_left - wm);
                acc.pairs.pop_back();
            }
        };
    SpdeInsertionConfig acc;
    rec(0, acc, total_vars, 0, g.max_first_grade);
    return out;
}

inline Rational sum_over_spde_decompositions(
    const SpdeMultiIndex& beta, std::size_t n,
    const std::function<Rational(std::size_t, const SpdeMultiIndex&)>& factor) {
    Rational total;
    std::function<void(std::size_t, const SpdeMultiIndex&, const Rational&)> rec =
        [&](std::size_t i, const SpdeMultiIndex& rest, const Rational& acc) {
            if (i == n) {
                if (rest.is_unit())
                    total += acc;
                return;
            }
            for (const auto& hat : enumerate_sub_spde(rest, /*populated_only=*/false)) {
                Rational f = factor(i, hat);
                if (!f.is_zero())
                    rec(i + 1, rest - hat, acc * f);
            }
        };
    rec(0, beta, Rational(1));
    return total;
}

inline Rational spde_alpha_factorial(const SpdeTrunk& t) {
    Rational f(1);
    for (const auto& [var, e] : t.exponents())
        f *= Rational(factorial(e));
    return f;
}

} // namespace detail

/// Extraction-contraction coproduct, direct formula. Per canonical insertion
/// configuration, the coefficient is multiplicity(C) * E with
/// E = sum over ordered decompositions of
/// alpha! S(beta) / (S(alpha) S(forest)) * prod <D^{w_i} beta_i, hat_i>/S(hat_i).
/// Truncated to trunks of first grading <= g.
inline LinComb<SpdeTensor> delta_minus_spde_primal(const SpdeMultiIndex& m, GradeBound g) {
    require_populated_spde(m, "delta_minus_spde_primal");
    std::size_t dims = dims_of(m);
    LinComb<SpdeTensor> out;
    Rational s_beta(symmetry_spde(m));
    for (const auto& cfg : detail::enumerate_spde_insertion_configs(m, g)) {
        SpdeTrunk alpha = cfg.trunk();
        SpdeForest forest = cfg.forest(dims);
        std::size_t n = cfg.pairs.size();
        std::vector<LinComb<SpdeMultiIndex>> images(n);
        for (std::size_t i = 0; i < n; ++i)
            images[i] = D_word(cfg.pairs[i].first, cfg.pairs[i].second);
        Rational sum = detail::sum_over_spde_decompositions(
            m, n, [&](std::size_t i, const SpdeMultiIndex& hat) {
                return images[i].coefficient_of(hat);
            });
        if (sum.is_zero())
            continue;
        Rational e = detail::spde_alpha_factorial(alpha) * s_beta /
                     (Rational(symmetry_spde(alpha)) *
                      Rational(forest_symmetry_spde(forest))) *
                     sum;
        out.add_term(SpdeTensor{forest, alpha}, cfg.multiplicity() * e);
    }
    return out;
}

/// Extraction-contraction coproduct via the adjoints:
/// E = sum over ordered decompositions of
/// alpha! / (S(alpha) S_ext(forest)) * prod <beta_i, Dbar^{w_i} hat_i>/S(beta_i).
inline LinComb<SpdeTensor> delta_minus_spde_adjoint(const SpdeMultiIndex& m,
                                                    GradeBound g) {
    require_populated_spde(m, "delta_minus_spde_adjoint");
    std::size_t dims = dims_of(m);
    LinComb<SpdeTensor> out;
    for (const auto& cfg : detail::enumerate_spde_insertion_configs(m, g)) {
        SpdeTrunk alpha = cfg.trunk();
        SpdeForest forest = cfg.forest(dims);
        std::size_t n = cfg.pairs.size();
        Rational sum = detail::sum_over_spde_decompositions(
            m, n, [&](std::size_t i, const SpdeMultiIndex& hat) {
                return Dbar_word(hat, cfg.pairs[i].second)
                    .coefficient_of(cfg.pairs[i].first);
            });
        if (sum.is_zero())
            continue;
        Rational e = detail::spde_alpha_factorial(alpha) /
                     (Rational(symmetry_spde(alpha)) * s_ext_spde(forest)) * sum;
        out.add_term(SpdeTensor{forest, alpha}, cfg.multiplicity() * e);
    }
    return out;
}

} // namespace mindex

#endif
