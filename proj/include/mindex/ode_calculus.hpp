#ifndef MINDEX_ODE_CALCULUS_HPP
#define MINDEX_ODE_CALCULUS_HPP

#include "mindex/ode.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

namespace mindex {

/// Trunk of the extraction-contraction coproduct: a populated monomial
/// prod_i z_{k_i}, structurally an ordinary multi-index.
using OdeTrunk = OdeMultiIndex;

using OdeTensor = Tensor2<OdeForest, OdeMultiIndex>;

/// A way to split beta into a nonempty multiset of populated parts plus the
/// componentwise remainder.
struct Splitting {
    OdeForest parts;
    OdeMultiIndex remainder;
};

inline LinComb<OdeMultiIndex> multiply(const LinComb<OdeMultiIndex>& a,
                                       const LinComb<OdeMultiIndex>& b) {
    LinComb<OdeMultiIndex> out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b)
            out.add_term(ka * kb, ca * cb);
    return out;
}

/// All populated multi-indices with norm <= max_norm. Population forces a
/// norm-n multi-index to use n letters with index sum n-1, so the set is
/// finite: letters form a multiset {k_1,...,k_n} with sum k_i = n-1.
inline std::vector<OdeMultiIndex> enumerate_populated(unsigned max_norm) {
    std::vector<OdeMultiIndex> out;
    for (unsigned n = 1; n <= max_norm; ++n) {
        std::function<void(unsigned, unsigned, unsigned, OdeMultiIndex&)> rec =
            [&](unsigned pos, unsigned min_k, unsigned left, OdeMultiIndex& acc) {
                if (pos == n) {
                    if (left == 0)
                        out.push_back(acc);
                    return;
                }
                for (unsigned k = min_k; k <= left; ++k) {
                    OdeMultiIndex next = acc.with_raised(k, +1);
                    rec(pos + 1, k, left - k, next);
                }
            };
        OdeMultiIndex acc;
        rec(0, 0, n - 1, acc);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All nonzero sub-multi-indices gamma <= m (componentwise), optionally
/// filtered to populated ones.
inline std::vector<OdeMultiIndex> enumerate_sub(const OdeMultiIndex& m,
                                                bool populated_only) {
    std::vector<std::pair<unsigned, unsigned>> entries(m.exponents().begin(),
                                                       m.exponents().end());
    std::vector<OdeMultiIndex> out;
    std::function<void(std::size_t, OdeMultiIndex&)> rec = [&](std::size_t i,
                                                               OdeMultiIndex& acc) {
        if (i == entries.size()) {
            if (!acc.is_unit() && (!populated_only || is_populated(acc)))
                out.push_back(acc);
            return;
        }
        for (unsigned e = 0; e <= entries[i].second; ++e) {
            OdeMultiIndex next = acc;
            if (e)
                next = next.with_raised(entries[i].first, static_cast<int>(e));
            rec(i + 1, next);
        }
    };
    OdeMultiIndex acc;
    rec(0, acc);
    std::sort(out.begin(), out.end());
    return out;
}

/// Every multiset of populated sub-multi-indices whose exponent sum stays
/// <= m componentwise, paired with the induced remainder. Deterministic
/// order, no duplicate multisets.
inline std::vector<Splitting> enumerate_splittings(const OdeMultiIndex& m) {
    std::vector<OdeMultiIndex> candidates = enumerate_sub(m, /*populated_only=*/true);
    std::vector<Splitting> out;
    std::function<void(std::size_t, const OdeForest&, const OdeMultiIndex&)> rec =
        [&](std::size_t from, const OdeForest& parts, const OdeMultiIndex& rest) {
            if (!parts.empty())
                out.push_back(Splitting{parts, rest});
            for (std::size_t i = from; i < candidates.size(); ++i) {
                if (!candidates[i].divides(rest))
                    continue;
                OdeForest next = parts;
                next.insert(candidates[i]);
                rec(i, next, rest - candidates[i]);
            }
        };
    rec(0, OdeForest{}, m);
    return out;
}

/// All populated beta-bar with <D^n z^beta-bar, target> != 0: lower n letter
/// indices of the target by one in all multiset-distinct ways, then keep the
/// populated results.
inline std::vector<OdeMultiIndex> enumerate_predecessors(const OdeMultiIndex& target,
                                                         unsigned n) {
    std::set<OdeMultiIndex> cur{target};
    for (unsigned step = 0; step < n; ++step) {
        std::set<OdeMultiIndex> next;
        for (const auto& m : cur)
            for (const auto& [k, e] : m.exponents())
                if (k >= 1)
                    next.insert(m.with_raised(k, -1).with_raised(k - 1, +1));
        cur = std::move(next);
    }
    std::vector<OdeMultiIndex> out;
    for (const auto& m : cur)
        if (is_populated(m))
            out.push_back(m);
    return out;
}

/// Grafting product: prod of forest members times D^n m, n = forest size.
/// Conventions: empty forest acts as identity; grafting onto z^0 yields the
/// merged product of the forest members.
inline LinComb<OdeMultiIndex> star2(const OdeForest& f, const OdeMultiIndex& m) {
    if (f.empty())
        return LinComb<OdeMultiIndex>::single(m);
    if (m.is_unit())
        return LinComb<OdeMultiIndex>::single(f.merged_product());
    LinComb<OdeMultiIndex> dn = iterate_operator(m, f.size(), [](const OdeMultiIndex& x) {
        return derivation_D(x);
    });
    OdeMultiIndex prod = f.merged_product();
    LinComb<OdeMultiIndex> out;
    for (const auto& [k, c] : dn)
        out.add_term(prod * k, c);
    return out;
}

inline void require_populated(const OdeMultiIndex& m, const char* who) {
    if (!is_populated(m))
        throw std::invalid_argument(std::string(who) + ": input is not populated");
}

/// BCK-type coproduct, splitting formula. Primitive part plus, for every
/// splitting and every predecessor beta-bar, the coefficient
/// S(beta) / (S(forest) S(beta-bar)) * <D^n beta-bar, beta-hat> / S(beta-hat).
inline LinComb<OdeTensor> delta_primal(const OdeMultiIndex& m) {
    require_populated(m, "delta_primal");
    LinComb<OdeTensor> out;
    out.add_term(OdeTensor{OdeForest{}, m}, Rational(1));
    out.add_term(OdeTensor{OdeForest::singleton(m), OdeMultiIndex::unit()}, Rational(1));
    Rational s_beta(symmetry(m));
    for (const auto& sp : enumerate_splittings(m)) {
        unsigned n = sp.parts.size();
        Rational s_forest(forest_symmetry(sp.parts));
        for (const auto& bar : enumerate_predecessors(sp.remainder, n)) {
            LinComb<OdeMultiIndex> dn =
                iterate_operator(bar, n, [](const OdeMultiIndex& x) { return derivation_D(x); });
            Rational pairing = dn.coefficient_of(sp.remainder); // <D^n bar, hat> / S(hat)
            if (pairing.is_zero())
                continue;
            Rational c = s_beta / (s_forest * Rational(symmetry(bar))) * pairing;
            out.add_term(OdeTensor{sp.parts, bar}, c);
        }
    }
    return out;
}

/// BCK-type coproduct, adjoint formula: primitive part plus
/// (1/S_ext(forest)) forest (x) Dbar^n beta-hat per splitting.
inline LinComb<OdeTensor> delta_adjoint(const OdeMultiIndex& m) {
    require_populated(m, "delta_adjoint");
    LinComb<OdeTensor> out;
    out.add_term(OdeTensor{OdeForest{}, m}, Rational(1));
    out.add_term(OdeTensor{OdeForest::singleton(m), OdeMultiIndex::unit()}, Rational(1));
    for (const auto& sp : enumerate_splittings(m)) {
        unsigned n = sp.parts.size();
        Rational inv_sext = Rational(1) / s_ext(sp.parts);
        LinComb<OdeMultiIndex> dbar = iterate_operator(
            sp.remainder, n, [](const OdeMultiIndex& x) { return adjoint_Dbar(x); });
        for (const auto& [bar, c] : dbar)
            out.add_term(OdeTensor{sp.parts, bar}, inv_sext * c);
    }
    return out;
}

/// Insertion a |> b = sum_k (D^k a)(d/dz_k b), replacing one variable of b.
inline LinComb<OdeMultiIndex> insert(const OdeMultiIndex& a, const OdeMultiIndex& b) {
    if (a.is_unit())
        throw std::invalid_argument("insert: cannot insert the empty multi-index");
    require_populated(a, "insert");
    require_populated(b, "insert");
    LinComb<OdeMultiIndex> out;
    LinComb<OdeMultiIndex> dka = LinComb<OdeMultiIndex>::single(a);
    unsigned kmax = b.exponents().empty() ? 0 : b.exponents().rbegin()->first;
    for (unsigned k = 0; k <= kmax; ++k) {
        if (k > 0)
            dka = dka.map([](const OdeMultiIndex& x) { return derivation_D(x); });
        if (b.exponent(k) == 0)
            continue;
        out += multiply(dka, partial(b, k));
    }
    return out;
}

/// Simultaneous insertion of the forest members into all variables of the
/// trunk. Requires forest size == |trunk|; sums over ordered assignments of
/// the trunk's letters to the members, each weighted by alpha!.
inline LinComb<OdeMultiIndex> star1(const OdeForest& f, const OdeTrunk& t) {
    if (f.size() != norm(t))
        throw std::invalid_argument("star1: forest size must equal trunk norm");
    require_populated(t, "star1");
    std::vector<OdeMultiIndex> members = f.flattened();
    for (const auto& m : members) {
        if (m.is_unit())
            throw std::invalid_argument("star1: cannot insert the empty multi-index");
        require_populated(m, "star1");
    }
    Rational alpha_fact(1);
    for (const auto& [k, e] : t.exponents())
        alpha_fact *= Rational(factorial(e));

    // D^k images per member, computed incrementally per assignment.
    LinComb<OdeMultiIndex> out;
    std::function<void(std::size_t, OdeMultiIndex, const LinComb<OdeMultiIndex>&)> rec =
        [&](std::size_t i, OdeMultiIndex left, const LinComb<OdeMultiIndex>& acc) {
            if (i == members.size()) {
                if (left.is_unit())
                    out += acc.scaled(alpha_fact);
                return;
            }
            for (const auto& [k, e] : left.exponents()) {
                LinComb<OdeMultiIndex> dk = iterate_operator(
                    members[i], k, [](const OdeMultiIndex& x) { return derivation_D(x); });
                rec(i + 1, left.with_raised(k, -1), multiply(acc, dk));
            }
        };
    rec(0, t, LinComb<OdeMultiIndex>::single(OdeMultiIndex::unit()));
    return out;
}

/// A canonical extraction configuration: a multiset of (populated part,
/// insertion index) pairs whose index monomial is a populated trunk.
struct InsertionConfig {
    std::vector<std::pair<OdeMultiIndex, unsigned>> pairs; // sorted

    OdeForest forest() const {
        OdeForest f;
        for (const auto& [m, k] : pairs)
            f.insert(m);
        return f;
    }
    OdeTrunk trunk() const {
        OdeTrunk t;
        for (const auto& [m, k] : pairs)
            t = t.with_raised(k, +1);
        return t;
    }
    /// Number of distinct per-position index assignments realizing this
    /// multiset: prod_(distinct part) r! / prod_(distinct pair) mult!.
    Rational multiplicity() const {
        Integer num = 1;
        OdeForest f = forest();
        for (const auto& [m, r] : f.members())
            num *= factorial(r);
        Integer den = 1;
        std::map<std::pair<OdeMultiIndex, unsigned>, unsigned> mult;
        for (const auto& p : pairs)
            ++mult[p];
        for (const auto& [p, r] : mult)
            den *= factorial(r);
        return Rational(num, den);
    }
};

namespace detail {

/// Viable (part, k) pairs for the extraction of m, found by lowering the
/// letter indices of the sub-multi-indices of m.
inline std::vector<std::pair<OdeMultiIndex, unsigned>>
viable_insertion_pairs(const OdeMultiIndex& m) {
    unsigned kmax = 0;
    for (const auto& [k, e] : m.exponents())
        kmax += k * e;
    std::set<std::pair<OdeMultiIndex, unsigned>> pairs;
    for (const auto& sub : enumerate_sub(m, /*populated_only=*/false))
        for (unsigned k = 0; k <= kmax; ++k)
            for (const auto& pred : enumerate_predecessors(sub, k))
                pairs.insert({pred, k});
    return {pairs.begin(), pairs.end()};
}

inline std::vector<InsertionConfig> enumerate_insertion_configs(const OdeMultiIndex& m) {
    auto viable = viable_insertion_pairs(m);
    unsigned total_norm = norm(m);
    std::vector<InsertionConfig> out;
    std::function<void(std::size_t, InsertionConfig&, unsigned, long)> rec =
        [&](std::size_t from, InsertionConfig& acc, unsigned norm_left, long pop) {
            if (norm_left == 0) {
                if (pop == 1 && !acc.pairs.empty())
                    out.push_back(acc);
                return;
            }
            for (std::size_t i = from; i < viable.size(); ++i) {
                unsigned nm = norm(viable[i].first);
                if (nm > norm_left)
                    continue;
                acc.pairs.push_back(viable[i]);
                rec(i, acc, norm_left - nm, pop + 1 - static_cast<long>(viable[i].second));
                acc.pairs.pop_back();
            }
        };
    InsertionConfig acc;
    rec(0, acc, total_norm, 0);
    return out;
}

/// Sum over ordered decompositions beta = hat_1 + ... + hat_n of the product
/// of per-position factors. `factor(i, hat_i)` returns the i-th pairing
/// quotient, zero meaning the decomposition is discarded.
inline Rational sum_over_decompositions(
    const OdeMultiIndex& beta, std::size_t n,
    const std::function<Rational(std::size_t, const OdeMultiIndex&)>& factor) {
    Rational total;
    std::function<void(std::size_t, const OdeMultiIndex&, const Rational&)> rec =
        [&](std::size_t i, const OdeMultiIndex& rest, const Rational& acc) {
            if (i == n) {
                if (rest.is_unit())
                    total += acc;
                return;
            }
            for (const auto& hat : enumerate_sub(rest, /*populated_only=*/false)) {
                Rational f = factor(i, hat);
                if (!f.is_zero())
                    rec(i + 1, rest - hat, acc * f);
            }
        };
    rec(0, beta, Rational(1));
    return total;
}

} // namespace detail

/// Extraction-contraction coproduct, direct formula. Terms are enumerated by
/// canonical insertion configurations; each contributes multiplicity(C) * E
/// with E = sum over ordered decompositions of
/// alpha! S(beta) / (S(forest) S(alpha)) * prod <D^{k_i} beta_i, hat_i> / S(hat_i).
inline LinComb<OdeTensor> delta_minus_primal(const OdeMultiIndex& m) {
    require_populated(m, "delta_minus_primal");
    LinComb<OdeTensor> out;
    Rational s_beta(symmetry(m));
    for (const auto& cfg : detail::enumerate_insertion_configs(m)) {
        OdeTrunk alpha = cfg.trunk();
        OdeForest forest = cfg.forest();
        Rational alpha_fact(1);
        for (const auto& [k, e] : alpha.exponents())
            alpha_fact *= Rational(factorial(e));
        std::size_t n = cfg.pairs.size();
        std::vector<LinComb<OdeMultiIndex>> images(n);
        for (std::size_t i = 0; i < n; ++i)
            images[i] = iterate_operator(cfg.pairs[i].first, cfg.pairs[i].second,
                                         [](const OdeMultiIndex& x) { return derivation_D(x); });
        Rational sum = detail::sum_over_decompositions(
            m, n, [&](std::size_t i, const OdeMultiIndex& hat) {
                return images[i].coefficient_of(hat); // <D^{k_i} b_i, hat> / S(hat)
            });
        if (sum.is_zero())
            continue;
        Rational e = alpha_fact * s_beta /
                     (Rational(forest_symmetry(forest)) * Rational(symmetry(alpha))) * sum;
        out.add_term(OdeTensor{forest, alpha}, cfg.multiplicity() * e);
    }
    return out;
}

/// Extraction-contraction coproduct via the adjoint Dbar:
/// E = sum over ordered decompositions of
/// alpha! / (S(alpha) S_ext(forest)) * prod <beta_i, Dbar^{k_i} hat_i> / S(beta_i).
inline LinComb<OdeTensor> delta_minus_adjoint(const OdeMultiIndex& m) {
    require_populated(m, "delta_minus_adjoint");
    LinComb<OdeTensor> out;
    for (const auto& cfg : detail::enumerate_insertion_configs(m)) {
        OdeTrunk alpha = cfg.trunk();
        OdeForest forest = cfg.forest();
        Rational alpha_fact(1);
        for (const auto& [k, e] : alpha.exponents())
            alpha_fact *= Rational(factorial(e));
        std::size_t n = cfg.pairs.size();
        Rational sum = detail::sum_over_decompositions(
            m, n, [&](std::size_t i, const OdeMultiIndex& hat) {
                LinComb<OdeMultiIndex> dbar =
                    iterate_operator(hat, cfg.pairs[i].second,
                                     [](const OdeMultiIndex& x) { return adjoint_Dbar(x); });
                return dbar.coefficient_of(cfg.pairs[i].first);
            });
        if (sum.is_zero())
            continue;
        Rational e = alpha_fact / (Rational(symmetry(alpha)) * s_ext(forest)) * sum;
        out.add_term(OdeTensor{forest, alpha}, cfg.multiplicity() * e);
    }
    return out;
}

} // namespace mindex

#endif
