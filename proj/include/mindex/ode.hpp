#ifndef MINDEX_ODE_HPP
#define MINDEX_ODE_HPP

#include "mindex/lincomb.hpp"
#include "mindex/rational.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mindex {

/// ODE multi-index: the monomial z^beta = prod_k z_k^{beta(k)} with a
/// finite-support exponent function beta. No explicit zero exponents are
/// stored; the empty map is the unit z^0. Canonical order is lexicographic
/// on the sorted (k, beta(k)) list, which is exactly std::map ordering.
class OdeMultiIndex {
public:
    using exp_map = std::map<unsigned, unsigned>;

    OdeMultiIndex() = default;
    explicit OdeMultiIndex(exp_map exps) : exp_(std::move(exps)) {
        for (auto it = exp_.begin(); it != exp_.end();)
            it = it->second == 0 ? exp_.erase(it) : std::next(it);
    }

    static OdeMultiIndex unit() { return {}; }

    /// The single letter z_k.
    static OdeMultiIndex letter(unsigned k) {
        OdeMultiIndex m;
        m.exp_[k] = 1;
        return m;
    }

    unsigned exponent(unsigned k) const {
        auto it = exp_.find(k);
        return it == exp_.end() ? 0u : it->second;
    }

    bool is_unit() const { return exp_.empty(); }
    const exp_map& exponents() const { return exp_; }

    OdeMultiIndex with_raised(unsigned k, int delta) const {
        OdeMultiIndex m = *this;
        int e = static_cast<int>(m.exponent(k)) + delta;
        if (e < 0)
            throw std::invalid_argument("OdeMultiIndex: negative exponent");
        if (e == 0)
            m.exp_.erase(k);
        else
            m.exp_[k] = static_cast<unsigned>(e);
        return m;
    }

    /// Pointwise product of monomials: exponents add.
    friend OdeMultiIndex operator*(const OdeMultiIndex& a, const OdeMultiIndex& b) {
        OdeMultiIndex m = a;
        for (const auto& [k, e] : b.exp_)
            m.exp_[k] += e;
        return m;
    }

    /// Componentwise difference; throws if b is not <= a.
    friend OdeMultiIndex operator-(const OdeMultiIndex& a, const OdeMultiIndex& b) {
        OdeMultiIndex m = a;
        for (const auto& [k, e] : b.exp_) {
            unsigned ae = m.exponent(k);
            if (ae < e)
                throw std::invalid_argument("OdeMultiIndex: subtraction underflow");
            if (ae == e)
                m.exp_.erase(k);
            else
                m.exp_[k] = ae - e;
        }
        return m;
    }

    /// Componentwise a <= b.
    bool divides(const OdeMultiIndex& b) const {
        for (const auto& [k, e] : exp_)
            if (b.exponent(k) < e)
                return false;
        return true;
    }

    friend bool operator==(const OdeMultiIndex& a, const OdeMultiIndex& b) {
        return a.exp_ == b.exp_;
    }
    friend bool operator!=(const OdeMultiIndex& a, const OdeMultiIndex& b) {
        return !(a == b);
    }
    friend bool operator<(const OdeMultiIndex& a, const OdeMultiIndex& b) {
        return a.exp_ < b.exp_;
    }

private:
    exp_map exp_;
};

/// [beta] = sum_k (1-k) beta(k); populated means the value is 1.
inline long population_degree(const OdeMultiIndex& m) {
    long d = 0;
    for (const auto& [k, e] : m.exponents())
        d += (1 - static_cast<long>(k)) * static_cast<long>(e);
    return d;
}

inline bool is_populated(const OdeMultiIndex& m) {
    return population_degree(m) == 1;
}

/// |beta| = sum_k beta(k).
inline unsigned norm(const OdeMultiIndex& m) {
    unsigned n = 0;
    for (const auto& [k, e] : m.exponents())
        n += e;
    return n;
}

/// S(z^beta) = prod_k (k!)^{beta(k)}.
inline Integer symmetry(const OdeMultiIndex& m) {
    Integer s = 1;
    for (const auto& [k, e] : m.exponents()) {
        Integer f = factorial(k);
        for (unsigned i = 0; i < e; ++i)
            s *= f;
    }
    return s;
}

/// Forest member ordering: by (norm, canonical multi-index order), so the
/// sorted member list is the canonical form of the multiset.
struct OdeForestMemberLess {
    bool operator()(const OdeMultiIndex& a, const OdeMultiIndex& b) const {
        unsigned na = norm(a), nb = norm(b);
        if (na != nb)
            return na < nb;
        return a < b;
    }
};

/// Forest of ODE multi-indices: an unordered multiset under the commutative
/// juxtaposition product. The empty forest is the unit.
class OdeForest {
public:
    using member_map = std::map<OdeMultiIndex, unsigned, OdeForestMemberLess>;

    OdeForest() = default;
    explicit OdeForest(const std::vector<OdeMultiIndex>& members) {
        for (const auto& m : members)
            insert(m);
    }

    static OdeForest singleton(const OdeMultiIndex& m) {
        OdeForest f;
        f.insert(m);
        return f;
    }

    void insert(const OdeMultiIndex& m, unsigned count = 1) {
        if (count)
            members_[m] += count;
    }

    bool empty() const { return members_.empty(); }

    /// Number of members counted with multiplicity (the n of D^n).
    unsigned size() const {
        unsigned n = 0;
        for (const auto& [m, r] : members_)
            n += r;
        return n;
    }

    const member_map& members() const { return members_; }

    std::vector<OdeMultiIndex> flattened() const {
        std::vector<OdeMultiIndex> v;
        for (const auto& [m, r] : members_)
            for (unsigned i = 0; i < r; ++i)
                v.push_back(m);
        return v;
    }

    /// Pointwise product of all members (exponents merged).
    OdeMultiIndex merged_product() const {
        OdeMultiIndex p;
        for (const auto& [m, r] : members_)
            for (unsigned i = 0; i < r; ++i)
                p = p * m;
        return p;
    }

    friend bool operator==(const OdeForest& a, const OdeForest& b) {
        return a.members_ == b.members_;
    }
    friend bool operator!=(const OdeForest& a, const OdeForest& b) {
        return !(a == b);
    }
    friend bool operator<(const OdeForest& a, const OdeForest& b) {
        return std::lexicographical_compare(
            a.members_.begin(), a.members_.end(), b.members_.begin(), b.members_.end(),
            [](const auto& x, const auto& y) {
                OdeForestMemberLess less;
                if (less(x.first, y.first)) return true;
                if (less(y.first, x.first)) return false;
                return x.second < y.second;
            });
    }

private:
    member_map members_;
};

inline unsigned norm(const OdeForest& f) {
    unsigned n = 0;
    for (const auto& [m, r] : f.members())
        n += r * norm(m);
    return n;
}

/// S(forest) = prod over distinct members of r! S(member)^r.
inline Integer forest_symmetry(const OdeForest& f) {
    Integer s = 1;
    for (const auto& [m, r] : f.members()) {
        s *= factorial(r);
        Integer sm = symmetry(m);
        for (unsigned i = 0; i < r; ++i)
            s *= sm;
    }
    return s;
}

/// S_ext(forest) = S(forest) / S(product of members).
inline Rational s_ext(const OdeForest& f) {
    if (f.empty())
        throw std::invalid_argument("s_ext: empty forest");
    return Rational(forest_symmetry(f), symmetry(f.merged_product()));
}

inline Rational inner_product(const OdeMultiIndex& a, const OdeMultiIndex& b) {
    return a == b ? Rational(symmetry(a)) : Rational(0);
}

inline Rational inner_product(const OdeForest& a, const OdeForest& b) {
    return a == b ? Rational(forest_symmetry(a)) : Rational(0);
}

template <class B>
Rational inner_product(const LinComb<B>& a, const B& b) {
    return a.coefficient_of(b) * inner_product(b, b);
}

template <class B>
Rational inner_product(const LinComb<B>& a, const LinComb<B>& b) {
    Rational r;
    for (const auto& [k, c] : a)
        r += c * inner_product(b, k);
    return r;
}

/// D = sum_k z_{k+1} d/dz_k, expanded by the Leibniz rule.
inline LinComb<OdeMultiIndex> derivation_D(const OdeMultiIndex& m) {
    LinComb<OdeMultiIndex> out;
    for (const auto& [k, e] : m.exponents())
        out.add_term(m.with_raised(k, -1).with_raised(k + 1, +1), Rational(e));
    return out;
}

/// d/dz_k.
inline LinComb<OdeMultiIndex> partial(const OdeMultiIndex& m, unsigned k) {
    LinComb<OdeMultiIndex> out;
    unsigned e = m.exponent(k);
    if (e)
        out.add_term(m.with_raised(k, -1), Rational(e));
    return out;
}

/// Adjoint of D for the symmetry inner product. Per letter index k >= 1
/// present in the input, the net integer coefficient is k * (beta(k-1) + 1);
/// the beta(k) denominator of the displayed expression cancels against the
/// partial derivative's multiplicity.
inline LinComb<OdeMultiIndex> adjoint_Dbar(const OdeMultiIndex& m) {
    LinComb<OdeMultiIndex> out;
    for (const auto& [k, e] : m.exponents()) {
        if (k == 0)
            continue;
        Rational coeff(Integer(k) * (m.exponent(k - 1) + 1));
        out.add_term(m.with_raised(k, -1).with_raised(k - 1, +1), coeff);
    }
    return out;
}

/// Free Novikov graft: a |> b = a * D(b).
inline LinComb<OdeMultiIndex> graft(const OdeMultiIndex& a, const OdeMultiIndex& b) {
    LinComb<OdeMultiIndex> out;
    for (const auto& [k, c] : derivation_D(b))
        out.add_term(a * k, c);
    return out;
}

/// n-fold application of a basis-to-combination operator, extended linearly.
template <class B, class F>
LinComb<B> iterate_operator(const B& start, unsigned n, F&& op) {
    LinComb<B> cur = LinComb<B>::single(start);
    for (unsigned i = 0; i < n; ++i)
        cur = cur.map(op);
    return cur;
}

} // namespace mindex

#endif
