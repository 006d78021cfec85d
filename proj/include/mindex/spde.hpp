#ifndef MINDEX_SPDE_HPP
#define MINDEX_SPDE_HPP

#include "mindex/lincomb.hpp"
#include "mindex/rational.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace mindex {

/// Element of N^{d+1}: a derivative decoration, a b-letter count vector, or a
/// letter n. The dimension is implied by the vector length; mixing lengths in
/// one expression throws.
using NVec = std::vector<unsigned>;

inline NVec nvec_zero(std::size_t dims) { return NVec(dims, 0); }

inline unsigned nvec_norm1(const NVec& v) {
    unsigned s = 0;
    for (unsigned x : v)
        s += x;
    return s;
}

inline bool nvec_is_zero(const NVec& v) { return nvec_norm1(v) == 0; }

inline void require_same_dims(const NVec& a, const NVec& b, const char* who) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(who) + ": mixed dimensions");
}

inline NVec nvec_add(const NVec& a, const NVec& b) {
    require_same_dims(a, b, "nvec_add");
    NVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] += b[i];
    return r;
}

inline bool nvec_leq(const NVec& a, const NVec& b) {
    require_same_dims(a, b, "nvec_leq");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

/// a - b, or nothing when b is not <= a componentwise.
inline std::optional<NVec> nvec_sub(const NVec& a, const NVec& b) {
    require_same_dims(a, b, "nvec_sub");
    NVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < b[i])
            return std::nullopt;
        r[i] -= b[i];
    }
    return r;
}

inline Integer nvec_factorial(const NVec& v) {
    Integer r = 1;
    for (unsigned x : v)
        r *= factorial(x);
    return r;
}

inline Integer nvec_binomial(const NVec& n, const NVec& k) {
    require_same_dims(n, k, "nvec_binomial");
    Integer r = 1;
    for (std::size_t i = 0; i < n.size(); ++i)
        r *= binomial(n[i], k[i]);
    return r;
}

/// All vectors 0 <= l <= bound componentwise, in lexicographic order.
inline std::vector<NVec> nvec_range(const NVec& bound) {
    std::vector<NVec> out;
    NVec cur = nvec_zero(bound.size());
    while (true) {
        out.push_back(cur);
        std::size_t i = bound.size();
        while (i > 0) {
            --i;
            if (cur[i] < bound[i]) {
                ++cur[i];
                std::fill(cur.begin() + static_cast<long>(i) + 1, cur.end(), 0u);
                break;
            }
            if (i == 0)
                return out;
        }
        if (bound.empty())
            return out;
    }
}

/// All vectors of the given length with 1-norm <= mass.
inline std::vector<NVec> nvec_with_mass_at_most(std::size_t dims, unsigned mass) {
    std::vector<NVec> out;
    NVec cur = nvec_zero(dims);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i == dims) {
            out.push_back(cur);
            return;
        }
        for (unsigned x = 0; x <= left; ++x) {
            cur[i] = x;
            rec(i + 1, left - x);
        }
        cur[i] = 0;
    };
    rec(0, mass);
    return out;
}

/// Canonical word w = uv: the commutative b-part u in N^{d+1} and the
/// multiset v of letters n in N^{d+1}. |w| counts only v-letters.
class CanonicalWord {
public:
    using letter_map = std::map<NVec, unsigned>;

    CanonicalWord() = default;
    CanonicalWord(NVec u, letter_map v) : u_(std::move(u)), v_(std::move(v)) {
        for (auto it = v_.begin(); it != v_.end();) {
            if (it->second == 0) {
                it = v_.erase(it);
                continue;
            }
            require_same_dims(u_, it->first, "CanonicalWord");
            ++it;
        }
    }

    static CanonicalWord empty(std::size_t dims) {
        return CanonicalWord(nvec_zero(dims), {});
    }

    const NVec& u() const { return u_; }
    const letter_map& v() const { return v_; }
    std::size_t dims() const { return u_.size(); }

    /// |w|: the number of v-letters, with multiplicity.
    unsigned length() const {
        unsigned n = 0;
        for (const auto& [l, r] : v_)
            n += r;
        return n;
    }

    unsigned letter_multiplicity(const NVec& l) const {
        auto it = v_.find(l);
        return it == v_.end() ? 0u : it->second;
    }

    /// Total 1-norm of the v-letters: the word's first-grade mass.
    unsigned letter_mass() const {
        unsigned m = 0;
        for (const auto& [l, r] : v_)
            m += r * nvec_norm1(l);
        return m;
    }

    /// w! = u! * prod over distinct letters of multiplicity!.
    Integer word_factorial() const {
        Integer f = nvec_factorial(u_);
        for (const auto& [l, r] : v_)
            f *= factorial(r);
        return f;
    }

    CanonicalWord with_u(NVec u) const {
        CanonicalWord w = *this;
        require_same_dims(u, u_, "with_u");
        w.u_ = std::move(u);
        return w;
    }

    CanonicalWord with_letter(const NVec& l, int delta) const {
        require_same_dims(l, u_, "with_letter");
        CanonicalWord w = *this;
        int r = static_cast<int>(w.letter_multiplicity(l)) + delta;
        if (r < 0)
            throw std::invalid_argument("CanonicalWord: negative letter multiplicity");
        if (r == 0)
            w.v_.erase(l);
        else
            w.v_[l] = static_cast<unsigned>(r);
        return w;
    }

    friend bool operator==(const CanonicalWord& a, const CanonicalWord& b) {
        return a.u_ == b.u_ && a.v_ == b.v_;
    }
    friend bool operator!=(const CanonicalWord& a, const CanonicalWord& b) {
        return !(a == b);
    }
    friend bool operator<(const CanonicalWord& a, const CanonicalWord& b) {
        if (a.u_ != b.u_)
            return a.u_ < b.u_;
        return a.v_ < b.v_;
    }

private:
    NVec u_;
    letter_map v_;
};

/// z_{(label, w)}.
struct SpdeVariable {
    unsigned label = 0;
    CanonicalWord word;

    friend bool operator==(const SpdeVariable& a, const SpdeVariable& b) {
        return a.label == b.label && a.word == b.word;
    }
    friend bool operator!=(const SpdeVariable& a, const SpdeVariable& b) {
        return !(a == b);
    }
    friend bool operator<(const SpdeVariable& a, const SpdeVariable& b) {
        if (a.label != b.label)
            return a.label < b.label;
        return a.word < b.word;
    }
};

/// SPDE multi-index: a monomial in the variables z_{(label, w)}.
class SpdeMultiIndex {
public:
    using exp_map = std::map<SpdeVariable, unsigned>;

    SpdeMultiIndex() = default;
    explicit SpdeMultiIndex(exp_map exps) : exp_(std::move(exps)) {
        for (auto it = exp_.begin(); it != exp_.end();)
            it = it->second == 0 ? exp_.erase(it) : std::next(it);
    }

    static SpdeMultiIndex unit() { return {}; }

    static SpdeMultiIndex variable(const SpdeVariable& v) {
        SpdeMultiIndex m;
        m.exp_[v] = 1;
        return m;
    }

    unsigned exponent(const SpdeVariable& v) const {
        auto it = exp_.find(v);
        return it == exp_.end() ? 0u : it->second;
    }

    bool is_unit() const { return exp_.empty(); }
    const exp_map& exponents() const { return exp_; }

    SpdeMultiIndex with_raised(const SpdeVariable& v, int delta) const {
        SpdeMultiIndex m = *this;
        int e = static_cast<int>(m.exponent(v)) + delta;
        if (e < 0)
            throw std::invalid_argument("SpdeMultiIndex: negative exponent");
        if (e == 0)
            m.exp_.erase(v);
        else
            m.exp_[v] = static_cast<unsigned>(e);
        return m;
    }

    friend SpdeMultiIndex operator*(const SpdeMultiIndex& a, const SpdeMultiIndex& b) {
        SpdeMultiIndex m = a;
        for (const auto& [v, e] : b.exp_)
            m.exp_[v] += e;
        return m;
    }

    friend SpdeMultiIndex operator-(const SpdeMultiIndex& a, const SpdeMultiIndex& b) {
        SpdeMultiIndex m = a;
        for (const auto& [v, e] : b.exp_) {
            unsigned ae = m.exponent(v);
            if (ae < e)
                throw std::invalid_argument("SpdeMultiIndex: subtraction underflow");
            if (ae == e)
                m.exp_.erase(v);
            else
                m.exp_[v] = ae - e;
        }
        return m;
    }

    bool divides(const SpdeMultiIndex& b) const {
        for (const auto& [v, e] : exp_)
            if (b.exponent(v) < e)
                return false;
        return true;
    }

    friend bool operator==(const SpdeMultiIndex& a, const SpdeMultiIndex& b) {
        return a.exp_ == b.exp_;
    }
    friend bool operator!=(const SpdeMultiIndex& a, const SpdeMultiIndex& b) {
        return !(a == b);
    }
    friend bool operator<(const SpdeMultiIndex& a, const SpdeMultiIndex& b) {
        return a.exp_ < b.exp_;
    }

private:
    exp_map exp_;
};

/// [beta] = sum (1 - |w|) beta(l, w); populated means 1.
inline long population_degree_spde(const SpdeMultiIndex& m) {
    long d = 0;
    for (const auto& [v, e] : m.exponents())
        d += (1 - static_cast<long>(v.word.length())) * static_cast<long>(e);
    return d;
}

inline bool is_populated_spde(const SpdeMultiIndex& m) {
    return population_degree_spde(m) == 1;
}

/// Number of variables, with multiplicity (invariant under every D^w).
inline unsigned variable_count(const SpdeMultiIndex& m) {
    unsigned n = 0;
    for (const auto& [v, e] : m.exponents())
        n += e;
    return n;
}

inline unsigned letter_count(const SpdeMultiIndex& m) {
    unsigned n = 0;
    for (const auto& [v, e] : m.exponents())
        n += e * v.word.length();
    return n;
}

/// Total 1-norm of all v-letters: the first bigrading component.
inline unsigned letter_mass(const SpdeMultiIndex& m) {
    unsigned s = 0;
    for (const auto& [v, e] : m.exponents())
        s += e * v.word.letter_mass();
    return s;
}

/// Total b-letter count, per direction summed.
inline unsigned b_mass(const SpdeMultiIndex& m) {
    unsigned s = 0;
    for (const auto& [v, e] : m.exponents())
        s += e * nvec_norm1(v.word.u());
    return s;
}

/// S(z^beta) = prod (w!)^{beta(l,w)}.
inline Integer symmetry_spde(const SpdeMultiIndex& m) {
    Integer s = 1;
    for (const auto& [v, e] : m.exponents()) {
        Integer f = v.word.word_factorial();
        for (unsigned i = 0; i < e; ++i)
            s *= f;
    }
    return s;
}

/// (first, second) bigrading: (letter mass, letter count + variable count).
inline std::pair<unsigned, unsigned> grading(const SpdeMultiIndex& m) {
    return {letter_mass(m), letter_count(m) + variable_count(m)};
}

/// Forest of SPDE multi-indices carrying a global d^k marker and per-item
/// D^(n) markers: d^k prod (z^{beta_i} D^(n_i)). The empty forest with k = 0
/// is the unit.
class SpdeForest {
public:
    using item = std::pair<SpdeMultiIndex, NVec>;
    using item_map = std::map<item, unsigned>;

    SpdeForest() = default;
    explicit SpdeForest(NVec k) : k_(std::move(k)) {}
    SpdeForest(NVec k, const std::vector<item>& items) : k_(std::move(k)) {
        for (const auto& it : items)
            insert(it.first, it.second);
    }

    static SpdeForest unit(std::size_t dims) { return SpdeForest(nvec_zero(dims)); }

    static SpdeForest singleton(std::size_t dims, const SpdeMultiIndex& m,
                                const NVec& n) {
        SpdeForest f(nvec_zero(dims));
        f.insert(m, n);
        return f;
    }

    /// Bare multiset of multi-indices with trivial markers, as used by the
    /// extraction-contraction side.
    static SpdeForest bare(std::size_t dims, const std::vector<SpdeMultiIndex>& members) {
        SpdeForest f(nvec_zero(dims));
        for (const auto& m : members)
            f.insert(m, nvec_zero(dims));
        return f;
    }

    void insert(const SpdeMultiIndex& m, const NVec& n, unsigned count = 1) {
        require_same_dims(n, k_, "SpdeForest::insert");
        if (count)
            items_[{m, n}] += count;
    }

    const NVec& k() const { return k_; }
    const item_map& items() const { return items_; }
    bool empty() const { return items_.empty(); }
    bool is_unit() const { return items_.empty() && nvec_is_zero(k_); }

    /// Items counted with multiplicity: the r of the displayed product.
    unsigned size() const {
        unsigned n = 0;
        for (const auto& [it, r] : items_)
            n += r;
        return n;
    }

    std::vector<item> flattened() const {
        std::vector<item> v;
        for (const auto& [it, r] : items_)
            for (unsigned i = 0; i < r; ++i)
                v.push_back(it);
        return v;
    }

    bool has_trivial_markers() const {
        if (!nvec_is_zero(k_))
            return false;
        for (const auto& [it, r] : items_)
            if (!nvec_is_zero(it.second))
                return false;
        return true;
    }

    SpdeMultiIndex merged_product() const {
        SpdeMultiIndex p;
        for (const auto& [it, r] : items_)
            for (unsigned i = 0; i < r; ++i)
                p = p * it.first;
        return p;
    }

    friend bool operator==(const SpdeForest& a, const SpdeForest& b) {
        return a.k_ == b.k_ && a.items_ == b.items_;
    }
    friend bool operator!=(const SpdeForest& a, const SpdeForest& b) {
        return !(a == b);
    }
    friend bool operator<(const SpdeForest& a, const SpdeForest& b) {
        if (a.k_ != b.k_)
            return a.k_ < b.k_;
        return a.items_ < b.items_;
    }

private:
    NVec k_;
    item_map items_;
};

/// S(d^k prod (z^{beta_j} D^(n_j))^{r_j}) = k! prod r_j! S(z^{beta_j})^{r_j}.
inline Integer forest_symmetry_spde(const SpdeForest& f) {
    Integer s = nvec_factorial(f.k());
    for (const auto& [it, r] : f.items()) {
        s *= factorial(r);
        Integer sm = symmetry_spde(it.first);
        for (unsigned i = 0; i < r; ++i)
            s *= sm;
    }
    return s;
}

/// S_ext = S(forest) / S(merged product) = k! prod r_j!.
inline Rational s_ext_spde(const SpdeForest& f) {
    if (f.is_unit())
        throw std::invalid_argument("s_ext_spde: unit forest");
    Integer s = nvec_factorial(f.k());
    for (const auto& [it, r] : f.items())
        s *= factorial(r);
    return Rational(s);
}

/// First bigrading component of a forest: |k|_1 plus per item the marker mass
/// and the member's letter mass.
inline unsigned first_grade(const SpdeForest& f) {
    unsigned s = nvec_norm1(f.k());
    for (const auto& [it, r] : f.items())
        s += r * (nvec_norm1(it.second) + letter_mass(it.first));
    return s;
}

inline std::pair<unsigned, unsigned> grading(const SpdeForest& f) {
    unsigned second = 0;
    for (const auto& [it, r] : f.items())
        second += r * (letter_count(it.first) + variable_count(it.first) + 1);
    return {first_grade(f), second};
}

inline Rational inner_product_spde(const SpdeMultiIndex& a, const SpdeMultiIndex& b) {
    return a == b ? Rational(symmetry_spde(a)) : Rational(0);
}

inline Rational inner_product_spde(const SpdeForest& a, const SpdeForest& b) {
    return a == b ? Rational(forest_symmetry_spde(a)) : Rational(0);
}

template <class B>
Rational inner_product_spde(const LinComb<B>& a, const B& b) {
    return a.coefficient_of(b) * inner_product_spde(b, b);
}

/// D^(n): Leibniz over factors; per factor z_{(l,uv)} the canonical-basis
/// expansion sum_{l' <= min(u,n)} (u choose l') z_{(l,(u-l')(n-l')v)}.
inline LinComb<SpdeMultiIndex> derivation_Dn(const SpdeMultiIndex& m, const NVec& n) {
    LinComb<SpdeMultiIndex> out;
    for (const auto& [var, e] : m.exponents()) {
        const NVec& u = var.word.u();
        require_same_dims(u, n, "derivation_Dn");
        NVec bound = u;
        for (std::size_t i = 0; i < bound.size(); ++i)
            bound[i] = std::min(bound[i], n[i]);
        for (const NVec& l : nvec_range(bound)) {
            NVec new_letter = *nvec_sub(n, l);
            SpdeVariable nv{var.label,
                            var.word.with_u(*nvec_sub(u, l)).with_letter(new_letter, +1)};
            out.add_term(m.with_raised(var, -1).with_raised(nv, +1),
                         Rational(Integer(e) * nvec_binomial(u, l)));
        }
    }
    return out;
}

/// partial_i: Leibniz; per factor adds one b_i to u.
inline LinComb<SpdeMultiIndex> derivation_partial(const SpdeMultiIndex& m, unsigned i) {
    LinComb<SpdeMultiIndex> out;
    for (const auto& [var, e] : m.exponents()) {
        if (i >= var.word.dims())
            throw std::invalid_argument("derivation_partial: direction out of range");
        NVec u = var.word.u();
        ++u[i];
        SpdeVariable nv{var.label, var.word.with_u(u)};
        out.add_term(m.with_raised(var, -1).with_raised(nv, +1), Rational(e));
    }
    return out;
}

/// partial^k: composition of partial_i, k_i times per direction.
inline LinComb<SpdeMultiIndex> derivation_partial_k(const SpdeMultiIndex& m, const NVec& k) {
    LinComb<SpdeMultiIndex> cur = LinComb<SpdeMultiIndex>::single(m);
    for (std::size_t i = 0; i < k.size(); ++i)
        for (unsigned s = 0; s < k[i]; ++s)
            cur = cur.map([&](const SpdeMultiIndex& x) {
                return derivation_partial(x, static_cast<unsigned>(i));
            });
    return cur;
}

/// Single-direction adjoint of partial_i: per distinct factor with u[b_i] >= 1
/// the net integer coefficient u[b_i] (beta((u-e_i)v) + 1); the beta(uv)
/// denominator of the displayed expression cancels against the derivative's
/// multiplicity.
inline LinComb<SpdeMultiIndex> adjoint_partial_i(const SpdeMultiIndex& m, unsigned i) {
    LinComb<SpdeMultiIndex> out;
    for (const auto& [var, e] : m.exponents()) {
        if (i >= var.word.dims())
            throw std::invalid_argument("adjoint_partial_i: direction out of range");
        const NVec& u = var.word.u();
        if (u[i] == 0)
            continue;
        NVec lu = u;
        --lu[i];
        SpdeVariable target{var.label, var.word.with_u(lu)};
        Rational coeff(Integer(u[i]) * (m.exponent(target) + 1));
        out.add_term(m.with_raised(var, -1).with_raised(target, +1), coeff);
    }
    return out;
}

inline LinComb<SpdeMultiIndex> adjoint_partial_k(const SpdeMultiIndex& m, const NVec& k) {
    LinComb<SpdeMultiIndex> cur = LinComb<SpdeMultiIndex>::single(m);
    for (std::size_t i = 0; i < k.size(); ++i)
        for (unsigned s = 0; s < k[i]; ++s)
            cur = cur.map([&](const SpdeMultiIndex& x) {
                return adjoint_partial_i(x, static_cast<unsigned>(i));
            });
    return cur;
}

/// Adjoint of D^(n): per distinct factor and distinct v-letter ml with
/// l := n - ml in N^{d+1}, move the factor to ((u+l), v minus ml) with net
/// coefficient mult_v(ml) (beta(target)+1) / l!.
inline LinComb<SpdeMultiIndex> adjoint_Dn(const SpdeMultiIndex& m, const NVec& n) {
    LinComb<SpdeMultiIndex> out;
    for (const auto& [var, e] : m.exponents()) {
        require_same_dims(var.word.u(), n, "adjoint_Dn");
        for (const auto& [ml, mult] : var.word.v()) {
            auto l = nvec_sub(n, ml);
            if (!l)
                continue;
            SpdeVariable target{var.label, var.word.with_letter(ml, -1)
                                               .with_u(nvec_add(var.word.u(), *l))};
            Rational coeff = Rational(Integer(mult) * (m.exponent(target) + 1)) /
                             Rational(nvec_factorial(*l));
            out.add_term(m.with_raised(var, -1).with_raised(target, +1), coeff);
        }
    }
    return out;
}

/// D^w = partial^u o prod_j D^(v_j): v-letters applied first, then b-letters.
inline LinComb<SpdeMultiIndex> D_word(const SpdeMultiIndex& m, const CanonicalWord& w) {
    LinComb<SpdeMultiIndex> cur = LinComb<SpdeMultiIndex>::single(m);
    for (const auto& [l, r] : w.v())
        for (unsigned s = 0; s < r; ++s)
            cur = cur.map([&](const SpdeMultiIndex& x) { return derivation_Dn(x, l); });
    cur = cur.map([&](const SpdeMultiIndex& x) { return derivation_partial_k(x, w.u()); });
    return cur;
}

/// Adjoint of D^w: partial-bar^u first, then the D-bar^(v_j).
inline LinComb<SpdeMultiIndex> Dbar_word(const SpdeMultiIndex& m, const CanonicalWord& w) {
    LinComb<SpdeMultiIndex> cur = adjoint_partial_k(m, w.u());
    for (const auto& [l, r] : w.v())
        for (unsigned s = 0; s < r; ++s)
            cur = cur.map([&](const SpdeMultiIndex& x) { return adjoint_Dn(x, l); });
    return cur;
}

/// Raw word letter: either b_i (direction index) or a letter n.
using RawLetter = std::variant<unsigned, NVec>;
using RawWord = std::vector<RawLetter>;

/// Rewrites a raw word into the canonical basis using n b_i = b_i n + (n-e_i),
/// dropping branches that leave N^{d+1}. The relations are confluent, so the
/// rewriting order does not matter.
inline LinComb<SpdeVariable> canonicalize(const RawWord& rw, unsigned label,
                                          std::size_t dims) {
    LinComb<SpdeVariable> out;
    std::function<void(const RawWord&, const Rational&)> reduce =
        [&](const RawWord& word, const Rational& coeff) {
            for (std::size_t i = 0; i + 1 < word.size(); ++i) {
                const auto* n = std::get_if<NVec>(&word[i]);
                const auto* b = std::get_if<unsigned>(&word[i + 1]);
                if (!n || !b)
                    continue;
                if (n->size() != dims)
                    throw std::invalid_argument("canonicalize: mixed dimensions");
                if (*b >= dims)
                    throw std::invalid_argument("canonicalize: direction out of range");
                // n b_i -> b_i n
                RawWord swapped = word;
                std::swap(swapped[i], swapped[i + 1]);
                reduce(swapped, coeff);
                // + (n - e_i), when it stays in N^{d+1}
                if ((*n)[*b] >= 1) {
                    NVec shrunk = *n;
                    --shrunk[*b];
                    RawWord merged;
                    merged.reserve(word.size() - 1);
                    merged.insert(merged.end(), word.begin(),
                                  word.begin() + static_cast<long>(i));
                    merged.push_back(shrunk);
                    merged.insert(merged.end(), word.begin() + static_cast<long>(i) + 2,
                                  word.end());
                    reduce(merged, coeff);
                }
                return;
            }
            // canonical: all b's precede all letters
            CanonicalWord w = CanonicalWord::empty(dims);
            NVec u = nvec_zero(dims);
            for (const auto& letter : word) {
                if (const auto* b = std::get_if<unsigned>(&letter)) {
                    if (*b >= dims)
                        throw std::invalid_argument(
                            "canonicalize: direction out of range");
                    ++u[*b];
                } else {
                    const NVec& n = std::get<NVec>(letter);
                    if (n.size() != dims)
                        throw std::invalid_argument("canonicalize: mixed dimensions");
                    w = w.with_letter(n, +1);
                }
            }
            out.add_term(SpdeVariable{label, w.with_u(u)}, coeff);
        };
    reduce(rw, Rational(1));
    return out;
}

} // namespace mindex

#endif
