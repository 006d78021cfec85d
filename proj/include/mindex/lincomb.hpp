#ifndef MINDEX_LINCOMB_HPP
#define MINDEX_LINCOMB_HPP

#include "mindex/rational.hpp"

#include <map>
#include <utility>

namespace mindex {

/// Formal linear combination of basis keys with exact rational coefficients.
/// Keys are unique, no zero coefficient is ever stored, and iteration follows
/// the canonical total order of the basis type (its operator<). The empty
/// combination is the additive identity.
template <class B>
class LinComb {
public:
    using key_type = B;
    using map_type = std::map<B, Rational>;
    using const_iterator = typename map_type::const_iterator;

    LinComb() = default;

    static LinComb single(B key, Rational coeff = Rational(1)) {
        LinComb c;
        c.add_term(std::move(key), std::move(coeff));
        return c;
    }

    void add_term(B key, Rational coeff) {
        if (coeff.is_zero())
            return;
        auto [it, fresh] = terms_.try_emplace(std::move(key), coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    LinComb& operator+=(const LinComb& o) {
        for (const auto& [k, c] : o.terms_)
            add_term(k, c);
        return *this;
    }

    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }

    LinComb scaled(const Rational& c) const {
        LinComb r;
        if (c.is_zero())
            return r;
        for (const auto& [k, v] : terms_)
            r.terms_.emplace(k, v * c);
        return r;
    }

    Rational coefficient_of(const B& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    const_iterator begin() const { return terms_.begin(); }
    const_iterator end() const { return terms_.end(); }

    friend bool operator==(const LinComb& a, const LinComb& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const LinComb& a, const LinComb& b) {
        return !(a == b);
    }

    /// Image under a basis-to-combination map, extended linearly.
    template <class F>
    auto map(F&& f) const {
        using R = decltype(f(std::declval<const B&>()));
        R out;
        for (const auto& [k, c] : terms_)
            out += f(k).scaled(c);
        return out;
    }

private:
    map_type terms_;
};

template <class B>
LinComb<B> add(const LinComb<B>& a, const LinComb<B>& b) {
    return a + b;
}

template <class B>
LinComb<B> scale(const Rational& c, const LinComb<B>& a) {
    return a.scaled(c);
}

template <class B>
Rational coefficient_of(const LinComb<B>& a, const B& key) {
    return a.coefficient_of(key);
}

/// Ordered pair of basis keys; the basis of a tensor-product space.
template <class L, class R>
struct Tensor2 {
    L left;
    R right;

    friend bool operator==(const Tensor2& a, const Tensor2& b) {
        return a.left == b.left && a.right == b.right;
    }
    friend bool operator<(const Tensor2& a, const Tensor2& b) {
        if (a.left < b.left) return true;
        if (b.left < a.left) return false;
        return a.right < b.right;
    }
};

template <class L, class R>
LinComb<Tensor2<L, R>> tensor(const LinComb<L>& l, const LinComb<R>& r) {
    LinComb<Tensor2<L, R>> out;
    for (const auto& [kl, cl] : l)
        for (const auto& [kr, cr] : r)
            out.add_term(Tensor2<L, R>{kl, kr}, cl * cr);
    return out;
}

} // namespace mindex

#endif
