#ifndef MINDEX_RATIONAL_HPP
#define MINDEX_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <ostream>
#include <stdexcept>
#include <string>

namespace mindex {

using Integer = boost::multiprecision::cpp_int;

/// Exact rational scalar. Always stored reduced with positive denominator;
/// zero is 0/1. All coefficient arithmetic in the library goes through this
/// type; no floating point appears anywhere on the computation path.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long long n) : v_(n) {}
    Rational(unsigned n) : v_(n) {}
    Rational(unsigned long long n) : v_(n) {}
    Rational(Integer n) : v_(std::move(n)) {}
    Rational(const Integer& num, const Integer& den) : v_(num) {
        if (den == 0)
            throw std::domain_error("Rational: zero denominator");
        v_ /= boost::multiprecision::cpp_rational(den);
    }

    Integer num() const { return boost::multiprecision::numerator(v_); }
    Integer den() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return den() == 1; }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero())
            throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const {
        std::string s = num().str();
        if (!is_integer())
            s += "/" + den().str();
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.str();
    }

private:
    boost::multiprecision::cpp_rational v_;
};

inline Integer factorial(unsigned n) {
    Integer r = 1;
    for (unsigned i = 2; i <= n; ++i)
        r *= i;
    return r;
}

inline Integer binomial(unsigned n, unsigned k) {
    if (k > n)
        return 0;
    Integer r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

} // namespace mindex

#endif
