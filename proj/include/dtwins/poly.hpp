#pragma once

// Dense univariate polynomials over any commutative ring R, plus a minimal
// rational-function wrapper used for identity checks.

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace dtw {

inline bool is_zero_coeff(const Rat& x) { return x == 0; }
inline bool is_zero_coeff(const Int& x) { return x == 0; }
inline bool is_zero_coeff(const Elem& x) { return x.is_zero(); }

template <class R>
class Poly {
    std::vector<R> c_; // low degree first

    void trim()
    {
        while (!c_.empty() && is_zero_coeff(c_.back())) c_.pop_back();
    }

  public:
    Poly() = default;
    Poly(long v) : c_{R(v)} { trim(); }
    Poly(const R& v) : c_{v} { trim(); }
    explicit Poly(std::vector<R> c) : c_(std::move(c)) { trim(); }

    static Poly x() { return Poly(std::vector<R>{R(0L), R(1L)}); }
    static Poly monomial(const R& a, int k)
    {
        std::vector<R> v(k + 1, R(0L));
        v[k] = a;
        return Poly(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    R coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : R(0L); }
    R lead() const { return c_.empty() ? R(0L) : c_.back(); }
    const std::vector<R>& coeffs() const { return c_; }

    friend Poly operator+(const Poly& f, const Poly& g)
    {
        std::vector<R> v(std::max(f.c_.size(), g.c_.size()), R(0L));
        for (size_t i = 0; i < f.c_.size(); ++i) v[i] = v[i] + f.c_[i];
        for (size_t i = 0; i < g.c_.size(); ++i) v[i] = v[i] + g.c_[i];
        return Poly(std::move(v));
    }
    Poly operator-() const
    {
        std::vector<R> v;
        for (auto& a : c_) v.push_back(-a);
        return Poly(std::move(v));
    }
    friend Poly operator-(const Poly& f, const Poly& g) { return f + (-g); }
    friend Poly operator*(const Poly& f, const Poly& g)
    {
        if (f.is_zero() || g.is_zero()) return Poly();
        std::vector<R> v(f.c_.size() + g.c_.size() - 1, R(0L));
        for (size_t i = 0; i < f.c_.size(); ++i)
            for (size_t j = 0; j < g.c_.size(); ++j) v[i + j] = v[i + j] + f.c_[i] * g.c_[j];
        return Poly(std::move(v));
    }
    friend bool operator==(const Poly& f, const Poly& g)
    {
        if (f.c_.size() != g.c_.size()) return false;
        for (size_t i = 0; i < f.c_.size(); ++i)
            if (!(f.c_[i] == g.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Poly& f, const Poly& g) { return !(f == g); }

    Poly pow(unsigned k) const
    {
        Poly r(1L), b = *this;
        while (k) {
            if (k & 1) r = r * b;
            k >>= 1;
            if (k) b = b * b;
        }
        return r;
    }

    Poly derivative() const
    {
        std::vector<R> v;
        for (size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * R(static_cast<long>(i)));
        return Poly(std::move(v));
    }

    // Horner; T must accept R coefficients
    template <class T>
    T eval(const T& x) const
    {
        T acc = T(R(0L));
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + T(c_[i]);
        return acc;
    }

    // f = q*g + r over a field of coefficients
    std::pair<Poly, Poly> divmod(const Poly& g) const
    {
        if (g.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by 0");
        Poly q, r = *this;
        R lc = g.lead();
        while (!r.is_zero() && r.degree() >= g.degree()) {
            int k = r.degree() - g.degree();
            Poly term = monomial(r.lead() / lc, k);
            q = q + term;
            r = r - term * g;
        }
        return {q, r};
    }

    std::string str(const std::string& var = "t") const
    {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = c_.size(); i-- > 0;) {
            if (is_zero_coeff(c_[i])) continue;
            std::ostringstream cs;
            cs << c_[i];
            std::string s = cs.str();
            bool neg = !s.empty() && s[0] == '-';
            if (neg) s = s.substr(1);
            if (!first) os << (neg ? " - " : " + ");
            else if (neg) os << "-";
            if (i == 0 || s != "1") os << s << (i ? "*" : "");
            if (i >= 1) os << var;
            if (i >= 2) os << "^" << i;
            first = false;
        }
        return os.str();
    }
};

template <class R>
inline bool is_zero_coeff(const Poly<R>& f) { return f.is_zero(); }

template <class R>
inline std::ostream& operator<<(std::ostream& os, const Poly<R>& f) { return os << "(" << f.str("d") << ")"; }

using QPoly = Poly<Rat>;

// polynomial with integer coefficients given low degree first
inline QPoly qpoly(std::initializer_list<long> c)
{
    std::vector<Rat> v;
    for (long a : c) v.emplace_back(a);
    return QPoly(std::move(v));
}

inline Elem eval_at(const QPoly& f, const Elem& x)
{
    Elem acc(0, 0, x.field());
    const auto& c = f.coeffs();
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + Elem(c[i]);
    return acc;
}

// num/den, never reduced; the identity test only looks at the numerator
template <class R>
struct RatFunc {
    Poly<R> num, den;

    RatFunc() : num(), den(1L) {}
    RatFunc(Poly<R> n) : num(std::move(n)), den(1L) {}
    RatFunc(Poly<R> n, Poly<R> d) : num(std::move(n)), den(std::move(d))
    {
        if (den.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational function with zero denominator");
    }

    friend RatFunc operator+(const RatFunc& f, const RatFunc& g)
    {
        if (f.den == g.den) return RatFunc(f.num + g.num, f.den);
        return RatFunc(f.num * g.den + g.num * f.den, f.den * g.den);
    }
    friend RatFunc operator-(const RatFunc& f, const RatFunc& g)
    {
        if (f.den == g.den) return RatFunc(f.num - g.num, f.den);
        return RatFunc(f.num * g.den - g.num * f.den, f.den * g.den);
    }
    friend RatFunc operator*(const RatFunc& f, const RatFunc& g) { return RatFunc(f.num * g.num, f.den * g.den); }
    RatFunc derivative() const
    {
        return RatFunc(num.derivative() * den - num * den.derivative(), den * den);
    }
    bool is_zero() const { return num.is_zero(); }
};

// g(L) for g in R[X]
template <class R>
RatFunc<R> compose(const Poly<R>& g, const RatFunc<R>& L)
{
    RatFunc<R> acc;
    const auto& c = g.coeffs();
    for (size_t i = c.size(); i-- > 0;) acc = acc * L + RatFunc<R>(Poly<R>(c[i]));
    return acc;
}

} // namespace dtw
