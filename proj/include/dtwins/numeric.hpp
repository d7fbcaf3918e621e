#pragma once

// Q and Q(sqrt D): exact elements a + b*sqrt(D) with rational a, b.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "intfactor.hpp"

namespace dtw {

using Rat = mpq_class;

inline Rat make_rat(const Int& n, const Int& d = 1)
{
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline std::optional<Int> int_root(const Int& x, unsigned long n)
{
    if (x < 0 && n % 2 == 0) return std::nullopt;
    Int r;
    if (mpz_root(r.get_mpz_t(), x.get_mpz_t(), n)) return r;
    return std::nullopt;
}

inline std::optional<Rat> rat_root(const Rat& x, unsigned long n)
{
    auto a = int_root(x.get_num(), n);
    if (!a) return std::nullopt;
    auto b = int_root(x.get_den(), n);
    if (!b) return std::nullopt;
    return make_rat(*a, *b);
}

class Field {
    std::int64_t D_ = 1;

  public:
    Field() = default;
    static Field rationals() { return Field(); }
    static Field quadratic(std::int64_t D)
    {
        if (D == 0 || D == 1) throw Error(ErrorKind::DegenerateD, "D must not be 0 or 1");
        if (!is_squarefree(Int(static_cast<long>(D))))
            throw Error(ErrorKind::NotSquarefree, std::to_string(D) + " is not squarefree");
        Field K;
        K.D_ = D;
        return K;
    }
    // D = 1 stands for Q itself
    static Field from_D(std::int64_t D) { return D == 1 ? rationals() : quadratic(D); }

    std::int64_t D() const { return D_; }
    bool is_rational() const { return D_ == 1; }
    bool is_imaginary() const { return D_ < 0; }
    bool is_real_quadratic() const { return D_ > 1; }
    bool omega_half() const { return !is_rational() && ((D_ % 4) + 4) % 4 == 1; }
    Int disc() const
    {
        if (is_rational()) return 1;
        return omega_half() ? Int(static_cast<long>(D_)) : Int(static_cast<long>(D_)) * 4;
    }
    // omega^2 = tr*omega + nm
    Int omega_tr() const { return omega_half() ? 1 : 0; }
    Int omega_nm() const
    {
        Int d(static_cast<long>(D_));
        return omega_half() ? Int((d - 1) / 4) : d;
    }
    std::string name() const
    {
        if (is_rational()) return "Q";
        if (D_ == -1) return "Q(i)";
        if (D_ == -3) return "Q(zeta3)";
        return "Q(sqrt(" + std::to_string(D_) + "))";
    }
    bool operator==(const Field& o) const { return D_ == o.D_; }
    bool operator!=(const Field& o) const { return D_ != o.D_; }
};

class Elem {
    Rat a_, b_;
    Field K_;

    static Field join(const Field& x, const Field& y)
    {
        if (x == y) return x;
        if (x.is_rational()) return y;
        if (y.is_rational()) return x;
        throw Error(ErrorKind::FieldMismatch, x.name() + " vs " + y.name());
    }

  public:
    Elem() = default;
    Elem(long v) : a_(v) {}
    Elem(const Int& v) : a_(v) {}
    Elem(const Rat& v) : a_(v) {}
    // gmp expression templates (e.g. -n, a*b) would be ambiguous otherwise
    template <class T, class U>
    Elem(const __gmp_expr<T, U>& e) : a_(Rat(e)) {}
    Elem(Rat a, Rat b, Field K) : a_(std::move(a)), b_(std::move(b)), K_(K)
    {
        a_.canonicalize();
        b_.canonicalize();
        if (K_.is_rational() && b_ != 0)
            throw Error(ErrorKind::FieldMismatch, "irrational part over Q");
    }
    static Elem sqrtD(Field K) { return Elem(0, 1, K); }
    // omega = (1+sqrtD)/2 or sqrtD
    static Elem omega(Field K) { return K.omega_half() ? Elem(Rat(1, 2), Rat(1, 2), K) : Elem(0, 1, K); }
    static Elem from_omega(const Rat& x0, const Rat& x1, Field K)
    {
        if (K.omega_half()) return Elem(x0 + x1 / 2, x1 / 2, K);
        return Elem(x0, x1, K);
    }

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const Field& field() const { return K_; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }
    bool is_one() const { return a_ == 1 && b_ == 0; }

    Elem in(const Field& K) const
    {
        Field J = join(K_, K);
        return Elem(a_, b_, J);
    }

    std::pair<Rat, Rat> omega_coords() const
    {
        if (K_.omega_half()) return {a_ - b_, 2 * b_};
        return {a_, b_};
    }
    bool is_integral() const
    {
        auto [x0, x1] = omega_coords();
        return x0.get_den() == 1 && x1.get_den() == 1;
    }
    // least m > 0 with m*x integral
    Int denominator() const
    {
        auto [x0, x1] = omega_coords();
        Int m;
        mpz_lcm(m.get_mpz_t(), x0.get_den_mpz_t(), x1.get_den_mpz_t());
        return m;
    }

    Elem conj() const { return Elem(a_, -b_, K_); }
    Rat norm() const { return a_ * a_ - Rat(static_cast<long>(K_.D())) * b_ * b_; }
    Rat trace() const { return 2 * a_; }

    Elem operator-() const { return Elem(-a_, -b_, K_); }
    friend Elem operator+(const Elem& x, const Elem& y)
    {
        return Elem(x.a_ + y.a_, x.b_ + y.b_, join(x.K_, y.K_));
    }
    friend Elem operator-(const Elem& x, const Elem& y)
    {
        return Elem(x.a_ - y.a_, x.b_ - y.b_, join(x.K_, y.K_));
    }
    friend Elem operator*(const Elem& x, const Elem& y)
    {
        Field K = join(x.K_, y.K_);
        if (x.b_ == 0) return Elem(x.a_ * y.a_, x.a_ * y.b_, K);
        if (y.b_ == 0) return Elem(x.a_ * y.a_, x.b_ * y.a_, K);
        Rat D(static_cast<long>(K.D()));
        return Elem(x.a_ * y.a_ + D * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, K);
    }
    Elem inverse() const
    {
        if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0");
        if (b_ == 0) return Elem(1 / a_, 0, K_);
        Rat n = norm();
        return Elem(a_ / n, -b_ / n, K_);
    }
    friend Elem operator/(const Elem& x, const Elem& y) { return x * y.inverse(); }
    Elem& operator+=(const Elem& y) { return *this = *this + y; }
    Elem& operator-=(const Elem& y) { return *this = *this - y; }
    Elem& operator*=(const Elem& y) { return *this = *this * y; }
    Elem& operator/=(const Elem& y) { return *this = *this / y; }

    Elem pow(long n) const
    {
        if (n < 0) return inverse().pow(-n);
        Elem r(1, 0, K_), base = *this;
        while (n) {
            if (n & 1) r *= base;
            n >>= 1;
            if (n) base *= base;
        }
        return r;
    }

    friend bool operator==(const Elem& x, const Elem& y)
    {
        if (x.a_ != y.a_ || x.b_ != y.b_) return false;
        return x.K_ == y.K_ || x.K_.is_rational() || y.K_.is_rational();
    }
    friend bool operator!=(const Elem& x, const Elem& y) { return !(x == y); }
    // a total order for deterministic sorting, not a field order
    friend bool operator<(const Elem& x, const Elem& y)
    {
        if (x.a_ != y.a_) return x.a_ < y.a_;
        return x.b_ < y.b_;
    }

    // mini-grammar "a+b*sqrtD" (parse_elem reads it back)
    std::string str() const
    {
        if (b_ == 0) return a_.get_str();
        std::string s;
        if (a_ != 0) s = a_.get_str();
        if (b_ == 1)
            s += a_ != 0 ? "+sqrtD" : "sqrtD";
        else if (b_ == -1)
            s += "-sqrtD";
        else {
            if (b_ > 0 && a_ != 0) s += "+";
            s += b_.get_str() + "*sqrtD";
        }
        return s;
    }

    // i for D=-1, zeta3 for D=-3, sqrt(D) otherwise
    std::string pretty() const
    {
        if (b_ == 0) return a_.get_str();
        Rat c = a_, d = b_;
        std::string sym;
        if (K_.D() == -1)
            sym = "i";
        else if (K_.D() == -3) {
            // sqrt(-3) = 2*zeta3 + 1
            c = a_ + b_;
            d = 2 * b_;
            sym = "zeta3";
        } else
            sym = "sqrt(" + std::to_string(K_.D()) + ")";
        std::string s;
        if (d == 1)
            s = sym;
        else if (d == -1)
            s = "-" + sym;
        else
            s = d.get_str() + "*" + sym;
        if (c > 0) s += "+" + c.get_str();
        if (c < 0) s += c.get_str();
        return s;
    }
};

inline std::ostream& operator<<(std::ostream& os, const Elem& x) { return os << x.str(); }

inline Elem zeta3()
{
    return Elem(Rat(-1, 2), Rat(1, 2), Field::quadratic(-3));
}

inline std::vector<Elem> units_of(const Field& K)
{
    if (K.is_real_quadratic())
        throw Error(ErrorKind::InfiniteUnitGroup, K.name() + " has infinitely many units");
    if (K.D() == -1) {
        Elem i = Elem::sqrtD(K);
        return {Elem(1, 0, K), i, Elem(-1, 0, K), -i};
    }
    if (K.D() == -3) {
        Elem z = zeta3(), z2 = z * z;
        return {Elem(1, 0, K), z, z2, Elem(-1, 0, K), -z, -z2};
    }
    return {Elem(1, 0, K), Elem(-1, 0, K)};
}

// integral elements of norm N (positive-definite norm form, or Q)
inline std::vector<Elem> elements_of_norm(const Field& K, const Int& N)
{
    std::vector<Elem> out;
    if (N <= 0) return out;
    if (K.is_rational()) {
        if (mpz_perfect_square_p(N.get_mpz_t())) {
            Int r = sqrt(N);
            out.emplace_back(r);
            out.emplace_back(-r);
        }
        return out;
    }
    if (!K.is_imaginary()) throw Error(ErrorKind::UnsupportedField, "norm search needs an imaginary field");
    Int absD = -Int(static_cast<long>(K.D()));
    if (!K.omega_half()) {
        // a^2 + |D| b^2 = N
        for (Int b = 0; absD * b * b <= N; ++b) {
            Int r = N - absD * b * b;
            if (!mpz_perfect_square_p(r.get_mpz_t())) continue;
            Int a = sqrt(r);
            for (int sa : {1, -1})
                for (int sb : {1, -1}) {
                    if ((a == 0 && sa < 0) || (b == 0 && sb < 0)) continue;
                    out.emplace_back(Rat(a * sa), Rat(b * sb), K);
                }
        }
    } else {
        // x = (u + v sqrtD)/2, u = v mod 2, u^2 + |D| v^2 = 4N
        Int N4 = 4 * N;
        for (Int v = 0; absD * v * v <= N4; ++v) {
            Int r = N4 - absD * v * v;
            if (!mpz_perfect_square_p(r.get_mpz_t())) continue;
            Int u = sqrt(r);
            if (((u - v) % 2) != 0) continue;
            for (int su : {1, -1})
                for (int sv : {1, -1}) {
                    if ((u == 0 && su < 0) || (v == 0 && sv < 0)) continue;
                    out.emplace_back(make_rat(u * su, 2), make_rat(v * sv, 2), K);
                }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// y with y^2 = x in K, any quadratic field
inline std::optional<Elem> sqrt_elem(const Elem& x)
{
    const Field& K = x.field();
    if (x.is_zero()) return x;
    if (x.b() == 0) {
        if (auto r = rat_root(x.a(), 2)) return Elem(*r, 0, K);
        if (K.is_rational()) return std::nullopt;
        Rat D(static_cast<long>(K.D()));
        if (auto r = rat_root(x.a() / D, 2)) return Elem(0, *r, K);
        return std::nullopt;
    }
    // (u + v sqrtD)^2 = x: N(y) = +-sqrt(N(x)), u^2 = (a + N(y))/2
    auto n = rat_root(x.norm(), 2);
    if (!n) return std::nullopt;
    for (int s : {1, -1}) {
        Rat u2 = (x.a() + s * *n) / 2;
        auto u = rat_root(u2, 2);
        if (!u || *u == 0) continue;
        Elem y(*u, x.b() / (2 * *u), K);
        if (y * y == x) return y;
    }
    return std::nullopt;
}

namespace detail {

inline std::string strip(std::string s)
{
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
}

inline Rat parse_rat(const std::string& s)
{
    if (s.empty()) throw Error(ErrorKind::Parse, "empty number");
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
            throw Error(ErrorKind::Parse, "bad number '" + s + "'");
    Rat r;
    std::string t = s[0] == '+' ? s.substr(1) : s;
    if (r.set_str(t, 10) != 0) throw Error(ErrorKind::Parse, "bad number '" + s + "'");
    if (r.get_den() == 0) throw Error(ErrorKind::Parse, "zero denominator");
    r.canonicalize();
    return r;
}

} // namespace detail

// "a/b+c/e*sqrtD"; also "i" when D=-1 and "zeta3" when D=-3
inline Elem parse_elem(const std::string& text, const Field& K)
{
    std::string s = detail::strip(text);
    if (s.empty()) throw Error(ErrorKind::Parse, "empty element");
    Elem acc(0, 0, K);
    size_t pos = 0;
    while (pos < s.size()) {
        size_t end = pos + 1;
        int depth = s[pos] == '(' ? 1 : 0;
        while (end < s.size() && (depth > 0 || (s[end] != '+' && s[end] != '-'))) {
            if (s[end] == '(') ++depth;
            if (s[end] == ')') --depth;
            ++end;
        }
        std::string term = s.substr(pos, end - pos);
        pos = end;
        int sign = 1;
        if (term[0] == '+' || term[0] == '-') {
            if (term[0] == '-') sign = -1;
            term = term.substr(1);
        }
        if (term.empty()) throw Error(ErrorKind::Parse, "dangling sign in '" + text + "'");
        std::string coef = term, atom;
        auto star = term.find('*');
        if (star != std::string::npos) {
            coef = term.substr(0, star);
            atom = term.substr(star + 1);
        } else if (!std::isdigit(static_cast<unsigned char>(term[0]))) {
            coef = "1";
            atom = term;
        }
        Elem a(detail::parse_rat(coef));
        Elem unit(1, 0, K);
        if (atom.empty()) {
        } else if (atom == "sqrtD" || atom == "sqrt(D)" || atom == "sqrt" + std::to_string(K.D()) ||
                   atom == "sqrt(" + std::to_string(K.D()) + ")") {
            if (K.is_rational()) throw Error(ErrorKind::Parse, "sqrtD over Q");
            unit = Elem::sqrtD(K);
        } else if (atom == "i") {
            if (K.D() != -1) throw Error(ErrorKind::Parse, "'i' needs D=-1");
            unit = Elem::sqrtD(K);
        } else if (atom == "zeta3" || atom == "z") {
            if (K.D() != -3) throw Error(ErrorKind::Parse, "'zeta3' needs D=-3");
            unit = zeta3();
        } else if (atom == "zeta3^2" || atom == "z^2") {
            if (K.D() != -3) throw Error(ErrorKind::Parse, "'zeta3' needs D=-3");
            unit = zeta3() * zeta3();
        } else
            throw Error(ErrorKind::Parse, "unknown symbol '" + atom + "'");
        acc += Elem(sign) * a * unit;
    }
    return acc.in(K);
}

} // namespace dtw
