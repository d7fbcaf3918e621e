#pragma once

// Prime ideals of quadratic orders, valuations, principal ideal factorisation,
// generator search (imaginary fields) and n-th roots built on top of it.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace dtw {

enum class Splitting { Rational, Split, Inert, Ramified };

inline const char* splitting_name(Splitting s)
{
    switch (s) {
    case Splitting::Rational: return "rational";
    case Splitting::Split: return "split";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
    }
    return "?";
}

// Z-basis {a, b + c*omega} of an ideal of O_K, a, c > 0, 0 <= b < a
struct Hnf {
    Int a, b, c;
    bool operator==(const Hnf& o) const { return a == o.a && b == o.b && c == o.c; }
};

inline std::pair<Int, Int> integral_coords(const Elem& x)
{
    auto [x0, x1] = x.omega_coords();
    if (x0.get_den() != 1 || x1.get_den() != 1)
        throw Error(ErrorKind::Internal, "expected an integral element, got " + x.str());
    return {x0.get_num(), x1.get_num()};
}

inline Hnf hnf_of(const std::vector<std::pair<Int, Int>>& gens)
{
    // pivot on the omega coordinate, then the kernel of that projection
    std::pair<Int, Int> piv{0, 0};
    for (auto& g : gens) {
        if (g.second == 0) continue;
        if (piv.second == 0) {
            piv = g;
            continue;
        }
        Int d, s, t;
        mpz_gcdext(d.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), piv.second.get_mpz_t(), g.second.get_mpz_t());
        piv = {s * piv.first + t * g.first, d};
    }
    if (piv.second == 0) throw Error(ErrorKind::Internal, "degenerate lattice");
    if (piv.second < 0) piv = {-piv.first, -piv.second};
    Int a = 0;
    for (auto& g : gens) {
        Int q = g.second / piv.second;
        Int x0 = g.first - q * piv.first;
        mpz_gcd(a.get_mpz_t(), a.get_mpz_t(), x0.get_mpz_t());
    }
    if (a == 0) throw Error(ErrorKind::Internal, "degenerate lattice");
    Int b = piv.first;
    mpz_fdiv_r(b.get_mpz_t(), b.get_mpz_t(), a.get_mpz_t());
    return {a, b, piv.second};
}

inline bool hnf_contains(const Hnf& H, const Elem& x)
{
    auto [x0, x1] = integral_coords(x);
    if (!mpz_divisible_p(x1.get_mpz_t(), H.c.get_mpz_t())) return false;
    Int q = x1 / H.c;
    Int r = x0 - q * H.b;
    return mpz_divisible_p(r.get_mpz_t(), H.a.get_mpz_t()) != 0;
}

inline std::vector<Elem> hnf_basis(const Hnf& H, const Field& K)
{
    return {Elem(H.a), Elem::from_omega(Rat(H.b), Rat(H.c), K)};
}

// the O_K-ideal generated by gens
inline Hnf ideal_hnf(const std::vector<Elem>& gens, const Field& K)
{
    std::vector<std::pair<Int, Int>> g;
    Elem w = Elem::omega(K);
    for (auto& x : gens) {
        g.push_back(integral_coords(x.in(K)));
        g.push_back(integral_coords((x * w).in(K)));
    }
    return hnf_of(g);
}

inline Hnf hnf_mul(const Hnf& H1, const Hnf& H2, const Field& K)
{
    std::vector<std::pair<Int, Int>> g;
    for (auto& x : hnf_basis(H1, K))
        for (auto& y : hnf_basis(H2, K)) g.push_back(integral_coords((x * y).in(K)));
    return hnf_of(g);
}

struct PrimeIdeal {
    Field K;
    Int p;
    Splitting kind = Splitting::Rational;
    int e = 1, f = 1;
    Elem gen;  // ideal = (p, gen)
    Elem pi;   // nu(pi) = 1
    Int root;  // omega = root mod P when f = 1
    int index = 0; // position among the primes above p
    Hnf hnf;

    Int norm() const { return f == 1 ? p : p * p; }
    std::string str() const
    {
        if (kind == Splitting::Rational) return "(" + p.get_str() + ")";
        if (kind == Splitting::Inert) return "(" + p.get_str() + ")";
        return "(" + p.get_str() + ", " + gen.str() + ")";
    }
    std::string pretty() const
    {
        if (kind == Splitting::Rational || kind == Splitting::Inert) return "(" + p.get_str() + ")";
        return "(" + p.get_str() + ", " + gen.pretty() + ")";
    }
    friend bool operator==(const PrimeIdeal& x, const PrimeIdeal& y)
    {
        return x.K == y.K && x.p == y.p && x.hnf == y.hnf;
    }
    friend bool operator!=(const PrimeIdeal& x, const PrimeIdeal& y) { return !(x == y); }
    friend bool operator<(const PrimeIdeal& x, const PrimeIdeal& y)
    {
        if (x.p != y.p) return x.p < y.p;
        return x.index < y.index;
    }
};

using Factorization = std::vector<std::pair<PrimeIdeal, int>>;

namespace detail {

inline Int mod(const Int& x, const Int& m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Elem fix_uniformizer(Elem g, const Int& p)
{
    Rat n = g.norm();
    if (vp(n.get_num(), p) >= 2) g = g + Elem(p);
    return g;
}

} // namespace detail

inline std::vector<PrimeIdeal> primes_above(const Field& K, const Int& p)
{
    if (!is_probable_prime(p)) throw Error(ErrorKind::NotPrime, p.get_str() + " is not prime");
    std::vector<PrimeIdeal> out;
    PrimeIdeal P;
    P.K = K;
    P.p = p;
    if (K.is_rational()) {
        P.kind = Splitting::Rational;
        P.gen = Elem(p);
        P.pi = Elem(p);
        P.root = 0;
        P.hnf = {p, 0, 1};
        out.push_back(P);
        return out;
    }
    Int dk = K.disc(), tr = K.omega_tr(), nm = K.omega_nm();
    Elem sq = Elem::sqrtD(K);
    if (mpz_divisible_p(dk.get_mpz_t(), p.get_mpz_t())) {
        P.kind = Splitting::Ramified;
        P.e = 2;
        if (p == 2) {
            Int D(static_cast<long>(K.D()));
            P.root = detail::mod(D, 2);
            P.gen = P.root == 1 ? Elem(1) + sq : sq;
        } else {
            Int inv2;
            Int two = 2;
            mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t());
            P.root = detail::mod(tr * inv2, p);
            P.gen = sq;
        }
        P.gen = P.gen.in(K);
        P.pi = P.gen;
        P.hnf = {p, detail::mod(-P.root, p), 1};
        out.push_back(P);
        return out;
    }
    bool split;
    if (p == 2)
        split = detail::mod(Int(static_cast<long>(K.D())), 8) == 1;
    else
        split = mpz_legendre(detail::mod(dk, p).get_mpz_t(), p.get_mpz_t()) == 1;
    if (!split) {
        P.kind = Splitting::Inert;
        P.f = 2;
        P.gen = Elem(p).in(K);
        P.pi = P.gen;
        P.root = 0;
        P.hnf = {p, 0, p};
        out.push_back(P);
        return out;
    }
    P.kind = Splitting::Split;
    std::vector<std::pair<Int, Elem>> found; // (sort key, gen)
    std::vector<Int> roots;
    if (p == 2) {
        roots = {0, 1};
    } else {
        Int s = sqrt_mod_prime(detail::mod(dk, p), p);
        Int inv2, two = 2;
        mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t());
        roots = {detail::mod((tr + s) * inv2, p), detail::mod((tr - s) * inv2, p)};
    }
    std::vector<PrimeIdeal> tmp;
    for (auto& c : roots) {
        PrimeIdeal Q = P;
        Q.root = c;
        Int key;
        if (p == 2) {
            Q.gen = (Elem::omega(K) - Elem(c)).in(K);
            key = c;
        } else {
            // sqrtD = r mod Q, display (p, sqrtD + s) with s = -r mod p
            Int r = K.omega_half() ? detail::mod(2 * c - 1, p) : c;
            Int s = detail::mod(-r, p);
            Q.gen = (sq + Elem(s)).in(K);
            key = s;
        }
        Q.pi = detail::fix_uniformizer(Q.gen, p);
        Q.hnf = {p, detail::mod(-c, p), 1};
        Q.index = static_cast<int>(key.get_si());
        tmp.push_back(Q);
    }
    std::sort(tmp.begin(), tmp.end(), [](const PrimeIdeal& x, const PrimeIdeal& y) { return x.index < y.index; });
    for (size_t i = 0; i < tmp.size(); ++i) tmp[i].index = static_cast<int>(i);
    return tmp;
}

inline Hnf ideal_power_basis(const PrimeIdeal& P, int k)
{
    Hnf H{1, 0, 1};
    for (int i = 0; i < k; ++i) H = hnf_mul(H, P.hnf, P.K);
    return H;
}

namespace detail {

inline int valuation_integral(const PrimeIdeal& P, const Elem& y)
{
    if (P.kind == Splitting::Rational) return vp(y.a().get_num(), P.p);
    auto [y0, y1] = integral_coords(y);
    Int g;
    mpz_gcd(g.get_mpz_t(), y0.get_mpz_t(), y1.get_mpz_t());
    int s = vp(g, P.p);
    if (P.kind == Splitting::Inert) return s;
    Int ps;
    mpz_pow_ui(ps.get_mpz_t(), P.p.get_mpz_t(), s);
    Elem z = y / Elem(ps);
    bool in = hnf_contains(P.hnf, z);
    if (P.kind == Splitting::Ramified) return 2 * s + (in ? 1 : 0);
    // split: z is not divisible by p, so it lies in at most one of the two primes
    return s + (in ? vp(z.norm().get_num(), P.p) : 0);
}

} // namespace detail

inline int valuation(const PrimeIdeal& P, const Elem& x)
{
    if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "valuation of 0");
    Elem xx = x.in(P.K);
    Int m = xx.denominator();
    Elem y = xx * Elem(m);
    return detail::valuation_integral(P, y) - P.e * vp(m, P.p);
}

inline std::vector<Int> support_primes(const Elem& x)
{
    Int m = x.denominator();
    Elem y = x * Elem(m);
    std::map<Int, int> ps;
    Rat n = y.norm();
    for (auto& [p, e] : factor_integer(n.get_num())) ps[p] = 1;
    if (m > 1)
        for (auto& [p, e] : factor_integer(m)) ps[p] = 1;
    std::vector<Int> out;
    for (auto& [p, e] : ps) out.push_back(p);
    return out;
}

inline Factorization factor_principal_ideal(const Elem& x)
{
    if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "factor of 0");
    Factorization out;
    for (auto& p : support_primes(x))
        for (auto& P : primes_above(x.field(), p)) {
            int v = valuation(P, x);
            if (v) out.emplace_back(P, v);
        }
    return out;
}

inline bool same_factorization(Factorization a, Factorization b)
{
    auto clean = [](Factorization& f) {
        f.erase(std::remove_if(f.begin(), f.end(), [](auto& t) { return t.second == 0; }), f.end());
        std::sort(f.begin(), f.end(), [](auto& x, auto& y) { return x.first < y.first; });
    };
    clean(a);
    clean(b);
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
    return true;
}

inline std::string factorization_str(const Factorization& F)
{
    if (F.empty()) return "(1)";
    std::string s;
    for (auto& [P, e] : F) {
        if (!s.empty()) s += " * ";
        s += P.pretty();
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

namespace detail {

inline auto gen_key(const Elem& x)
{
    return std::make_tuple(Rat(abs(x.a())), Rat(abs(x.b())), x.a() < 0, x.b() < 0);
}

inline const Elem& best_generator(const std::vector<Elem>& xs)
{
    return *std::min_element(xs.begin(), xs.end(), [](const Elem& x, const Elem& y) { return gen_key(x) < gen_key(y); });
}

// does x generate exactly prod P^e (only primes above the rational primes of F are checked,
// callers pass elements whose norm already pins the support)
inline bool generates(const Elem& x, const Factorization& F, const std::vector<Int>& ps)
{
    for (auto& p : ps)
        for (auto& Q : primes_above(x.field(), p)) {
            int want = 0;
            for (auto& [P, e] : F)
                if (P == Q) want += e;
            if (valuation(Q, x) != want) return false;
        }
    return true;
}

} // namespace detail

inline std::optional<Elem> principal_generator_of_power(const PrimeIdeal& P, int k)
{
    if (P.K.is_real_quadratic()) throw Error(ErrorKind::UnsupportedField, "generator search needs an imaginary field");
    if (k == 0) return Elem(1).in(P.K);
    Int N;
    mpz_pow_ui(N.get_mpz_t(), P.p.get_mpz_t(), static_cast<unsigned long>(P.f * k));
    std::vector<Elem> hits;
    Factorization F{{P, k}};
    for (auto& x : elements_of_norm(P.K, N))
        if (detail::generates(x, F, {P.p})) hits.push_back(x);
    if (hits.empty()) return std::nullopt;
    return detail::best_generator(hits);
}

// generator of the fractional ideal prod P^e, if principal
inline std::optional<Elem> principal_generator(const Factorization& F, const Field& K)
{
    if (K.is_real_quadratic()) throw Error(ErrorKind::UnsupportedField, "generator search needs an imaginary field");
    Elem g = Elem(1).in(K);
    Factorization rest;
    for (auto& [P, e] : F) {
        if (e == 0) continue;
        if (P.kind == Splitting::Rational || P.kind == Splitting::Inert) {
            g *= Elem(P.p).pow(e);
            continue;
        }
        if (P.kind == Splitting::Ramified && e % 2 == 0) {
            g *= Elem(P.p).pow(e / 2);
            continue;
        }
        if (auto h = principal_generator_of_power(P, 1)) {
            g *= h->pow(e);
            continue;
        }
        rest.emplace_back(P, e);
    }
    if (rest.empty()) return g;
    // integral ideal B = prod_{e>0} P^e * prod_{e<0} conj(P)^{-e}, then divide by the norm part
    Factorization B;
    Int denom = 1, NB = 1;
    std::vector<Int> ps;
    for (auto& [P, e] : rest) {
        ps.push_back(P.p);
        PrimeIdeal Q = P;
        int k = e;
        if (e < 0) {
            k = -e;
            Int pk;
            mpz_pow_ui(pk.get_mpz_t(), P.norm().get_mpz_t(), k);
            denom *= pk;
            if (P.kind == Splitting::Split)
                for (auto& R : primes_above(K, P.p))
                    if (R != P) Q = R;
        }
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), P.norm().get_mpz_t(), k);
        NB *= pk;
        bool merged = false;
        for (auto& t : B)
            if (t.first == Q) {
                t.second += k;
                merged = true;
            }
        if (!merged) B.emplace_back(Q, k);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    if (NB > Int("100000000000000000000"))
        throw Error(ErrorKind::UnsupportedField, "norm search too large: " + NB.get_str());
    std::vector<Elem> hits;
    for (auto& x : elements_of_norm(K, NB))
        if (detail::generates(x, B, ps)) hits.push_back(x);
    if (hits.empty()) return std::nullopt;
    return g * detail::best_generator(hits) / Elem(denom);
}

// y with y^n = x in K
inline std::optional<Elem> nth_power_root(const Elem& xin, int n)
{
    if (n <= 0) throw Error(ErrorKind::Internal, "root index must be positive");
    if (xin.is_zero()) throw Error(ErrorKind::ZeroElement, "root of 0");
    const Field K = xin.field();
    if (n == 1) return xin;
    if (K.is_rational() || (xin.is_rational() && !K.is_imaginary())) {
        if (auto r = rat_root(xin.a(), n)) return Elem(*r).in(K);
        if (K.is_rational() || n % 2) return std::nullopt;
        // (q sqrtD)^n = q^n D^(n/2)
        Int Dh;
        Int D(static_cast<long>(K.D()));
        mpz_pow_ui(Dh.get_mpz_t(), D.get_mpz_t(), n / 2);
        if (auto r = rat_root(xin.a() / Rat(Dh), n)) return Elem(0, *r, K);
        return std::nullopt;
    }
    if (K.is_real_quadratic()) {
        // only 2-power roots via exact square roots
        if (n & (n - 1)) throw Error(ErrorKind::UnsupportedField, "odd root of an irrational element of a real field");
        std::vector<Elem> cur{xin};
        for (int m = n; m > 1; m /= 2) {
            std::vector<Elem> nxt;
            for (auto& c : cur)
                if (auto s = sqrt_elem(c)) {
                    nxt.push_back(*s);
                    nxt.push_back(-*s);
                }
            cur = nxt;
        }
        for (auto& y : cur)
            if (y.pow(n) == xin) return y;
        return std::nullopt;
    }
    // imaginary: ideal root, generator, unit loop
    Factorization F = factor_principal_ideal(xin);
    for (auto& t : F) {
        if (t.second % n) return std::nullopt;
        t.second /= n;
    }
    auto g = principal_generator(F, K);
    if (!g) return std::nullopt;
    std::vector<Elem> hits;
    for (auto& u : units_of(K)) {
        Elem y = *g * u;
        if (y.pow(n) == xin) hits.push_back(y);
    }
    if (hits.empty()) return std::nullopt;
    return detail::best_generator(hits);
}

} // namespace dtw
