#pragma once

// Integer factorisation: trial division, then Brent's variant of Pollard rho.
// Norms that show up here are products of small primes with the odd large
// cofactor, so nothing fancier is needed.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "error.hpp"

namespace dtw {

using Int = mpz_class;

inline bool is_probable_prime(const Int& n)
{
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

inline int vp(Int n, const Int& p)
{
    if (n == 0) throw Error(ErrorKind::ZeroElement, "p-adic valuation of 0");
    int v = 0;
    if (n < 0) n = -n;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

namespace detail {

inline Int brent_rho(const Int& n)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, ys, g = 1, q = 1, tmp;
        auto f = [&](Int& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        unsigned long r = 1;
        const unsigned long m = 128;
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) f(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    f(y);
                    tmp = abs(x - y);
                    q *= tmp;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                f(ys);
                tmp = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), tmp.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void split_into(const Int& n, std::map<Int, int>& out)
{
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out[n] += 1;
        return;
    }
    // perfect powers make rho slow
    for (unsigned long k = 2; mpz_sizeinbase(n.get_mpz_t(), 2) / k >= 1; ++k) {
        Int r;
        if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k)) {
            std::map<Int, int> sub;
            split_into(r, sub);
            for (auto& [p, e] : sub) out[p] += e * static_cast<int>(k);
            return;
        }
        if (k > 64) break;
    }
    Int d = brent_rho(n);
    split_into(d, out);
    Int rest = n / d;
    split_into(rest, out);
}

} // namespace detail

// |n| factored; sign and zero are the caller's problem.
inline std::vector<std::pair<Int, int>> factor_integer(Int n)
{
    if (n == 0) throw Error(ErrorKind::ZeroElement, "factor_integer(0)");
    if (n < 0) n = -n;
    std::map<Int, int> out;
    for (unsigned long p = 2; p < 5000; p += (p == 2 ? 1 : 2)) {
        if (n == 1) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            int e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            }
            out[Int(p)] = e;
        }
        if (Int(p) * p > n) break;
    }
    if (n > 1) {
        // rho on the same large cofactor recurs a lot (twists, transformed models)
        static std::mutex mu;
        static std::map<Int, std::map<Int, int>> memo;
        std::map<Int, int> part;
        {
            std::lock_guard<std::mutex> lk(mu);
            auto it = memo.find(n);
            if (it != memo.end()) part = it->second;
        }
        if (part.empty()) {
            detail::split_into(n, part);
            std::lock_guard<std::mutex> lk(mu);
            if (memo.size() > 4096) memo.clear();
            memo.emplace(n, part);
        }
        for (auto& [q, e] : part) out[q] += e;
    }
    return {out.begin(), out.end()};
}

inline bool is_squarefree(const Int& n)
{
    for (auto& [p, e] : factor_integer(n))
        if (e > 1) return false;
    return true;
}

// square root of a mod an odd prime p (a a nonzero square)
inline Int sqrt_mod_prime(Int a, const Int& p)
{
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1)
        throw Error(ErrorKind::Internal, "sqrt_mod_prime of a non-residue");
    Int q = p - 1;
    unsigned long s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    Int c, x, t, b, e;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    e = (q + 1) / 2;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;
    while (t != 1) {
        unsigned long i = 0;
        Int tt = t;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        b = c;
        for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
        x = x * b % p;
        c = b * b % p;
        t = t * c % p;
        m = i;
    }
    return x;
}

} // namespace dtw
