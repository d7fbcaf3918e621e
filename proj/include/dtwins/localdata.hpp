#pragma once

// Local data at a prime: residue fields, Tate's algorithm, global assembly of the
// minimal discriminant and conductor, and the local consistency checks.

#include <atomic>
#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "ellmodel.hpp"

namespace dtw {

// O_K / P, P of degree 1 or 2; elements c0 + c1*omega with c_i mod p
class ResidueField {
    PrimeIdeal P_;
    Int q_;
    Elem helper_; // in the other prime above p but not in P (split only)

  public:
    struct El {
        Int c0, c1;
        bool is_zero() const { return c0 == 0 && c1 == 0; }
        bool operator==(const El& o) const { return c0 == o.c0 && c1 == o.c1; }
    };

    explicit ResidueField(PrimeIdeal P) : P_(std::move(P))
    {
        q_ = P_.norm();
        helper_ = Elem(1);
        if (P_.kind == Splitting::Split)
            for (auto& Q : primes_above(P_.K, P_.p))
                if (Q != P_) helper_ = (Elem::omega(P_.K) - Elem(Q.root)).in(P_.K);
    }
    const PrimeIdeal& prime() const { return P_; }
    const Int& p() const { return P_.p; }
    const Int& q() const { return q_; }

    El norm_el(Int c0, Int c1) const
    {
        mpz_fdiv_r(c0.get_mpz_t(), c0.get_mpz_t(), P_.p.get_mpz_t());
        mpz_fdiv_r(c1.get_mpz_t(), c1.get_mpz_t(), P_.p.get_mpz_t());
        return {c0, c1};
    }
    El from_int(const Int& n) const { return norm_el(n, 0); }

    El reduce_integral(const Elem& z) const
    {
        if (P_.kind == Splitting::Rational) return from_int(z.a().get_num());
        auto [z0, z1] = integral_coords(z);
        if (P_.f == 2) return norm_el(z0, z1);
        return norm_el(z0 + z1 * P_.root, 0);
    }

    El reduce(const Elem& x) const
    {
        Elem xx = x.in(P_.K);
        Int m = xx.denominator();
        Elem y = xx * Elem(m);
        int k = vp(m, P_.p);
        if (k == 0) return mul(reduce_integral(y), inv(from_int(m)));
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), P_.p.get_mpz_t(), k);
        Elem sk = helper_.pow(k);
        Elem z = sk * y / Elem(pk);
        if (!z.in(P_.K).is_integral()) throw Error(ErrorKind::Internal, "reduction of a non-integral element " + x.str());
        El den = mul(reduce_integral(sk.in(P_.K)), from_int(m / pk));
        return mul(reduce_integral(z.in(P_.K)), inv(den));
    }

    Elem lift(const El& a) const
    {
        if (P_.f == 2) return Elem::from_omega(Rat(a.c0), Rat(a.c1), P_.K);
        return Elem(a.c0).in(P_.K);
    }

    El add(const El& a, const El& b) const { return norm_el(a.c0 + b.c0, a.c1 + b.c1); }
    El sub(const El& a, const El& b) const { return norm_el(a.c0 - b.c0, a.c1 - b.c1); }
    El mul(const El& a, const El& b) const
    {
        if (P_.f == 1) return norm_el(a.c0 * b.c0, 0);
        Int t = a.c1 * b.c1;
        return norm_el(a.c0 * b.c0 + t * P_.K.omega_nm(), a.c0 * b.c1 + a.c1 * b.c0 + t * P_.K.omega_tr());
    }
    El pow(El a, Int e) const
    {
        El r = from_int(1);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
            e >>= 1;
            if (e > 0) a = mul(a, a);
        }
        return r;
    }
    El inv(const El& a) const
    {
        if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0 in residue field");
        return pow(a, q_ - 2);
    }
    // inverse Frobenius: the unique p-th root
    El pth_root(const El& a) const { return pow(a, q_ / P_.p); }
    bool is_square(const El& a) const
    {
        if (a.is_zero() || P_.p == 2) return true;
        return pow(a, (q_ - 1) / 2) == from_int(1);
    }

    // convenience on field elements that are P-integral
    Elem preduce(const Elem& x) const { return lift(reduce(x)); }
    Elem pdiv_lift(const Elem& x, const Elem& y) const { return lift(mul(reduce(x), inv(reduce(y)))); }
    Elem proot(const Elem& x) const { return lift(pth_root(reduce(x))); }
};

struct Kodaira {
    enum Tag { I0, In, II, III, IV, I0s, Ins, IVs, IIIs, IIs } tag = I0;
    int n = 0;

    std::string str() const
    {
        switch (tag) {
        case I0: return "I0";
        case In: return "I" + std::to_string(n);
        case II: return "II";
        case III: return "III";
        case IV: return "IV";
        case I0s: return "I0*";
        case Ins: return "I" + std::to_string(n) + "*";
        case IVs: return "IV*";
        case IIIs: return "III*";
        case IIs: return "II*";
        }
        return "?";
    }
    // components of the special fibre
    int components() const
    {
        switch (tag) {
        case I0: return 1;
        case In: return n;
        case II: return 1;
        case III: return 2;
        case IV: return 3;
        case I0s: return 5;
        case Ins: return n + 5;
        case IVs: return 7;
        case IIIs: return 8;
        case IIs: return 9;
        }
        return 0;
    }
    bool operator==(const Kodaira& o) const { return tag == o.tag && n == o.n; }
    bool operator!=(const Kodaira& o) const { return !(*this == o); }

    static Kodaira parse(const std::string& s)
    {
        static const std::pair<const char*, Tag> fixed[] = {{"I0", I0}, {"II", II}, {"III", III}, {"IV", IV}, {"I0*", I0s},
                                                            {"IV*", IVs}, {"III*", IIIs}, {"II*", IIs}};
        for (auto& [name, t] : fixed)
            if (s == name) return {t, 0};
        if (s.size() >= 2 && s[0] == 'I') {
            bool star = s.back() == '*';
            std::string num = s.substr(1, s.size() - 1 - (star ? 1 : 0));
            if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos) {
                int n = std::stoi(num);
                if (n >= 1) return {star ? Ins : In, n};
            }
        }
        throw Error(ErrorKind::Parse, "bad Kodaira symbol: " + s);
    }
};

enum class Reduction { Good, Multiplicative, Additive };
enum class Potential { Good, Multiplicative };

inline const char* reduction_name(Reduction r)
{
    switch (r) {
    case Reduction::Good: return "good";
    case Reduction::Multiplicative: return "multiplicative";
    case Reduction::Additive: return "additive";
    }
    return "?";
}
inline const char* potential_name(Potential p) { return p == Potential::Good ? "good" : "multiplicative"; }

struct LocalData {
    PrimeIdeal prime;
    Kodaira kodaira;
    int f = 0, m = 1, vmin = 0, u_exp = 0;
    Reduction reduction = Reduction::Good;
    Potential potential = Potential::Good;
};

struct LocalStats {
    std::atomic<long> tate_runs{0};
    std::atomic<long> ogg_checks{0};
};
inline LocalStats& local_stats()
{
    static LocalStats s;
    return s;
}

namespace detail {

constexpr int kInfVal = INT_MAX / 4;

inline int val0(const PrimeIdeal& P, const Elem& x) { return x.is_zero() ? kInfVal : valuation(P, x); }

inline Model scale_down(const Model& E, const Elem& pi)
{
    return transform(E, Transformation::scale(pi));
}

inline Model rst(const Model& E, const Elem& r, const Elem& s, const Elem& t)
{
    return transform(E, {Elem(1), r, s, t});
}

} // namespace detail

inline LocalData tate_local(const Model& Ein, const PrimeIdeal& P)
{
    using detail::val0;
    if (Ein.K != P.K && !Ein.K.is_rational()) throw Error(ErrorKind::FieldMismatch, "model and prime in different fields");
    Model E = Ein;
    E.K = P.K;
    for (auto& x : E.a) x = x.in(P.K);
    Invariants I0 = invariants(E);
    const int v_input = valuation(P, I0.disc);
    ResidueField F(P);
    const Elem& pi = P.pi;
    const Int& p = P.p;
    auto pval = [&](const Elem& x) { return val0(P, x); };
    auto pdiv = [&](const Elem& x) { return pval(x) > 0; };

    // integral model
    int e = 0;
    for (int i = 0; i < 5; ++i) {
        static const int w[5] = {1, 2, 3, 4, 6};
        int v = pval(E.a[i]);
        if (v < 0) e = std::max(e, (-v + w[i] - 1) / w[i]);
    }
    if (e) E = transform(E, Transformation::scale(pi.pow(-e)));

    local_stats().tate_runs++;
    LocalData L;
    L.prime = P;
    L.potential = val0(P, I0.j) >= 0 ? Potential::Good : Potential::Multiplicative;

    auto finish = [&](Kodaira k, int vD, Reduction red) {
        L.kodaira = k;
        L.vmin = vD;
        L.m = k.components();
        L.reduction = red;
        int ogg = vD - L.m + 1;
        bool wild = p == 2 || p == 3;
        if (red == Reduction::Good)
            L.f = 0;
        else if (red == Reduction::Multiplicative)
            L.f = 1;
        else if (!wild)
            L.f = 2;
        else {
            L.f = ogg;
            int bound = 2 + (p == 2 ? 6 * P.e : 0) + (p == 3 ? 3 * P.e : 0);
            if (L.f < 2 || L.f > bound)
                throw Error(ErrorKind::Internal, "conductor exponent out of range at " + P.str());
        }
        local_stats().ogg_checks++;
        if (L.f != ogg) throw Error(ErrorKind::Internal, "Ogg's formula fails at " + P.str() + " for " + Ein.str());
        if ((v_input - vD) % 12) throw Error(ErrorKind::Internal, "discriminant drop not a multiple of 12");
        L.u_exp = (v_input - vD) / 12;
        return L;
    };

    for (int guard = 0; guard < 1000; ++guard) {
        Invariants I = invariants(E);
        int vD = pval(I.disc);
        if (vD == 0) return finish({Kodaira::I0, 0}, 0, Reduction::Good);
        if (pval(I.c4) == 0) return finish({Kodaira::In, vD}, vD, Reduction::Multiplicative);

        // additive: move the cusp to (0,0)
        Elem r, t;
        if (p == 2) {
            r = F.proot(E.a4());
            t = F.proot(r * (r * (r + E.a2()) + E.a4()) + E.a6());
        } else if (p == 3) {
            r = F.proot(-I.b6);
            t = F.preduce(E.a1() * r + E.a3());
        } else {
            r = F.preduce(-I.b2 / Elem(12));
            t = F.preduce(-(E.a1() * r + E.a3()) / Elem(2));
        }
        E = detail::rst(E, r, Elem(0), t);
        I = invariants(E);
        if (!(pdiv(E.a3()) && pdiv(E.a4()) && pdiv(E.a6())))
            throw Error(ErrorKind::Internal, "singular point not moved to origin at " + P.str());

        if (pval(E.a6()) < 2) return finish({Kodaira::II, 0}, vD, Reduction::Additive);
        if (pval(I.b8) < 3) return finish({Kodaira::III, 0}, vD, Reduction::Additive);
        if (pval(I.b6) < 3) return finish({Kodaira::IV, 0}, vD, Reduction::Additive);

        Elem s;
        if (p == 2) {
            s = F.proot(E.a2());
            t = pi * F.proot(E.a6() / (pi * pi));
        } else if (p == 3) {
            s = E.a1();
            t = E.a3();
        } else {
            s = -E.a1() / Elem(2);
            t = -E.a3() / Elem(2);
        }
        E = detail::rst(E, Elem(0), s, t);
        if (!(pdiv(E.a1()) && pdiv(E.a2()) && pval(E.a3()) >= 2 && pval(E.a4()) >= 2 && pval(E.a6()) >= 3))
            throw Error(ErrorKind::Internal, "step 6 normalisation failed at " + P.str());

        Elem pi2 = pi * pi, pi3 = pi2 * pi;
        Elem b = E.a2() / pi, c = E.a4() / pi2, d = E.a6() / pi3;
        Elem w = Elem(27) * d * d - b * b * c * c + Elem(4) * b * b * b * d - Elem(18) * b * c * d + Elem(4) * c * c * c;
        Elem x = Elem(3) * c - b * b;
        if (!pdiv(w)) return finish({Kodaira::I0s, 0}, vD, Reduction::Additive);

        if (!pdiv(x)) {
            // double root: move it to 0
            Elem r0;
            if (p == 2)
                r0 = F.proot(c);
            else if (p == 3)
                r0 = F.pdiv_lift(c, b);
            else
                r0 = F.pdiv_lift(b * c - Elem(9) * d, Elem(2) * x);
            E = detail::rst(E, pi * r0, Elem(0), Elem(0));
            int ix = 3, iy = 3;
            Elem mx = pi2, my = pi2;
            while (true) {
                Elem a2t = E.a2() / pi, a3t = E.a3() / my, a4t = E.a4() / (pi * mx), a6t = E.a6() / (mx * my);
                if (!pdiv(a3t * a3t + Elem(4) * a6t)) break;
                Elem tt = p == 2 ? my * F.proot(a6t) : my * F.preduce(-a3t / Elem(2));
                E = detail::rst(E, Elem(0), Elem(0), tt);
                my = my * pi;
                ++iy;
                a2t = E.a2() / pi;
                a4t = E.a4() / (pi * mx);
                a6t = E.a6() / (mx * my);
                if (!pdiv(a4t * a4t - Elem(4) * a6t * a2t)) break;
                Elem rr = p == 2 ? mx * F.proot(a6t / a2t) : mx * F.pdiv_lift(-a4t, Elem(2) * a2t);
                E = detail::rst(E, rr, Elem(0), Elem(0));
                mx = mx * pi;
                ++ix;
                if (ix + iy > 4000) throw Error(ErrorKind::Internal, "In* loop runaway");
            }
            return finish({Kodaira::Ins, ix + iy - 5}, vD, Reduction::Additive);
        }

        // triple root
        Elem r0;
        if (p == 2)
            r0 = b;
        else if (p == 3)
            r0 = F.proot(-d);
        else
            r0 = F.preduce(-b / Elem(3));
        E = detail::rst(E, pi * r0, Elem(0), Elem(0));
        {
            Elem a3t = E.a3() / pi2, a6t = E.a6() / (pi2 * pi2);
            if (!pdiv(a3t * a3t + Elem(4) * a6t)) return finish({Kodaira::IVs, 0}, vD, Reduction::Additive);
            Elem tt = p == 2 ? -pi2 * F.proot(a6t) : pi2 * F.preduce(-a3t / Elem(2));
            E = detail::rst(E, Elem(0), Elem(0), tt);
        }
        if (pval(E.a4()) < 4) return finish({Kodaira::IIIs, 0}, vD, Reduction::Additive);
        if (pval(E.a6()) < 6) return finish({Kodaira::IIs, 0}, vD, Reduction::Additive);
        // not minimal
        E = detail::scale_down(E, pi);
    }
    throw Error(ErrorKind::Internal, "Tate loop did not terminate");
}

inline std::pair<Reduction, Potential> reduction_type(const Model& E, const PrimeIdeal& P)
{
    LocalData L = tate_local(E, P);
    return {L.reduction, L.potential};
}

// primes where the model has bad reduction or is not integral
inline std::vector<PrimeIdeal> bad_primes(const Model& E)
{
    Invariants I = invariants(E);
    std::map<Int, int> ps;
    for (auto& p : support_primes(I.disc)) ps[p] = 1;
    for (auto& a : E.a)
        if (!a.is_zero())
            for (auto& [p, k] : factor_integer(a.in(E.K).denominator())) ps[p] = 1;
    std::vector<PrimeIdeal> out;
    for (auto& [p, k] : ps)
        for (auto& P : primes_above(E.K, p)) out.push_back(P);
    return out;
}

inline std::vector<LocalData> local_data_all(const Model& E)
{
    std::vector<LocalData> out;
    for (auto& P : bad_primes(E)) {
        LocalData L = tate_local(E, P);
        if (L.vmin > 0 || L.u_exp != 0) out.push_back(L);
    }
    return out;
}

inline Factorization minimal_discriminant_ideal(const Model& E)
{
    Factorization F;
    for (auto& L : local_data_all(E))
        if (L.vmin) F.emplace_back(L.prime, L.vmin);
    return F;
}

inline Factorization conductor_ideal(const Model& E)
{
    Factorization F;
    for (auto& L : local_data_all(E))
        if (L.f) F.emplace_back(L.prime, L.f);
    return F;
}

inline Elem minimal_discriminant_value_from(const Model& E, const std::vector<LocalData>& lds)
{
    if (E.K.is_real_quadratic())
        throw Error(ErrorKind::UnsupportedField, "minimal discriminant value needs a field with finite unit group");
    Factorization U;
    for (auto& L : lds)
        if (L.u_exp) U.emplace_back(L.prime, L.u_exp);
    auto u = principal_generator(U, E.K);
    if (!u) throw Error(ErrorKind::ClassNumberNotOne, "no generator for " + factorization_str(U));
    return (invariants(E).disc / u->pow(12)).in(E.K);
}

inline Elem minimal_discriminant_value(const Model& E) { return minimal_discriminant_value_from(E, local_data_all(E)); }

inline std::pair<Kodaira, int> kodaira_from_mod12(int v)
{
    int r = ((v % 12) + 12) % 12;
    switch (r) {
    case 0: return {{Kodaira::I0, 0}, 0};
    case 2: return {{Kodaira::II, 0}, 2};
    case 3: return {{Kodaira::III, 0}, 3};
    case 4: return {{Kodaira::IV, 0}, 4};
    case 6: return {{Kodaira::I0s, 0}, 6};
    case 8: return {{Kodaira::IVs, 0}, 8};
    case 9: return {{Kodaira::IIIs, 0}, 9};
    case 10: return {{Kodaira::IIs, 0}, 10};
    }
    throw Error(ErrorKind::InvalidResidue, "valuation " + std::to_string(v) + " is not compatible with potentially good reduction");
}

// supersingular j-invariants in characteristic p (all lie in F_p for these p)
inline std::vector<long> supersingular_js(long p)
{
    switch (p) {
    case 2: return {0};
    case 3: return {0};
    case 5: return {0};
    case 7: return {6};
    case 11: return {0, 1};
    case 13: return {5};
    }
    return {};
}

inline bool dokchitser_relation_check(const LocalData& l1, const LocalData& l2, long p, int j1_val,
                                      const std::optional<Elem>& j1 = std::nullopt)
{
    if (l1.prime != l2.prime) throw Error(ErrorKind::IncompatiblePrimes, l1.prime.str() + " vs " + l2.prime.str());
    int d1 = l1.vmin, d2 = l2.vmin;
    if (l1.reduction != l2.reduction) return false;
    switch (l1.reduction) {
    case Reduction::Good: return d1 == 0 && d2 == 0;
    case Reduction::Multiplicative: return d1 == p * d2 || d2 == p * d1;
    case Reduction::Additive: break;
    }
    if (l1.potential != l2.potential) return false;
    if (l1.potential == Potential::Multiplicative) {
        // nu(j2) is p*nu(j1) or nu(j1)/p and delta - (-nu(j)) is shared
        if (d2 - d1 == -(p - 1) * j1_val) return true;
        return (p - 1) * j1_val % p == 0 && d2 - d1 == (p - 1) * j1_val / p;
    }
    bool above_p = l1.prime.p == p;
    if (!above_p) return d1 == d2 && l1.kodaira == l2.kodaira;
    if (!j1) return true;
    ResidueField F(l1.prime);
    auto jr = F.reduce(*j1);
    bool ss = false;
    for (long s : supersingular_js(p))
        if (jr == F.from_int(Int(s))) ss = true;
    if (!ss) return d1 == d2;
    if (p >= 5) return d2 == 12 - d1;
    return true; // wild supersingular: no relation known
}

} // namespace dtw
