#pragma once

// The p-isogenous families C_{p,i}(t,d), their closed-form invariants, the
// equal-j factor tables and the explicit special-j isogenies.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ellmodel.hpp"
#include "poly.hpp"

namespace dtw {

using Factored = std::vector<std::pair<QPoly, int>>;

inline QPoly expand(const Rat& c, const Factored& fs)
{
    QPoly r = QPoly(c);
    for (auto& [f, k] : fs) r = r * f.pow(static_cast<unsigned>(k));
    return r;
}

struct FamilyPolys {
    int p = 0, i = 0;
    Int A_const;
    Factored A_factors;
    Int B_const;
    Factored B_factors;
    Factored jnum_factors;
    int jden_exp = 0;
    Rat disc_const;      // Delta / (2^12 3^12 d^6) = disc_const * t^disc_t_exp * prod
    int disc_t_exp = 0;
    Factored disc_factors;

    QPoly A() const { return expand(Rat(A_const), A_factors); }
    QPoly B() const { return expand(Rat(B_const), B_factors); }
    QPoly jnum() const { return expand(Rat(1), jnum_factors); }
    // Delta(t, 1)
    QPoly disc() const
    {
        Rat c = disc_const * Rat(Int(4096) * Int(531441));
        return expand(c, disc_factors) * QPoly::monomial(Rat(1), disc_t_exp);
    }
};

inline const std::array<int, 5>& family_primes()
{
    static const std::array<int, 5> ps{2, 3, 5, 7, 13};
    return ps;
}

inline bool is_family_prime(long p)
{
    for (int q : family_primes())
        if (q == p) return true;
    return false;
}

inline int twin_exponent(int p) { return 12 / (p - 1); }

namespace detail {

inline std::vector<FamilyPolys> build_families()
{
    auto P = [](std::initializer_list<long> c) { return qpoly(c); };
    auto pw = [](long b, int e) {
        Int r;
        mpz_ui_pow_ui(r.get_mpz_t(), b, e);
        return r;
    };
    std::vector<FamilyPolys> v;
    auto add = [&](int p, int i, long ac, Factored af, long bc, Factored bf, Factored jn, int je, Rat dc, int de, Factored df) {
        FamilyPolys f;
        f.p = p;
        f.i = i;
        f.A_const = ac;
        f.A_factors = std::move(af);
        f.B_const = bc;
        f.B_factors = std::move(bf);
        f.jnum_factors = std::move(jn);
        f.jden_exp = je;
        f.disc_const = dc;
        f.disc_t_exp = de;
        f.disc_factors = std::move(df);
        v.push_back(std::move(f));
    };

    add(2, 1, -27, {{P({64, 1}), 1}, {P({256, 1}), 1}}, -54, {{P({-512, 1}), 1}, {P({64, 1}), 2}},
        {{P({256, 1}), 3}}, 2, Rat(1), 2, {{P({64, 1}), 3}});
    add(2, 2, -432, {{P({16, 1}), 1}, {P({64, 1}), 1}}, -3456, {{P({-8, 1}), 1}, {P({64, 1}), 2}},
        {{P({16, 1}), 3}}, 1, Rat(pw(2, 12)), 1, {{P({64, 1}), 3}});

    add(3, 1, -3, {{P({243, 1}), 1}, {P({27, 1}), 3}}, -2, {{P({27, 1}), 4}, {P({19683, 486, -1}), 1}},
        {{P({243, 1}), 3}, {P({27, 1}), 1}}, 3, Rat(1, pw(3, 6)), 3, {{P({27, 1}), 8}});
    add(3, 2, -243, {{P({3, 1}), 1}, {P({27, 1}), 3}}, -1458, {{P({27, 1}), 4}, {P({27, -18, -1}), 1}},
        {{P({3, 1}), 3}, {P({27, 1}), 1}}, 1, Rat(pw(3, 6)), 1, {{P({27, 1}), 8}});

    add(5, 1, -27, {{P({125, 22, 1}), 1}, {P({3125, 250, 1}), 1}}, -54, {{P({15625, 500, -1}), 1}, {P({125, 22, 1}), 2}},
        {{P({3125, 250, 1}), 3}}, 5, Rat(1), 5, {{P({125, 22, 1}), 3}});
    add(5, 2, -16875, {{P({5, 10, 1}), 1}, {P({125, 22, 1}), 1}}, -843750, {{P({1, -4, -1}), 1}, {P({125, 22, 1}), 2}},
        {{P({5, 10, 1}), 3}}, 1, Rat(pw(5, 12)), 1, {{P({125, 22, 1}), 3}});

    add(7, 1, -27, {{P({49, 13, 1}), 1}, {P({2401, 245, 1}), 1}}, -54,
        {{P({49, 13, 1}), 1}, {P({823543, 235298, 21609, 490, -1}), 1}},
        {{P({2401, 245, 1}), 3}, {P({49, 13, 1}), 1}}, 7, Rat(1), 7, {{P({49, 13, 1}), 2}});
    add(7, 2, -64827, {{P({1, 5, 1}), 1}, {P({49, 13, 1}), 1}}, -6353046,
        {{P({49, 13, 1}), 1}, {P({7, -70, -63, -14, -1}), 1}},
        {{P({1, 5, 1}), 3}, {P({49, 13, 1}), 1}}, 1, Rat(pw(7, 12)), 1, {{P({49, 13, 1}), 2}});

    add(13, 1, -27, {{P({13, 5, 1}), 1}, {P({13, 6, 1}), 1}, {P({28561, 15379, 3380, 247, 1}), 1}}, -54,
        {{P({13, 5, 1}), 1}, {P({13, 6, 1}), 2}, {P({4826809, 3712930, 1313806, 237276, 20618, 494, -1}), 1}},
        {{P({28561, 15379, 3380, 247, 1}), 3}, {P({13, 5, 1}), 1}}, 13, Rat(1), 13,
        {{P({13, 6, 1}), 3}, {P({13, 5, 1}), 2}});
    add(13, 2, -771147, {{P({13, 5, 1}), 1}, {P({13, 6, 1}), 1}, {P({1, 19, 20, 7, 1}), 1}}, -260647686,
        {{P({13, 5, 1}), 1}, {P({13, 6, 1}), 2}, {P({1, -38, -122, -108, -46, -10, -1}), 1}},
        {{P({1, 19, 20, 7, 1}), 3}, {P({13, 5, 1}), 1}}, 1, Rat(pw(13, 12)), 1,
        {{P({13, 6, 1}), 3}, {P({13, 5, 1}), 2}});
    return v;
}

} // namespace detail

inline const FamilyPolys& family_polys(int p, int i)
{
    static const std::vector<FamilyPolys> all = detail::build_families();
    if (!is_family_prime(p)) throw Error(ErrorKind::UnsupportedP, "no family for p = " + std::to_string(p));
    if (i != 1 && i != 2) throw Error(ErrorKind::BadFamily, "family index must be 1 or 2");
    for (auto& f : all)
        if (f.p == p && f.i == i) return f;
    throw Error(ErrorKind::Internal, "family table incomplete");
}

// factors of Delta in t other than t itself
inline std::vector<QPoly> singular_t_factors(int p)
{
    std::vector<QPoly> out;
    for (auto& [f, k] : family_polys(p, 1).disc_factors) out.push_back(f);
    return out;
}

namespace detail {

inline Field join_fields(const Elem& x, const Elem& y)
{
    if (!x.is_rational() && !y.is_rational() && x.field() != y.field())
        throw Error(ErrorKind::FieldMismatch, x.field().name() + " vs " + y.field().name());
    if (!x.field().is_rational()) return x.field();
    return y.field();
}

inline void check_parameter(int p, const Elem& t0)
{
    if (t0.is_zero()) throw Error(ErrorKind::SingularParameter, "t = 0 makes the discriminant vanish (factor t)");
    for (auto& f : singular_t_factors(p))
        if (eval_at(f, t0).is_zero())
            throw Error(ErrorKind::SingularParameter, "t = " + t0.str() + " is a root of " + f.str());
}

} // namespace detail

struct FamilyCurve {
    Model model;
    Elem d_used;   // integral twisting parameter actually used
    Int d_scale;   // d_used = d0 * d_scale^2
};

// replace d0 by an integral representative of the same square class
inline std::pair<Elem, Int> normalize_twist(const Elem& d0)
{
    if (d0.is_zero()) throw Error(ErrorKind::ZeroD, "twisting parameter 0");
    Int m = d0.denominator();
    return {d0 * Elem(m * m), m};
}

inline FamilyCurve family_curve_ex(int p, int i, const Elem& t0, const Elem& d0, std::optional<Field> K = std::nullopt)
{
    const FamilyPolys& F = family_polys(p, i);
    Field L = detail::join_fields(t0, d0);
    if (K) {
        if (!L.is_rational() && L != *K) throw Error(ErrorKind::FieldMismatch, L.name() + " vs " + K->name());
        L = *K;
    }
    detail::check_parameter(p, t0);
    auto [d, m] = normalize_twist(d0);
    Elem A = eval_at(F.A(), t0), B = eval_at(F.B(), t0);
    Model E = short_model(d * d * A, d * d * d * B, L);
    return {E, d.in(L), m};
}

inline Model family_curve(int p, int i, const Elem& t0, const Elem& d0, std::optional<Field> K = std::nullopt)
{
    return family_curve_ex(p, i, t0, d0, K).model;
}

// rational function value, no nonsingularity check
inline Elem family_j_raw(int p, int i, const Elem& t0)
{
    const FamilyPolys& F = family_polys(p, i);
    if (t0.is_zero()) throw Error(ErrorKind::ZeroT, "j has a pole at t = 0");
    return eval_at(F.jnum(), t0) / t0.pow(F.jden_exp);
}

inline Elem family_j(int p, int i, const Elem& t0)
{
    if (t0.is_zero()) throw Error(ErrorKind::ZeroT, "j has a pole at t = 0");
    detail::check_parameter(p, t0);
    return family_j_raw(p, i, t0);
}

inline Elem family_disc(int p, int i, const Elem& t0, const Elem& d0)
{
    if (d0.is_zero()) throw Error(ErrorKind::ZeroD, "twisting parameter 0");
    detail::check_parameter(p, t0);
    const FamilyPolys& F = family_polys(p, i);
    Elem v = Elem(F.disc_const * Rat(Int(4096) * Int(531441))) * d0.pow(6) * t0.pow(F.disc_t_exp);
    for (auto& [f, k] : F.disc_factors) v *= eval_at(f, t0).pow(k);
    return v;
}

// ----- equal j-invariants -----

enum class EqualJKind { Generic, SingularJ, IsomorphicCM, EqualJ_DIT, EqualJ_Conditional };

inline const char* equal_j_kind_name(EqualJKind k)
{
    switch (k) {
    case EqualJKind::Generic: return "Generic";
    case EqualJKind::SingularJ: return "SingularJ";
    case EqualJKind::IsomorphicCM: return "IsomorphicCM";
    case EqualJKind::EqualJ_DIT: return "EqualJ_DIT";
    case EqualJKind::EqualJ_Conditional: return "EqualJ_Conditional";
    }
    return "?";
}

struct EqualJFactor {
    int p;
    EqualJKind kind;
    QPoly factor;
    QPoly j; // j as a polynomial in t0 (constant for most rows)
    long cm_D = 0; // conditional rows: CM field Q(sqrt(cm_D))
    int ratio_exp = 0; // conditional rows: D1/D2 = (p O_K)^ratio_exp
};

inline const std::vector<EqualJFactor>& equal_j_table()
{
    static const std::vector<EqualJFactor> rows = [] {
        auto P = [](std::initializer_list<long> c) { return qpoly(c); };
        auto C = [](long j) { return qpoly({j}); };
        auto cub = [](Rat a0, Rat a1, Rat a2, Rat a3) { return QPoly(std::vector<Rat>{a0, a1, a2, a3}); };
        using K = EqualJKind;
        std::vector<EqualJFactor> v;
        for (int p : family_primes())
            for (auto& f : singular_t_factors(p)) v.push_back({p, K::SingularJ, f, QPoly(), 0, 0});
        v.push_back({2, K::IsomorphicCM, P({4096, 47, 1}), C(-3375)});
        v.push_back({3, K::IsomorphicCM, P({729, 46, 1}), C(8000)});
        v.push_back({3, K::IsomorphicCM, P({729, -10, 1}), C(-32768)});
        v.push_back({5, K::IsomorphicCM, P({125, 18, 1}), C(-32768)});
        v.push_back({5, K::IsomorphicCM, P({125, 4, 1}), C(287496)});
        v.push_back({5, K::IsomorphicCM, P({125, -14, 1}), C(-884736)});
        v.push_back({7, K::IsomorphicCM, P({2401, 490, 51, 10, 1}),
                     cub(Rat(994752), Rat(-569088, 49), Rat(-2845440, 49), Rat(-284544, 49))});
        v.push_back({7, K::IsomorphicCM, P({49, 11, 1}), C(54000)});
        v.push_back({7, K::IsomorphicCM, P({49, 5, 1}), C(-884736)});
        v.push_back({7, K::IsomorphicCM, P({49, -11, 1}), C(-12288000)});
        v.push_back({13, K::IsomorphicCM, P({169, 78, 23, 6, 1}),
                     cub(Rat(10275264), Rat(-221652480, 13), Rat(-132991488, 13), Rat(-22165248, 13))});
        v.push_back({13, K::IsomorphicCM, P({169, -13, -12, -1, 1}),
                     cub(Rat(Int("-2994536448")), Rat(Int("-11199283200"), 13), Rat(-447971328, 13), Rat(447971328, 13))});
        v.push_back({13, K::IsomorphicCM, P({169, 0, -1, 0, 1}),
                     cub(Rat(1417905000), Rat(Int("3820257000"), 13), Rat(0), Rat(-272875500, 13))});
        v.push_back({13, K::IsomorphicCM, P({13, 7, 1}), C(54000)});
        v.push_back({13, K::IsomorphicCM, P({13, 4, 1}), C(287496)});
        v.push_back({13, K::IsomorphicCM, P({13, 2, 1}), C(-12288000)});
        v.push_back({13, K::IsomorphicCM, P({13, -3, 1}), C(-884736000)});
        v.push_back({5, K::EqualJ_DIT, P({-125, 0, 1}), P({632000, 56576})});
        v.push_back({13, K::EqualJ_DIT, P({-13, 0, 1}), QPoly(std::vector<Rat>{Rat(Int("3448440000")), Rat(956448000)})});
        v.push_back({2, K::EqualJ_Conditional, P({-64, 1}), C(8000), -2, -6});
        v.push_back({3, K::EqualJ_Conditional, P({-27, 1}), C(54000), -3, -6});
        v.push_back({7, K::EqualJ_Conditional, P({7, 1}), C(-3375), -7, 6});
        v.push_back({7, K::EqualJ_Conditional, P({-7, 1}), C(16581375), -7, 6});
        return v;
    }();
    return rows;
}

struct EqualJCase {
    EqualJKind kind = EqualJKind::Generic;
    std::optional<EqualJFactor> row;
    std::optional<Elem> j;
    std::optional<Field> cm_field;
};

inline EqualJCase equal_j_case(int p, const Elem& t0)
{
    if (!is_family_prime(p)) throw Error(ErrorKind::UnsupportedP, "no family for p = " + std::to_string(p));
    EqualJCase out;
    if (t0.is_zero()) {
        out.kind = EqualJKind::SingularJ;
        return out;
    }
    for (auto& r : equal_j_table()) {
        if (r.p != p || !eval_at(r.factor, t0).is_zero()) continue;
        out.kind = r.kind;
        out.row = r;
        if (r.kind != EqualJKind::SingularJ) out.j = eval_at(r.j, t0);
        if (r.cm_D) out.cm_field = Field::quadratic(r.cm_D);
        return out;
    }
    return out;
}

// ----- special j pairs -----

inline std::pair<Model, Model> special_j_pair(int p, long j, const Elem& d)
{
    if (d.is_zero()) throw Error(ErrorKind::ZeroD, "twisting parameter 0");
    if (p == 2 && j == 1728) return {short_model(d, Elem(0), d.field()), short_model(Elem(-4) * d, Elem(0), d.field())};
    if (p == 3 && j == 0) return {short_model(Elem(0), d, d.field()), short_model(Elem(0), Elem(-27) * d, d.field())};
    throw Error(ErrorKind::BadPair, "no same-j pair for p = " + std::to_string(p) + ", j = " + std::to_string(j));
}

// the explicit maps x -> L(x) between the special-j pairs, checked as identities in Q[d](x)
inline bool kernel_identity_check(long j, bool mutate = false)
{
    using R = QPoly; // coefficients in Q[d]
    using PX = Poly<R>;
    using RF = RatFunc<R>;
    const PX x = PX::x();
    const PX d = PX(R::x());
    auto c = [](long v) { return PX(R(Rat(v))); };
    if (j == 0) {
        // (x^3 + d) L'^2 = L^3 - 27 d, L = (x^3 + 4d)/x^2
        RF L(x.pow(3) + c(mutate ? 5 : 4) * d, x.pow(2));
        RF lhs = RF(x.pow(3) + d) * L.derivative() * L.derivative();
        RF rhs = L * L * L - RF(c(27) * d);
        return (lhs - rhs).is_zero();
    }
    if (j == 1728) {
        // (x^3 + d x) L'^2 = L^3 - 4 d L, L = (x^2 + d)/x
        RF L(x.pow(2) + (mutate ? c(2) * d : d), x);
        RF lhs = RF(x.pow(3) + d * x) * L.derivative() * L.derivative();
        RF rhs = L * L * L - RF(c(4) * d) * L;
        return (lhs - rhs).is_zero();
    }
    throw Error(ErrorKind::BadPair, "kernel identities exist for j = 0 and j = 1728 only");
}

// j_{p,1}(+-1) = j_{p,2}(+-p^s), j_{p,1}(+-p^s) = j_{p,2}(+-1), and the full t -> p^s/t swap
inline bool fricke_swap_check(int p)
{
    Int ps;
    mpz_ui_pow_ui(ps.get_mpz_t(), p, twin_exponent(p));
    bool ok = true;
    for (long sg : {1L, -1L}) {
        Elem one(sg), big = Elem(ps) * Elem(sg);
        ok = ok && family_j_raw(p, 1, one) == family_j_raw(p, 2, big);
        ok = ok && family_j_raw(p, 1, big) == family_j_raw(p, 2, one);
    }
    const FamilyPolys &F1 = family_polys(p, 1), &F2 = family_polys(p, 2);
    QPoly j2 = F2.jnum();
    int n = j2.degree();
    // t^n * jnum2(ps/t)
    QPoly rev;
    for (int k = 0; k <= n; ++k) {
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), ps.get_mpz_t(), k);
        rev = rev + QPoly::monomial(j2.coeff(k) * Rat(pk), n - k);
    }
    // j2(ps/t) = rev(t) / (ps t^p) with n = p + 1, so the swap is ps * jnum1 == rev
    QPoly lhs = F1.jnum() * QPoly(Rat(Int(ps)));
    QPoly rhs = rev;
    ok = ok && n == p + 1 && lhs == rhs;
    return ok;
}

inline bool disc_ratio_law(int p, const Elem& t0, const Elem& d0)
{
    Int p12;
    mpz_ui_pow_ui(p12.get_mpz_t(), p, 12);
    Elem lhs = family_disc(p, 1, t0, d0) / family_disc(p, 2, t0, d0);
    return lhs == t0.pow(p - 1) / Elem(p12);
}

} // namespace dtw
