#pragma once

// Weierstrass models, invariants, changes of variables, twists, isomorphism test.

#include <array>
#include <optional>
#include <string>

#include "ideals.hpp"

namespace dtw {

struct Model {
    Field K;
    std::array<Elem, 5> a; // a1 a2 a3 a4 a6

    const Elem& a1() const { return a[0]; }
    const Elem& a2() const { return a[1]; }
    const Elem& a3() const { return a[2]; }
    const Elem& a4() const { return a[3]; }
    const Elem& a6() const { return a[4]; }
    bool is_short() const { return a[0].is_zero() && a[1].is_zero() && a[2].is_zero(); }
    std::string str() const
    {
        std::string s = "[";
        for (int i = 0; i < 5; ++i) s += (i ? ", " : "") + a[i].str();
        return s + "]";
    }
    friend bool operator==(const Model& x, const Model& y) { return x.K == y.K && x.a == y.a; }
};

struct Invariants {
    Elem b2, b4, b6, b8, c4, c6, disc, j;
};

inline Invariants invariants_unchecked(const Model& E, bool& singular)
{
    const auto& [a1, a2, a3, a4, a6] = E.a;
    Invariants I;
    I.b2 = a1 * a1 + Elem(4) * a2;
    I.b4 = Elem(2) * a4 + a1 * a3;
    I.b6 = a3 * a3 + Elem(4) * a6;
    I.b8 = a1 * a1 * a6 + Elem(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    I.c4 = I.b2 * I.b2 - Elem(24) * I.b4;
    I.c6 = -I.b2 * I.b2 * I.b2 + Elem(36) * I.b2 * I.b4 - Elem(216) * I.b6;
    I.disc = -I.b2 * I.b2 * I.b8 - Elem(8) * I.b4 * I.b4 * I.b4 - Elem(27) * I.b6 * I.b6 + Elem(9) * I.b2 * I.b4 * I.b6;
    singular = I.disc.is_zero();
    if (!singular) I.j = I.c4 * I.c4 * I.c4 / I.disc;
    for (Elem* x : {&I.b2, &I.b4, &I.b6, &I.b8, &I.c4, &I.c6, &I.disc, &I.j}) *x = x->in(E.K);
    return I;
}

inline Invariants invariants(const Model& E)
{
    bool sing;
    Invariants I = invariants_unchecked(E, sing);
    if (sing) throw Error(ErrorKind::Singular, "discriminant vanishes for " + E.str());
    return I;
}

inline Model make_model(const std::array<Elem, 5>& a, std::optional<Field> K = std::nullopt)
{
    Field F = K ? *K : Field::rationals();
    for (auto& x : a)
        if (!x.is_rational()) {
            if (!F.is_rational() && F != x.field())
                throw Error(ErrorKind::FieldMismatch, F.name() + " vs " + x.field().name());
            F = x.field();
        }
    Model E{F, {}};
    for (int i = 0; i < 5; ++i) E.a[i] = a[i].in(F);
    invariants(E);
    return E;
}

inline Model short_model(const Elem& A, const Elem& B, std::optional<Field> K = std::nullopt)
{
    return make_model({Elem(0), Elem(0), Elem(0), A, B}, K);
}

struct Transformation {
    Elem u = Elem(1), r = Elem(0), s = Elem(0), w = Elem(0);
    std::string str() const { return "[" + u.str() + ", " + r.str() + ", " + s.str() + ", " + w.str() + "]"; }
    static Transformation identity() { return {}; }
    static Transformation scale(const Elem& u) { return {u, Elem(0), Elem(0), Elem(0)}; }
};

// x = u^2 x' + r, y = u^3 y' + s u^2 x' + w
inline Model transform(const Model& E, const Transformation& t)
{
    if (t.u.is_zero()) throw Error(ErrorKind::ZeroU, "u = 0");
    const auto& [a1, a2, a3, a4, a6] = E.a;
    const Elem &u = t.u, &r = t.r, &s = t.s, &w = t.w;
    Elem ui = u.inverse();
    Elem u2 = ui * ui, u3 = u2 * ui, u4 = u2 * u2, u6 = u3 * u3;
    Model F = E;
    for (const Elem* x : {&u, &r, &s, &w})
        if (!x->is_rational()) F.K = x->field();
    F.a[0] = (a1 + Elem(2) * s) * ui;
    F.a[1] = (a2 - s * a1 + Elem(3) * r - s * s) * u2;
    F.a[2] = (a3 + r * a1 + Elem(2) * w) * u3;
    F.a[3] = (a4 - s * a3 + Elem(2) * r * a2 - (w + r * s) * a1 + Elem(3) * r * r - Elem(2) * s * w) * u4;
    F.a[4] = (a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1) * u6;
    for (auto& x : F.a) x = x.in(F.K);
    return F;
}

// transform(E, compose(t1, t2)) == transform(transform(E, t1), t2)
inline Transformation compose(const Transformation& t1, const Transformation& t2)
{
    Elem u12 = t1.u * t1.u;
    return {t1.u * t2.u, u12 * t2.r + t1.r, t1.s + t1.u * t2.s, t1.w + u12 * t1.u * t2.w + t1.s * u12 * t2.r};
}

inline Transformation inverse(const Transformation& t)
{
    if (t.u.is_zero()) throw Error(ErrorKind::ZeroU, "u = 0");
    Elem ui = t.u.inverse();
    return {ui, -t.r * ui * ui, -t.s * ui, (t.r * t.s - t.w) * ui * ui * ui};
}

inline Model quadratic_twist(const Model& E, const Elem& d)
{
    if (!E.is_short()) throw Error(ErrorKind::NotShortForm, "twist needs y^2 = x^3 + Ax + B");
    if (d.is_zero()) throw Error(ErrorKind::ZeroD, "twist by 0");
    Field K = E.K;
    if (!d.is_rational()) K = d.field();
    return short_model(d * d * E.a4(), d * d * d * E.a6(), K);
}

inline std::pair<Model, Transformation> short_form(const Model& E)
{
    Invariants I = invariants(E);
    if (E.is_short()) return {E, Transformation::identity()};
    Transformation t;
    t.r = -I.b2 / Elem(12);
    t.s = -E.a1() / Elem(2);
    t.w = -(E.a3() + t.r * E.a1()) / Elem(2);
    return {transform(E, t), t};
}

// tau with transform(E1, tau) == E2
inline std::optional<Transformation> is_isomorphic_over_K(const Model& E1, const Model& E2)
{
    if (E1.K != E2.K) throw Error(ErrorKind::FieldMismatch, E1.K.name() + " vs " + E2.K.name());
    Invariants I1 = invariants(E1), I2 = invariants(E2);
    if (I1.j != I2.j) return std::nullopt;
    auto [S1, t1] = short_form(E1);
    auto [S2, t2] = short_form(E2);
    const Elem &A1 = S1.a4(), &B1 = S1.a6(), &A2 = S2.a4(), &B2 = S2.a6();
    std::optional<Elem> u;
    if (A1.is_zero()) {
        u = nth_power_root((B1 / B2).in(E1.K), 6);
    } else if (B1.is_zero()) {
        u = nth_power_root((A1 / A2).in(E1.K), 4);
    } else {
        Elem u2 = (B1 * A2 / (B2 * A1)).in(E1.K);
        if (auto r = nth_power_root(u2, 2)) u = *r;
    }
    if (!u) return std::nullopt;
    Transformation tau = compose(compose(t1, Transformation::scale(*u)), inverse(t2));
    if (!(transform(E1, tau) == E2)) throw Error(ErrorKind::Internal, "isomorphism check failed to reproduce E2");
    return tau;
}

} // namespace dtw
