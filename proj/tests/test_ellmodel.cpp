#include <gtest/gtest.h>

#include <random>

#include "dtwins/ellmodel.hpp"
#include "dtwins/families.hpp"

using namespace dtw;

namespace {

Field Q10() { return Field::quadratic(10); }
Elem E(const std::string& s, const Field& K) { return parse_elem(s, K); }

Model example_curve()
{
    Field K = Q10();
    return make_model({E("sqrtD", K), E("sqrtD", K), E("0", K), E("1263*sqrtD-8032", K), E("62956*sqrtD-305877", K)}, K);
}

Transformation example_tau()
{
    Field K = Q10();
    return {E("1/5*sqrtD", K), E("-1/5*sqrtD-4/5", K), E("-2/5*sqrtD", K), E("11/25*sqrtD+7/5", K)};
}

} // namespace

TEST(Invariants, Examples)
{
    auto I = invariants(short_model(Elem(0), Elem(1)));
    EXPECT_EQ(I.disc, Elem(-432));
    EXPECT_EQ(I.j, Elem(0));

    auto J = invariants(short_model(Elem(1), Elem(0)));
    EXPECT_EQ(J.disc, Elem(-64));
    EXPECT_EQ(J.c4, Elem(-48));
    EXPECT_EQ(J.b4, Elem(2));
    EXPECT_EQ(J.j, Elem(1728));

    EXPECT_EQ(invariants(example_curve()).disc, E("-12224*sqrtD-38656", Q10()));
    EXPECT_THROW(invariants(short_model(Elem(0), Elem(0))), Error);
    EXPECT_THROW(invariants(short_model(Elem(-3), Elem(2))), Error);
}

TEST(Transform, Examples)
{
    Model C = example_curve();
    EXPECT_EQ(transform(C, Transformation::identity()), C);

    Model T = transform(C, example_tau());
    EXPECT_EQ(T.a6(), E("993021*sqrtD-4718332", Q10()));
    EXPECT_EQ(T.a1(), Elem(1));
    EXPECT_EQ(invariants(T).disc, E("-2984375*sqrtD-9437500", Q10()));

    Elem d(7), u(3);
    Model S = transform(short_model(d, Elem(0)), Transformation::scale(u));
    EXPECT_EQ(S.a4(), d / u.pow(4));
}

TEST(Transform, Laws)
{
    Model C = example_curve();
    auto t = example_tau();
    auto I = invariants(C), J = invariants(transform(C, t));
    EXPECT_EQ(J.disc, I.disc / t.u.pow(12));
    EXPECT_EQ(J.c4, I.c4 / t.u.pow(4));
    EXPECT_EQ(J.c6, I.c6 / t.u.pow(6));
    EXPECT_EQ(J.j, I.j);
    EXPECT_EQ(transform(transform(C, t), inverse(t)), C);
}

TEST(Transform, RandomRoundTrips)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> c(-6, 6);
    Field K = Field::quadratic(-3);
    auto rnd = [&] { return Elem(Rat(c(rng), 1 + (c(rng) & 1)), Rat(c(rng)), K); };
    int done = 0;
    while (done < 500) {
        Model M = make_model({rnd(), rnd(), rnd(), rnd(), rnd()}, K);
        bool sing = false;
        auto I = invariants_unchecked(M, sing);
        if (sing) continue;
        Transformation t{rnd(), rnd(), rnd(), rnd()};
        if (t.u.is_zero()) continue;
        Model N = transform(M, t);
        auto J = invariants(N);
        ASSERT_EQ(J.disc, I.disc / t.u.pow(12));
        ASSERT_EQ(J.j, I.j);
        ASSERT_EQ(transform(N, inverse(t)), M);
        Transformation s{rnd(), rnd(), rnd(), rnd()};
        if (!s.u.is_zero()) ASSERT_EQ(transform(N, s), transform(M, compose(t, s)));
        ASSERT_TRUE(is_isomorphic_over_K(M, N));
        ++done;
    }
}

TEST(Twist, Examples)
{
    Model C = family_curve(2, 1, Elem(16), Elem(1));
    EXPECT_EQ(quadratic_twist(C, Elem(1)), C);
    Model F = quadratic_twist(C, Elem(-2));
    EXPECT_EQ(F.a4(), Elem(-2350080));
    EXPECT_EQ(F, family_curve(2, 1, Elem(16), Elem(-2)));
    EXPECT_EQ(quadratic_twist(F, Elem(Rat(-1, 2))), C);
    EXPECT_THROW(quadratic_twist(C, Elem(0)), Error);
}

TEST(ShortForm, Examples)
{
    Model S = short_model(Elem(-3), Elem(5));
    auto [S2, id] = short_form(S);
    EXPECT_EQ(S2, S);
    EXPECT_EQ(id.u, Elem(1));
    EXPECT_TRUE(id.r.is_zero() && id.s.is_zero() && id.w.is_zero());

    // y^2 + xy = x^3 is nodal
    EXPECT_THROW(make_model({Elem(1), Elem(0), Elem(0), Elem(0), Elem(0)}), Error);

    for (Model M : {make_model({Elem(1), Elem(-1), Elem(1), Elem(0), Elem(3)}), example_curve()}) {
        auto [T, t] = short_form(M);
        EXPECT_TRUE(T.is_short());
        EXPECT_EQ(transform(M, t), T);
        auto I = invariants(M), J = invariants(T);
        EXPECT_EQ(J.disc, I.disc / t.u.pow(12));
        EXPECT_EQ(J.c4, I.c4 / t.u.pow(4));
        EXPECT_EQ(J.c6, I.c6 / t.u.pow(6));
    }
}

TEST(Isomorphism, SpecialPair)
{
    Field Kz = Field::quadratic(-3);
    Model E1 = short_model(Elem(0), Elem(1), Kz), E2 = short_model(Elem(0), Elem(-27), Kz);
    auto t = is_isomorphic_over_K(E1, E2);
    ASSERT_TRUE(t);
    EXPECT_EQ(transform(E1, *t), E2);
    EXPECT_EQ(transform(E1, Transformation::scale(zeta3() + Elem(2))), short_model(Elem(0), Elem(1) / (zeta3() + Elem(2)).pow(6), Kz));

    EXPECT_FALSE(is_isomorphic_over_K(short_model(Elem(0), Elem(1)), short_model(Elem(0), Elem(-27))));
    // j = 1728 pair needs u^4 = -4, solvable over Q(i)
    EXPECT_FALSE(is_isomorphic_over_K(short_model(Elem(1), Elem(0)), short_model(Elem(-4), Elem(0))));
    Field Qi = Field::quadratic(-1);
    EXPECT_TRUE(is_isomorphic_over_K(short_model(Elem(1), Elem(0), Qi), short_model(Elem(-4), Elem(0), Qi)));

    Model C = example_curve();
    EXPECT_TRUE(is_isomorphic_over_K(C, transform(C, example_tau())));
}
