#include <gtest/gtest.h>

#include <random>

#include "dtwins/families.hpp"
#include "dtwins/ideals.hpp"

using namespace dtw;

namespace {

Elem E(const std::string& s, long D) { return parse_elem(s, Field::from_D(D)); }

ErrorKind kind_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Internal;
}

} // namespace

TEST(Field, Basics)
{
    Field Qi = Field::quadratic(-1);
    EXPECT_EQ(Qi.disc(), -4);
    EXPECT_EQ(Elem::omega(Qi), Elem(0, 1, Qi));

    Field Qz = Field::quadratic(-3);
    EXPECT_EQ(Qz.disc(), -3);
    EXPECT_EQ(Elem::omega(Qz), Elem(Rat(1, 2), Rat(1, 2), Qz));
    // zeta3 = omega - 1 is integral
    EXPECT_TRUE(zeta3().is_integral());
    EXPECT_TRUE((zeta3() * zeta3() + zeta3() + Elem(1)).is_zero());

    EXPECT_EQ(kind_of([] { Field::quadratic(12); }), ErrorKind::NotSquarefree);
    EXPECT_EQ(kind_of([] { Field::quadratic(0); }), ErrorKind::DegenerateD);
    EXPECT_EQ(Field::quadratic(-33).disc(), -132);
    EXPECT_EQ(Field::quadratic(5).disc(), 5);
}

TEST(Elem, Arithmetic)
{
    EXPECT_EQ(E("3+2*i", -1).norm(), 13);
    EXPECT_EQ(E("sqrtD+4", -33).conj(), E("-sqrtD+4", -33));
    Elem z = zeta3();
    Elem w = z + Elem(2);
    EXPECT_EQ(w * w, Elem(3) * z + Elem(3));
    EXPECT_EQ(w.norm(), 3);
    EXPECT_EQ(w.trace(), 3);
    EXPECT_EQ(w / w, Elem(1));
    EXPECT_EQ(kind_of([] { Elem(0).inverse(); }), ErrorKind::DivisionByZero);
    EXPECT_EQ(kind_of([] { return E("i", -1) + E("sqrt2", 2); }), ErrorKind::FieldMismatch);
}

TEST(Elem, ParseRoundTrip)
{
    for (long D : {1L, -1L, -3L, -33L, 10L}) {
        Field K = Field::from_D(D);
        std::vector<Elem> xs{Elem(0), Elem(Rat(-7, 3))};
        if (!K.is_rational()) xs.push_back(Elem(Rat(5, 2), Rat(-1, 4), K));
        for (auto& x : xs) EXPECT_EQ(parse_elem(x.str(), K), x) << x.str();
    }
    EXPECT_EQ(E("-8*z-5", -3), Elem(-8) * zeta3() - Elem(5));
}

TEST(Units, Groups)
{
    EXPECT_EQ(units_of(Field::rationals()).size(), 2u);
    EXPECT_EQ(units_of(Field::quadratic(-33)).size(), 2u);
    EXPECT_EQ(units_of(Field::quadratic(-1)).size(), 4u);
    auto U = units_of(Field::quadratic(-3));
    ASSERT_EQ(U.size(), 6u);
    // closed under multiplication, all norm 1
    for (auto& u : U) {
        EXPECT_EQ(u.norm(), 1);
        for (auto& v : U) EXPECT_NE(std::find(U.begin(), U.end(), u * v), U.end());
    }
    EXPECT_THROW(units_of(Field::quadratic(10)), Error);
}

TEST(NthRoot, Examples)
{
    auto r = nth_power_root(Elem(4096), 12);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->pow(12), Elem(4096));
    EXPECT_EQ(*r * *r, Elem(4));

    auto s = nth_power_root(Elem(-1).in(Field::quadratic(-1)), 2);
    ASSERT_TRUE(s);
    EXPECT_EQ(*s * *s, Elem(-1));
    EXPECT_FALSE(s->is_rational());

    EXPECT_FALSE(nth_power_root(Elem(27), 6));
    EXPECT_FALSE(nth_power_root(Elem(-1), 2));
}

TEST(NthRoot, RandomPowers)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> c(-9, 9);
    for (long D : {-1L, -3L, -33L, 1L}) {
        Field K = Field::from_D(D);
        for (int it = 0; it < 40; ++it) {
            Elem x = K.is_rational() ? Elem(c(rng)) : Elem(Rat(c(rng)), Rat(c(rng)), K);
            if (x.is_zero()) continue;
            for (int n : {2, 3, 4, 6, 12}) {
                auto r = nth_power_root(x.pow(n), n);
                ASSERT_TRUE(r) << x.str() << " n=" << n;
                EXPECT_EQ(r->pow(n), x.pow(n));
            }
        }
    }
}

TEST(NormTrace, Multiplicative)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> c(-50, 50);
    for (long D : {-1L, -3L, -33L, 10L}) {
        Field K = Field::quadratic(D);
        for (int it = 0; it < 100; ++it) {
            Elem x(Rat(c(rng), 1 + (c(rng) & 3)), Rat(c(rng)), K);
            Elem y(Rat(c(rng)), Rat(c(rng), 1 + (c(rng) & 7)), K);
            EXPECT_EQ((x * y).norm(), x.norm() * y.norm());
            EXPECT_EQ((x + y).trace(), x.trace() + y.trace());
            EXPECT_EQ(x * x.conj(), Elem(x.norm()));
        }
    }
}

TEST(Poly, Eval)
{
    EXPECT_EQ(eval_at(qpoly({125, 22, 1}), Elem(-11)), Elem(4));
    EXPECT_EQ(eval_at(family_polys(2, 2).A(), Elem(16)), Elem(-1105920));
    QPoly f = qpoly({3, -1, 0, 7});
    EXPECT_TRUE((f - f).is_zero());
    EXPECT_EQ((f * f).eval(Rat(2)), f.eval(Rat(2)) * f.eval(Rat(2)));
}
