#include <gtest/gtest.h>

#include <random>

#include "dtwins/ideals.hpp"
#include "dtwins/intfactor.hpp"

using namespace dtw;

namespace {

Elem E(const std::string& s, const Field& K) { return parse_elem(s, K); }

// the prime above p containing x
PrimeIdeal prime_with(const Field& K, long p, const Elem& x)
{
    for (auto& P : primes_above(K, Int(p)))
        if (hnf_contains(P.hnf, x)) return P;
    throw std::runtime_error("no prime above " + std::to_string(p) + " contains " + x.str());
}

Hnf principal(const Elem& x) { return ideal_hnf({x}, x.field()); }

} // namespace

TEST(Splitting, Examples)
{
    Field K = Field::quadratic(-33);
    auto P7 = primes_above(K, Int(7));
    ASSERT_EQ(P7.size(), 2u);
    EXPECT_EQ(P7[0].kind, Splitting::Split);
    for (const char* g : {"sqrtD+3", "sqrtD+4"}) {
        int hits = 0;
        for (auto& P : P7) hits += hnf_contains(P.hnf, E(g, K));
        EXPECT_EQ(hits, 1) << g;
    }
    // (7, sqrt-33+3)(7, sqrt-33+4) = 7 O_K
    EXPECT_EQ(hnf_mul(P7[0].hnf, P7[1].hnf, K), principal(Elem(7).in(K)));

    auto Qi3 = primes_above(Field::quadratic(-1), Int(3));
    ASSERT_EQ(Qi3.size(), 1u);
    EXPECT_EQ(Qi3[0].kind, Splitting::Inert);
    EXPECT_EQ(Qi3[0].f, 2);

    Field Kz = Field::quadratic(-3);
    auto Z3 = primes_above(Kz, Int(3));
    ASSERT_EQ(Z3.size(), 1u);
    EXPECT_EQ(Z3[0].kind, Splitting::Ramified);
    EXPECT_EQ(Z3[0].e, 2);
    Elem w = zeta3() + Elem(2);
    EXPECT_EQ(principal(w * w), principal(Elem(3).in(Kz)));
    EXPECT_EQ(valuation(Z3[0], w), 1);
}

TEST(Splitting, AgreesWithKronecker)
{
    for (long D : {-1L, -3L, -33L, -5L, 10L}) {
        Field K = Field::quadratic(D);
        for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 37L}) {
            auto ps = primes_above(K, Int(p));
            int sum = 0;
            for (auto& P : ps) sum += P.e * P.f;
            EXPECT_EQ(sum, 2) << D << " " << p;
            Int dk = K.disc();
            if (p == 2) {
                if (dk % 2 == 0) EXPECT_EQ(ps[0].kind, Splitting::Ramified);
                continue;
            }
            int leg = mpz_kronecker(dk.get_mpz_t(), Int(p).get_mpz_t());
            Splitting want = leg == 0 ? Splitting::Ramified : leg == 1 ? Splitting::Split : Splitting::Inert;
            EXPECT_EQ(ps[0].kind, want) << D << " " << p;
        }
    }
}

TEST(IdealPower, Bases)
{
    Field K = Field::quadratic(-33);
    auto P2 = primes_above(K, Int(2));
    ASSERT_EQ(P2.size(), 1u);
    EXPECT_TRUE(hnf_contains(P2[0].hnf, E("sqrtD+1", K)));
    EXPECT_EQ(ideal_power_basis(P2[0], 0), (Hnf{1, 0, 1}));
    EXPECT_EQ(ideal_power_basis(P2[0], 2), principal(Elem(2).in(K)));

    Field Qi = Field::quadratic(-1);
    PrimeIdeal Pi = primes_above(Qi, Int(2)).at(0);
    EXPECT_EQ(Pi.kind, Splitting::Ramified);
    EXPECT_EQ(ideal_power_basis(Pi, 1), principal(E("1+i", Qi)));
    EXPECT_EQ(ideal_power_basis(Pi, 2), principal(Elem(2).in(Qi)));
}

TEST(Valuation, Examples)
{
    Field K = Field::quadratic(10);
    Elem disc = E("-12224*sqrtD-38656", K);
    PrimeIdeal p = prime_with(K, 2, E("sqrtD", K));
    PrimeIdeal q = prime_with(K, 3, E("sqrtD+2", K));
    EXPECT_EQ(valuation(p, disc), 13);
    EXPECT_EQ(valuation(q, disc), 1);

    Field L = Field::quadratic(-33);
    PrimeIdeal P2 = primes_above(L, Int(2)).at(0);
    EXPECT_EQ(valuation(P2, Elem(64).in(L)), 12);
    for (long r : {2L, 3L, 5L, 7L})
        for (auto& P : primes_above(L, Int(r))) EXPECT_EQ(valuation(P, Elem(1).in(L)), 0);
    EXPECT_EQ(valuation(P2, Elem(Rat(1, 8)).in(L)), -6);
}

TEST(Factor, Examples)
{
    Field K = Field::quadratic(10);
    auto F = factor_principal_ideal(E("-2984375*sqrtD-9437500", K));
    PrimeIdeal p = prime_with(K, 2, E("sqrtD", K));
    PrimeIdeal q = prime_with(K, 3, E("sqrtD+2", K));
    PrimeIdeal r = prime_with(K, 5, E("sqrtD", K));
    EXPECT_TRUE(same_factorization(F, {{p, 1}, {q, 1}, {r, 12}})) << factorization_str(F);

    auto G = factor_principal_ideal(Elem(343));
    ASSERT_EQ(G.size(), 1u);
    EXPECT_EQ(G[0].first.p, 7);
    EXPECT_EQ(G[0].second, 3);

    Field L = Field::quadratic(-33);
    auto H = factor_principal_ideal(E("sqrtD-4", L));
    PrimeIdeal p7 = prime_with(L, 7, E("sqrtD+3", L));
    EXPECT_TRUE(same_factorization(H, {{p7, 2}})) << factorization_str(H);
}

TEST(Factor, NormMatchesProduct)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> c(-200, 200);
    for (long D : {-1L, -3L, -33L, 10L, 5L}) {
        Field K = Field::quadratic(D);
        for (int it = 0; it < 60; ++it) {
            Elem x(Rat(c(rng)), Rat(c(rng)), K);
            if (x.is_zero()) continue;
            Rat prod = 1;
            for (auto& [P, e] : factor_principal_ideal(x)) {
                Rat n(P.norm());
                for (int k = 0; k < std::abs(e); ++k) prod = e > 0 ? Rat(prod * n) : Rat(prod / n);
            }
            EXPECT_EQ(prod, abs(x.norm())) << x.str();
        }
    }
}

TEST(Generator, PowerOfPrime)
{
    Field K = Field::quadratic(-33);
    PrimeIdeal P2 = primes_above(K, Int(2)).at(0);
    auto g = principal_generator_of_power(P2, 12);
    ASSERT_TRUE(g);
    EXPECT_EQ(abs(g->norm()), 4096);
    EXPECT_TRUE(*g == Elem(64) || *g == Elem(-64)) << g->str();
    EXPECT_FALSE(principal_generator_of_power(P2, 1));
    EXPECT_EQ(*principal_generator_of_power(P2, 0), Elem(1));

    PrimeIdeal P7 = prime_with(K, 7, E("sqrtD+4", K));
    auto h = principal_generator_of_power(P7, 2);
    ASSERT_TRUE(h);
    Elem w = E("sqrtD+4", K);
    EXPECT_TRUE(*h == w || *h == -w) << h->str();
    EXPECT_EQ(principal(*h), ideal_power_basis(P7, 2));

    EXPECT_THROW(principal_generator_of_power(primes_above(Field::quadratic(10), Int(3)).at(0), 1), Error);
}

TEST(IntFactor, Basics)
{
    auto f = factor_integer(Int("-41472"));
    Int back = 1;
    for (auto& [q, e] : f)
        for (int k = 0; k < e; ++k) back *= q;
    EXPECT_EQ(back, 41472);
    EXPECT_TRUE(is_squarefree(Int(-33)));
    EXPECT_FALSE(is_squarefree(Int(12)));
    EXPECT_EQ(vp(Int(4096), Int(2)), 12);
}
