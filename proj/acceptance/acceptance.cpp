// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "dtwins/dtwins.hpp"

using namespace dtw;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string note;
};

int failures = 0;

void criterion(int n, const std::string& name, const std::function<Outcome()>& body, double limit_s = 0)
{
    auto t0 = Clock::now();
    Outcome r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) {
        r.ok = false;
        r.note += " (over " + std::to_string(static_cast<int>(limit_s)) + " s)";
    }
    failures += !r.ok;
    std::printf("%s  %2d  %-34s %7.2fs  %s\n", r.ok ? "PASS" : "FAIL", n, name.c_str(), secs, r.note.c_str());
    std::fflush(stdout);
}

std::string str(long v) { return std::to_string(v); }

const std::vector<long>& test_fields() { static const std::vector<long> v{1, -1, -3, -33}; return v; }

Elem random_param(std::mt19937_64& rng, const Field& K, long range)
{
    std::uniform_int_distribution<long> c(-range, range);
    for (;;) {
        Elem x = K.is_rational() ? Elem(c(rng)) : Elem::from_omega(Rat(c(rng)), Rat(c(rng) / 4), K);
        if (!x.is_zero()) return x;
    }
}

std::optional<Model> try_family(int p, int i, const Elem& t, const Elem& d, const Field& K)
{
    try {
        return family_curve(p, i, t, d, K);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularParameter) return std::nullopt;
        throw;
    }
}

Outcome from_report(const VerifyReport& rep)
{
    Outcome o;
    o.ok = rep.mismatches() == 0;
    o.note = str(static_cast<long>(rep.cells.size() - (rep.mismatches() - rep.errors.size()))) + "/" +
             str(static_cast<long>(rep.cells.size())) + " cells match";
    for (auto& c : rep.cells)
        if (!c.ok) o.note += "; " + c.row + " " + c.column + ": want " + c.expected + " got " + c.got;
    for (auto& e : rep.errors) o.note += "; " + e;
    return o;
}

} // namespace

int main()
{
    auto start = Clock::now();
    json doc = load_tables(default_tables_path());

    criterion(1, "Table 4 over Q", [&] {
        Outcome o = from_report(verify_tables(doc, "4"));
        auto rows = enumerate_over_Q();
        auto find = [&](int p, long t) -> const QCandidate& {
            for (auto& c : rows)
                if (c.row.p == p && c.row.t0 == t) return c;
            throw Error(ErrorKind::Internal, "missing row");
        };
        const auto& a = find(2, 1);
        const auto& b = find(13, -1);
        bool ex = a.j1 == Elem(16974593) && a.j2 == Elem(4913) && a.dmin1 == Elem(274625) && a.dmin2 == Elem(274625) &&
                  b.j1 == Elem(Int("-39091613782464")) && b.j2 == Elem(576) && b.dmin1 == Elem(-41472) &&
                  b.dmin2 == Elem(-41472);
        if (!ex) o = {false, o.note + "; spot values differ"};
        o.note += ", " + str(static_cast<long>(rows.size())) + " family rows";
        return o;
    }, 10);

    criterion(2, "Table 5 over Q(sqrt-33)", [&] {
        Outcome o = from_report(verify_tables(doc, "5"));
        Field K = Field::quadratic(-33);
        int dit = 0;
        for (const char* t : {"64", "27", "sqrtD+4", "-sqrtD+4"}) {
            Elem t0 = parse_elem(t, K);
            int p = t0 == Elem(64) ? 2 : t0 == Elem(27) ? 3 : 7;
            dit += classify_pair(family_curve(p, 1, t0, Elem(1), K), family_curve(p, 2, t0, Elem(1), K)).status ==
                   TwinStatus::DiscIdealTwin;
        }
        for (auto [p, j] : {std::pair{2, 1728L}, std::pair{3, 0L}}) {
            auto [A, B] = special_j_pair(p, j, Elem(1).in(K));
            dit += classify_pair(A, B).status == TwinStatus::DiscIdealTwin;
        }
        if (dit != 6) o = {false, o.note + "; only " + str(dit) + "/6 DiscIdealTwin"};
        o.note += ", 6/6 pairs DiscIdealTwin";
        return o;
    }, 30);

    criterion(3, "Table 6 over Q(i), Q(zeta3)", [&] {
        auto rep = verify_tables(doc, "6");
        Outcome o = from_report(rep);
        long ratio1 = 0;
        for (auto& c : rep.cells)
            if (c.column == "status" && c.expected == "DiscTwin") ratio1 += c.ok;
        o.note += ", " + str(ratio1) + " ratio-1 rows certified";
        return o;
    }, 60);

    criterion(5, "mod-12 Kodaira shortcut", [&] {
        std::mt19937_64 rng(20240501);
        long checked = 0, bad = 0;
        std::string first;
        while (checked < 200) {
            Field K = Field::from_D(test_fields()[rng() % 4]);
            int p = family_primes()[rng() % 5], i = 1 + rng() % 2;
            Elem t = random_param(rng, K, 60), d = random_param(rng, K, 12);
            auto M = try_family(p, i, t, d, K);
            if (!M) continue;
            auto I = invariants(*M);
            std::vector<PrimeIdeal> ps;
            for (auto& P : bad_primes(*M))
                if (P.p > 3 && valuation(P, I.j) >= 0) ps.push_back(P);
            if (ps.empty()) continue;
            const PrimeIdeal& P = ps[rng() % ps.size()];
            auto L = tate_local(*M, P);
            auto k = kodaira_from_mod12(valuation(P, I.disc)).first;
            if (k.str() != L.kodaira.str()) {
                ++bad;
                if (first.empty()) first = "; e.g. " + M->str() + " at " + P.str();
            }
            ++checked;
        }
        return Outcome{bad == 0, str(checked) + " curves, " + str(bad) + " mismatches" + first};
    });

    criterion(6, "isogeny valuation relations", [&] {
        std::mt19937_64 rng(77);
        long pairs = 0, mult_checks = 0, good_checks = 0, table_checks = 0, bad = 0;
        std::string first;
        auto fail = [&](const std::string& what) {
            ++bad;
            if (first.empty()) first = "; " + what;
        };
        for (int p : family_primes()) {
            int with_mult = 0, guard = 0;
            while (with_mult < 50 && guard++ < 5000) {
                Field K = Field::from_D(test_fields()[rng() % 4]);
                Elem t = random_param(rng, K, 200), d = random_param(rng, K, 6);
                auto A = try_family(p, 1, t, d, K), B = try_family(p, 2, t, d, K);
                if (!A || !B) continue;
                Elem j1 = invariants(*A).j;
                bool mult = false;
                for (auto& P : bad_primes(*A)) {
                    auto l1 = tate_local(*A, P), l2 = tate_local(*B, P);
                    std::string at = "p=" + str(p) + " t=" + t.str() + " at " + P.str();
                    if (l1.reduction == Reduction::Multiplicative) {
                        mult = true;
                        ++mult_checks;
                        if (l2.reduction != Reduction::Multiplicative ||
                            !(l1.vmin == p * l2.vmin || l2.vmin == p * l1.vmin))
                            fail("multiplicative " + at);
                    }
                    if (l1.potential == Potential::Good && valuation(P, Elem(p).in(K)) == 0) {
                        ++good_checks;
                        if (l1.vmin != l2.vmin || l1.kodaira.str() != l2.kodaira.str()) fail("potentially good " + at);
                    }
                    ++table_checks;
                    if (!dokchitser_relation_check(l1, l2, p, valuation(P, j1), j1)) fail("table relation " + at);
                }
                ++pairs;
                with_mult += mult;
            }
            if (with_mult < 50) fail("only " + str(with_mult) + " multiplicative pairs for p=" + str(p));
        }
        return Outcome{bad == 0, str(pairs) + " pairs, " + str(mult_checks) + " multiplicative, " + str(good_checks) +
                                     " potentially good, " + str(table_checks) + " table checks, " + str(bad) +
                                     " violations" + first};
    });

    criterion(7, "criterion vs local data", [&] {
        long n = 0, bad = 0, n2 = 0, bad2 = 0;
        std::string first;
        for (long D : {-1L, -3L, -33L}) {
            auto scan = enumerate_imag_quad(Field::quadratic(D), 4);
            for (auto& c : scan.rows) {
                if (c.special_j >= 0) continue;
                bool agree = c.predicted.status == c.verdict.status;
                if (c.p == 2) {
                    ++n2;
                    bad2 += !agree;
                    continue;
                }
                ++n;
                if (!agree) {
                    ++bad;
                    if (first.empty()) first = "; D=" + str(D) + " p=" + str(c.p) + " t0=" + c.t0.str();
                }
            }
        }
        return Outcome{bad == 0 && n > 0, str(n) + " candidates (p odd), " + str(bad) + " disagreements; p=2 extra: " +
                                              str(n2) + " checked, " + str(bad2) + " disagree" + first};
    });

    criterion(8, "family consistency", [&] {
        std::mt19937_64 rng(8);
        long n = 0, bad = 0;
        std::string first;
        for (int p : family_primes())
            for (int i : {1, 2}) {
                int done = 0;
                while (done < 100) {
                    Field K = Field::from_D(test_fields()[rng() % 4]);
                    Elem t = random_param(rng, K, 500) / Elem(1 + static_cast<long>(rng() % 7));
                    Elem d = random_param(rng, K, 30);
                    auto M = try_family(p, i, t, d, K);
                    if (!M) continue;
                    auto I = invariants(*M);
                    bool ok = I.j == family_j(p, i, t) && I.disc == family_disc(p, i, t, d) && disc_ratio_law(p, t, d);
                    if (!ok) {
                        ++bad;
                        if (first.empty()) first = "; p=" + str(p) + " i=" + str(i) + " t=" + t.str();
                    }
                    ++done;
                    ++n;
                }
            }
        int fr = 0;
        for (int p : family_primes()) fr += fricke_swap_check(p);
        bool ker = kernel_identity_check(0) && kernel_identity_check(1728) && !kernel_identity_check(0, true);
        return Outcome{bad == 0 && fr == 5 && ker, str(n) + " random curves, " + str(bad) + " failures; Fricke " +
                                                       str(fr) + "/5; kernel identities " + (ker ? "hold" : "FAIL") + first};
    });

    criterion(9, "worked example over Q(sqrt10)", [&] {
        Field K = Field::quadratic(10);
        auto e = [&](const char* s) { return parse_elem(s, K); };
        Model E = make_model({e("sqrtD"), e("sqrtD"), e("0"), e("1263*sqrtD-8032"), e("62956*sqrtD-305877")}, K);
        Transformation tau{e("1/5*sqrtD"), e("-1/5*sqrtD-4/5"), e("-2/5*sqrtD"), e("11/25*sqrtD+7/5")};
        PrimeIdeal p, q, r;
        for (auto& P : primes_above(K, Int(2))) p = P;
        for (auto& P : primes_above(K, Int(3)))
            if (hnf_contains(P.hnf, e("sqrtD+2"))) q = P;
        for (auto& P : primes_above(K, Int(5))) r = P;
        auto dE = factor_principal_ideal(invariants(E).disc);
        auto dT = factor_principal_ideal(invariants(transform(E, tau)).disc);
        auto dm = minimal_discriminant_ideal(E);
        bool ok = same_factorization(dE, {{p, 13}, {q, 1}}) && same_factorization(dT, {{p, 1}, {q, 1}, {r, 12}}) &&
                  same_factorization(dm, {{p, 1}, {q, 1}}) && invariants(E).disc == e("-12224*sqrtD-38656");
        return Outcome{ok, "(D(E)) = " + factorization_str(dE) + ", (D(tE)) = " + factorization_str(dT) +
                               ", Dmin = " + factorization_str(dm)};
    });

    criterion(10, "quadratic twist stability", [&] {
        std::mt19937_64 rng(10);
        struct Base {
            int p;
            Elem t0;
            Field K;
        };
        std::vector<Base> bases{{3, Elem(1), Field::rationals()},
                                {5, Elem(-1), Field::rationals()},
                                {7, Elem(1), Field::rationals()},
                                {13, zeta3() + Elem(4), Field::quadratic(-3)}};
        long n = 0, bad = 0;
        std::string first;
        for (auto& b : bases) {
            auto ref = classify_pair(family_curve(b.p, 1, b.t0, Elem(1), b.K), family_curve(b.p, 2, b.t0, Elem(1), b.K));
            if (ref.status != TwinStatus::DiscTwin && ref.status != TwinStatus::DiscIdealTwin) {
                ++bad;
                first = "; base pair p=" + str(b.p) + " is not a twin";
            }
            for (int k = 0; k < 50; ++k) {
                Elem d;
                do d = random_param(rng, b.K, 40);
                while (nth_power_root(d, 2));
                auto v = classify_pair(family_curve(b.p, 1, b.t0, d, b.K), family_curve(b.p, 2, b.t0, d, b.K));
                ++n;
                if (v.status != ref.status) {
                    ++bad;
                    if (first.empty()) first = "; p=" + str(b.p) + " d=" + d.str();
                }
            }
        }
        auto v16 = classify_pair(family_curve(2, 1, Elem(16), Elem(1)), family_curve(2, 2, Elem(16), Elem(1)));
        bool p2 = v16.status == TwinStatus::NotTwin && !t0_valuation_condition(2, Elem(16));
        return Outcome{bad == 0 && p2, str(n) + " twists, " + str(bad) + " changed verdicts; p=2 t0=16 " +
                                           (p2 ? "NotTwin, valuation condition fails" : "UNEXPECTED") + first};
    });

    // last, so that it sees the local computations of every suite above
    criterion(4, "Ogg's formula on all Tate runs", [&] {
        std::mt19937_64 rng(4);
        long extra = 0, bad = 0;
        while (extra < 1000) {
            Field K = Field::from_D(test_fields()[rng() % 4]);
            int p = family_primes()[rng() % 5], i = 1 + rng() % 2;
            auto M = try_family(p, i, random_param(rng, K, 300), random_param(rng, K, 20), K);
            if (!M) continue;
            for (auto& L : local_data_all(*M)) {
                bad += L.f != L.vmin - L.m + 1;
                ++extra;
            }
        }
        long runs = local_stats().tate_runs.load(), checked = local_stats().ogg_checks.load();
        return Outcome{bad == 0 && runs >= 2000 && runs == checked,
                       str(runs) + " local computations, " + str(checked) + " checked in-line, " + str(bad) +
                           " external failures"};
    });

    auto t0 = Clock::now();
    auto all = verify_tables(doc, "all", 4);
    double vsecs = std::chrono::duration<double>(Clock::now() - t0).count();
    double total = std::chrono::duration<double>(Clock::now() - start).count();
    bool vok = all.mismatches() == 0 && vsecs < 300;
    std::printf("%s  --  %-34s %7.2fs  %zu cells, %zu mismatches\n", vok ? "PASS" : "FAIL", "full table verification (all)",
                vsecs, all.cells.size(), all.mismatches());
    failures += !vok;
    std::printf("total %.2fs, %d failing\n", total, failures);
    return failures ? 1 : 0;
}
