#pragma once

// Twin classification of curve pairs, the closed-form criteria, and the
// enumeration of twin candidates over Q and imaginary quadratic fields.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "families.hpp"
#include "localdata.hpp"

namespace dtw {

enum class TwinStatus { NotTwin, DiscIdealTwin, DiscTwin, Isomorphic, Singular };

inline const char* status_name(TwinStatus s)
{
    switch (s) {
    case TwinStatus::NotTwin: return "NotTwin";
    case TwinStatus::DiscIdealTwin: return "DiscIdealTwin";
    case TwinStatus::DiscTwin: return "DiscTwin";
    case TwinStatus::Isomorphic: return "Isomorphic";
    case TwinStatus::Singular: return "Singular";
    }
    return "?";
}

inline TwinStatus parse_status(const std::string& s)
{
    for (auto t : {TwinStatus::NotTwin, TwinStatus::DiscIdealTwin, TwinStatus::DiscTwin, TwinStatus::Isomorphic, TwinStatus::Singular})
        if (s == status_name(t)) return t;
    throw Error(ErrorKind::Parse, "unknown twin status " + s);
}

struct PrimeComparison {
    PrimeIdeal prime;
    LocalData ld1, ld2;
};

struct TwinVerdict {
    TwinStatus status = TwinStatus::NotTwin;
    std::vector<PrimeComparison> per_prime;
    std::string reason;               // conductor-mismatch, ideal-mismatch, isomorphic, twin-criterion-met, ...
    std::string detail;
    bool twin_undecided = false;
    bool potentially_good_everywhere = true;
    std::optional<Elem> min_ratio;    // Delta2^min / Delta1^min when both values exist
};

namespace detail {

inline std::pair<Model, Model> common_field(const Model& E1, const Model& E2)
{
    if (E1.K == E2.K) return {E1, E2};
    auto lift = [](Model E, const Field& K) {
        E.K = K;
        for (auto& a : E.a) a = a.in(K);
        return E;
    };
    if (E1.K.is_rational()) return {lift(E1, E2.K), E2};
    if (E2.K.is_rational()) return {E1, lift(E2, E1.K)};
    throw Error(ErrorKind::FieldMismatch, E1.K.name() + " vs " + E2.K.name());
}

} // namespace detail

inline TwinVerdict classify_pair(const Model& A, const Model& B)
{
    auto [E1, E2] = detail::common_field(A, B);
    TwinVerdict v;
    bool s1, s2;
    Invariants I1 = invariants_unchecked(E1, s1), I2 = invariants_unchecked(E2, s2);
    if (s1 || s2) {
        v.status = TwinStatus::Singular;
        v.reason = "singular";
        return v;
    }
    if (is_isomorphic_over_K(E1, E2)) {
        v.status = TwinStatus::Isomorphic;
        v.reason = "isomorphic";
        return v;
    }
    std::vector<PrimeIdeal> ps = bad_primes(E1);
    for (auto& P : bad_primes(E2))
        if (std::find(ps.begin(), ps.end(), P) == ps.end()) ps.push_back(P);
    std::sort(ps.begin(), ps.end());
    std::string ideal_bad, cond_bad;
    for (auto& P : ps) {
        PrimeComparison c{P, tate_local(E1, P), tate_local(E2, P)};
        if (c.ld1.potential != Potential::Good || c.ld2.potential != Potential::Good) v.potentially_good_everywhere = false;
        if (c.ld1.vmin != c.ld2.vmin) ideal_bad += (ideal_bad.empty() ? "" : ",") + P.pretty();
        if (c.ld1.f != c.ld2.f) cond_bad += (cond_bad.empty() ? "" : ",") + P.pretty();
        v.per_prime.push_back(std::move(c));
    }
    if (!E1.K.is_real_quadratic()) {
        try {
            std::vector<LocalData> l1, l2;
            for (auto& c : v.per_prime) {
                l1.push_back(c.ld1);
                l2.push_back(c.ld2);
            }
            v.min_ratio = (minimal_discriminant_value_from(E2, l2) / minimal_discriminant_value_from(E1, l1)).in(E1.K);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ClassNumberNotOne) throw;
        }
    }
    if (!ideal_bad.empty()) {
        v.status = TwinStatus::NotTwin;
        v.reason = "ideal-mismatch";
        v.detail = ideal_bad;
        return v;
    }
    if (!cond_bad.empty()) {
        v.status = TwinStatus::NotTwin;
        v.reason = "conductor-mismatch";
        v.detail = cond_bad;
        return v;
    }
    v.status = TwinStatus::DiscIdealTwin;
    // ideal twins have integral j everywhere
    if (!v.potentially_good_everywhere) throw Error(ErrorKind::Internal, "ideal twins with potentially multiplicative reduction");
    try {
        Elem ratio = (I2.disc / I1.disc).in(E1.K);
        if (nth_power_root(ratio, 12)) {
            v.status = TwinStatus::DiscTwin;
            v.reason = "twin-criterion-met";
        } else {
            v.reason = "twin-criterion-failed";
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnsupportedField) throw;
        v.reason = "twin-undecided";
        v.twin_undecided = true;
    }
    return v;
}

// ----- closed-form criteria -----

struct CriterionResult {
    TwinStatus status = TwinStatus::NotTwin;
    bool necessary_only = false; // p = 2: the valuation test is necessary, not sufficient
    bool twin_undecided = false;
    std::string note;
};

inline bool t0_valuation_condition(int p, const Elem& t0, std::string* why = nullptr)
{
    const Field K = t0.field();
    std::set<Int> rational_ps{Int(p)};
    for (auto& q : support_primes(t0)) rational_ps.insert(q);
    int s = twin_exponent(p);
    for (auto& q : rational_ps)
        for (auto& P : primes_above(K, q)) {
            int v = valuation(P, t0);
            int e = q == p ? P.e : 0;
            bool ok = v % s == 0 && v >= 0 && v / s <= e;
            if (!ok) {
                if (why) *why = "valuation " + std::to_string(v) + " at " + P.pretty();
                return false;
            }
        }
    return true;
}

inline CriterionResult criterion_thm47(int p, const Elem& t0in, const Elem& /*d0*/, const Field& K)
{
    if (!is_family_prime(p)) throw Error(ErrorKind::UnsupportedP, "p = " + std::to_string(p));
    Elem t0 = t0in.in(K);
    CriterionResult r;
    r.necessary_only = p == 2;
    try {
        detail::check_parameter(p, t0);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularParameter) throw;
        r.status = TwinStatus::Singular;
        r.note = e.what();
        return r;
    }
    EqualJCase ej = equal_j_case(p, t0);
    if (ej.kind == EqualJKind::IsomorphicCM || (ej.kind == EqualJKind::EqualJ_Conditional && ej.cm_field && *ej.cm_field == K)) {
        r.status = TwinStatus::Isomorphic;
        r.note = "CM endomorphisms defined over the field";
        return r;
    }
    std::string why;
    if (!t0_valuation_condition(p, t0, &why)) {
        r.status = TwinStatus::NotTwin;
        r.note = why;
        return r;
    }
    r.status = TwinStatus::DiscIdealTwin;
    if (p == 2) r.note = "necessary conditions only for p=2";
    try {
        if (nth_power_root(t0.pow(p - 1), 12)) r.status = TwinStatus::DiscTwin;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnsupportedField) throw;
        r.twin_undecided = true;
        r.note = "twin-undecided";
    }
    return r;
}

inline bool field_contains_sqrt(const Field& K, long n)
{
    // sqrt(n) in K for squarefree n != 1
    return !K.is_rational() && K.D() == n;
}

inline bool prime_is_square_ideal(const Field& K, long p)
{
    for (auto& P : primes_above(K, Int(p)))
        if (P.e % 2) return false;
    return true;
}

inline CriterionResult criterion_thm33(int p, long j, const Field& K)
{
    CriterionResult r;
    if (p == 3 && j == 0) {
        if (field_contains_sqrt(K, -3)) {
            r.status = TwinStatus::Isomorphic;
            r.note = "zeta3 in field";
            return r;
        }
        if (!prime_is_square_ideal(K, 3)) {
            r.status = TwinStatus::NotTwin;
            r.note = "3 O_K is not a square";
            return r;
        }
        r.status = field_contains_sqrt(K, 3) ? TwinStatus::DiscTwin : TwinStatus::DiscIdealTwin;
        return r;
    }
    if (p == 2 && j == 1728) {
        r.necessary_only = true;
        if (field_contains_sqrt(K, -1)) {
            r.status = TwinStatus::Isomorphic;
            r.note = "i in field";
            return r;
        }
        if (!prime_is_square_ideal(K, 2)) {
            r.status = TwinStatus::NotTwin;
            r.note = "2 O_K is not a square";
            return r;
        }
        r.status = TwinStatus::DiscIdealTwin;
        r.note = "necessary conditions hold; never a discriminant twin";
        return r;
    }
    throw Error(ErrorKind::BadPair, "special-j criterion exists for (3,0) and (2,1728) only");
}

// ----- enumeration -----

struct TwinCandidate {
    int p = 0;
    Elem t0, d0 = Elem(1);
    std::string source; // unit-multiple, ideal-power, special-j, equal-j
    bool base_change = false;
    long special_j = -1; // >= 0 for special-j pairs
    Elem j1, j2;
    CriterionResult predicted;
    TwinVerdict verdict;
    std::vector<Elem> fricke_class; // every t0 collapsed into this row
};

struct ExcludedCandidate {
    int p = 0;
    Elem t0;
    std::string reason;
};

struct PrimeSplitting {
    int p = 0;
    std::vector<PrimeIdeal> primes;
    std::vector<std::pair<PrimeIdeal, std::optional<Elem>>> power_generators; // generator of P^{12/(p-1)}
};

struct ScanResult {
    Field K;
    std::vector<PrimeSplitting> splittings;
    std::vector<TwinCandidate> rows;
    std::vector<ExcludedCandidate> excluded;
};

namespace detail {

inline auto rep_key(const Elem& t)
{
    Rat n = abs(t.norm());
    return std::make_tuple(n, t.b() > 0 ? 0 : (t.b() == 0 ? 1 : 2), t.a(), t.b());
}

inline std::string jpair_key(const Elem& j1, const Elem& j2)
{
    std::string a = j1.str(), b = j2.str();
    if (b < a) std::swap(a, b);
    return a + "|" + b;
}

template <class F>
void parallel_for(size_t n, int workers, F f)
{
    if (workers <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> ts;
    std::exception_ptr err;
    std::mutex m;
    for (int w = 0; w < workers; ++w)
        ts.emplace_back([&] {
            while (true) {
                size_t i = next++;
                if (i >= n) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : ts) t.join();
    if (err) std::rethrow_exception(err);
}

// all k-vectors with 0 <= k_P <= e_P
inline void k_vectors(const std::vector<PrimeIdeal>& ps, size_t i, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (i == ps.size()) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= ps[i].e; ++k) {
        cur.push_back(k);
        k_vectors(ps, i + 1, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

inline TwinCandidate evaluate_family_candidate(int p, const Elem& t0, const Field& K)
{
    TwinCandidate c;
    c.p = p;
    c.t0 = t0.in(K);
    c.j1 = family_j(p, 1, c.t0).in(K);
    c.j2 = family_j(p, 2, c.t0).in(K);
    c.predicted = criterion_thm47(p, c.t0, Elem(1), K);
    c.verdict = classify_pair(family_curve(p, 1, c.t0, Elem(1), K), family_curve(p, 2, c.t0, Elem(1), K));
    c.base_change = c.t0.is_rational() && abs(c.t0.a()) == 1;
    return c;
}

inline ScanResult enumerate_field(const Field& K, int workers = 1)
{
    if (K.is_real_quadratic()) throw Error(ErrorKind::UnsupportedField, "enumeration needs a finite unit group");
    ScanResult res;
    res.K = K;
    struct Job {
        int p;
        Elem t0;
        std::string source;
    };
    std::vector<Job> jobs;
    for (int p : family_primes()) {
        PrimeSplitting sp;
        sp.p = p;
        sp.primes = primes_above(K, Int(p));
        int s = twin_exponent(p);
        for (auto& P : sp.primes) sp.power_generators.emplace_back(P, principal_generator({{P, s}}, K));
        std::vector<std::vector<int>> ks;
        std::vector<int> cur;
        detail::k_vectors(sp.primes, 0, cur, ks);
        for (auto& kv : ks) {
            Factorization F;
            bool trivial = true;
            for (size_t i = 0; i < kv.size(); ++i)
                if (kv[i]) {
                    F.emplace_back(sp.primes[i], s * kv[i]);
                    trivial = false;
                }
            auto lam = principal_generator(F, K);
            if (!lam) continue;
            for (auto& u : units_of(K)) jobs.push_back({p, (*lam * u).in(K), trivial ? "unit-multiple" : "ideal-power"});
        }
        res.splittings.push_back(std::move(sp));
    }
    std::vector<std::optional<TwinCandidate>> out(jobs.size());
    std::vector<std::string> why(jobs.size());
    detail::parallel_for(jobs.size(), workers, [&](size_t i) {
        const Job& jb = jobs[i];
        try {
            detail::check_parameter(jb.p, jb.t0);
        } catch (const Error& e) {
            why[i] = "singular";
            return;
        }
        TwinCandidate c = evaluate_family_candidate(jb.p, jb.t0, K);
        c.source = jb.source;
        EqualJCase ej = equal_j_case(jb.p, jb.t0);
        if (ej.kind != EqualJKind::Generic) c.source = "equal-j";
        if (c.verdict.status == TwinStatus::Isomorphic) {
            why[i] = "isomorphic";
            return;
        }
        out[i] = std::move(c);
    });
    // Fricke dedupe on unordered j pairs
    std::map<std::pair<int, std::string>, size_t> seen;
    std::vector<TwinCandidate> rows;
    for (size_t i = 0; i < jobs.size(); ++i) {
        if (!out[i]) {
            res.excluded.push_back({jobs[i].p, jobs[i].t0, why[i]});
            continue;
        }
        TwinCandidate& c = *out[i];
        auto key = std::make_pair(c.p, detail::jpair_key(c.j1, c.j2));
        auto it = seen.find(key);
        if (it == seen.end()) {
            c.fricke_class.push_back(c.t0);
            seen[key] = rows.size();
            rows.push_back(std::move(c));
            continue;
        }
        TwinCandidate& r = rows[it->second];
        r.fricke_class.push_back(c.t0);
        if (detail::rep_key(c.t0) < detail::rep_key(r.t0)) {
            auto cls = r.fricke_class;
            c.fricke_class = cls;
            r = std::move(c);
        }
    }
    for (auto& r : rows) {
        if (r.t0.is_rational() && abs(r.t0.a()) == 1) r.base_change = true;
        std::sort(r.fricke_class.begin(), r.fricke_class.end());
    }
    // special-j pairs
    for (auto [p, j] : {std::pair<int, long>{2, 1728}, std::pair<int, long>{3, 0}}) {
        CriterionResult cr = criterion_thm33(p, j, K);
        auto [E1, E2] = special_j_pair(p, j, Elem(1).in(K));
        E1.K = E2.K = K;
        TwinVerdict v = classify_pair(E1, E2);
        if (cr.status == TwinStatus::NotTwin && v.status == TwinStatus::NotTwin) continue;
        if (v.status == TwinStatus::Isomorphic) {
            res.excluded.push_back({p, Elem(j), "special-j isomorphic"});
            continue;
        }
        TwinCandidate c;
        c.p = p;
        c.t0 = Elem(0).in(K);
        c.source = "special-j";
        c.special_j = j;
        c.j1 = c.j2 = Elem(j).in(K);
        c.predicted = cr;
        c.verdict = v;
        rows.push_back(std::move(c));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const TwinCandidate& x, const TwinCandidate& y) {
        if (x.special_j >= 0 || y.special_j >= 0) {
            if ((x.special_j >= 0) != (y.special_j >= 0)) return y.special_j >= 0;
            return x.p < y.p;
        }
        if (x.p != y.p) return x.p < y.p;
        if (x.base_change != y.base_change) return x.base_change;
        return detail::rep_key(x.t0) < detail::rep_key(y.t0);
    });
    res.rows = std::move(rows);
    return res;
}

inline ScanResult enumerate_imag_quad(const Field& K, int workers = 1)
{
    if (!K.is_imaginary()) throw Error(ErrorKind::UnsupportedField, K.name() + " is not imaginary quadratic");
    return enumerate_field(K, workers);
}

// Rows over Q: t0 = +-1 twisted to the smallest conductor, then smallest |Dmin|
struct QRow {
    int p;
    long t0;
    long d0_printed; // twist printed next to the labels
    const char* label1;
    const char* label2;
};

inline const std::vector<QRow>& q_twist_table()
{
    static const std::vector<QRow> rows{
        {2, 1, -1, "4225.h1", "4225.h2"},     {2, -1, -3, "49.a3", "49.a4"},
        {3, 1, 21, "196.a1", "196.a2"},       {3, -1, -39, "676.b1", "676.b2"},
        {5, 1, 2, "1369.f1", "1369.f2"},      {5, -1, -1, "43264.f1", "43264.f2"},
        {7, 1, 1, "3969.f1", "3969.f2"},      {7, -1, -1, "1369.b1", "1369.b2"},
        {13, 1, -2, "9025.a1", "9025.a2"},    {13, -1, -1, "20736.n1", "20736.n2"},
    };
    return rows;
}

inline Int conductor_norm(const Model& E)
{
    Int N = 1;
    for (auto& [P, k] : conductor_ideal(E))
        for (int i = 0; i < k; ++i) N *= P.norm();
    return N;
}

// squarefree d over Q minimising (conductor, |Dmin|) of C_{p,1}(t0, d); ties go to smaller |d|, then d > 0
inline long minimal_twist_over_Q(int p, long t0)
{
    Model E = family_curve(p, 1, Elem(t0), Elem(1));
    std::set<Int> S{Int(2), Int(3)};
    for (auto& q : support_primes(invariants(E).disc)) S.insert(q);
    std::vector<long> ps;
    for (auto& q : S) ps.push_back(q.get_si());
    std::optional<std::tuple<Int, Rat, long, int>> best;
    long best_d = 1;
    for (unsigned mask = 0; mask < (1u << ps.size()); ++mask)
        for (int sg : {-1, 1}) {
            long d = sg;
            for (size_t i = 0; i < ps.size(); ++i)
                if (mask >> i & 1) d *= ps[i];
            Model Ed = family_curve(p, 1, Elem(t0), Elem(d));
            auto key = std::make_tuple(conductor_norm(Ed), Rat(abs(minimal_discriminant_value(Ed).a())), std::labs(d), -sg);
            if (!best || key < *best) {
                best = key;
                best_d = d;
            }
        }
    return best_d;
}

struct QCandidate {
    QRow row;
    long d0 = 1; // computed minimal twist
    Int conductor;
    Elem j1, j2, dmin1, dmin2;
    CriterionResult predicted;
    TwinVerdict verdict;
};

inline std::vector<QCandidate> enumerate_over_Q()
{
    std::vector<QCandidate> out;
    for (auto& r : q_twist_table()) {
        QCandidate c;
        c.row = r;
        c.d0 = minimal_twist_over_Q(r.p, r.t0);
        Model E1 = family_curve(r.p, 1, Elem(r.t0), Elem(c.d0)), E2 = family_curve(r.p, 2, Elem(r.t0), Elem(c.d0));
        c.conductor = conductor_norm(E1);
        if (c.conductor != conductor_norm(E2)) throw Error(ErrorKind::Internal, "isogenous curves with different conductors");
        c.j1 = invariants(E1).j;
        c.j2 = invariants(E2).j;
        c.dmin1 = minimal_discriminant_value(E1);
        c.dmin2 = minimal_discriminant_value(E2);
        c.predicted = criterion_thm47(r.p, Elem(r.t0), Elem(c.d0), Field::rationals());
        c.verdict = classify_pair(E1, E2);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace dtw
