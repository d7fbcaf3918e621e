#pragma once

// Recomputes every checkable cell of the shipped tables (data/tables.json).

#include <fstream>
#include <functional>
#include <sstream>

#include "serialize.hpp"

namespace dtw {

struct VerifyCell {
    std::string table, row, column, expected, got;
    bool ok = false;
};

struct VerifyReport {
    std::vector<VerifyCell> cells;
    std::vector<std::string> errors; // rows that threw
    size_t mismatches() const
    {
        size_t n = errors.size();
        for (auto& c : cells) n += !c.ok;
        return n;
    }
};

inline json load_tables(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
    json doc = json::parse(in, nullptr, true, true);
    if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != 1)
        throw Error(ErrorKind::Parse, path + ": unsupported schema_version");
    return doc;
}

inline std::string default_tables_path()
{
    if (const char* e = std::getenv("DTWINS_DATA")) return e;
#ifdef DTWINS_DATA_DIR
    return std::string(DTWINS_DATA_DIR) + "/tables.json";
#else
    return "data/tables.json";
#endif
}

// the tabulated curves for odd p are C_{p,i}(t0, -d0) in the implemented formulas
inline long table_twist_sign(int p) { return p == 2 ? 1 : -1; }

// y^2 = x^3 - 3j(j-1728)x + 2j(j-1728)^2, j != 0, 1728
inline Model curve_with_j(const Rat& j)
{
    Rat k = j - 1728;
    return short_model(Elem(-3 * j * k), Elem(2 * j * k * k), Field::rationals());
}

inline Model twist_over_Q(const Model& E, long d)
{
    return quadratic_twist(E, Elem(d));
}

// squarefree d with Dmin(E^d) == want over Q, if any. Odd primes are settled locally
// (an odd unit twist keeps the valuation), then the four classes at 2 are tried.
inline std::optional<long> twist_with_min_disc(const Model& E, const Elem& want)
{
    std::set<Int> S;
    for (auto& q : support_primes(invariants(E).disc)) S.insert(q);
    for (auto& q : support_primes(want)) S.insert(q);
    std::vector<std::vector<long>> choices;
    for (auto& q : S) {
        if (q == 2) continue;
        PrimeIdeal P = primes_above(Field::rationals(), q).at(0);
        int target = valuation(P, want);
        std::vector<long> opts;
        for (long d : {1L, q.get_si()})
            if (tate_local(twist_over_Q(E, d), P).vmin == target) opts.push_back(d);
        if (opts.empty()) return std::nullopt;
        choices.push_back(opts);
    }
    std::vector<long> odd{1};
    for (auto& opts : choices) {
        std::vector<long> next;
        for (long a : odd)
            for (long b : opts) next.push_back(a * b);
        odd = next;
    }
    for (long m : odd)
        for (long u : {1L, -1L, 2L, -2L})
            if (minimal_discriminant_value(twist_over_Q(E, m * u)) == want) return m * u;
    return std::nullopt;
}

namespace detail {

struct Recorder {
    VerifyReport& rep;
    std::string table;
    void cell(const std::string& row, const std::string& col, const std::string& expected, const std::string& got)
    {
        rep.cells.push_back({table, row, col, expected, got, expected == got});
    }
    void check(const std::string& row, const std::string& col, bool ok, const std::string& what = "")
    {
        rep.cells.push_back({table, row, col, "true", ok ? "true" : "false" + (what.empty() ? "" : " (" + what + ")"), ok});
    }
    template <class F>
    void guarded(const std::string& row, F f)
    {
        try {
            f();
        } catch (const std::exception& e) {
            rep.errors.push_back(table + " " + row + ": " + e.what());
        }
    }
};

inline std::string s(const json& j) { return j.get<std::string>(); }

inline Elem rat_elem(const json& j) { return Elem(detail::parse_rat(s(j))); }

} // namespace detail

inline void verify_table4(const json& doc, VerifyReport& rep)
{
    detail::Recorder R{rep, "4"};
    auto computed = enumerate_over_Q();
    const json& rows = doc.at("table4").at("rows");
    R.cell("-", "row count", std::to_string(rows.size()), std::to_string(computed.size()));
    for (auto& r : rows) {
        int p = r.at("p").get<int>();
        long t0 = std::stol(detail::s(r.at("t0")));
        std::string id = "p=" + std::to_string(p) + " t0=" + std::to_string(t0);
        R.guarded(id, [&] {
            auto it = std::find_if(computed.begin(), computed.end(), [&](const QCandidate& c) { return c.row.p == p && c.row.t0 == t0; });
            if (it == computed.end()) throw Error(ErrorKind::Internal, "row not enumerated");
            const QCandidate& c = *it;
            long dp = std::stol(detail::s(r.at("d0_printed")));
            R.cell(id, "minimal twist", std::to_string(table_twist_sign(p) * dp), std::to_string(c.d0));
            std::string label = detail::s(r.at("label1"));
            R.cell(id, "conductor", label.substr(0, label.find('.')), c.conductor.get_str());
            R.cell(id, "j1", detail::s(r.at("j1")), c.j1.str());
            R.cell(id, "j2", detail::s(r.at("j2")), c.j2.str());
            R.cell(id, "dmin1", detail::s(r.at("dmin1")), c.dmin1.str());
            R.cell(id, "dmin2", detail::s(r.at("dmin2")), c.dmin2.str());
            Elem ratio = detail::rat_elem(r.at("dmin2")) / detail::rat_elem(r.at("dmin1"));
            std::string want = nth_power_root(ratio, 12) ? "DiscTwin" : "DiscIdealTwin";
            R.cell(id, "classify_pair", want, status_name(c.verdict.status));
            R.cell(id, "criterion", want, status_name(c.predicted.status));
        });
    }
    // rows outside the families: recover the twist from j alone
    for (auto& r : doc.at("table4").at("embedded")) {
        std::string id = "p=" + std::to_string(r.at("p").get<int>());
        R.guarded(id, [&] {
            for (int k : {1, 2}) {
                std::string sfx = std::to_string(k);
                Rat j = detail::parse_rat(detail::s(r.at("j" + sfx)));
                Elem want = detail::rat_elem(r.at("dmin" + sfx));
                bool found = twist_with_min_disc(curve_with_j(j), want).has_value();
                R.check(id, "twist with j" + sfx + " has dmin" + sfx, found);
            }
            R.check(id, "equal dmin", detail::s(r.at("dmin1")) == detail::s(r.at("dmin2")));
        });
    }
}

inline void verify_jdisc(const json& doc, VerifyReport& rep)
{
    detail::Recorder R{rep, "jdisc"};
    for (auto& r : doc.at("jdisc_cm").at("rows")) {
        std::string id = detail::s(r.at("isogeny_class"));
        R.guarded(id, [&] {
            int p = r.at("p").get<int>();
            PrimeIdeal P = primes_above(Field::rationals(), Int(p))[0];
            int v[2];
            for (int k : {1, 2}) {
                std::string sfx = std::to_string(k);
                Rat j = detail::parse_rat(detail::s(r.at("j" + sfx)));
                R.check(id, "j" + sfx + " integral", j.get_den() == 1);
                v[k - 1] = r.at("v" + sfx).get<int>();
                Model E = curve_with_j(j);
                std::set<int> vals;
                for (long d : {1L, long(p)}) vals.insert(tate_local(twist_over_Q(E, d), P).vmin);
                R.check(id, "v" + sfx + " realised by a twist", vals.count(v[k - 1]) > 0);
            }
            // twisting shifts both valuations by the same amount mod 12
            R.check(id, "valuations incongruent mod 12", (v[0] - v[1]) % 12 != 0);
        });
    }
    for (auto& r : doc.at("jdisc_cm").at("non_integral")) {
        std::string id = detail::s(r.at("isogeny_class"));
        for (int k : {1, 2}) {
            Rat j = detail::parse_rat(detail::s(r.at("j" + std::to_string(k))));
            R.check(id, "j" + std::to_string(k) + " non-integral", j.get_den() != 1);
        }
    }
}

inline void verify_table5(const json& doc, VerifyReport& rep, int workers)
{
    detail::Recorder R{rep, "5"};
    const json& t = doc.at("table5");
    Field K = Field::quadratic(t.at("D").get<long>());
    for (auto& sp : t.at("splitting")) {
        int p = sp.at("p").get<int>();
        std::string id = "p=" + std::to_string(p);
        R.guarded(id, [&] {
            auto ps = primes_above(K, Int(p));
            R.cell(id, "prime count", std::to_string(sp.at("primes").size()), std::to_string(ps.size()));
            for (auto& q : sp.at("primes")) {
                Elem g = parse_elem(detail::s(q.at("gen")), K);
                Hnf h = ideal_hnf({Elem(p), g}, K);
                auto it = std::find_if(ps.begin(), ps.end(), [&](const PrimeIdeal& P) { return P.hnf == h; });
                R.check(id, "(" + std::to_string(p) + ", " + g.pretty() + ") is a prime above p", it != ps.end());
                if (it != ps.end()) R.cell(id, "e of " + it->pretty(), std::to_string(q.at("exp").get<int>()), std::to_string(it->e));
            }
        });
    }
    for (auto& g : t.at("generators")) {
        int p = g.at("p").get<int>();
        std::string id = "p=" + std::to_string(p) + " " + detail::s(g.at("prime_gen"));
        R.guarded(id, [&] {
            Elem pg = parse_elem(detail::s(g.at("prime_gen")), K);
            Hnf h = ideal_hnf({Elem(p), pg}, K);
            auto ps = primes_above(K, Int(p));
            auto it = std::find_if(ps.begin(), ps.end(), [&](const PrimeIdeal& P) { return P.hnf == h; });
            if (it == ps.end()) throw Error(ErrorKind::Internal, "prime not found");
            int k = g.at("power").get<int>();
            auto gen = principal_generator_of_power(*it, k);
            Elem want = parse_elem(detail::s(g.at("generator")), K);
            bool ok = false;
            if (gen)
                for (auto& u : units_of(K)) ok = ok || (*gen * u).in(K) == want;
            R.check(id, "generator of P^" + std::to_string(k) + " = " + want.pretty() + " up to units", ok, gen ? gen->pretty() : "none");
        });
    }
    ScanResult scan = enumerate_imag_quad(K, workers);
    std::set<std::string> want_keys, got_keys;
    for (auto& r : t.at("rows")) {
        int p = r.at("p").get<int>();
        Elem t0 = parse_elem(detail::s(r.at("t0")), K);
        std::string id = "p=" + std::to_string(p) + " t0=" + t0.pretty();
        R.guarded(id, [&] {
            Elem j1 = parse_elem(detail::s(r.at("j1")), K), j2 = parse_elem(detail::s(r.at("j2")), K);
            R.cell(id, "j1", j1.str(), family_j(p, 1, t0).in(K).str());
            R.cell(id, "j2", j2.str(), family_j(p, 2, t0).in(K).str());
            TwinVerdict v = classify_pair(family_curve(p, 1, t0, Elem(1), K), family_curve(p, 2, t0, Elem(1), K));
            R.cell(id, "classify_pair", detail::s(t.at("expected_status")), status_name(v.status));
            R.cell(id, "criterion", detail::s(t.at("expected_status")), status_name(criterion_thm47(p, t0, Elem(1), K).status));
            want_keys.insert(std::to_string(p) + ":" + detail::jpair_key(j1, j2));
        });
    }
    for (auto& c : scan.rows)
        if (!c.base_change && c.special_j < 0) got_keys.insert(std::to_string(c.p) + ":" + detail::jpair_key(c.j1, c.j2));
    R.check("enumeration", "non-base-change family rows equal the table", want_keys == got_keys,
            std::to_string(got_keys.size()) + " enumerated");
    for (auto& sj : t.at("special_j")) {
        int p = sj.at("p").get<int>();
        long j = std::stol(detail::s(sj.at("j")));
        std::string id = "special j=" + std::to_string(j);
        R.guarded(id, [&] {
            auto [E1, E2] = special_j_pair(p, j, Elem(1).in(K));
            E1.K = E2.K = K;
            R.cell(id, "classify_pair", detail::s(t.at("expected_status")), status_name(classify_pair(E1, E2).status));
            R.cell(id, "criterion", detail::s(t.at("expected_status")), status_name(criterion_thm33(p, j, K).status));
            bool listed = std::any_of(scan.rows.begin(), scan.rows.end(), [&](const TwinCandidate& c) { return c.special_j == j; });
            R.check(id, "enumerated", listed);
        });
    }
}

inline void verify_table6(const json& doc, VerifyReport& rep, int workers)
{
    for (auto& blk : doc.at("table6")) {
        Field K = Field::quadratic(blk.at("D").get<long>());
        detail::Recorder R{rep, "6 " + K.name()};
        ScanResult scan = enumerate_imag_quad(K, workers);
        std::set<std::string> want_keys, got_keys;
        for (auto& r : blk.at("rows")) {
            int p = r.at("p").get<int>();
            Elem t0 = parse_elem(detail::s(r.at("t0")), K);
            std::string id = "p=" + std::to_string(p) + " t0=" + t0.pretty();
            R.guarded(id, [&] {
                Elem j1 = parse_elem(detail::s(r.at("j1")), K), j2 = parse_elem(detail::s(r.at("j2")), K);
                // a row flagged fricke_swapped prints the j pair of p^s/t0, i.e. (j2(t0), j1(t0))
                bool sw = r.value("fricke_swapped", false);
                R.cell(id, sw ? "j1 = j_{p,2}(t0)" : "j1", j1.str(), family_j(p, sw ? 2 : 1, t0).in(K).str());
                R.cell(id, sw ? "j2 = j_{p,1}(t0)" : "j2", j2.str(), family_j(p, sw ? 1 : 2, t0).in(K).str());
                TwinVerdict v = classify_pair(family_curve(p, 1, t0, Elem(1), K), family_curve(p, 2, t0, Elem(1), K));
                Elem ratio = parse_elem(detail::s(r.at("ratio")), K);
                if (sw) ratio = ratio.inverse();
                R.cell(id, "ratio", ratio.str(), v.min_ratio ? v.min_ratio->str() : "none");
                if (ratio == Elem(1).in(K)) R.cell(id, "status", "DiscTwin", status_name(v.status));
                std::string crit = status_name(criterion_thm47(p, t0, Elem(1), K).status);
                R.cell(id, "criterion", status_name(v.status), crit);
                want_keys.insert(std::to_string(p) + ":" + detail::jpair_key(j1, j2));
            });
        }
        for (auto& c : scan.rows)
            if (!c.base_change && c.special_j < 0) got_keys.insert(std::to_string(c.p) + ":" + detail::jpair_key(c.j1, c.j2));
        R.cell("enumeration", "row count", std::to_string(blk.at("rows").size()), std::to_string(got_keys.size()));
        R.check("enumeration", "enumerated classes equal the table", want_keys == got_keys);
    }
}

inline void verify_remark(const json& doc, VerifyReport& rep)
{
    detail::Recorder R{rep, "remark"};
    for (auto& r : doc.at("remark_q_curves")) {
        int p = r.at("p").get<int>();
        Elem t0 = detail::rat_elem(r.at("t0"));
        std::string id = "p=" + std::to_string(p) + " t0=" + t0.str();
        R.guarded(id, [&] {
            Elem d(table_twist_sign(p));
            Model E1 = family_curve(p, 1, t0, d), E2 = family_curve(p, 2, t0, d);
            R.cell(id, "j1", detail::s(r.at("j")), invariants(E1).j.str());
            R.cell(id, "j2", detail::s(r.at("j")), invariants(E2).j.str());
            R.cell(id, "dmin1", detail::s(r.at("dmin1")), minimal_discriminant_value(E1).str());
            R.cell(id, "dmin2", detail::s(r.at("dmin2")), minimal_discriminant_value(E2).str());
            EqualJCase ej = equal_j_case(p, t0);
            R.cell(id, "equal-j kind", "EqualJ_Conditional", equal_j_kind_name(ej.kind));
            R.cell(id, "CM field", std::to_string(r.at("cm_D").get<long>()), ej.cm_field ? std::to_string(ej.cm_field->D()) : "none");
            R.cell(id, "classify_pair over Q", "NotTwin", status_name(classify_pair(E1, E2).status));
        });
    }
}

inline void verify_modpoly(const json& doc, VerifyReport& rep)
{
    detail::Recorder R{rep, "modpoly"};
    for (auto [key, D] : {std::pair<const char*, long>{"j0", -3}, std::pair<const char*, long>{"j1728", -1}}) {
        Field K = Field::quadratic(D);
        for (auto& [ps, cnt] : doc.at("modpoly_counts").at(key).items()) {
            int n = 0;
            for (auto& P : primes_above(K, Int(std::stol(ps)))) n += P.f == 1;
            R.cell(std::string(key) + " p=" + ps, "self-isogeny count", std::to_string(cnt.get<int>()), std::to_string(n));
        }
    }
}

inline VerifyReport verify_tables(const json& doc, const std::string& which = "all", int workers = 1)
{
    VerifyReport rep;
    bool all = which == "all";
    if (!all && which != "4" && which != "5" && which != "6" && which != "remark" && which != "modpoly" && which != "jdisc")
        throw Error(ErrorKind::Parse, "unknown table " + which);
    if (all || which == "4") verify_table4(doc, rep);
    if (all || which == "jdisc") verify_jdisc(doc, rep);
    if (all || which == "5") verify_table5(doc, rep, workers);
    if (all || which == "6") verify_table6(doc, rep, workers);
    if (all || which == "remark") verify_remark(doc, rep);
    if (all || which == "modpoly") verify_modpoly(doc, rep);
    return rep;
}

} // namespace dtw
