#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "dtwins/dtwins.hpp"

using namespace dtw;

namespace {

constexpr int kExitDomain = 1, kExitMismatch = 2, kExitUsage = 64;

struct Table {
    std::vector<std::string> head;
    std::vector<std::vector<std::string>> rows;

    void print(std::ostream& os, bool csv) const
    {
        if (csv) {
            auto q = [](const std::string& s) {
                if (s.find_first_of(",\"\n") == std::string::npos) return s;
                std::string o = "\"";
                for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
                return o + "\"";
            };
            for (size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << q(head[i]);
            os << "\n";
            for (auto& r : rows) {
                for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << q(r[i]);
                os << "\n";
            }
            return;
        }
        std::vector<size_t> w(head.size());
        for (size_t i = 0; i < head.size(); ++i) w[i] = head[i].size();
        for (auto& r : rows)
            for (size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
        auto line = [&](const std::vector<std::string>& r) {
            for (size_t i = 0; i < r.size(); ++i) {
                os << r[i];
                if (i + 1 < r.size()) os << std::string(w[i] - r[i].size() + 2, ' ');
            }
            os << "\n";
        };
        line(head);
        std::vector<std::string> sep;
        for (auto n : w) sep.push_back(std::string(n, '-'));
        line(sep);
        for (auto& r : rows) line(r);
    }
};

struct Opts {
    std::string format = "table";
    bool json_flag = false;
    int workers = 1;
    long D = 1;
    std::string data;
    // curves
    std::string curve, curve1, curve2, coeffs;
    // family parameters
    int p = 0, i = 1;
    std::string t, d = "1", t_json, d_json;
    long prime = 0;
    std::string table = "all";
    bool show_all = false;
};

void emit(const Opts& o, const json& j, const Table& t)
{
    if (o.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        t.print(std::cout, o.format == "csv");
}

Field field_of(const Opts& o) { return Field::from_D(o.D); }

Elem read_elem(const std::string& text, const std::string& js, const Field& K, const char* what)
{
    if (!js.empty()) return elem_from_json(json::parse(js), K);
    if (text.empty()) throw CLI::ValidationError(std::string("--") + what, "missing value");
    return parse_elem(text, K);
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("file", "cannot open " + path);
    return json::parse(in);
}

Model model_from_any(const json& j)
{
    if (j.contains("curve")) return model_from_json(j.at("curve"));
    return model_from_json(j);
}

Model read_curve(const Opts& o, const std::string& path)
{
    if (!path.empty()) return model_from_any(read_json_file(path));
    if (!o.coeffs.empty()) {
        Field K = field_of(o);
        std::array<Elem, 5> a;
        std::stringstream ss(o.coeffs);
        std::string tok;
        int n = 0;
        while (std::getline(ss, tok, ',')) {
            if (n >= 5) throw CLI::ValidationError("--a", "need exactly 5 coefficients");
            a[n++] = parse_elem(tok, K);
        }
        if (n != 5) throw CLI::ValidationError("--a", "need exactly 5 coefficients");
        return make_model(a, K);
    }
    if (o.p) {
        Field K = field_of(o);
        return family_curve(o.p, o.i, read_elem(o.t, o.t_json, K, "t"), read_elem(o.d, o.d_json, K, "d"), K);
    }
    throw CLI::ValidationError("curve", "give --curve FILE, --a COEFFS, or --p/--i/--t");
}

std::string ld_row_prime(const LocalData& L) { return L.prime.pretty(); }

Table local_table(const std::vector<LocalData>& lds)
{
    Table t{{"prime", "kind", "kodaira", "f", "m", "vmin", "u_exp", "reduction", "potential"}, {}};
    for (auto& L : lds)
        t.rows.push_back({ld_row_prime(L), splitting_name(L.prime.kind), L.kodaira.str(), std::to_string(L.f), std::to_string(L.m),
                          std::to_string(L.vmin), std::to_string(L.u_exp), reduction_name(L.reduction), potential_name(L.potential)});
    return t;
}

int cmd_invariants(const Opts& o)
{
    Model E = read_curve(o, o.curve);
    Invariants I = invariants(E);
    json j{{"curve", to_json(E)}, {"invariants", to_json(I)}};
    Table t{{"name", "value"}, {}};
    t.rows = {{"field", E.K.name()}, {"model", E.str()}, {"b2", I.b2.pretty()}, {"b4", I.b4.pretty()}, {"b6", I.b6.pretty()},
              {"b8", I.b8.pretty()}, {"c4", I.c4.pretty()}, {"c6", I.c6.pretty()}, {"disc", I.disc.pretty()}, {"j", I.j.pretty()}};
    emit(o, j, t);
    return 0;
}

int cmd_localdata(const Opts& o)
{
    Model E = read_curve(o, o.curve);
    std::vector<LocalData> lds;
    if (o.prime) {
        for (auto& P : primes_above(E.K, Int(o.prime))) lds.push_back(tate_local(E, P));
    } else {
        lds = local_data_all(E);
    }
    json arr = json::array();
    for (auto& L : lds) arr.push_back(to_json(L));
    json j{{"curve", to_json(E)}, {"local", arr}};
    if (!o.prime) {
        j["conductor"] = to_json(conductor_ideal(E));
        j["minimal_discriminant"] = to_json(minimal_discriminant_ideal(E));
        try {
            j["minimal_discriminant_value"] = to_json(minimal_discriminant_value(E));
        } catch (const Error& e) {
            j["minimal_discriminant_value"] = nullptr;
            j["minimal_discriminant_note"] = kind_name(e.kind());
        }
    }
    emit(o, j, local_table(lds));
    return 0;
}

int cmd_family(const Opts& o)
{
    Field K = field_of(o);
    Elem t0 = read_elem(o.t, o.t_json, K, "t"), d0 = read_elem(o.d, o.d_json, K, "d");
    FamilyCurve fc = family_curve_ex(o.p, o.i, t0, d0, K);
    Elem j = family_j(o.p, o.i, t0), disc = family_disc(o.p, o.i, t0, fc.d_used);
    Invariants I = invariants(fc.model);
    if (I.j != j || I.disc != disc) throw Error(ErrorKind::Internal, "closed forms disagree with the model");
    EqualJCase ej = equal_j_case(o.p, t0);
    json out{{"family", {{"p", o.p}, {"i", o.i}, {"t", to_json(t0)}, {"d", to_json(d0)}}},
             {"curve", to_json(fc.model)},
             {"d_used", to_json(fc.d_used)},
             {"d_scale", fc.d_scale.get_str()},
             {"j", to_json(j)},
             {"disc", to_json(disc)},
             {"equal_j", equal_j_kind_name(ej.kind)}};
    Table t{{"name", "value"}, {}};
    t.rows = {{"family", "C_{" + std::to_string(o.p) + "," + std::to_string(o.i) + "}(" + t0.pretty() + ", " + d0.pretty() + ")"},
              {"field", fc.model.K.name()},
              {"model", fc.model.str()},
              {"j", j.pretty()},
              {"disc", disc.pretty()},
              {"equal_j", equal_j_kind_name(ej.kind)}};
    emit(o, out, t);
    return 0;
}

int cmd_classify(const Opts& o)
{
    Model E1, E2;
    if (!o.curve1.empty() || !o.curve2.empty()) {
        if (o.curve1.empty() || o.curve2.empty()) throw CLI::ValidationError("classify-pair", "need both --curve1 and --curve2");
        E1 = read_curve(o, o.curve1);
        E2 = read_curve(o, o.curve2);
    } else if (o.p) {
        Field K = field_of(o);
        Elem t0 = read_elem(o.t, o.t_json, K, "t"), d0 = read_elem(o.d, o.d_json, K, "d");
        E1 = family_curve(o.p, 1, t0, d0, K);
        E2 = family_curve(o.p, 2, t0, d0, K);
    } else {
        throw CLI::ValidationError("classify-pair", "give --curve1/--curve2 or --p/--t");
    }
    TwinVerdict v = classify_pair(E1, E2);
    json j = to_json(v);
    Table t{{"prime", "kodaira1", "kodaira2", "f1", "f2", "vmin1", "vmin2"}, {}};
    for (auto& c : v.per_prime)
        t.rows.push_back({c.prime.pretty(), c.ld1.kodaira.str(), c.ld2.kodaira.str(), std::to_string(c.ld1.f), std::to_string(c.ld2.f),
                          std::to_string(c.ld1.vmin), std::to_string(c.ld2.vmin)});
    if (o.format == "table") {
        std::cout << "status: " << status_name(v.status) << "\nreason: " << v.reason;
        if (!v.detail.empty()) std::cout << " at " << v.detail;
        std::cout << "\n";
        if (v.min_ratio) std::cout << "min ratio: " << v.min_ratio->pretty() << "\n";
        std::cout << "\n";
    }
    emit(o, j, t);
    return 0;
}

int cmd_scan(const Opts& o)
{
    Field K = field_of(o);
    if (K.is_rational()) {
        auto rows = enumerate_over_Q();
        json arr = json::array();
        Table t{{"p", "t0", "d0", "labels", "j1", "j2", "dmin1", "dmin2", "status"}, {}};
        for (auto& c : rows) {
            arr.push_back(to_json(c));
            t.rows.push_back({std::to_string(c.row.p), std::to_string(c.row.t0), std::to_string(c.d0),
                              std::string(c.row.label1) + "/" + c.row.label2, c.j1.str(), c.j2.str(), c.dmin1.str(), c.dmin2.str(),
                              status_name(c.verdict.status)});
        }
        emit(o, json{{"field", to_json(K)}, {"rows", arr}}, t);
        return 0;
    }
    ScanResult r = enumerate_imag_quad(K, o.workers);
    Table t{{"p", "t0", "source", "from Q", "j1", "j2", "ratio", "status", "predicted"}, {}};
    for (auto& c : r.rows) {
        t.rows.push_back({std::to_string(c.p), c.special_j >= 0 ? "j=" + std::to_string(c.special_j) : c.t0.pretty(), c.source,
                          c.base_change ? "yes" : "",
                          c.j1.pretty(), c.j2.pretty(), c.verdict.min_ratio ? c.verdict.min_ratio->pretty() : "-",
                          status_name(c.verdict.status), status_name(c.predicted.status)});
    }
    emit(o, to_json(r), t);
    return 0;
}

int cmd_verify(const Opts& o)
{
    json doc = load_tables(o.data.empty() ? default_tables_path() : o.data);
    VerifyReport rep = verify_tables(doc, o.table, o.workers);
    json cells = json::array();
    Table t{{"table", "row", "column", "expected", "got", "ok"}, {}};
    for (auto& c : rep.cells) {
        cells.push_back(json{{"table", c.table}, {"row", c.row}, {"column", c.column}, {"expected", c.expected}, {"got", c.got}, {"ok", c.ok}});
        if (!c.ok || o.format != "table" || o.show_all) t.rows.push_back({c.table, c.row, c.column, c.expected, c.got, c.ok ? "ok" : "MISMATCH"});
    }
    json j{{"table", o.table}, {"cells", cells}, {"errors", rep.errors}, {"mismatches", rep.mismatches()}};
    if (o.format == "table") {
        std::map<std::string, std::pair<int, int>> per;
        for (auto& c : rep.cells) {
            per[c.table].first++;
            per[c.table].second += c.ok;
        }
        for (auto& [k, v] : per) std::cout << "table " << k << ": " << v.second << "/" << v.first << " cells match\n";
        for (auto& e : rep.errors) std::cout << "error: " << e << "\n";
        if (!t.rows.empty()) {
            std::cout << "\n";
            t.print(std::cout, false);
        }
        std::cout << (rep.mismatches() ? "FAILED" : "OK") << " (" << rep.mismatches() << " mismatches)\n";
    } else {
        emit(o, j, t);
    }
    return rep.mismatches() ? kExitMismatch : 0;
}

int cmd_isogeny(const Opts& o)
{
    Field K = field_of(o);
    Elem t0 = read_elem(o.t, o.t_json, K, "t"), d0 = read_elem(o.d, o.d_json, K, "d");
    Table t{{"check", "ok"}, {}};
    json checks = json::array();
    bool all = true;
    auto add = [&](const std::string& name, bool ok) {
        all = all && ok;
        t.rows.push_back({name, ok ? "ok" : "FAIL"});
        checks.push_back(json{{"check", name}, {"ok", ok}});
    };
    FamilyCurve f1 = family_curve_ex(o.p, 1, t0, d0, K), f2 = family_curve_ex(o.p, 2, t0, d0, K);
    for (int i : {1, 2}) {
        const FamilyCurve& f = i == 1 ? f1 : f2;
        Invariants I = invariants(f.model);
        add("j_" + std::to_string(i) + " closed form", I.j == family_j(o.p, i, t0));
        add("disc_" + std::to_string(i) + " closed form", I.disc == family_disc(o.p, i, t0, f.d_used));
    }
    add("disc ratio law", disc_ratio_law(o.p, t0, f1.d_used));
    add("Fricke identities", fricke_swap_check(o.p));
    Elem j1 = family_j(o.p, 1, t0);
    std::vector<PrimeIdeal> ps = bad_primes(f1.model);
    for (auto& P : bad_primes(f2.model))
        if (std::find(ps.begin(), ps.end(), P) == ps.end()) ps.push_back(P);
    std::sort(ps.begin(), ps.end());
    for (auto& P : ps) {
        LocalData l1 = tate_local(f1.model, P), l2 = tate_local(f2.model, P);
        int vj = j1.is_zero() ? 0 : valuation(P, j1);
        add("isogeny valuation relation at " + P.pretty(), dokchitser_relation_check(l1, l2, o.p, vj, j1));
    }
    emit(o, json{{"p", o.p}, {"t", to_json(t0)}, {"d", to_json(d0)}, {"checks", checks}, {"ok", all}}, t);
    return all ? 0 : kExitMismatch;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dtwins: discriminant twins of isogenous elliptic curves over Q and quadratic fields"};
    app.require_subcommand(1);
    Opts o;
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_flag("--json", o.json_flag, "same as --format json");
    app.add_option("--workers", o.workers, "worker threads for enumeration")->check(CLI::PositiveNumber);
    app.add_option("--data", o.data, "expected-table data file");

    auto field_opt = [&](CLI::App* c) { c->add_option("--D", o.D, "field Q(sqrt D); 1 means Q"); };
    auto curve_opts = [&](CLI::App* c) {
        field_opt(c);
        c->add_option("--curve", o.curve, "model JSON file");
        c->add_option("--a", o.coeffs, "a1,a2,a3,a4,a6 in the element grammar");
        c->add_option("--p", o.p, "family prime");
        c->add_option("--i", o.i, "family index 1 or 2");
        c->add_option("--t", o.t, "parameter t, e.g. 3/2+1/5*sqrtD");
        c->add_option("--t-json", o.t_json, "parameter t as element JSON");
        c->add_option("--d", o.d, "twisting parameter d");
        c->add_option("--d-json", o.d_json, "twisting parameter d as element JSON");
    };
    auto fam_opts = [&](CLI::App* c, bool need_i) {
        field_opt(c);
        c->add_option("--p", o.p, "family prime")->required();
        if (need_i) c->add_option("--i", o.i, "family index 1 or 2")->required();
        c->add_option("--t", o.t, "parameter t, e.g. 3/2+1/5*sqrtD");
        c->add_option("--t-json", o.t_json, "parameter t as element JSON");
        c->add_option("--d", o.d, "twisting parameter d (default 1)");
        c->add_option("--d-json", o.d_json, "twisting parameter d as element JSON");
    };

    auto* inv = app.add_subcommand("invariants", "Weierstrass invariants of a curve");
    curve_opts(inv);
    auto* loc = app.add_subcommand("localdata", "Tate's algorithm at one or all bad primes");
    curve_opts(loc);
    loc->add_option("--prime", o.prime, "rational prime; all primes above it");
    auto* fam = app.add_subcommand("family", "the curve C_{p,i}(t,d)");
    fam_opts(fam, true);
    auto* cls = app.add_subcommand("classify-pair", "twin status of two curves or of a family pair");
    field_opt(cls);
    cls->add_option("--curve1", o.curve1, "first model JSON");
    cls->add_option("--curve2", o.curve2, "second model JSON");
    cls->add_option("--p", o.p, "family prime (pair C_{p,1}, C_{p,2})");
    cls->add_option("--t", o.t, "parameter t");
    cls->add_option("--t-json", o.t_json, "parameter t as element JSON");
    cls->add_option("--d", o.d, "twisting parameter d");
    cls->add_option("--d-json", o.d_json, "twisting parameter d as element JSON");
    auto* scan = app.add_subcommand("scan-field", "enumerate twin candidates over Q or an imaginary quadratic field");
    field_opt(scan);
    auto* ver = app.add_subcommand("verify-paper", "recompute the shipped tables");
    ver->add_option("--table", o.table, "4, 5, 6, remark, modpoly, jdisc or all")
        ->check(CLI::IsMember({"4", "5", "6", "remark", "modpoly", "jdisc", "all"}));
    ver->add_flag("--all-cells", o.show_all, "list matching cells too");
    ver->add_option("--data", o.data, "expected-table data file");
    auto* iso = app.add_subcommand("isogeny-check", "family identities and isogeny valuation relations for one (p,t,d)");
    fam_opts(iso, false);

    for (auto* c : app.get_subcommands({})) {
        c->add_flag("--json", o.json_flag, "same as --format json");
        c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
        c->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    if (o.json_flag) o.format = "json";

    try {
        if (inv->parsed()) return cmd_invariants(o);
        if (loc->parsed()) return cmd_localdata(o);
        if (fam->parsed()) return cmd_family(o);
        if (cls->parsed()) return cmd_classify(o);
        if (scan->parsed()) return cmd_scan(o);
        if (ver->parsed()) return cmd_verify(o);
        if (iso->parsed()) return cmd_isogeny(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Parse ? kExitUsage : kExitDomain;
    } catch (const json::exception& e) {
        std::cerr << "error [json]: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
