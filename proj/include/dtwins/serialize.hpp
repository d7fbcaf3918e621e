#pragma once

// JSON encoding. Arbitrary-size integers and rationals are decimal strings;
// small bookkeeping numbers (p, exponents, f, m) are plain JSON numbers.

#include <json.hpp>

#include "twinscan.hpp"

namespace dtw {

using json = nlohmann::ordered_json;

inline json to_json(const Field& K) { return json{{"D", K.D()}, {"name", K.name()}}; }

inline Field field_from_json(const json& j)
{
    if (j.is_number_integer()) return Field::from_D(j.get<std::int64_t>());
    if (j.is_string()) return Field::from_D(std::stoll(j.get<std::string>()));
    if (!j.is_object() || !j.contains("D")) throw Error(ErrorKind::Parse, "field needs a D entry");
    return field_from_json(j.at("D"));
}

inline json to_json(const Elem& x) { return json{{"a", x.a().get_str()}, {"b", x.b().get_str()}, {"D", x.field().D()}}; }

inline Elem elem_from_json(const json& j, std::optional<Field> K = std::nullopt)
{
    if (j.is_string()) return parse_elem(j.get<std::string>(), K.value_or(Field::rationals()));
    if (j.is_number_integer()) return Elem(Int(j.get<long>())).in(K.value_or(Field::rationals()));
    if (!j.is_object()) throw Error(ErrorKind::Parse, "field element must be an object or string");
    Field F = j.contains("D") ? field_from_json(j.at("D")) : K.value_or(Field::rationals());
    if (K && !F.is_rational() && F != *K) throw Error(ErrorKind::FieldMismatch, F.name() + " vs " + K->name());
    auto rat = [](const json& v) { return v.is_string() ? detail::parse_rat(v.get<std::string>()) : Rat(v.get<long>()); };
    Rat b = j.contains("b") ? rat(j.at("b")) : Rat(0);
    Elem x(rat(j.at("a")), b, F);
    return K ? x.in(*K) : x;
}

inline json to_json(const PrimeIdeal& P)
{
    return json{{"p", P.p.get_si()}, {"kind", splitting_name(P.kind)}, {"e", P.e}, {"f", P.f},
                {"gen", to_json(P.gen)}, {"pi", to_json(P.pi)}, {"label", P.pretty()}};
}

inline json to_json(const Factorization& F)
{
    json out = json::array();
    for (auto& [P, k] : F)
        out.push_back(json{{"p", P.p.get_si()}, {"kind", splitting_name(P.kind)}, {"pi", to_json(P.pi)}, {"exp", k}, {"label", P.pretty()}});
    return out;
}

inline json to_json(const Model& E)
{
    json a = json::array();
    for (auto& x : E.a) a.push_back(to_json(x));
    return json{{"field", to_json(E.K)}, {"a", a}};
}

inline Model model_from_json(const json& j)
{
    if (!j.contains("a") || !j.at("a").is_array() || j.at("a").size() != 5) throw Error(ErrorKind::Parse, "model needs a = [a1,a2,a3,a4,a6]");
    std::optional<Field> K;
    if (j.contains("field")) K = field_from_json(j.at("field"));
    std::array<Elem, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = elem_from_json(j.at("a")[i], K);
    return make_model(a, K);
}

inline json to_json(const Invariants& I)
{
    return json{{"b2", to_json(I.b2)}, {"b4", to_json(I.b4)}, {"b6", to_json(I.b6)}, {"b8", to_json(I.b8)},
                {"c4", to_json(I.c4)}, {"c6", to_json(I.c6)}, {"disc", to_json(I.disc)}, {"j", to_json(I.j)}};
}

inline json to_json(const LocalData& L)
{
    return json{{"p", L.prime.p.get_si()},   {"kind", splitting_name(L.prime.kind)},
                {"prime", L.prime.pretty()}, {"kodaira", L.kodaira.str()},
                {"f", L.f},                  {"m", L.m},
                {"vmin", L.vmin},            {"u_exp", L.u_exp},
                {"reduction", reduction_name(L.reduction)}, {"potential", potential_name(L.potential)}};
}

inline json to_json(const TwinVerdict& v)
{
    json pp = json::array();
    for (auto& c : v.per_prime) pp.push_back(json{{"prime", c.prime.pretty()}, {"ld1", to_json(c.ld1)}, {"ld2", to_json(c.ld2)}});
    json out{{"status", status_name(v.status)}, {"reason", v.reason}};
    if (!v.detail.empty()) out["detail"] = v.detail;
    out["twin_undecided"] = v.twin_undecided;
    if (v.min_ratio) out["min_ratio"] = to_json(*v.min_ratio);
    out["per_prime"] = pp;
    return out;
}

inline json to_json(const CriterionResult& r)
{
    json out{{"status", status_name(r.status)}, {"necessary_only", r.necessary_only}, {"twin_undecided", r.twin_undecided}};
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

inline json to_json(const TwinCandidate& c)
{
    json out{{"p", c.p}, {"t0", to_json(c.t0)}, {"t0_str", c.t0.pretty()}, {"d0", to_json(c.d0)}, {"source", c.source},
             {"base_change", c.base_change}};
    if (c.special_j >= 0) out["special_j"] = c.special_j;
    out["j1"] = to_json(c.j1);
    out["j2"] = to_json(c.j2);
    out["predicted"] = to_json(c.predicted);
    out["verdict"] = to_json(c.verdict);
    json cls = json::array();
    for (auto& t : c.fricke_class) cls.push_back(t.pretty());
    out["fricke_class"] = cls;
    return out;
}

inline json to_json(const ScanResult& r)
{
    json sp = json::array();
    for (auto& s : r.splittings) {
        json primes = json::array(), gens = json::array();
        for (auto& P : s.primes) primes.push_back(to_json(P));
        for (auto& [P, g] : s.power_generators)
            gens.push_back(json{{"prime", P.pretty()}, {"power", twin_exponent(s.p)}, {"generator", g ? json(g->pretty()) : json(nullptr)}});
        sp.push_back(json{{"p", s.p}, {"primes", primes}, {"power_generators", gens}});
    }
    json rows = json::array(), ex = json::array();
    for (auto& c : r.rows) rows.push_back(to_json(c));
    for (auto& e : r.excluded) ex.push_back(json{{"p", e.p}, {"t0", e.t0.pretty()}, {"reason", e.reason}});
    return json{{"field", to_json(r.K)}, {"splittings", sp}, {"rows", rows}, {"excluded", ex}};
}

inline json to_json(const QCandidate& c)
{
    return json{{"p", c.row.p},
                {"t0", std::to_string(c.row.t0)},
                {"d0", std::to_string(c.d0)},
                {"d0_printed", std::to_string(c.row.d0_printed)},
                {"labels", {c.row.label1, c.row.label2}},
                {"conductor", c.conductor.get_str()},
                {"j1", c.j1.str()},
                {"j2", c.j2.str()},
                {"dmin1", c.dmin1.str()},
                {"dmin2", c.dmin2.str()},
                {"predicted", to_json(c.predicted)},
                {"verdict", to_json(c.verdict)}};
}

} // namespace dtw
