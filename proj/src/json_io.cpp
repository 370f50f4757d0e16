#include "wvn/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "wvn/errors.hpp"

namespace wvn {

using nlohmann::json;

namespace {

json phase_to_json(const phase_function& p) {
    switch (p.kind) {
        case phase_function::kind_t::none:
            return json{{"kind", "none"}};
        case phase_function::kind_t::linear:
            return json{{"kind", "linear"}, {"slope", p.slope}, {"intercept", p.intercept}};
        case phase_function::kind_t::table:
            return json{{"kind", "table"}, {"x", p.x}, {"xi", p.xi}};
        case phase_function::kind_t::analytic:
            throw std::invalid_argument("analytic phase handles are not serializable");
    }
    return json{{"kind", "none"}};
}

phase_function phase_from_json(const json& j) {
    const std::string kind = j.value("kind", "none");
    if (kind == "none") return phase_function::none();
    if (kind == "linear")
        return phase_function::linear(j.value("slope", 0.0), j.value("intercept", 0.0));
    if (kind == "table")
        return phase_function::table_of(j.at("x").get<std::vector<double>>(),
                                        j.at("xi").get<std::vector<double>>());
    throw validation_error("phase: unknown kind '" + kind + "'");
}

json envelope_to_json(const envelope& e) {
    json j;
    switch (e.kind) {
        case envelope_kind::power_law: j["kind"] = "power_law"; break;
        case envelope_kind::constant: j["kind"] = "constant"; break;
        case envelope_kind::sampled: j["kind"] = "sampled"; break;
    }
    j["delta"] = e.delta;
    j["x_min"] = e.x_min;
    j["phase"] = phase_to_json(e.phase);
    if (e.declared_variation > 0) j["declared_variation"] = e.declared_variation;
    if (!e.declared_lp.empty()) {
        json lp = json::object();
        for (const auto& [p, v] : e.declared_lp) lp[std::to_string(p)] = v;
        j["declared_lp"] = lp;
    }
    if (e.kind == envelope_kind::sampled) {
        j["x"] = e.sample_x;
        j["value"] = e.sample_value;
    }
    return j;
}

envelope envelope_from_json(const json& j) {
    envelope e;
    const std::string kind = j.value("kind", "power_law");
    if (kind == "power_law") e.kind = envelope_kind::power_law;
    else if (kind == "constant") e.kind = envelope_kind::constant;
    else if (kind == "sampled") e.kind = envelope_kind::sampled;
    else throw validation_error("envelope: unknown kind '" + kind + "'");
    e.delta = j.value("delta", 1.0);
    e.x_min = j.value("x_min", 1.0);
    if (j.contains("phase")) e.phase = phase_from_json(j.at("phase"));
    e.declared_variation = j.value("declared_variation", 0.0);
    if (j.contains("declared_lp"))
        for (const auto& [key, v] : j.at("declared_lp").items())
            e.declared_lp[std::stoi(key)] = v.get<double>();
    if (e.kind == envelope_kind::sampled) {
        e.sample_x = j.at("x").get<std::vector<double>>();
        e.sample_value = j.at("value").get<std::vector<double>>();
    }
    return e;
}

} // namespace

json to_json(const operator_data& data) {
    json terms = json::array();
    for (const auto& t : data.terms)
        terms.push_back(json{{"c", {t.c.real(), t.c.imag()}},
                             {"phi", t.phi},
                             {"envelope", envelope_to_json(t.env)}});
    json j{{"p", data.p}, {"finite", data.finite}, {"terms", terms}};
    if (data.alpha) j["alpha"] = *data.alpha;
    else j["alpha"] = nullptr;
    return j;
}

operator_data operator_data_from_json(const json& j) {
    operator_data data;
    data.p = j.at("p").get<int>();
    if (j.contains("alpha") && !j.at("alpha").is_null())
        data.alpha = j.at("alpha").get<double>();
    data.finite = j.value("finite", true);
    for (const auto& tj : j.at("terms")) {
        wvn_term t;
        const auto& c = tj.at("c");
        t.c = {c.at(0).get<double>(), c.at(1).get<double>()};
        t.phi = tj.at("phi").get<double>();
        if (tj.contains("envelope")) t.env = envelope_from_json(tj.at("envelope"));
        data.terms.push_back(std::move(t));
    }
    return data;
}

operator_data load_operator_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw validation_error("config parse failure: " + std::string(e.what()));
    }
    return operator_data_from_json(j);
}

json to_json(const validation_report& rep) {
    json j{{"ok", rep.ok()}, {"violations", rep.violations}, {"notes", rep.notes}};
    if (rep.alpha_partial_sum) j["alpha_partial_sum"] = *rep.alpha_partial_sum;
    if (rep.abs_partial_sum) j["abs_partial_sum"] = *rep.abs_partial_sum;
    return j;
}

json to_json(const exceptional_set& set) {
    json pts = json::array();
    for (const auto& pt : set.points)
        pts.push_back(json{{"E", pt.E},
                           {"eta", pt.eta},
                           {"witness", {{"m", pt.witness.m}, {"k", pt.witness.k}, {"l", pt.witness.l}}}});
    return json{{"p", set.p}, {"phi", set.phi}, {"points", pts}};
}

json to_json(const divisor_sum_report& rep) {
    const char* verdict = rep.verdict == divisor_verdict::convergent_evidence
                              ? "convergent_evidence"
                              : rep.verdict == divisor_verdict::pole_hit ? "pole_hit"
                                                                         : "divergent_evidence";
    json j{{"eta", rep.eta},
           {"I", rep.I},
           {"J_trunc", rep.j_trunc},
           {"partial", rep.partial},
           {"partial_half", rep.partial_half},
           {"pole_count", rep.pole_count},
           {"verdict", verdict}};
    if (rep.tail_certificate) j["tail_certificate"] = *rep.tail_certificate;
    return j;
}

json to_json(const eta_profile_entry& entry) {
    json per_i = json::array();
    for (const auto& r : entry.per_i) per_i.push_back(to_json(r));
    return json{{"eta", entry.eta},
                {"max_partial", entry.max_partial},
                {"pole_count", entry.pole_count},
                {"near_frequency", entry.near_frequency},
                {"per_I", per_i}};
}

} // namespace wvn
