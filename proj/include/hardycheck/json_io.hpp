// json_io.hpp
// Report serialisation. Keys keep insertion order and every float is printed with 17
// significant digits, so identical inputs give byte-identical reports.

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "hardycheck/discrimination.hpp"
#include "hardycheck/geometry.hpp"
#include "hardycheck/ledger.hpp"
#include "hardycheck/lhv.hpp"
#include "hardycheck/postselect.hpp"
#include "hardycheck/qstate.hpp"
#include "hardycheck/sweep.hpp"
#include "hardycheck/wxhh.hpp"

namespace hardycheck {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_json(std::ostream& os, const json& j, int indent = 2, int depth = 0) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << pad << json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent, depth + 1);
        }
        os << "\n" << close_pad << "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        bool flat = true;
        for (const auto& e : j) flat = flat && !e.is_structured();
        if (flat) {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write_json(os, j[i], indent, depth + 1);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << ",\n";
            os << pad;
            write_json(os, j[i], indent, depth + 1);
        }
        os << "\n" << close_pad << "]";
        return;
    }
    case json::value_t::number_float: os << format_double(j.get<double>()); return;
    default: os << j.dump(); return;
    }
}

inline std::string to_text(const json& j) {
    std::ostringstream os;
    write_json(os, j);
    os << "\n";
    return os.str();
}

// Non-finite doubles become null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double number_from(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

// --- states and operators: [re, im] pairs in the basis order (++, +-, -+, --)

inline json to_json(complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const SingleKet& k) { return json::array({to_json(k[0]), to_json(k[1])}); }

inline json to_json(const BipartiteKet& k) {
    json a = json::array();
    for (auto z : k.amp) a.push_back(to_json(z));
    return a;
}

inline json to_json(const Operator2& m) {
    return json::array({json::array({to_json(m(0, 0)), to_json(m(0, 1))}), json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

inline complex complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline BipartiteKet bipartite_from(const json& j) {
    if (!j.is_array() || j.size() != 4) throw error(errc::invalid_input, "bipartite ket needs 4 amplitudes");
    return {complex_from(j[0]), complex_from(j[1]), complex_from(j[2]), complex_from(j[3])};
}

inline Operator2 operator_from(const json& j) {
    return {complex_from(j.at(0).at(0)), complex_from(j.at(0).at(1)), complex_from(j.at(1).at(0)), complex_from(j.at(1).at(1))};
}

// --- ledgers

inline json to_json(const Target& t) {
    switch (t.kind) {
    case TargetKind::exact: return number(t.value);
    case TargetKind::strictly_positive: return ">0";
    case TargetKind::non_positive: return "<=0";
    }
    return nullptr;
}

inline json to_json(const Ledger& l) {
    json claims = json::array();
    for (const auto& c : l.claims())
        claims.push_back(json{{"id", c.id},
                              {"description", c.description},
                              {"value", number(c.computed)},
                              {"target", to_json(c.target)},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}});
    json j{{"name", l.name()}, {"applicable", l.applicable}, {"all_pass", l.all_pass()}};
    if (!l.note.empty()) j["note"] = l.note;
    j["claims"] = claims;
    return j;
}

// --- geometry, POVM, gaps

inline json to_json(const ProofAngles& p) { return json{{"theta", p.theta}, {"alpha", p.alpha}, {"beta", p.beta}}; }

inline json to_json(const DerivedGeometry& g) {
    return json{{"gamma", g.gamma},
                {"delta", g.delta},
                {"epsilon", g.epsilon},
                {"M", g.m},
                {"q", g.q},
                {"r", g.r},
                {"s", g.s},
                {"delta_printed", number(g.delta_printed)},
                {"s_degenerate", g.s_degenerate}};
}

inline json to_json(const Povm& p) {
    json a = json::array();
    for (const auto& e : p.elements) a.push_back(json{{"label", std::string(to_string(e.label))}, {"operator", to_json(e.op)}});
    return a;
}

inline json to_json(const PovmCheck& c) {
    return json{{"completeness", c.completeness},
                {"min_eigenvalue", c.min_eigenvalue},
                {"max_eigenvalue", c.max_eigenvalue},
                {"hermiticity", c.hermiticity},
                {"misidentification", c.misidentification},
                {"success_plus", c.success_plus},
                {"success_minus", c.success_minus},
                {"valid", c.valid()}};
}

inline json to_json(const GapReport& g) {
    return json{{"version", std::string(to_string(g.version))},
                {"angles", to_json(g.angles)},
                {"p_contradiction", g.p_contradiction},
                {"p_inapplicable", g.p_inapplicable},
                {"gap", g.gap}};
}

inline json to_json(const TwoRoutes& r) {
    return json{{"via_trace", r.via_trace}, {"via_decomposition", r.via_decomposition}, {"disagreement", r.disagreement()}};
}

// --- sweep

inline json to_json(const GridSpec& g) {
    return json{{"theta_values", g.theta_values},
                {"alpha_steps", g.alpha_steps},
                {"beta_steps", g.beta_steps},
                {"alpha_offset", g.alpha_offset},
                {"beta_offset", g.beta_offset},
                {"margin", g.margin},
                {"top_k", g.top_k},
                {"keep_all", g.keep_all}};
}

inline GridSpec grid_from(const json& j) {
    GridSpec g;
    g.theta_values = j.at("theta_values").get<std::vector<double>>();
    g.alpha_steps = j.at("alpha_steps").get<int>();
    g.beta_steps = j.at("beta_steps").get<int>();
    g.alpha_offset = j.at("alpha_offset").get<double>();
    g.beta_offset = j.at("beta_offset").get<double>();
    g.margin = j.at("margin").get<double>();
    g.top_k = j.at("top_k").get<std::size_t>();
    g.keep_all = j.at("keep_all").get<bool>();
    return g;
}

inline json to_json(const Argmax& a) {
    if (!a.has_value()) return nullptr;
    return json{{"value", a.value}, {"index", a.index}, {"alpha", a.alpha}, {"beta", a.beta}};
}

inline Argmax argmax_from(const json& j) {
    Argmax a;
    if (j.is_null()) return a;
    a.value = j.at("value").get<double>();
    a.index = j.at("index").get<std::uint64_t>();
    a.alpha = j.at("alpha").get<double>();
    a.beta = j.at("beta").get<double>();
    return a;
}

inline json to_json(const SliceStats& s) {
    return json{{"theta", s.theta},
                {"points", s.points},
                {"skipped", s.skipped},
                {"max_gap_hardy", number(s.hardy.value)},
                {"argmax_hardy", to_json(s.hardy)},
                {"max_gap_goldstein", number(s.goldstein.value)},
                {"argmax_goldstein", to_json(s.goldstein)},
                {"max_mm1_deviation", s.max_mm1_deviation},
                {"max_mm2_deviation", s.max_mm2_deviation},
                {"max_delta_deviation", s.max_delta_deviation},
                {"delta_undefined", s.delta_undefined},
                {"max_route_deviation", s.max_route_deviation},
                {"min_probability", number(s.min_probability)},
                {"max_probability", number(s.max_probability)}};
}

inline SliceStats slice_from(const json& j) {
    SliceStats s;
    s.theta = j.at("theta").get<double>();
    s.points = j.at("points").get<std::uint64_t>();
    s.skipped = j.at("skipped").get<std::uint64_t>();
    s.hardy = argmax_from(j.at("argmax_hardy"));
    s.goldstein = argmax_from(j.at("argmax_goldstein"));
    s.max_mm1_deviation = j.at("max_mm1_deviation").get<double>();
    s.max_mm2_deviation = j.at("max_mm2_deviation").get<double>();
    s.max_delta_deviation = j.at("max_delta_deviation").get<double>();
    s.delta_undefined = j.at("delta_undefined").get<std::uint64_t>();
    s.max_route_deviation = j.at("max_route_deviation").get<double>();
    const double lo = number_from(j.at("min_probability"));
    const double hi = number_from(j.at("max_probability"));
    s.min_probability = std::isnan(lo) ? std::numeric_limits<double>::infinity() : lo;
    s.max_probability = std::isnan(hi) ? -std::numeric_limits<double>::infinity() : hi;
    return s;
}

inline json to_json(const PointEval& e) {
    return json{{"index", e.index},
                {"theta", e.angles.theta},
                {"alpha", e.angles.alpha},
                {"beta", e.angles.beta},
                {"p_ominus_ominus", e.p_ominus_ominus},
                {"p_inconclusive_minus", e.p_inconclusive_minus},
                {"p_inconclusive_ominus", e.p_inconclusive_ominus},
                {"gap_hardy", e.gap_hardy},
                {"gap_goldstein", e.gap_goldstein},
                {"mm1_deviation", e.mm1_deviation},
                {"mm2_deviation", e.mm2_deviation},
                {"delta_deviation", number(e.delta_deviation)},
                {"route_deviation", e.route_deviation}};
}

inline PointEval point_from(const json& j) {
    PointEval e;
    e.index = j.at("index").get<std::uint64_t>();
    e.angles = {j.at("theta").get<double>(), j.at("alpha").get<double>(), j.at("beta").get<double>()};
    e.p_ominus_ominus = j.at("p_ominus_ominus").get<double>();
    e.p_inconclusive_minus = j.at("p_inconclusive_minus").get<double>();
    e.p_inconclusive_ominus = j.at("p_inconclusive_ominus").get<double>();
    e.gap_hardy = j.at("gap_hardy").get<double>();
    e.gap_goldstein = j.at("gap_goldstein").get<double>();
    e.mm1_deviation = j.at("mm1_deviation").get<double>();
    e.mm2_deviation = j.at("mm2_deviation").get<double>();
    e.delta_deviation = number_from(j.at("delta_deviation"));
    e.route_deviation = j.at("route_deviation").get<double>();
    return e;
}

inline json to_json(const SweepResult& r) {
    json slices = json::array();
    for (const auto& s : r.slices) slices.push_back(to_json(s));
    json top = json::array();
    for (const auto& e : r.top) top.push_back(to_json(e));
    double mm2 = 0.0, delta = 0.0, route = 0.0, mm1 = 0.0;
    for (const auto& s : r.slices) {
        mm2 = std::max(mm2, s.max_mm2_deviation);
        delta = std::max(delta, s.max_delta_deviation);
        route = std::max(route, s.max_route_deviation);
        mm1 = std::max(mm1, s.max_mm1_deviation);
    }
    json j{{"grid", to_json(r.grid)}};
    j["shard"] = r.shard_count > 1 ? json(std::to_string(r.shard_index) + "/" + std::to_string(r.shard_count)) : json(nullptr);
    j["total_points"] = r.total_points();
    j["max_gap_hardy"] = number(r.max_gap(ProofVersion::hardy));
    j["max_gap_goldstein"] = number(r.max_gap(ProofVersion::goldstein));
    j["typo_report"] = json{{"max_mm2_printed_deviation", mm2},
                            {"max_delta_printed_deviation", delta},
                            {"max_mm1_direct_deviation", mm1},
                            {"max_route_disagreement", route}};
    j["per_slice"] = slices;
    j["top_points"] = top;
    if (r.grid.keep_all) {
        json all = json::array();
        for (const auto& e : r.all) all.push_back(to_json(e));
        j["points"] = all;
    }
    return j;
}

inline SweepResult sweep_from(const json& j) {
    SweepResult r;
    r.grid = grid_from(j.at("grid"));
    for (const auto& s : j.at("per_slice")) r.slices.push_back(slice_from(s));
    for (const auto& e : j.at("top_points")) r.top.push_back(point_from(e));
    if (j.contains("points"))
        for (const auto& e : j.at("points")) r.all.push_back(point_from(e));
    const auto& shard = j.at("shard");
    if (shard.is_string()) {
        const std::string s = shard.get<std::string>();
        const auto slash = s.find('/');
        r.shard_index = std::stoi(s.substr(0, slash));
        r.shard_count = std::stoi(s.substr(slash + 1));
    }
    return r;
}

inline std::string sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "index,theta,alpha,beta,p_ominus_ominus,p_inconclusive_minus,p_inconclusive_ominus,gap_hardy,gap_goldstein\n";
    const auto& rows = r.grid.keep_all ? r.all : r.top;
    for (const auto& e : rows)
        os << e.index << ',' << format_double(e.angles.theta) << ',' << format_double(e.angles.alpha) << ','
           << format_double(e.angles.beta) << ',' << format_double(e.p_ominus_ominus) << ','
           << format_double(e.p_inconclusive_minus) << ',' << format_double(e.p_inconclusive_ominus) << ','
           << format_double(e.gap_hardy) << ',' << format_double(e.gap_goldstein) << '\n';
    return os.str();
}

// --- interferometer

inline json to_json(const Setting& s) { return json{{"phase", s.phase}, {"transmittance", s.transmittance}}; }

// --- LHV

inline json to_json(const CorrelationTable& t) {
    json d = json::array();
    for (std::size_t s = 0; s < t.settings1.size(); ++s)
        for (std::size_t u = 0; u < t.settings2.size(); ++u)
            d.push_back(json{{"setting1", t.settings1[s]}, {"setting2", t.settings2[u]}, {"p", t.dist[s][u]}});
    return json{{"settings1", t.settings1},
                {"outcomes1", t.outcomes1},
                {"settings2", t.settings2},
                {"outcomes2", t.outcomes2},
                {"distributions", d}};
}

inline json to_json(const LhvVerdict& v) {
    json j{{"feasible", v.feasible},
           {"strategies", v.strategies},
           {"phase1_objective", v.phase1_objective},
           {"exact", v.exact}};
    if (v.feasible) {
        j["residual"] = v.residual;
        j["weights"] = v.weights;
    } else {
        j["certificate_value"] = v.certificate_value;
        j["certificate_max_strategy"] = v.certificate_max_strategy;
        j["certificate"] = v.certificate;
    }
    return j;
}

} // namespace hardycheck
