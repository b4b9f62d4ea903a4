#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "vassan/demonic.hpp"
#include "vassan/game.hpp"
#include "vassan/io.hpp"
#include "vassan/oracle.hpp"

namespace vassan {

using Json = nlohmann::ordered_json;

inline constexpr const char* report_schema_version = "1.0";

inline Json growth_json(const GrowthVector& v) {
    Json a = Json::array();
    for (const auto& e : v) {
        if (e.is_infinite()) a.push_back("inf");
        else a.push_back(e.degree());
    }
    return a;
}

inline Json exponent_json(const GrowthExponent& e) {
    if (e.is_infinite()) return "inf";
    return e.degree();
}

inline Json report_header(const CounterVass& vass, const std::string& command) {
    Json j;
    j["schema_version"] = report_schema_version;
    j["command"] = command;
    j["input"] = {{"digest", "fnv1a64:" + hex64(fnv1a64(emit_vass(vass)))},
                  {"states", vass.state_count()},
                  {"counters", vass.counters()},
                  {"transitions", vass.transition_count()},
                  {"angelic_states", vass.angelic_states().size()}};
    j["queries"] = Json::array();
    j["saturation"] = Json::array();
    return j;
}

inline std::vector<std::string> state_names(const CounterVass& vass, const std::vector<std::size_t>& members) {
    std::vector<std::string> out;
    for (auto s : members) out.push_back(vass.state_name(s));
    return out;
}

// SCCs with their vector sets, the Degree table, and circulation witnesses of exponential counters.
inline Json demonic_section(const DemonicAnalysis& a, GrowthEngine& engine) {
    const auto& m = a.model;
    Json sccs = Json::array();
    auto report = tractability_report(m.dag);
    for (std::size_t v = 0; v < m.dag.size(); ++v) {
        Json s;
        s["id"] = v;
        s["states"] = state_names(m.vass, m.dag.members[v]);
        s["root"] = static_cast<bool>(m.dag.root[v]);
        s["leaf"] = m.dag.is_leaf(v);
        s["successors"] = m.dag.successors[v];
        Json vectors = Json::array();
        for (const auto& vec : a.table.sets[v]) vectors.push_back(growth_json(vec));
        s["vectors"] = vectors;
        Json circ = Json::array();
        std::vector<GrowthVector> inputs;
        if (m.dag.root[v]) inputs.push_back(unit_growth(m.vass.dimension()));
        else
            for (auto p : m.dag.predecessors[v])
                for (const auto& vec : a.table.sets[p]) inputs.push_back(vec);
        for (const auto& in : inputs) {
            auto step = engine.step(m.components[v], in);
            for (std::size_t i = 0; i < step.exponential.size(); ++i) {
                Json w;
                w["counter"] = m.vass.counter_name(step.exponential[i]);
                w["input"] = growth_json(in);
                Json flow = Json::array();
                const auto& mult = step.witnesses[i].multiplicity;
                for (std::size_t t = 0; t < mult.size(); ++t)
                    if (mult[t] != 0) flow.push_back({{"transition", m.internal[v][t]}, {"multiplicity", mult[t].str()}});
                w["circulation"] = flow;
                circ.push_back(w);
            }
        }
        s["exponential_witnesses"] = circ;
        sccs.push_back(s);
    }
    Json degrees = Json::array();
    for (const auto& [leaf, deg] : report.leaf_degree) degrees.push_back({{"leaf", leaf}, {"degree", deg.str()}});
    return {{"scc_count", m.dag.size()},
            {"edge_count", m.dag.edge_count()},
            {"sccs", sccs},
            {"degree", degrees},
            {"max_degree", report.max_degree.str()},
            {"tractable", report.tractable}};
}

inline Json query_json(const std::string& measure, QueryMode mode, std::uint32_t k, const QueryResult& r) {
    Json j;
    j["measure"] = measure;
    j["mode"] = mode_name(mode);
    j["k"] = k;
    j["verdict"] = r.verdict;
    j["exponent"] = exponent_json(r.exponent);
    if (r.witness.empty()) {
        j["witness"] = nullptr;
    } else {
        j["witness"] = {{"role", r.witness_role}, {"path", r.witness}, {"vector", growth_json(r.witness_vector)}};
    }
    return j;
}

inline Json strategy_json(const GameModel& m, const SimpleLockingStrategy& s) {
    Json a = Json::array();
    for (const auto& [prefix, t] : s.choice) {
        const auto& tr = m.game.transition(t);
        a.push_back({{"prefix", prefix},
                     {"transition", t},
                     {"source", m.game.state_name(tr.source)},
                     {"target", m.game.state_name(tr.target)}});
    }
    return a;
}

inline Json game_query_json(const std::string& measure, QueryMode mode, std::uint32_t k, const GameVerdict& v,
                            const GameModel& m) {
    Json j;
    j["measure"] = measure;
    j["mode"] = mode_name(mode);
    j["k"] = k;
    j["verdict"] = v.verdict;
    j["exponent"] = exponent_json(v.exponent);
    j["witness"] = nullptr;
    if (v.strategy) j["strategy"] = strategy_json(m, *v.strategy);
    return j;
}

inline Json locking_section(const GameModel& m) {
    std::size_t angelic = 0;
    for (const auto& v : m.ld.vertices) angelic += v.tag == Player::angel;
    return {{"vertices", m.ld.size()},
            {"edges", m.ld.edge_count()},
            {"angelic_vertices", angelic},
            {"initial_vertices", m.ld.initial.size()}};
}

inline Json cross_check_json(const std::string& measure, const std::vector<Sample>& samples, const FitResult& fit,
                             const GrowthExponent& symbolic) {
    Json pts = Json::array();
    for (const auto& s : samples) pts.push_back({{"n", s.n}, {"value", s.value}, {"saturated", s.saturated}});
    return {{"measure", measure},
            {"samples", pts},
            {"estimate", fit.estimate},
            {"k", fit.k},
            {"stable", fit.stable},
            {"symbolic", exponent_json(symbolic)},
            {"agrees", !symbolic.is_infinite() && symbolic.degree() == fit.k}};
}

}  // namespace vassan
