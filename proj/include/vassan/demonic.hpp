#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vassan/core.hpp"
#include "vassan/decomposition.hpp"
#include "vassan/graph.hpp"
#include "vassan/growth.hpp"
#include "vassan/growth_vector.hpp"

namespace vassan {

// Growth function of one DAG vertex.
using VertexGrowth = std::function<GrowthVector(std::size_t vertex, const GrowthVector& v)>;

struct VectOptions {
    std::size_t budget = 4096;  // vectors per vertex
    // Counters whose values are queried. Empty means all counters.
    std::vector<bool> focus;
    // Per vertex: counters updated inside the vertex. When provided, any component that is
    // neither in focus nor updated by a strictly later vertex is reset to 1 after the step,
    // because no later growth step can observe it.
    std::vector<std::vector<bool>> touched;
};

struct VectOrigin {
    std::size_t vertex = npos;  // predecessor vertex, npos for the root case
    std::size_t index = npos;   // position of the source vector in the predecessor's set
};

struct VectTable {
    std::vector<std::vector<GrowthVector>> sets;  // sorted, deduplicated
    std::vector<std::vector<VectOrigin>> origin;  // parallel to sets
    std::vector<std::vector<bool>> keep;          // components kept by the liveness projection
};

namespace detail {

inline bool vector_less(const GrowthVector& a, const GrowthVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline std::vector<std::vector<bool>> keep_masks(const SccDag& dag, std::size_t dim, const VectOptions& opts) {
    const std::size_t n = dag.size();
    std::vector<std::vector<bool>> keep(n, std::vector<bool>(dim, true));
    if (opts.touched.empty()) return keep;
    if (opts.touched.size() != n) throw ModelError("touched table does not match the DAG");
    auto order = topological_order(dag.view());
    std::vector<std::vector<bool>> later(n, std::vector<bool>(dim, false));  // touched strictly after
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        for (auto s : dag.successors[*it])
            for (std::size_t c = 0; c < dim; ++c)
                if (later[s][c] || opts.touched[s][c]) later[*it][c] = true;
    }
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t c = 0; c < dim; ++c) keep[v][c] = (opts.focus.empty() || opts.focus[c]) || later[v][c];
    return keep;
}

inline GrowthVector project(GrowthVector v, const std::vector<bool>& keep) {
    for (std::size_t c = 0; c < v.size(); ++c)
        if (!keep[c]) v[c] = GrowthExponent::poly(1);
    return v;
}

}  // namespace detail

// Propagates growth vectors from the roots through the DAG in topological order.
inline VectTable compute_vect(const SccDag& dag, std::size_t dim, const VertexGrowth& growth, const VectOptions& opts = {}) {
    if (!opts.focus.empty() && opts.focus.size() != dim) throw ModelError("focus mask has the wrong dimension");
    const std::size_t n = dag.size();
    VectTable table;
    table.sets.assign(n, {});
    table.origin.assign(n, {});
    table.keep = detail::keep_masks(dag, dim, opts);
    for (auto v : topological_order(dag.view())) {
        std::vector<std::pair<GrowthVector, VectOrigin>> found;
        if (dag.root[v]) {
            found.push_back({detail::project(growth(v, unit_growth(dim)), table.keep[v]), {}});
        } else {
            for (auto p : dag.predecessors[v])
                for (std::size_t i = 0; i < table.sets[p].size(); ++i)
                    found.push_back({detail::project(growth(v, table.sets[p][i]), table.keep[v]), {p, i}});
        }
        std::stable_sort(found.begin(), found.end(),
                         [](const auto& a, const auto& b) { return detail::vector_less(a.first, b.first); });
        for (std::size_t i = 0; i < found.size(); ++i) {
            if (i && found[i].first == found[i - 1].first) continue;
            if (table.sets[v].size() >= opts.budget)
                throw BudgetExceeded("vector set of vertex " + std::to_string(v) + " exceeds the budget",
                                     table.sets[v].size());
            table.sets[v].push_back(found[i].first);
            table.origin[v].push_back(found[i].second);
        }
    }
    return table;
}

// The DAG of a demonic VASS together with one strongly connected sub-VASS per vertex.
struct DemonicModel {
    CounterVass vass;
    SccDag dag;
    std::vector<CounterVass> components;
    std::vector<std::vector<std::size_t>> internal;  // global indices of each component's transitions
    std::vector<std::vector<bool>> touched;

    explicit DemonicModel(CounterVass v) : vass(std::move(v)), dag(scc_dag(vass)) {
        for (std::size_t i = 0; i < dag.size(); ++i) {
            const auto& members = dag.members[i];
            auto internal = internal_transitions(vass, members);
            components.push_back(component_vass(vass, members, internal));
            std::vector<bool> t(vass.dimension(), false);
            for (auto tr : internal)
                for (std::size_t c = 0; c < vass.dimension(); ++c)
                    if (vass.transition(tr).update[c] != 0) t[c] = true;
            touched.push_back(std::move(t));
            this->internal.push_back(std::move(internal));
        }
    }
};

struct DemonicAnalysis {
    DemonicModel model;
    VectTable table;
};

inline std::vector<bool> focus_mask(std::size_t dim, const std::vector<std::size_t>& counters) {
    std::vector<bool> m(dim, false);
    for (auto c : counters) m.at(c) = true;
    return m;
}

// Runs the propagation on a demonic VASS. `focus` restricts which counters must stay exact;
// empty means every counter.
inline DemonicAnalysis analyze_demonic(const CounterVass& vass, GrowthEngine& engine,
                                       const std::vector<std::size_t>& focus = {}, std::size_t budget = 4096) {
    require_valid(vass);
    DemonicModel model(vass);
    VectOptions opts;
    opts.budget = budget;
    if (!focus.empty()) opts.focus = focus_mask(vass.dimension(), focus);
    opts.touched = model.touched;
    auto growth = [&](std::size_t v, const GrowthVector& in) { return engine(model.components[v], in); };
    auto table = compute_vect(model.dag, vass.dimension(), growth, opts);
    return {std::move(model), std::move(table)};
}

enum class QueryMode { upper, lower, theta };

inline const char* mode_name(QueryMode m) {
    switch (m) {
        case QueryMode::upper: return "upper";
        case QueryMode::lower: return "lower";
        case QueryMode::theta: return "theta";
    }
    return "?";
}

inline QueryMode parse_mode(const std::string& s) {
    if (s == "upper" || s == "O") return QueryMode::upper;
    if (s == "lower" || s == "Omega") return QueryMode::lower;
    if (s == "theta" || s == "Theta") return QueryMode::theta;
    throw ModelError("unknown query mode '" + s + "'");
}

struct QueryResult {
    bool verdict = false;
    GrowthExponent exponent;           // maximum of the counter's component over the table
    std::vector<std::size_t> witness;  // DAG vertices from a root to the witnessing vertex
    GrowthVector witness_vector;       // vector held at the last witness vertex
    std::string witness_role;          // "realizes-lower", "violates-upper", or empty
};

// DAG path ending at (vertex, index), following recorded origins back to a root.
inline std::vector<std::size_t> trace_origin(const VectTable& table, std::size_t vertex, std::size_t index) {
    std::vector<std::size_t> path;
    while (vertex != npos) {
        path.push_back(vertex);
        auto o = table.origin[vertex][index];
        vertex = o.vertex;
        index = o.index;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

inline QueryResult query_table(const VectTable& table, std::size_t counter, std::uint32_t k, QueryMode mode) {
    if (k == 0) throw ModelError("exponent k must be at least 1");
    QueryResult res;
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t v = 0; v < table.sets.size(); ++v)
        for (std::size_t i = 0; i < table.sets[v].size(); ++i) {
            const auto& e = table.sets[v][i].at(counter);
            if (!best || e > table.sets[best->first][best->second][counter]) best = {{v, i}};
        }
    if (!best) throw ModelError("no reachable vertex carries a growth vector");
    res.exponent = table.sets[best->first][best->second][counter];
    const auto K = GrowthExponent::poly(k);
    const bool lower = res.exponent >= K, upper = res.exponent <= K;
    res.verdict = mode == QueryMode::lower ? lower : mode == QueryMode::upper ? upper : (lower && upper);
    const bool explain_violation = !upper && mode != QueryMode::lower;
    if (lower || explain_violation) {
        std::size_t v = best->first, i = best->second;
        res.witness = trace_origin(table, v, i);
        res.witness_vector = table.sets[v][i];
        res.witness_role = explain_violation ? "violates-upper" : "realizes-lower";
    }
    return res;
}

inline QueryResult query_counter(const DemonicAnalysis& a, std::size_t counter, std::uint32_t k, QueryMode mode) {
    if (counter >= a.model.vass.dimension()) throw ModelError("unknown counter index");
    return query_table(a.table, counter, k, mode);
}

inline QueryResult query_counter(const CounterVass& vass, const std::string& counter, std::uint32_t k, QueryMode mode,
                                 GrowthEngine& engine) {
    auto c = vass.counter_index(counter);
    auto a = analyze_demonic(vass, engine, {c});
    return query_counter(a, c, k, mode);
}

// Length queries run on the step-counted VASS; the step counter is the last counter.
inline DemonicAnalysis analyze_length(const CounterVass& vass, GrowthEngine& engine) {
    auto b = add_step_counter(vass);
    return analyze_demonic(b, engine, {b.dimension() - 1});
}

inline QueryResult query_length(const CounterVass& vass, std::uint32_t k, QueryMode mode, GrowthEngine& engine) {
    auto a = analyze_length(vass, engine);
    return query_counter(a, a.model.vass.dimension() - 1, k, mode);
}

// Counter exponent (or length exponent) as the maximum over the table.
inline GrowthExponent counter_exponent(const DemonicAnalysis& a, std::size_t counter) {
    return query_table(a.table, counter, 1, QueryMode::lower).exponent;
}

// Recomputes v_0..v_m along a DAG path with the analysis' projection. The first vertex must be a root.
inline std::vector<GrowthVector> replay_path(const DemonicAnalysis& a, const std::vector<std::size_t>& path,
                                             GrowthEngine& engine) {
    if (path.empty() || !a.model.dag.root.at(path.front())) throw ModelError("witness path must start at a root");
    std::vector<GrowthVector> out{unit_growth(a.model.vass.dimension())};
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) {
            const auto& succ = a.model.dag.successors.at(path[i - 1]);
            if (std::find(succ.begin(), succ.end(), path[i]) == succ.end()) throw ModelError("witness path is not a DAG path");
        }
        out.push_back(detail::project(engine(a.model.components[path[i]], out.back()), a.table.keep[path[i]]));
    }
    return out;
}

struct TractabilityReport {
    std::vector<std::pair<std::size_t, BigInt>> leaf_degree;  // (leaf vertex, root-path count)
    BigInt max_degree = 0;
    bool tractable = false;
};

inline TractabilityReport tractability_report(const SccDag& dag, const BigInt& bound = 16) {
    TractabilityReport r;
    for (std::size_t v = 0; v < dag.size(); ++v) {
        if (!dag.is_leaf(v)) continue;
        auto deg = path_degree(dag.view(), v);
        r.leaf_degree.push_back({v, deg});
        r.max_degree = std::max(r.max_degree, deg);
    }
    r.tractable = r.max_degree <= bound;
    return r;
}

inline TractabilityReport tractability_report(const CounterVass& vass, const BigInt& bound = 16) {
    return tractability_report(scc_dag(vass), bound);
}

}  // namespace vassan
