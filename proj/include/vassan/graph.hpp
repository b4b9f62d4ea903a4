#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "vassan/core.hpp"

namespace vassan {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

// Iterative Tarjan. Returns the component id of every node; ids are assigned so that every edge
// between different components goes from a smaller id to a larger one (topological order).
inline std::vector<std::size_t> strongly_connected_components(const std::vector<std::vector<std::size_t>>& adj,
                                                              std::size_t* component_count = nullptr) {
    const std::size_t n = adj.size();
    std::vector<std::size_t> index(n, npos), low(n, 0), comp(n, npos);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next edge position)
    std::size_t counter = 0, found = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != npos) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < adj[v].size()) {
                std::size_t w = adj[v][pos++];
                if (index[w] == npos) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = found;
                } while (w != v);
                ++found;
            }
            std::size_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    // Tarjan completes sink components first; flip to get a topological numbering.
    for (auto& c : comp) c = found - 1 - c;
    if (component_count) *component_count = found;
    return comp;
}

// Minimal read-only view of a finite DAG shared by the decompositions.
struct DagView {
    std::vector<std::vector<std::size_t>> successors;
    std::vector<bool> root;

    std::size_t size() const { return successors.size(); }
    bool is_sink(std::size_t v) const { return successors.at(v).empty(); }
};

// Kahn ordering; throws if the graph has a cycle.
inline std::vector<std::size_t> topological_order(const DagView& dag) {
    std::vector<std::size_t> indeg(dag.size(), 0), order;
    for (const auto& succ : dag.successors)
        for (auto w : succ) ++indeg[w];
    std::vector<std::size_t> ready;
    for (std::size_t v = dag.size(); v-- > 0;)
        if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        auto v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (auto w : dag.successors[v])
            if (--indeg[w] == 0) ready.push_back(w);
    }
    if (order.size() != dag.size()) throw ModelError("graph is not acyclic");
    return order;
}

inline bool is_acyclic(const DagView& dag) {
    try {
        topological_order(dag);
        return true;
    } catch (const ModelError&) {
        return false;
    }
}

// Number of distinct paths from any root to `leaf`.
inline BigInt path_degree(const DagView& dag, std::size_t leaf) {
    if (leaf >= dag.size()) throw ModelError("vertex out of range");
    if (!dag.is_sink(leaf)) throw ModelError("vertex " + std::to_string(leaf) + " is not a sink");
    std::vector<BigInt> count(dag.size(), 0);
    for (auto v : topological_order(dag)) {
        if (dag.root[v]) count[v] += 1;
        if (count[v] == 0) continue;
        for (auto w : dag.successors[v]) count[w] += count[v];
    }
    return count[leaf];
}

struct PathEnumeration {
    std::vector<std::vector<std::size_t>> paths;
    bool truncated = false;
};

// Depth-first enumeration of maximal root-to-sink paths in lexicographic vertex order. The
// callback returns false to stop early; the function returns false if stopped.
inline bool for_each_root_path(const DagView& dag, const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::vector<std::size_t>> sorted(dag.size());
    for (std::size_t v = 0; v < dag.size(); ++v) {
        sorted[v] = dag.successors[v];
        std::sort(sorted[v].begin(), sorted[v].end());
        sorted[v].erase(std::unique(sorted[v].begin(), sorted[v].end()), sorted[v].end());
    }
    std::vector<std::size_t> path;
    std::vector<std::size_t> cursor;
    for (std::size_t r = 0; r < dag.size(); ++r) {
        if (!dag.root[r]) continue;
        path.assign(1, r);
        cursor.assign(1, 0);
        while (!path.empty()) {
            auto v = path.back();
            if (sorted[v].empty()) {
                if (!visit(path)) return false;
                path.pop_back();
                cursor.pop_back();
                continue;
            }
            auto& pos = cursor.back();
            if (pos < sorted[v].size()) {
                auto w = sorted[v][pos++];
                path.push_back(w);
                cursor.push_back(0);
            } else {
                path.pop_back();
                cursor.pop_back();
            }
        }
    }
    return true;
}

inline PathEnumeration enumerate_root_paths(const DagView& dag, std::size_t budget) {
    if (budget == 0) throw ModelError("path budget must be at least 1");
    PathEnumeration out;
    for_each_root_path(dag, [&](const std::vector<std::size_t>& p) {
        if (out.paths.size() == budget) {
            out.truncated = true;
            return false;
        }
        out.paths.push_back(p);
        return true;
    });
    return out;
}

}  // namespace vassan
