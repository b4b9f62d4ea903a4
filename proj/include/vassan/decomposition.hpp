#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vassan/core.hpp"
#include "vassan/graph.hpp"

namespace vassan {

// Condensation of a demonic VASS, vertices numbered in topological order.
struct SccDag {
    std::vector<std::vector<std::size_t>> members;  // sorted state indices
    std::vector<std::size_t> component_of;          // state -> vertex
    std::vector<std::vector<std::size_t>> successors;
    std::vector<std::vector<std::size_t>> predecessors;
    std::vector<bool> root;

    std::size_t size() const { return members.size(); }
    bool is_leaf(std::size_t v) const { return successors.at(v).empty(); }
    DagView view() const { return {successors, root}; }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& s : successors) e += s.size();
        return e;
    }
};

namespace detail {

// Groups states into components of the graph restricted to `usable` transitions whose endpoints
// are both `inside`. States outside that relation end up as singletons.
inline std::vector<std::size_t> class_partition(const CounterVass& vass, const std::vector<bool>& usable,
                                                const std::vector<bool>& inside, std::size_t* count) {
    std::vector<std::vector<std::size_t>> adj(vass.state_count());
    for (std::size_t t = 0; t < vass.transition_count(); ++t) {
        const auto& tr = vass.transition(t);
        if (usable[t] && inside[tr.source] && inside[tr.target]) adj[tr.source].push_back(tr.target);
    }
    return strongly_connected_components(adj, count);
}

inline void build_class_edges(const CounterVass& vass, const std::vector<bool>& usable,
                              const std::vector<std::size_t>& class_of, std::size_t count,
                              std::vector<std::vector<std::size_t>>& succ,
                              std::vector<std::vector<std::size_t>>& pred) {
    std::vector<std::set<std::size_t>> s(count), p(count);
    for (std::size_t t = 0; t < vass.transition_count(); ++t) {
        if (!usable[t]) continue;
        const auto& tr = vass.transition(t);
        auto a = class_of[tr.source], b = class_of[tr.target];
        if (a == b) continue;
        s[a].insert(b);
        p[b].insert(a);
    }
    succ.assign(count, {});
    pred.assign(count, {});
    for (std::size_t i = 0; i < count; ++i) {
        succ[i].assign(s[i].begin(), s[i].end());
        pred[i].assign(p[i].begin(), p[i].end());
    }
}

}  // namespace detail

inline SccDag scc_dag(const CounterVass& vass) {
    if (!vass.is_demonic()) throw ModelError("scc_dag requires a demonic VASS");
    std::size_t count = 0;
    std::vector<bool> all_t(vass.transition_count(), true), all_s(vass.state_count(), true);
    SccDag dag;
    dag.component_of = detail::class_partition(vass, all_t, all_s, &count);
    dag.members.assign(count, {});
    for (std::size_t s = 0; s < vass.state_count(); ++s) dag.members[dag.component_of[s]].push_back(s);
    detail::build_class_edges(vass, all_t, dag.component_of, count, dag.successors, dag.predecessors);
    dag.root.assign(count, false);
    if (vass.initial_states().empty()) {
        for (std::size_t v = 0; v < count; ++v) dag.root[v] = dag.predecessors[v].empty();
    } else {
        for (auto s : vass.initial_states()) dag.root[dag.component_of.at(s)] = true;
    }
    return dag;
}

// Class graph of mutual reachability through demonic states; may be cyclic for games.
struct ClassGraph {
    std::vector<std::vector<std::size_t>> members;
    std::vector<std::size_t> class_of;
    std::vector<std::vector<std::size_t>> successors;
    std::vector<Player> tag;

    std::size_t size() const { return members.size(); }
};

inline ClassGraph demonic_decomposition(const CounterVass& game) {
    std::vector<bool> usable(game.transition_count(), true), demonic(game.state_count());
    for (std::size_t s = 0; s < game.state_count(); ++s) demonic[s] = game.owner(s) == Player::demon;
    std::size_t count = 0;
    ClassGraph g;
    g.class_of = detail::class_partition(game, usable, demonic, &count);
    g.members.assign(count, {});
    for (std::size_t s = 0; s < game.state_count(); ++s) g.members[g.class_of[s]].push_back(s);
    std::vector<std::vector<std::size_t>> pred;
    detail::build_class_edges(game, usable, g.class_of, count, g.successors, pred);
    g.tag.assign(count, Player::demon);
    for (std::size_t c = 0; c < count; ++c)
        if (game.owner(g.members[c].front()) == Player::angel) g.tag[c] = Player::angel;
    return g;
}

using LockingSet = std::vector<std::size_t>;  // sorted transition indices with angelic sources

struct LockingVertex {
    std::size_t representative = 0;          // least state name in the class
    std::vector<std::size_t> members;        // sorted state indices
    LockingSet locks;
    Player tag = Player::demon;
    std::vector<std::size_t> internal;       // transitions of A_L inside the class
};

struct LockingDecomposition {
    std::vector<LockingVertex> vertices;
    std::vector<std::vector<std::size_t>> successors;
    // For angelic vertices: the transition locked by each outgoing edge (parallel to successors).
    std::vector<std::vector<std::size_t>> edge_transition;
    std::vector<std::size_t> initial;
    std::vector<bool> is_initial;

    std::size_t size() const { return vertices.size(); }
    DagView view() const { return {successors, is_initial}; }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& s : successors) e += s.size();
        return e;
    }
};

struct LockingOptions {
    std::size_t vertex_budget = 100000;
};

namespace detail {

struct LockedView {
    std::vector<std::size_t> class_of;
    std::vector<std::vector<std::size_t>> members;
    std::vector<bool> usable;
    std::vector<bool> demonic;  // demonic in A_L (original demonic states plus locked angelic ones)
};

inline LockedView locked_view(const CounterVass& game, const LockingSet& locks) {
    LockedView view;
    view.usable.assign(game.transition_count(), true);
    view.demonic.assign(game.state_count(), false);
    for (std::size_t s = 0; s < game.state_count(); ++s) view.demonic[s] = game.owner(s) == Player::demon;
    for (auto t : locks) {
        auto src = game.transition(t).source;
        view.demonic[src] = true;
        for (auto other : game.outgoing(src))
            if (other != t) view.usable[other] = false;
    }
    std::size_t count = 0;
    view.class_of = class_partition(game, view.usable, view.demonic, &count);
    view.members.assign(count, {});
    for (std::size_t s = 0; s < game.state_count(); ++s) view.members[view.class_of[s]].push_back(s);
    return view;
}

}  // namespace detail

inline LockingDecomposition locking_decomposition(const CounterVass& game, const LockingOptions& opts = {}) {
    LockingDecomposition out;
    std::map<LockingSet, detail::LockedView> views;
    std::map<std::pair<std::size_t, LockingSet>, std::size_t> ids;
    std::vector<std::pair<std::size_t, LockingSet>> pending;  // (state, L) per vertex awaiting expansion

    auto view_for = [&](const LockingSet& locks) -> const detail::LockedView& {
        auto it = views.find(locks);
        if (it == views.end()) it = views.emplace(locks, detail::locked_view(game, locks)).first;
        return it->second;
    };

    auto intern = [&](std::size_t state, const LockingSet& locks) -> std::size_t {
        const auto& view = view_for(locks);
        const auto& cls = view.members[view.class_of[state]];
        std::size_t rep = cls.front();
        for (auto s : cls)
            if (game.state_name(s) < game.state_name(rep)) rep = s;
        auto key = std::make_pair(rep, locks);
        if (auto it = ids.find(key); it != ids.end()) return it->second;
        if (out.vertices.size() >= opts.vertex_budget)
            throw BudgetExceeded("locking decomposition exceeds " + std::to_string(opts.vertex_budget) + " vertices",
                                 out.vertices.size());
        LockingVertex vx;
        vx.representative = rep;
        vx.members = cls;
        vx.locks = locks;
        vx.tag = view.demonic[state] ? Player::demon : Player::angel;
        if (vx.tag == Player::demon) {
            for (auto s : cls)
                for (auto t : game.outgoing(s))
                    if (view.usable[t] && view.class_of[game.transition(t).target] == view.class_of[s])
                        vx.internal.push_back(t);
            std::sort(vx.internal.begin(), vx.internal.end());
        }
        out.vertices.push_back(std::move(vx));
        out.successors.emplace_back();
        out.edge_transition.emplace_back();
        pending.push_back(key);
        return ids[key] = out.vertices.size() - 1;
    };

    for (std::size_t p = 0; p < game.state_count(); ++p) {
        auto id = intern(p, {});
        if (std::find(out.initial.begin(), out.initial.end(), id) == out.initial.end()) out.initial.push_back(id);
    }
    for (std::size_t next = 0; next < out.vertices.size(); ++next) {
        const auto locks = out.vertices[next].locks;
        const auto members = out.vertices[next].members;
        if (out.vertices[next].tag == Player::angel) {
            const auto p = members.front();
            for (auto t : game.outgoing(p)) {
                LockingSet grown = locks;
                grown.insert(std::lower_bound(grown.begin(), grown.end(), t), t);
                auto w = intern(game.transition(t).target, grown);
                out.successors[next].push_back(w);
                out.edge_transition[next].push_back(t);
            }
        } else {
            const auto& view = view_for(locks);
            std::set<std::size_t> targets;
            for (auto s : members)
                for (auto t : game.outgoing(s)) {
                    auto q = game.transition(t).target;
                    if (view.usable[t] && view.class_of[q] != view.class_of[s]) targets.insert(q);
                }
            std::set<std::size_t> seen;
            for (auto q : targets) {
                auto w = intern(q, locks);
                if (seen.insert(w).second) {
                    out.successors[next].push_back(w);
                    out.edge_transition[next].push_back(npos);
                }
            }
        }
    }
    out.is_initial.assign(out.vertices.size(), false);
    for (auto v : out.initial) out.is_initial[v] = true;
    return out;
}

// Sub-VASS formed by a set of states and a set of transitions between them. States keep their
// names and relative order; every state is tagged demonic.
inline CounterVass component_vass(const CounterVass& vass, const std::vector<std::size_t>& members,
                                  const std::vector<std::size_t>& transitions) {
    std::vector<StateInfo> states;
    std::map<std::size_t, std::size_t> local;
    for (auto s : members) {
        local[s] = states.size();
        states.push_back({vass.state_name(s), Player::demon});
    }
    std::vector<Transition> ts;
    for (auto t : transitions) {
        const auto& tr = vass.transition(t);
        ts.push_back({local.at(tr.source), tr.update, local.at(tr.target)});
    }
    return CounterVass(vass.counters(), std::move(states), std::move(ts));
}

inline std::vector<std::size_t> internal_transitions(const CounterVass& vass, const std::vector<std::size_t>& members) {
    std::set<std::size_t> in(members.begin(), members.end());
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < vass.transition_count(); ++t) {
        const auto& tr = vass.transition(t);
        if (in.count(tr.source) && in.count(tr.target)) out.push_back(t);
    }
    return out;
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string state_list(const CounterVass& vass, const std::vector<std::size_t>& members) {
    std::string out = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) out += ",";
        out += vass.state_name(members[i]);
    }
    return out + "}";
}
}  // namespace detail

inline std::string to_dot(const SccDag& dag, const CounterVass& vass) {
    std::ostringstream os;
    os << "digraph scc {\n";
    for (std::size_t v = 0; v < dag.size(); ++v)
        os << "  v" << v << " [label=\"" << detail::dot_escape(detail::state_list(vass, dag.members[v]))
           << "\\nL=0 demonic\"" << (dag.root[v] ? ", peripheries=2" : "") << "];\n";
    for (std::size_t v = 0; v < dag.size(); ++v)
        for (auto w : dag.successors[v]) os << "  v" << v << " -> v" << w << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string to_dot(const ClassGraph& g, const CounterVass& vass) {
    std::ostringstream os;
    os << "digraph classes {\n";
    for (std::size_t v = 0; v < g.size(); ++v)
        os << "  v" << v << " [label=\"" << detail::dot_escape(detail::state_list(vass, g.members[v])) << "\\nL=0 "
           << player_name(g.tag[v]) << "\"" << (g.tag[v] == Player::angel ? ", shape=box" : "") << "];\n";
    for (std::size_t v = 0; v < g.size(); ++v)
        for (auto w : g.successors[v]) os << "  v" << v << " -> v" << w << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string to_dot(const LockingDecomposition& g, const CounterVass& vass) {
    std::ostringstream os;
    os << "digraph locking {\n";
    for (std::size_t v = 0; v < g.size(); ++v) {
        const auto& vx = g.vertices[v];
        os << "  v" << v << " [label=\"" << detail::dot_escape(detail::state_list(vass, vx.members))
           << "\\nL=" << vx.locks.size() << " " << player_name(vx.tag) << "\""
           << (vx.tag == Player::angel ? ", shape=box" : "") << (g.is_initial[v] ? ", peripheries=2" : "")
           << "];\n";
    }
    for (std::size_t v = 0; v < g.size(); ++v)
        for (std::size_t i = 0; i < g.successors[v].size(); ++i) {
            os << "  v" << v << " -> v" << g.successors[v][i];
            if (g.edge_transition[v][i] != npos) os << " [label=\"t" << g.edge_transition[v][i] << "\"]";
            os << ";\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace vassan
