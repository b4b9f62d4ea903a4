#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vassan/core.hpp"
#include "vassan/decomposition.hpp"
#include "vassan/demonic.hpp"
#include "vassan/graph.hpp"
#include "vassan/growth.hpp"
#include "vassan/transform.hpp"

namespace vassan {

// A game prepared for the alternating analysis: normalized, decomposed, and with one
// strongly connected sub-VASS per demonic vertex of the locking decomposition.
struct GameModel {
    CounterVass game;
    LockingDecomposition ld;
    std::vector<CounterVass> components;             // empty VASS for angelic vertices
    std::vector<std::vector<bool>> keep;             // liveness projection per vertex
    std::vector<std::size_t> roots;                  // initial vertices considered

    GameModel(CounterVass g, const std::vector<std::size_t>& focus, const LockingOptions& opts = {})
        : game(is_normalized(g) ? std::move(g) : normalize_angelic(g)), ld(locking_decomposition(game, opts)) {
        require_valid(game);
        const std::size_t dim = game.dimension();
        std::vector<std::vector<bool>> touched;
        for (const auto& v : ld.vertices) {
            if (v.tag == Player::demon) components.push_back(component_vass(game, v.members, v.internal));
            else components.emplace_back();
            std::vector<bool> t(dim, false);
            for (auto tr : v.internal)
                for (std::size_t c = 0; c < dim; ++c)
                    if (game.transition(tr).update[c] != 0) t[c] = true;
            touched.push_back(std::move(t));
        }
        const std::size_t n = ld.size();
        std::vector<std::vector<bool>> later(n, std::vector<bool>(dim, false));
        auto order = topological_order(ld.view());
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            for (auto s : ld.successors[*it])
                for (std::size_t c = 0; c < dim; ++c)
                    if (later[s][c] || touched[s][c]) later[*it][c] = true;
        keep.assign(n, std::vector<bool>(dim, true));
        if (!focus.empty()) {
            auto f = focus_mask(dim, focus);
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t c = 0; c < dim; ++c) keep[v][c] = f[c] || later[v][c];
        }
        if (game.initial_states().empty()) {
            roots = ld.initial;
        } else {
            for (auto p : game.initial_states()) {
                auto id = initial_vertex_of(p);
                if (std::find(roots.begin(), roots.end(), id) == roots.end()) roots.push_back(id);
            }
        }
    }

    std::size_t initial_vertex_of(std::size_t state) const {
        for (auto v : ld.initial) {
            const auto& m = ld.vertices[v].members;
            if (std::find(m.begin(), m.end(), state) != m.end()) return v;
        }
        throw ModelError("state has no initial vertex");
    }

    // The vector after visiting `vertex` with incoming vector v.
    GrowthVector step(std::size_t vertex, const GrowthVector& v, GrowthEngine& engine) const {
        if (ld.vertices[vertex].tag == Player::angel) return detail::project(v, keep[vertex]);
        return detail::project(engine(components[vertex], v), keep[vertex]);
    }
};

// v_0..v_k along a path of the locking decomposition.
inline std::vector<GrowthVector> path_growth(const GameModel& m, const std::vector<std::size_t>& path, GrowthEngine& engine) {
    if (path.empty() || !m.ld.is_initial.at(path.front())) throw ModelError("path must start at an initial vertex");
    std::vector<GrowthVector> out{unit_growth(m.game.dimension())};
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) {
            const auto& succ = m.ld.successors.at(path[i - 1]);
            if (std::find(succ.begin(), succ.end(), path[i]) == succ.end()) throw ModelError("not a path of the decomposition");
        }
        out.push_back(m.step(path[i], out.back(), engine));
    }
    return out;
}

struct SimpleLockingStrategy {
    // Path prefix of the decomposition (ending at an angelic vertex) to the locked transition.
    std::map<std::vector<std::size_t>, std::size_t> choice;
};

struct OptimalExponent {
    std::vector<std::pair<std::size_t, GrowthExponent>> per_root;  // (vertex, value)
    GrowthExponent overall = GrowthExponent::poly(1);
    std::size_t memo_entries = 0;
};

class MinimaxSolver {
public:
    MinimaxSolver(const GameModel& m, std::size_t counter, GrowthEngine& engine, bool memoize = true)
        : m_(m), counter_(counter), engine_(engine), memoize_(memoize) {
        if (counter >= m.game.dimension()) throw ModelError("unknown counter index");
    }

    GrowthExponent value(std::size_t vertex, const GrowthVector& v) {
        std::string key;
        if (memoize_) {
            key = std::to_string(vertex) + "|" + to_string(v);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        const auto& succ = m_.ld.successors[vertex];
        GrowthExponent result;
        if (m_.ld.vertices[vertex].tag == Player::angel) {
            auto w = m_.step(vertex, v, engine_);
            result = GrowthExponent::infinity();
            for (auto s : succ) result = std::min(result, value(s, w));
            if (succ.empty()) result = w[counter_];
        } else {
            auto w = m_.step(vertex, v, engine_);
            result = w[counter_];
            for (auto s : succ) result = std::max(result, value(s, w));
        }
        if (memoize_) memo_.emplace(key, result);
        return result;
    }

    // Index into successors of the minimizing choice at an angelic vertex; ties go to the first.
    std::size_t best_choice(std::size_t vertex, const GrowthVector& v) {
        auto w = m_.step(vertex, v, engine_);
        const auto& succ = m_.ld.successors[vertex];
        std::size_t best = 0;
        GrowthExponent best_value = GrowthExponent::infinity();
        for (std::size_t j = 0; j < succ.size(); ++j) {
            auto val = value(succ[j], w);
            if (j == 0 || val < best_value) {
                best = j;
                best_value = val;
            }
        }
        return best;
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    const GameModel& m_;
    std::size_t counter_;
    GrowthEngine& engine_;
    bool memoize_;
    std::map<std::string, GrowthExponent> memo_;
};

inline OptimalExponent optimal_exponent(const GameModel& m, std::size_t counter, GrowthEngine& engine, bool memoize = true) {
    MinimaxSolver solver(m, counter, engine, memoize);
    OptimalExponent out;
    const auto one = unit_growth(m.game.dimension());
    for (auto r : m.roots) {
        auto val = solver.value(r, one);
        out.per_root.push_back({r, val});
        out.overall = std::max(out.overall, val);
    }
    out.memo_entries = solver.memo_size();
    return out;
}

// Convenience entry points on raw games. Length uses the step-counted, normalized game.
inline GameModel counter_game(const CounterVass& game, std::size_t counter, const LockingOptions& opts = {}) {
    return GameModel(game, {counter}, opts);
}

inline GameModel length_game(const CounterVass& game, const LockingOptions& opts = {}) {
    auto b = add_step_counter(game);
    return GameModel(b, {b.dimension() - 1}, opts);
}

inline std::size_t step_counter_index(const GameModel& m) { return m.game.dimension() - 1; }

struct GameVerdict {
    bool verdict = false;
    GrowthExponent exponent;
    std::optional<SimpleLockingStrategy> strategy;  // Angel strategy when the upper bound holds
};

// Walks every path consistent with the minimizing choices and records them.
inline SimpleLockingStrategy extract_strategy(const GameModel& m, std::size_t counter, GrowthEngine& engine,
                                              std::size_t budget = 100000) {
    MinimaxSolver solver(m, counter, engine);
    SimpleLockingStrategy strat;
    std::size_t nodes = 0;
    std::vector<std::size_t> prefix;
    std::function<void(std::size_t, const GrowthVector&)> walk = [&](std::size_t x, const GrowthVector& v) {
        if (++nodes > budget) throw BudgetExceeded("strategy tree exceeds the budget", nodes);
        prefix.push_back(x);
        auto w = m.step(x, v, engine);
        const auto& succ = m.ld.successors[x];
        if (m.ld.vertices[x].tag == Player::angel && !succ.empty()) {
            auto j = solver.best_choice(x, v);
            strat.choice[prefix] = m.ld.edge_transition[x][j];
            walk(succ[j], w);
        } else {
            for (auto s : succ) walk(s, w);
        }
        prefix.pop_back();
    };
    const auto one = unit_growth(m.game.dimension());
    for (auto r : m.roots) walk(r, one);
    return strat;
}

inline GameVerdict decide(const GameModel& m, std::size_t counter, std::uint32_t k, QueryMode mode, GrowthEngine& engine) {
    if (k == 0) throw ModelError("exponent k must be at least 1");
    GameVerdict out;
    out.exponent = optimal_exponent(m, counter, engine).overall;
    const auto K = GrowthExponent::poly(k);
    const bool upper = out.exponent <= K, lower = out.exponent >= K;
    out.verdict = mode == QueryMode::upper ? upper : mode == QueryMode::lower ? lower : (upper && lower);
    if (upper && mode != QueryMode::lower) out.strategy = extract_strategy(m, counter, engine);
    return out;
}

struct InducedVass {
    CounterVass vass;
    // For every unfolded state: the decomposition path prefix it belongs to and the game state.
    std::vector<std::pair<std::vector<std::size_t>, std::size_t>> origin;
};

// Demonic VASS obtained by committing Angel to the strategy: each node of the strategy tree
// gets a copy of its class, locked angelic states keep only their locked transition.
inline InducedVass induce_demonic(const GameModel& m, const SimpleLockingStrategy& strat, std::size_t budget = 100000) {
    const auto& g = m.game;
    VassBuilder b;
    for (const auto& c : g.counters()) b.add_counter(c);
    InducedVass out;
    std::vector<std::size_t> prefix;
    std::size_t node_counter = 0;
    // Returns map game state -> unfolded state for the node's class.
    std::function<std::map<std::size_t, std::size_t>(std::size_t)> build = [&](std::size_t x) {
        prefix.push_back(x);
        const std::size_t node = node_counter++;
        const auto& vx = m.ld.vertices[x];
        std::map<std::size_t, std::size_t> local;
        for (auto s : vx.members) {
            if (out.origin.size() >= budget) throw BudgetExceeded("induced VASS exceeds the budget", out.origin.size());
            local[s] = b.add_state(g.state_name(s) + "@" + std::to_string(node));
            out.origin.push_back({prefix, s});
        }
        if (prefix.size() == 1)
            for (auto s : vx.members) b.add_initial(local[s]);
        for (auto t : vx.internal) {
            const auto& tr = g.transition(t);
            b.add_transition(local.at(tr.source), tr.update, local.at(tr.target));
        }
        const auto& succ = m.ld.successors[x];
        if (vx.tag == Player::angel) {
            auto it = strat.choice.find(prefix);
            if (it == strat.choice.end()) throw ModelError("strategy has no choice for a reachable angelic vertex");
            std::size_t j = 0;
            while (j < succ.size() && m.ld.edge_transition[x][j] != it->second) ++j;
            if (j == succ.size()) throw ModelError("strategy locks a transition that is not available");
            const auto& tr = g.transition(it->second);
            auto child = build(succ[j]);
            b.add_transition(local.at(tr.source), tr.update, child.at(tr.target));
        } else {
            // Crossing transitions usable under the vertex's locks, grouped by target vertex.
            auto view = detail::locked_view(g, vx.locks);
            for (auto y : succ) {
                auto child = build(y);
                for (auto s : vx.members)
                    for (auto t : g.outgoing(s)) {
                        const auto& tr = g.transition(t);
                        if (!view.usable[t] || view.class_of[tr.target] == view.class_of[s]) continue;
                        if (child.count(tr.target)) b.add_transition(local.at(s), tr.update, child.at(tr.target));
                    }
            }
        }
        prefix.pop_back();
        return local;
    };
    for (auto r : m.roots) build(r);
    out.vass = b.build();
    return out;
}

inline SimpleLockingStrategy synthesize_strategy(const GameModel& m, std::size_t counter, GrowthEngine& engine) {
    auto value = optimal_exponent(m, counter, engine).overall;
    if (value.is_infinite()) throw ModelError("optimal exponent is infinite; no polynomial strategy exists");
    return extract_strategy(m, counter, engine);
}

// All simple locking strategies restricted to paths from one root, by exhaustive choice.
inline std::vector<SimpleLockingStrategy> enumerate_strategies(const GameModel& m, std::size_t root, std::size_t budget = 4096) {
    std::vector<SimpleLockingStrategy> result;
    // Depth-first over a work list of (strategy so far, frontier of prefixes still to expand).
    struct Partial {
        SimpleLockingStrategy strat;
        std::vector<std::vector<std::size_t>> frontier;
    };
    std::vector<Partial> stack{{{}, {{root}}}};
    while (!stack.empty()) {
        auto cur = std::move(stack.back());
        stack.pop_back();
        bool branched = false;
        while (!cur.frontier.empty()) {
            auto prefix = std::move(cur.frontier.back());
            cur.frontier.pop_back();
            auto x = prefix.back();
            const auto& succ = m.ld.successors[x];
            if (m.ld.vertices[x].tag == Player::angel && !succ.empty()) {
                for (std::size_t j = succ.size(); j-- > 0;) {
                    Partial next = cur;
                    next.strat.choice[prefix] = m.ld.edge_transition[x][j];
                    auto child = prefix;
                    child.push_back(succ[j]);
                    next.frontier.push_back(std::move(child));
                    stack.push_back(std::move(next));
                }
                branched = true;
                break;
            }
            for (auto s : succ) {
                auto child = prefix;
                child.push_back(s);
                cur.frontier.push_back(std::move(child));
            }
        }
        if (!branched) {
            if (result.size() >= budget) throw BudgetExceeded("too many simple locking strategies", result.size());
            result.push_back(std::move(cur.strat));
        }
    }
    return result;
}

// A copy of the model that only considers one root; used to evaluate per-root strategies.
inline GameModel with_roots(GameModel m, std::vector<std::size_t> roots) {
    m.roots = std::move(roots);
    return m;
}

}  // namespace vassan
