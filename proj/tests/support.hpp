#pragma once

// Test-side helpers: a naive configuration-graph oracle that shares no code with the library's
// explorer, seeded random model generators, and small hand-built graphs.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vassan/vassan.hpp"

namespace testsupport {

using namespace vassan;

#ifndef VASSAN_FIXTURES_DIR
#define VASSAN_FIXTURES_DIR "fixtures"
#endif

inline std::string fixture(const std::string& name) { return std::string(VASSAN_FIXTURES_DIR) + "/" + name; }

inline CounterVass load_fixture(const std::string& name) { return parse_vass(read_file(fixture(name))); }

struct NaiveResult {
    bool unbounded = false;  // a configuration cycle was found or a value passed the cap
    long long length = 0;    // longest run from the start (valid when !unbounded)
    std::vector<long long> counter_max;
    std::size_t configurations = 0;
};

// Plain recursive DFS over (state, values) with std::map memoization.
class NaiveExplorer {
public:
    NaiveExplorer(const CounterVass& vass, long long cap) : vass_(vass), cap_(cap) {}

    NaiveResult run(std::size_t state, const std::vector<long long>& values) {
        result_ = {};
        result_.counter_max = values;
        result_.length = longest(Key{state, values});
        result_.configurations = status_.size();
        return result_;
    }

    NaiveResult run_all_states(long long n) {
        NaiveResult total;
        total.counter_max.assign(vass_.dimension(), n);
        for (std::size_t p = 0; p < vass_.state_count(); ++p) {
            auto r = run(p, std::vector<long long>(vass_.dimension(), n));
            total.unbounded = total.unbounded || r.unbounded;
            total.length = std::max(total.length, r.length);
            for (std::size_t c = 0; c < vass_.dimension(); ++c)
                total.counter_max[c] = std::max(total.counter_max[c], r.counter_max[c]);
            total.configurations += r.configurations;
        }
        return total;
    }

private:
    using Key = std::pair<std::size_t, std::vector<long long>>;

    long long longest(const Key& key) {
        auto [it, fresh] = status_.emplace(key, -1);
        if (!fresh) {
            if (it->second < 0) result_.unbounded = true;  // back edge: an infinite run exists
            return std::max<long long>(it->second, 0);
        }
        for (std::size_t c = 0; c < key.second.size(); ++c) {
            result_.counter_max[c] = std::max(result_.counter_max[c], key.second[c]);
            if (key.second[c] > cap_) result_.unbounded = true;
        }
        long long best = 0;
        if (!result_.unbounded) {
            for (auto t : vass_.outgoing(key.first)) {
                const auto& tr = vass_.transition(t);
                std::vector<long long> next = key.second;
                bool ok = true;
                for (std::size_t c = 0; c < next.size(); ++c) {
                    next[c] += tr.update[c];
                    if (next[c] < 0) ok = false;
                }
                if (!ok) continue;
                best = std::max(best, 1 + longest(Key{tr.target, std::move(next)}));
                if (result_.unbounded) break;
            }
        }
        status_[key] = best;
        return best;
    }

    const CounterVass& vass_;
    long long cap_;
    std::map<Key, long long> status_;
    NaiveResult result_;
};

inline NaiveResult naive_explore(const CounterVass& vass, std::size_t state, const std::vector<long long>& values,
                                 long long cap = 1000000) {
    return NaiveExplorer(vass, cap).run(state, values);
}

inline NaiveResult naive_explore_uniform(const CounterVass& vass, long long n, long long cap = 1000000) {
    return NaiveExplorer(vass, cap).run_all_states(n);
}

struct RandomShape {
    std::size_t max_states = 5;
    std::size_t max_counters = 3;
    std::size_t max_out = 3;
    double angelic_probability = 0.0;
};

// Random VASS with updates in {-1, 0, 1}; every state gets at least one outgoing transition.
inline CounterVass random_vass(std::mt19937_64& rng, const RandomShape& shape) {
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    const std::size_t states = pick(1, shape.max_states), dim = pick(1, shape.max_counters);
    VassBuilder b;
    for (std::size_t c = 0; c < dim; ++c) b.add_counter("c" + std::to_string(c));
    std::bernoulli_distribution angel(shape.angelic_probability);
    for (std::size_t p = 0; p < states; ++p) b.add_state("q" + std::to_string(p), angel(rng) ? Player::angel : Player::demon);
    for (std::size_t p = 0; p < states; ++p) {
        const std::size_t out = pick(1, shape.max_out);
        for (std::size_t i = 0; i < out; ++i) {
            UpdateVector u(dim);
            for (auto& x : u) x = static_cast<std::int64_t>(pick(0, 2)) - 1;
            b.add_transition(p, u, pick(0, states - 1));
        }
    }
    return b.build();
}

// root -> {left, right} -> bottom, one state per vertex.
inline SccDag diamond_dag() {
    SccDag dag;
    dag.members = {{0}, {1}, {2}, {3}};
    dag.component_of = {0, 1, 2, 3};
    dag.successors = {{1, 2}, {3}, {3}, {}};
    dag.predecessors = {{}, {0}, {0}, {1, 2}};
    dag.root = {true, false, false, false};
    return dag;
}

// A chain of m diamonds sharing their joint vertices.
inline DagView diamond_chain(std::size_t m) {
    DagView v;
    const std::size_t n = 1 + 3 * m;
    v.successors.assign(n, {});
    v.root.assign(n, false);
    v.root[0] = true;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t top = 3 * i, a = top + 1, b = top + 2, bottom = top + 3;
        v.successors[top] = {a, b};
        v.successors[a] = {bottom};
        v.successors[b] = {bottom};
    }
    return v;
}

// Independent root-to-vertex path count by plain recursion.
inline std::uint64_t count_paths_to(const DagView& dag, std::size_t target) {
    std::function<std::uint64_t(std::size_t)> from = [&](std::size_t v) -> std::uint64_t {
        if (v == target) return 1;
        std::uint64_t total = 0;
        for (auto s : dag.successors[v]) total += from(s);
        return total;
    };
    std::uint64_t total = 0;
    for (std::size_t r = 0; r < dag.size(); ++r)
        if (dag.root[r]) total += from(r);
    return total;
}

inline GrowthVector gv(const std::string& text) { return parse_growth_vector(text); }

}  // namespace testsupport

namespace vassan {

// Readable gtest failure output.
inline void PrintTo(const GameValue& v, std::ostream* os) { *os << v.to_string(); }

}  // namespace vassan
