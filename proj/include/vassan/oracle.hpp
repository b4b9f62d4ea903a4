#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vassan/core.hpp"
#include "vassan/graph.hpp"
#include "vassan/growth_vector.hpp"

namespace vassan {

// ---------------------------------------------------------------------------------------------
// Initial schedules and slope fitting

struct ScheduledValues {
    std::vector<BigInt> values;
    std::vector<bool> saturated;
};

inline ScheduledValues initial_schedule(const GrowthVector& v, std::uint64_t n, const BigInt& cap) {
    if (n < 1) throw ModelError("schedule parameter n must be at least 1");
    ScheduledValues out;
    for (const auto& e : v) {
        if (e.is_infinite()) {
            BigInt p = 1;
            bool sat = false;
            for (std::uint64_t i = 0; i < n; ++i) {
                p *= 2;
                if (p >= cap) {
                    sat = p > cap || i + 1 < n;
                    break;
                }
            }
            if (p > cap) {
                p = cap;
                sat = true;
            }
            out.values.push_back(p);
            out.saturated.push_back(sat);
        } else {
            out.values.push_back(boost::multiprecision::pow(BigInt(n), e.degree()));
            out.saturated.push_back(false);
        }
    }
    return out;
}

struct Sample {
    std::uint64_t n = 0;
    double value = 0;
    bool saturated = false;
};

struct FitResult {
    double estimate = 0;
    std::uint32_t k = 1;
    bool stable = false;
    std::vector<double> slopes;     // raw log-log slopes of consecutive samples
    std::vector<double> corrected;  // slopes with the leading 1/n bias extrapolated away
};

// Exponent from samples at geometrically increasing n. Raw log-log slopes of a polynomial with
// lower-order terms approach k like k - a/n, so consecutive slopes are combined by one step of
// Richardson extrapolation before taking the median.
inline FitResult fit_exponent(const std::vector<Sample>& samples) {
    if (samples.size() < 2) throw ModelError("need at least two samples to fit an exponent");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].saturated) throw ModelError("saturated sample at n = " + std::to_string(samples[i].n));
        if (samples[i].value <= 0) throw ModelError("sample values must be positive");
        if (i && samples[i].n <= samples[i - 1].n) throw ModelError("samples must have increasing n");
    }
    FitResult fit;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        fit.slopes.push_back(std::log(samples[i + 1].value / samples[i].value) /
                             std::log(double(samples[i + 1].n) / double(samples[i].n)));
    std::vector<double> pool;
    if (fit.slopes.size() >= 2) {
        for (std::size_t i = 0; i + 1 < fit.slopes.size(); ++i) {
            double rho = double(samples[i + 1].n) / double(samples[i].n);
            fit.corrected.push_back((rho * fit.slopes[i + 1] - fit.slopes[i]) / (rho - 1.0));
        }
        pool = fit.corrected;
    } else {
        pool = fit.slopes;
    }
    if (pool.size() > 3) pool.erase(pool.begin(), pool.end() - 3);
    std::vector<double> sorted = pool;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    fit.estimate = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    double rounded = std::max(1.0, std::round(fit.estimate));
    fit.k = static_cast<std::uint32_t>(rounded);
    fit.stable = samples.size() >= 3 && std::abs(fit.estimate - rounded) < 0.15;
    for (double p : pool)
        if (std::max(1.0, std::round(p)) != rounded) fit.stable = false;
    return fit;
}

// ---------------------------------------------------------------------------------------------
// Flat open-addressing table of fixed-width integer keys.

class KeyTable {
public:
    explicit KeyTable(std::size_t stride) : stride_(stride) { slots_.assign(1024, 0); }

    std::size_t size() const { return count_; }
    const std::int64_t* key(std::size_t id) const { return data_.data() + id * stride_; }
    std::size_t stride() const { return stride_; }

    // Returns (id, inserted).
    std::pair<std::size_t, bool> insert(const std::int64_t* k) {
        if ((count_ + 1) * 2 > slots_.size()) grow();
        std::size_t mask = slots_.size() - 1;
        for (std::size_t pos = hash(k) & mask;; pos = (pos + 1) & mask) {
            auto s = slots_[pos];
            if (s == 0) {
                data_.insert(data_.end(), k, k + stride_);
                slots_[pos] = static_cast<std::uint32_t>(++count_);
                return {count_ - 1, true};
            }
            if (std::equal(k, k + stride_, key(s - 1))) return {s - 1, false};
        }
    }

    std::optional<std::size_t> find(const std::int64_t* k) const {
        std::size_t mask = slots_.size() - 1;
        for (std::size_t pos = hash(k) & mask;; pos = (pos + 1) & mask) {
            auto s = slots_[pos];
            if (s == 0) return std::nullopt;
            if (std::equal(k, k + stride_, key(s - 1))) return s - 1;
        }
    }

private:
    std::uint64_t hash(const std::int64_t* k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::size_t i = 0; i < stride_; ++i) {
            std::uint64_t x = static_cast<std::uint64_t>(k[i]) + h;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
            h = x ^ (x >> 31);
        }
        return h;
    }

    void grow() {
        std::vector<std::uint32_t> old;
        old.swap(slots_);
        slots_.assign(old.size() * 2, 0);
        std::size_t mask = slots_.size() - 1;
        for (auto s : old) {
            if (!s) continue;
            std::size_t pos = hash(key(s - 1)) & mask;
            while (slots_[pos]) pos = (pos + 1) & mask;
            slots_[pos] = s;
        }
    }

    std::size_t stride_;
    std::size_t count_ = 0;
    std::vector<std::int64_t> data_;
    std::vector<std::uint32_t> slots_;
};

namespace detail {

inline constexpr std::int64_t value_infinity = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (a >= value_infinity || b >= value_infinity) return value_infinity;
    return std::min(a + b, value_infinity);
}

inline std::int64_t to_int64(const BigInt& v, std::int64_t cap, bool& saturated) {
    if (v > cap) {
        saturated = true;
        return cap;
    }
    return static_cast<std::int64_t>(v);
}

// Tarjan over a graph in compressed sparse row form; ids are topological.
inline std::vector<std::uint32_t> csr_scc(const std::vector<std::size_t>& begin, const std::vector<std::uint32_t>& dst,
                                          std::size_t& count) {
    const std::size_t n = begin.size() - 1;
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> index(n, none), low(n, 0), comp(n, none);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    std::uint32_t counter = 0;
    std::uint32_t found = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != none) continue;
        index[root] = low[root] = counter++;
        stack.push_back(static_cast<std::uint32_t>(root));
        on_stack[root] = 1;
        call.push_back({static_cast<std::uint32_t>(root), begin[root]});
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < begin[v + 1]) {
                auto w = dst[pos++];
                if (index[w] == none) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, begin[w]});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = found;
                } while (w != v);
                ++found;
            }
            auto done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    for (auto& c : comp) c = found - 1 - c;
    count = found;
    return comp;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Exact demonic maxima

struct ExploreLimits {
    std::size_t max_nodes = 1000000;
    std::int64_t value_cap = std::int64_t(1) << 40;
};

// An explored quantity. `saturated` means the exploration was truncated and the value is only a
// lower bound; `unbounded` means a reachable pumping cycle proves the quantity infinite.
struct CappedValue {
    std::int64_t value = 0;
    bool saturated = false;
    bool unbounded = false;

    bool exact() const { return !saturated && !unbounded; }
    std::string to_string() const {
        if (unbounded) return "inf";
        return saturated ? ">=" + std::to_string(value) : std::to_string(value);
    }
};

struct ExploreResult {
    CappedValue max_length;
    std::vector<CappedValue> counter_max;
    std::vector<CappedValue> start_length;                   // per start
    std::vector<std::vector<CappedValue>> start_counter_max;  // per start, per counter
    std::size_t visited = 0;
    bool truncated = false;
};

// Exact search of the configuration graph of a VASS, played by a single maximising player.
// Counters that no transition decrements only grow, so they are kept out of the search key and
// accumulated as path weights; the remaining graph is condensed and solved by longest paths.
// A new configuration that covers a search-tree ancestor in the same state closes a cycle that
// can be repeated forever; it is not expanded and the ancestor is marked as pumping.
inline ExploreResult explore_demonic_max(const CounterVass& vass, const std::vector<Configuration>& starts,
                                         const ExploreLimits& limits = {}) {
    const std::size_t d = vass.dimension();
    std::vector<bool> decremented(d, false);
    for (const auto& t : vass.transitions())
        for (std::size_t c = 0; c < d; ++c)
            if (t.update[c] < 0) decremented[c] = true;
    std::vector<std::size_t> key_counters, weight_counters;
    for (std::size_t c = 0; c < d; ++c) (decremented[c] ? key_counters : weight_counters).push_back(c);
    const std::size_t stride = 1 + key_counters.size();
    const std::size_t measures = 1 + d;  // length, then every counter

    ExploreResult res;
    bool saturated = false;
    KeyTable table(stride);
    std::vector<std::int64_t> buf(stride);
    std::vector<std::uint32_t> start_ids;
    std::vector<std::vector<std::int64_t>> start_weights;  // initial value of every counter per start

    for (const auto& s : starts) {
        if (s.values.size() != d) throw ModelError("start configuration has the wrong dimension");
        buf[0] = static_cast<std::int64_t>(s.state);
        std::vector<std::int64_t> init(d);
        for (std::size_t c = 0; c < d; ++c) init[c] = detail::to_int64(s.values[c], limits.value_cap, saturated);
        for (std::size_t i = 0; i < key_counters.size(); ++i) buf[1 + i] = init[key_counters[i]];
        start_ids.push_back(static_cast<std::uint32_t>(table.insert(buf.data()).first));
        start_weights.push_back(std::move(init));
    }

    constexpr std::uint32_t no_parent = std::numeric_limits<std::uint32_t>::max();
    constexpr std::size_t ancestor_window = 64;
    std::vector<std::uint32_t> parent(table.size(), no_parent), parent_via(table.size(), 0);
    std::vector<std::uint8_t> covering(table.size(), 0);
    std::vector<std::pair<std::uint32_t, std::vector<std::uint8_t>>> pumped_at;  // ancestor, measures
    // Looks for an ancestor of `from` (inclusive) in state buf[0] that buf covers.
    auto find_covered_ancestor = [&](std::uint32_t from) -> std::uint32_t {
        std::uint32_t u = from;
        for (std::size_t steps = 0; u != no_parent && steps < ancestor_window; ++steps, u = parent[u]) {
            const std::int64_t* ku = table.key(u);
            if (ku[0] != buf[0]) continue;
            bool covers = true;
            for (std::size_t i = 1; i < stride && covers; ++i) covers = buf[i] >= ku[i];
            if (covers) return u;
        }
        return no_parent;
    };

    std::vector<std::size_t> begin{0};
    std::vector<std::uint32_t> dst, via;
    for (std::size_t next = 0; next < table.size(); ++next) {
        const std::int64_t* k = table.key(next);
        const std::size_t state = static_cast<std::size_t>(k[0]);
        if (covering[next]) {
            begin.push_back(dst.size());
            continue;
        }
        for (auto t : vass.outgoing(state)) {
            const auto& tr = vass.transition(t);
            bool ok = true, over = false;
            buf[0] = static_cast<std::int64_t>(tr.target);
            for (std::size_t i = 0; i < key_counters.size(); ++i) {
                std::int64_t v = k[1 + i] + tr.update[key_counters[i]];
                if (v < 0) {
                    ok = false;
                    break;
                }
                if (v > limits.value_cap) over = true;
                buf[1 + i] = v;
            }
            if (!ok) continue;
            if (over) {
                saturated = true;
                continue;
            }
            if (table.size() >= limits.max_nodes && !table.find(buf.data())) {
                res.truncated = true;
                saturated = true;
                continue;
            }
            const bool known = table.find(buf.data()).has_value();
            const auto ancestor = known ? no_parent : find_covered_ancestor(static_cast<std::uint32_t>(next));
            auto [id, inserted] = table.insert(buf.data());
            dst.push_back(static_cast<std::uint32_t>(id));
            via.push_back(static_cast<std::uint32_t>(t));
            k = table.key(next);  // insertion may reallocate
            if (inserted) {
                parent.push_back(static_cast<std::uint32_t>(next));
                parent_via.push_back(static_cast<std::uint32_t>(t));
                covering.push_back(ancestor != no_parent);
            }
            if (ancestor != no_parent) {
                // Effect of the tree path ancestor -> ... -> next -> id.
                std::vector<std::int64_t> effect(d, 0);
                for (auto w = static_cast<std::uint32_t>(id); w != ancestor; w = parent[w])
                    for (std::size_t c = 0; c < d; ++c) effect[c] += vass.transition(parent_via[w]).update[c];
                std::vector<std::uint8_t> flags(measures, 0);
                flags[0] = 1;
                for (std::size_t c = 0; c < d; ++c) flags[1 + c] = effect[c] > 0;
                pumped_at.emplace_back(ancestor, std::move(flags));
                saturated = true;  // the covering node's own successors are not explored
            }
        }
        begin.push_back(dst.size());
    }
    const std::size_t nodes = table.size();
    res.visited = nodes;

    std::size_t comp_count = 0;
    auto comp = detail::csr_scc(begin, dst, comp_count);
    // best[c * measures + m]: best achievable gain for measure m from component c.
    std::vector<std::int64_t> best(comp_count * measures, 0);
    std::vector<std::uint8_t> pumping(comp_count * measures, 0);
    std::vector<std::vector<std::uint32_t>> comp_nodes(comp_count);
    for (std::size_t v = 0; v < nodes; ++v) comp_nodes[comp[v]].push_back(static_cast<std::uint32_t>(v));
    for (const auto& [u, flags] : pumped_at)
        for (std::size_t m = 0; m < measures; ++m) pumping[comp[u] * measures + m] |= flags[m];

    for (std::size_t c = comp_count; c-- > 0;) {
        std::int64_t* b = best.data() + c * measures;
        std::uint8_t* pump = pumping.data() + c * measures;
        for (auto v : comp_nodes[c]) {
            const std::int64_t* k = table.key(v);
            for (std::size_t i = 0; i < key_counters.size(); ++i)
                b[1 + key_counters[i]] = std::max(b[1 + key_counters[i]], k[1 + i]);
            for (std::size_t e = begin[v]; e < begin[v + 1]; ++e) {
                const auto w = dst[e];
                const auto& tr = vass.transition(via[e]);
                if (comp[w] == c) {
                    pump[0] = 1;
                    for (auto wc : weight_counters)
                        if (tr.update[wc] > 0) pump[1 + wc] = 1;
                    continue;
                }
                const std::int64_t* bw = best.data() + comp[w] * measures;
                const std::uint8_t* pw = pumping.data() + comp[w] * measures;
                b[0] = std::max(b[0], detail::sat_add(1, bw[0]));
                pump[0] |= pw[0];
                for (auto wc : weight_counters) {
                    b[1 + wc] = std::max(b[1 + wc], detail::sat_add(tr.update[wc], bw[1 + wc]));
                    pump[1 + wc] |= pw[1 + wc];
                }
                for (auto kc : key_counters) {
                    b[1 + kc] = std::max(b[1 + kc], bw[1 + kc]);
                    pump[1 + kc] |= pw[1 + kc];
                }
            }
        }
    }

    auto measure_value = [&](std::size_t start, std::size_t m) {
        CappedValue cv;
        const auto c = comp[start_ids[start]];
        cv.unbounded = pumping[c * measures + m] != 0;
        std::int64_t v = best[c * measures + m];
        if (m > 0 && !decremented[m - 1]) v = detail::sat_add(v, start_weights[start][m - 1]);
        cv.value = std::min(v, detail::value_infinity);
        cv.saturated = saturated || v >= detail::value_infinity;
        return cv;
    };

    res.counter_max.assign(d, CappedValue{});
    for (std::size_t s = 0; s < starts.size(); ++s) {
        res.start_length.push_back(measure_value(s, 0));
        std::vector<CappedValue> per;
        for (std::size_t c = 0; c < d; ++c) per.push_back(measure_value(s, 1 + c));
        auto merge = [](CappedValue& into, const CappedValue& x) {
            into.value = std::max(into.value, x.value);
            into.saturated |= x.saturated;
            into.unbounded |= x.unbounded;
        };
        merge(res.max_length, res.start_length.back());
        for (std::size_t c = 0; c < d; ++c) merge(res.counter_max[c], per[c]);
        res.start_counter_max.push_back(std::move(per));
    }
    return res;
}

inline ExploreResult explore_demonic_max(const CounterVass& vass, const Configuration& start,
                                         const ExploreLimits& limits = {}) {
    return explore_demonic_max(vass, std::vector<Configuration>{start}, limits);
}

struct HorizonResult {
    std::vector<std::int64_t> counter_max;
    std::size_t visited = 0;
    bool truncated = false;
};

// Breadth-first search over full configurations reachable within `horizon` steps.
inline HorizonResult explore_horizon(const CounterVass& vass, const Configuration& start, std::size_t horizon,
                                     std::size_t max_nodes = 1000000) {
    const std::size_t d = vass.dimension();
    const std::size_t stride = 1 + d;
    KeyTable table(stride);
    std::vector<std::int64_t> buf(stride);
    bool sat = false;
    buf[0] = static_cast<std::int64_t>(start.state);
    for (std::size_t c = 0; c < d; ++c) buf[1 + c] = detail::to_int64(start.values[c], detail::value_infinity, sat);
    table.insert(buf.data());
    HorizonResult res;
    res.counter_max.assign(buf.begin() + 1, buf.end());
    std::size_t layer_begin = 0;
    for (std::size_t depth = 0; depth < horizon; ++depth) {
        const std::size_t layer_end = table.size();
        if (layer_begin == layer_end) break;
        for (std::size_t v = layer_begin; v < layer_end; ++v) {
            const std::size_t state = static_cast<std::size_t>(table.key(v)[0]);
            for (auto t : vass.outgoing(state)) {
                const auto& tr = vass.transition(t);
                const std::int64_t* k = table.key(v);
                bool ok = true;
                buf[0] = static_cast<std::int64_t>(tr.target);
                for (std::size_t c = 0; c < d && ok; ++c) {
                    buf[1 + c] = k[1 + c] + tr.update[c];
                    ok = buf[1 + c] >= 0;
                }
                if (!ok) continue;
                if (table.size() >= max_nodes && !table.find(buf.data())) {
                    res.truncated = true;
                    continue;
                }
                if (table.insert(buf.data()).second)
                    for (std::size_t c = 0; c < d; ++c) res.counter_max[c] = std::max(res.counter_max[c], buf[1 + c]);
            }
        }
        layer_begin = layer_end;
    }
    res.visited = table.size();
    return res;
}

// ---------------------------------------------------------------------------------------------
// Games: explicit capped configuration graphs and Bellman value iteration

struct Measure {
    enum class Kind { length, counter } kind = Kind::length;
    std::size_t counter = 0;

    static Measure length() { return {Kind::length, 0}; }
    static Measure of_counter(std::size_t c) { return {Kind::counter, c}; }
};

struct GameLimits {
    std::size_t max_nodes = 1000000;
    std::int64_t value_cap = 100000;
};

struct GameGraph {
    std::size_t stride = 0;
    KeyTable nodes{1};
    std::vector<std::size_t> begin;
    std::vector<std::uint32_t> dst;
    std::vector<std::uint32_t> via;
    std::vector<std::uint8_t> saturated;  // some counter would exceed the cap: not expanded
    std::vector<std::uint32_t> start_node;  // per state, the node of (p, n...)

    std::size_t size() const { return nodes.size(); }
    std::size_t state_of(std::size_t v) const { return static_cast<std::size_t>(nodes.key(v)[0]); }
    std::int64_t value_of(std::size_t v, std::size_t c) const { return nodes.key(v)[1 + c]; }
};

inline GameGraph build_game_graph(const CounterVass& game, std::int64_t n, const GameLimits& limits) {
    const std::size_t d = game.dimension();
    GameGraph g;
    g.stride = 1 + d;
    g.nodes = KeyTable(g.stride);
    std::vector<std::int64_t> buf(g.stride);
    for (std::size_t p = 0; p < game.state_count(); ++p) {
        buf[0] = static_cast<std::int64_t>(p);
        for (std::size_t c = 0; c < d; ++c) buf[1 + c] = n;
        g.start_node.push_back(static_cast<std::uint32_t>(g.nodes.insert(buf.data()).first));
    }
    g.begin.push_back(0);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        const std::size_t state = g.state_of(v);
        bool over = false;
        for (std::size_t c = 0; c < d; ++c) over |= g.value_of(v, c) > limits.value_cap;
        g.saturated.push_back(over);
        if (!over) {
            for (auto t : game.outgoing(state)) {
                const auto& tr = game.transition(t);
                bool ok = true;
                buf[0] = static_cast<std::int64_t>(tr.target);
                const std::int64_t* k = g.nodes.key(v);
                for (std::size_t c = 0; c < d && ok; ++c) {
                    buf[1 + c] = k[1 + c] + tr.update[c];
                    ok = buf[1 + c] >= 0;
                }
                if (!ok) continue;
                if (g.nodes.size() >= limits.max_nodes && !g.nodes.find(buf.data()))
                    throw BudgetExceeded("game graph exceeds " + std::to_string(limits.max_nodes) + " configurations",
                                         g.nodes.size());
                auto id = g.nodes.insert(buf.data()).first;
                g.dst.push_back(static_cast<std::uint32_t>(id));
                g.via.push_back(static_cast<std::uint32_t>(t));
            }
        }
        g.begin.push_back(g.dst.size());
    }
    return g;
}

struct GameValue {
    std::int64_t value = 0;
    bool top = false;  // cap saturation or non-termination at this scale

    bool operator==(const GameValue&) const = default;
    std::string to_string() const { return top ? "top" : std::to_string(value); }
};

struct ValueTable {
    Measure measure;
    std::int64_t n = 0;
    std::vector<GameValue> per_state;
};

// Positional choice per explored configuration: index into the node's successor range, or npos.
struct MemorylessStrategy {
    std::vector<std::size_t> choice;
};

struct GameSolution {
    GameGraph graph;
    std::vector<GameValue> node_value;
    ValueTable table;
    MemorylessStrategy angel;  // sigma*
    MemorylessStrategy demon;  // pi*
    std::size_t rounds = 0;
};

struct SolveOptions {
    std::vector<std::uint32_t> step_weight;  // per transition, length measure only; default 1
    const MemorylessStrategy* fixed_angel = nullptr;
    const MemorylessStrategy* fixed_demon = nullptr;
};

namespace detail {

inline constexpr std::int64_t top_value = std::numeric_limits<std::int64_t>::max();

// Bellman iteration from the bottom element; Jacobi rounds restricted to nodes whose successors
// changed. `first` records the round in which a node reached its final value.
inline void solve_game_graph(const CounterVass& game, GameSolution& sol, const SolveOptions& opts) {
    const auto& g = sol.graph;
    const std::size_t n = g.size();
    const bool length = sol.table.measure.kind == Measure::Kind::length;
    const std::size_t mc = sol.table.measure.counter;
    auto weight = [&](std::size_t e) -> std::int64_t {
        return opts.step_weight.empty() ? 1 : opts.step_weight[g.via[e]];
    };
    auto fixed = [&](std::size_t v) -> std::size_t {
        const auto* s = game.owner(g.state_of(v)) == Player::angel ? opts.fixed_angel : opts.fixed_demon;
        return s ? s->choice[v] : npos;
    };
    auto edges = [&](std::size_t v, std::size_t& lo, std::size_t& hi) {
        lo = g.begin[v];
        hi = g.begin[v + 1];
        if (auto f = fixed(v); f != npos) {
            lo = g.begin[v] + f;
            hi = lo + 1;
        }
    };

    std::vector<std::size_t> pbegin(n + 1, 0);
    for (auto w : g.dst) ++pbegin[w + 1];
    for (std::size_t i = 0; i < n; ++i) pbegin[i + 1] += pbegin[i];
    std::vector<std::uint32_t> pred(g.dst.size());
    {
        auto fill = pbegin;
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t e = g.begin[v]; e < g.begin[v + 1]; ++e)
                pred[fill[g.dst[e]]++] = static_cast<std::uint32_t>(v);
    }

    std::vector<std::int64_t> val(n, 0);
    std::vector<std::uint32_t> first(n, 0);
    std::vector<std::uint8_t> active(n, 1);  // nodes still participating (length: inside the attractor)

    if (length) {
        // Angel's attractor to dead ends; outside it Demon can avoid termination forever.
        std::vector<std::size_t> remaining(n, 0);
        std::vector<std::uint8_t> in_attr(n, 0);
        std::vector<std::uint32_t> queue;
        for (std::size_t v = 0; v < n; ++v) {
            std::size_t lo, hi;
            edges(v, lo, hi);
            if (g.saturated[v]) continue;
            if (lo == hi) {
                in_attr[v] = 1;
                queue.push_back(static_cast<std::uint32_t>(v));
                continue;
            }
            bool angel = game.owner(g.state_of(v)) == Player::angel;
            remaining[v] = angel ? 1 : hi - lo;
        }
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            auto w = queue[qi];
            for (std::size_t pe = pbegin[w]; pe < pbegin[w + 1]; ++pe) {
                auto v = pred[pe];
                if (in_attr[v] || g.saturated[v]) continue;
                std::size_t lo, hi;
                edges(v, lo, hi);
                std::size_t hits = 0;
                for (std::size_t e = lo; e < hi; ++e) hits += g.dst[e] == w;
                if (!hits) continue;
                remaining[v] = remaining[v] > hits ? remaining[v] - hits : 0;
                if (remaining[v] == 0) {
                    in_attr[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            active[v] = in_attr[v];
            if (!in_attr[v]) val[v] = top_value;
        }
    } else {
        for (std::size_t v = 0; v < n; ++v) {
            if (g.saturated[v]) {
                val[v] = top_value;
                active[v] = 0;
            } else {
                val[v] = g.value_of(v, mc);
            }
        }
    }

    auto evaluate = [&](std::size_t v) -> std::int64_t {
        std::size_t lo, hi;
        edges(v, lo, hi);
        bool angel = game.owner(g.state_of(v)) == Player::angel;
        std::int64_t local = length ? 0 : g.value_of(v, mc);
        if (lo == hi) return local;
        std::int64_t acc = angel ? top_value : std::numeric_limits<std::int64_t>::min();
        for (std::size_t e = lo; e < hi; ++e) {
            std::int64_t x = val[g.dst[e]];
            if (length && x != top_value) x += weight(e);
            acc = angel ? std::min(acc, x) : std::max(acc, x);
        }
        return length ? acc : std::max(local, acc);
    };

    std::vector<std::uint32_t> changed, candidates;
    std::vector<std::uint32_t> stamp(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (active[v]) changed.push_back(static_cast<std::uint32_t>(v));
    std::uint32_t round = 0;
    bool initial_round = true;
    std::vector<std::pair<std::uint32_t, std::int64_t>> updates;
    while (!changed.empty()) {
        ++round;
        candidates.clear();
        if (initial_round) {
            candidates = changed;
            initial_round = false;
        } else {
            for (auto w : changed)
                for (std::size_t pe = pbegin[w]; pe < pbegin[w + 1]; ++pe) {
                    auto v = pred[pe];
                    if (active[v] && stamp[v] != round) {
                        stamp[v] = round;
                        candidates.push_back(v);
                    }
                }
        }
        updates.clear();
        for (auto v : candidates) {
            auto nv = evaluate(v);
            if (nv != val[v]) updates.push_back({v, nv});
        }
        changed.clear();
        for (auto [v, nv] : updates) {
            val[v] = nv;
            first[v] = round;
            changed.push_back(v);
        }
    }
    sol.rounds = round;

    sol.node_value.assign(n, {});
    for (std::size_t v = 0; v < n; ++v)
        sol.node_value[v] = val[v] == top_value ? GameValue{0, true} : GameValue{val[v], false};

    sol.angel.choice.assign(n, npos);
    sol.demon.choice.assign(n, npos);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t lo, hi;
        edges(v, lo, hi);
        if (lo == hi || g.saturated[v]) continue;
        bool angel = game.owner(g.state_of(v)) == Player::angel;
        std::size_t best = npos;
        std::int64_t best_val = 0;
        std::uint32_t best_first = 0;
        for (std::size_t e = lo; e < hi; ++e) {
            std::int64_t x = val[g.dst[e]];
            if (length && x != top_value) x += weight(e);
            std::uint32_t f = first[g.dst[e]];
            bool better;
            if (best == npos) better = true;
            else if (angel) better = x < best_val || (x == best_val && f < best_first);
            else better = x > best_val || (x == best_val && f < best_first);
            if (better) {
                best = e - g.begin[v];
                best_val = x;
                best_first = f;
            }
        }
        (angel ? sol.angel : sol.demon).choice[v] = best;
    }
}

}  // namespace detail

inline GameSolution game_values(const CounterVass& game, std::int64_t n, Measure measure, const GameLimits& limits = {},
                                const SolveOptions& opts = {}) {
    GameSolution sol;
    sol.graph = build_game_graph(game, n, limits);
    sol.table.measure = measure;
    sol.table.n = n;
    detail::solve_game_graph(game, sol, opts);
    for (std::size_t p = 0; p < game.state_count(); ++p) sol.table.per_state.push_back(sol.node_value[sol.graph.start_node[p]]);
    return sol;
}

// Re-solves the explored graph with one player's positional strategy fixed.
inline std::vector<GameValue> best_response_values(const CounterVass& game, const GameSolution& base,
                                                   const MemorylessStrategy& fixed, Player fixed_player,
                                                   const SolveOptions& opts = {}) {
    GameSolution copy;
    copy.graph = base.graph;
    copy.table = base.table;
    SolveOptions o = opts;
    if (fixed_player == Player::angel) o.fixed_angel = &fixed;
    else o.fixed_demon = &fixed;
    detail::solve_game_graph(game, copy, o);
    return copy.node_value;
}

// Plays both positional strategies from `start` and returns the resulting measure value.
inline GameValue replay_strategies(const CounterVass& game, const GameSolution& sol, std::size_t start,
                                   const SolveOptions& opts = {}) {
    const auto& g = sol.graph;
    const bool length = sol.table.measure.kind == Measure::Kind::length;
    std::vector<std::uint8_t> seen(g.size(), 0);
    std::size_t v = start;
    std::int64_t acc = 0;
    while (true) {
        if (g.saturated[v]) return {0, true};
        if (!length) acc = std::max(acc, g.value_of(v, sol.table.measure.counter));
        if (seen[v]) return length ? GameValue{0, true} : GameValue{acc, false};
        seen[v] = 1;
        auto c = (game.owner(g.state_of(v)) == Player::angel ? sol.angel : sol.demon).choice[v];
        if (c == npos) return {acc, false};
        std::size_t e = g.begin[v] + c;
        if (length) acc += opts.step_weight.empty() ? 1 : opts.step_weight[g.via[e]];
        v = g.dst[e];
    }
}

inline std::string values_csv(const CounterVass& game, const std::vector<ValueTable>& tables) {
    std::ostringstream os;
    os << "n,state,value\n";
    for (const auto& t : tables)
        for (std::size_t p = 0; p < t.per_state.size(); ++p)
            os << t.n << "," << game.state_name(p) << "," << t.per_state[p].to_string() << "\n";
    return os.str();
}

}  // namespace vassan
