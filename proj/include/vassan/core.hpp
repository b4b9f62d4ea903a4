#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace vassan {

using BigInt = boost::multiprecision::cpp_int;
using UpdateVector = std::vector<std::int64_t>;

enum class Player { demon, angel };

inline const char* player_name(Player p) { return p == Player::demon ? "demonic" : "angelic"; }

struct Transition {
    std::size_t source = 0;
    UpdateVector update;
    std::size_t target = 0;

    bool operator==(const Transition&) const = default;
};

struct StateInfo {
    std::string name;
    Player owner = Player::demon;

    bool operator==(const StateInfo&) const = default;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::size_t reached)
        : std::runtime_error(what), reached_(reached) {}
    std::size_t reached() const { return reached_; }

private:
    std::size_t reached_;
};

// A VASS or VASS game. Instances are immutable once constructed; the constructor does not
// enforce the model invariants so that `validate` can report every problem at once.
class CounterVass {
public:
    CounterVass() = default;

    CounterVass(std::vector<std::string> counters, std::vector<StateInfo> states,
                std::vector<Transition> transitions, std::vector<std::size_t> initial = {})
        : counters_(std::move(counters)),
          states_(std::move(states)),
          transitions_(std::move(transitions)),
          initial_(std::move(initial)) {
        outgoing_.resize(states_.size());
        for (std::size_t t = 0; t < transitions_.size(); ++t) {
            if (transitions_[t].source < states_.size()) outgoing_[transitions_[t].source].push_back(t);
        }
        for (std::size_t i = 0; i < states_.size(); ++i) state_index_.emplace(states_[i].name, i);
        for (std::size_t i = 0; i < counters_.size(); ++i) counter_index_.emplace(counters_[i], i);
    }

    std::size_t dimension() const { return counters_.size(); }
    std::size_t state_count() const { return states_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }

    const std::vector<std::string>& counters() const { return counters_; }
    const std::vector<StateInfo>& states() const { return states_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::vector<std::size_t>& initial_states() const { return initial_; }

    const std::string& counter_name(std::size_t i) const { return counters_.at(i); }
    const std::string& state_name(std::size_t i) const { return states_.at(i).name; }
    Player owner(std::size_t i) const { return states_.at(i).owner; }
    const Transition& transition(std::size_t t) const { return transitions_.at(t); }
    const std::vector<std::size_t>& outgoing(std::size_t state) const { return outgoing_.at(state); }

    std::optional<std::size_t> find_state(const std::string& name) const {
        auto it = state_index_.find(name);
        if (it == state_index_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<std::size_t> find_counter(const std::string& name) const {
        auto it = counter_index_.find(name);
        if (it == counter_index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t counter_index(const std::string& name) const {
        auto c = find_counter(name);
        if (!c) throw ModelError("unknown counter '" + name + "'");
        return *c;
    }
    std::size_t state_index(const std::string& name) const {
        auto s = find_state(name);
        if (!s) throw ModelError("unknown state '" + name + "'");
        return *s;
    }

    bool is_demonic() const {
        return std::none_of(states_.begin(), states_.end(),
                            [](const StateInfo& s) { return s.owner == Player::angel; });
    }
    std::vector<std::size_t> angelic_states() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < states_.size(); ++i)
            if (states_[i].owner == Player::angel) out.push_back(i);
        return out;
    }

    bool operator==(const CounterVass& o) const {
        return counters_ == o.counters_ && states_ == o.states_ && transitions_ == o.transitions_ &&
               initial_ == o.initial_;
    }

private:
    std::vector<std::string> counters_;
    std::vector<StateInfo> states_;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> initial_;
    std::vector<std::vector<std::size_t>> outgoing_;
    std::unordered_map<std::string, std::size_t> state_index_;
    std::unordered_map<std::string, std::size_t> counter_index_;
};

// Name-based incremental construction. Duplicate names are rejected eagerly here; the raw
// CounterVass constructor remains available for building deliberately broken inputs.
class VassBuilder {
public:
    std::size_t add_counter(const std::string& name) {
        if (counter_ids_.count(name)) throw ModelError("duplicate counter '" + name + "'");
        counter_ids_.emplace(name, counters_.size());
        counters_.push_back(name);
        return counters_.size() - 1;
    }

    std::size_t add_state(const std::string& name, Player owner = Player::demon) {
        if (state_ids_.count(name)) throw ModelError("duplicate state '" + name + "'");
        state_ids_.emplace(name, states_.size());
        states_.push_back({name, owner});
        return states_.size() - 1;
    }

    bool has_state(const std::string& name) const { return state_ids_.count(name) != 0; }
    bool has_counter(const std::string& name) const { return counter_ids_.count(name) != 0; }
    std::size_t state_id(const std::string& name) const { return lookup(state_ids_, name, "state"); }
    std::size_t counter_id(const std::string& name) const { return lookup(counter_ids_, name, "counter"); }
    std::size_t dimension() const { return counters_.size(); }
    std::size_t state_count() const { return states_.size(); }
    void set_owner(std::size_t state, Player owner) { states_.at(state).owner = owner; }

    void add_transition(std::size_t src, UpdateVector update, std::size_t dst) {
        transitions_.push_back({src, std::move(update), dst});
    }
    void add_transition(const std::string& src, UpdateVector update, const std::string& dst) {
        add_transition(state_id(src), std::move(update), state_id(dst));
    }

    // Sparse form: only the listed counters change. The update is widened to the counter
    // count at build time, so counters may still be added afterwards.
    void add_sparse_transition(std::size_t src, std::vector<std::pair<std::size_t, std::int64_t>> deltas,
                               std::size_t dst) {
        sparse_.push_back({transitions_.size(), std::move(deltas)});
        transitions_.push_back({src, {}, dst});
    }

    void add_initial(std::size_t state) { initial_.push_back(state); }

    CounterVass build() const {
        auto transitions = transitions_;
        for (const auto& [index, deltas] : sparse_) {
            auto& u = transitions[index].update;
            u.assign(counters_.size(), 0);
            for (auto [c, delta] : deltas) u.at(c) += delta;
        }
        for (auto& t : transitions)
            if (t.update.empty()) t.update.assign(counters_.size(), 0);
        return CounterVass(counters_, states_, std::move(transitions), initial_);
    }

private:
    static std::size_t lookup(const std::unordered_map<std::string, std::size_t>& m, const std::string& name,
                              const char* kind) {
        auto it = m.find(name);
        if (it == m.end()) throw ModelError(std::string("unknown ") + kind + " '" + name + "'");
        return it->second;
    }

    std::vector<std::string> counters_;
    std::vector<StateInfo> states_;
    std::vector<Transition> transitions_;
    std::vector<std::pair<std::size_t, std::vector<std::pair<std::size_t, std::int64_t>>>> sparse_;
    std::vector<std::size_t> initial_;
    std::unordered_map<std::string, std::size_t> counter_ids_;
    std::unordered_map<std::string, std::size_t> state_ids_;
};

struct Configuration {
    std::size_t state = 0;
    std::vector<BigInt> values;

    bool operator==(const Configuration&) const = default;
};

inline Configuration uniform_configuration(const CounterVass& vass, std::size_t state, const BigInt& n) {
    return {state, std::vector<BigInt>(vass.dimension(), n)};
}

struct PathEffect {
    std::vector<std::int64_t> delta;

    PathEffect() = default;
    explicit PathEffect(std::size_t dim) : delta(dim, 0) {}

    PathEffect& operator+=(const PathEffect& o) {
        if (o.delta.size() != delta.size()) throw ModelError("path effect dimension mismatch");
        for (std::size_t i = 0; i < delta.size(); ++i) delta[i] += o.delta[i];
        return *this;
    }
    friend PathEffect operator+(PathEffect a, const PathEffect& b) { return a += b; }
    bool operator==(const PathEffect&) const = default;
};

// Summed updates of a sequence of transitions; consecutive transitions must connect.
inline PathEffect path_effect(const CounterVass& vass, const std::vector<std::size_t>& path) {
    PathEffect eff(vass.dimension());
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto& t = vass.transition(path[i]);
        if (i > 0 && vass.transition(path[i - 1]).target != t.source)
            throw ModelError("path is not connected at position " + std::to_string(i));
        for (std::size_t c = 0; c < eff.delta.size(); ++c) eff.delta[c] += t.update[c];
    }
    return eff;
}

inline bool is_enabled(const Transition& t, const std::vector<BigInt>& values) {
    for (std::size_t c = 0; c < values.size(); ++c)
        if (values[c] + t.update[c] < 0) return false;
    return true;
}

struct Diagnostic {
    std::string code;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

inline std::vector<Diagnostic> validate(const CounterVass& vass) {
    std::vector<Diagnostic> out;
    std::unordered_set<std::string> seen;
    for (const auto& c : vass.counters())
        if (!seen.insert(c).second) out.push_back({"duplicate-counter", "counter " + c + " is declared twice"});
    seen.clear();
    for (const auto& s : vass.states())
        if (!seen.insert(s.name).second) out.push_back({"duplicate-state", "state " + s.name + " is declared twice"});

    const std::size_t n = vass.state_count();
    std::vector<bool> has_out(n, false);
    for (std::size_t t = 0; t < vass.transition_count(); ++t) {
        const auto& tr = vass.transition(t);
        if (tr.source >= n || tr.target >= n) {
            out.push_back({"unknown-state", "transition " + std::to_string(t) + " references a state outside 0.." +
                                                std::to_string(n == 0 ? 0 : n - 1)});
            continue;
        }
        has_out[tr.source] = true;
        if (tr.update.size() != vass.dimension()) {
            out.push_back({"dimension", "transition " + std::to_string(t) + " (" + vass.state_name(tr.source) +
                                            " -> " + vass.state_name(tr.target) + ") has " +
                                            std::to_string(tr.update.size()) + " update components but d = " +
                                            std::to_string(vass.dimension())});
        }
    }
    for (std::size_t s = 0; s < n; ++s)
        if (!has_out[s])
            out.push_back({"no-successor", "state " + vass.state_name(s) + " has no outgoing transition"});
    for (auto s : vass.initial_states())
        if (s >= n) out.push_back({"unknown-state", "initial state index " + std::to_string(s) + " is out of range"});
    return out;
}

inline void require_valid(const CounterVass& vass) {
    auto diags = validate(vass);
    if (!diags.empty()) throw ModelError(diags.front().message);
}

// Returns the first name in base, base1, base2, ... not rejected by `taken`.
inline std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& taken) {
    if (!taken(base)) return base;
    for (std::size_t i = 1;; ++i) {
        auto candidate = base + std::to_string(i);
        if (!taken(candidate)) return candidate;
    }
}

inline CounterVass add_step_counter(const CounterVass& vass) {
    auto counters = vass.counters();
    counters.push_back(fresh_name("sc", [&](const std::string& s) { return vass.find_counter(s).has_value(); }));
    auto transitions = vass.transitions();
    for (auto& t : transitions) t.update.push_back(1);
    return CounterVass(std::move(counters), vass.states(), std::move(transitions), vass.initial_states());
}

}  // namespace vassan
