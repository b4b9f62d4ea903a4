#pragma once

#include "vassan/core.hpp"
#include "vassan/growth_vector.hpp"

namespace vassan {

// Zeroes every update component whose counter is already at least exponential.
inline CounterVass restrict_to_infinite(const CounterVass& vass, const GrowthVector& v) {
    if (v.size() != vass.dimension())
        throw ModelError("growth vector has " + std::to_string(v.size()) + " components but d = " +
                         std::to_string(vass.dimension()));
    auto transitions = vass.transitions();
    for (auto& t : transitions)
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i].is_infinite()) t.update[i] = 0;
    return CounterVass(vass.counters(), vass.states(), std::move(transitions), vass.initial_states());
}

inline bool is_zero(const UpdateVector& u) {
    return std::all_of(u.begin(), u.end(), [](std::int64_t x) { return x == 0; });
}

// Splits every non-zero angelic transition (p,u,q) into (p,0,q') and (q',u,q) with q' a fresh
// demonic state. Original states keep their indices; fresh states are appended. The first part
// of a split keeps the original transition's index, the second part is appended.
inline CounterVass normalize_angelic(const CounterVass& game) {
    auto states = game.states();
    auto transitions = game.transitions();
    std::unordered_set<std::string> names;
    for (const auto& s : states) names.insert(s.name);

    const std::size_t original = transitions.size();
    for (std::size_t t = 0; t < original; ++t) {
        if (game.owner(transitions[t].source) != Player::angel || is_zero(transitions[t].update)) continue;
        const auto& tr = game.transition(t);
        auto name = fresh_name(tr.source < states.size() ? states[tr.source].name + "_to_" + states[tr.target].name
                                                         : std::string("split"),
                               [&](const std::string& s) { return names.count(s) != 0; });
        names.insert(name);
        states.push_back({name, Player::demon});
        const std::size_t mid = states.size() - 1;
        transitions[t] = {tr.source, UpdateVector(game.dimension(), 0), mid};
        transitions.push_back({mid, tr.update, tr.target});
    }
    return CounterVass(game.counters(), std::move(states), std::move(transitions), game.initial_states());
}

inline bool is_normalized(const CounterVass& game) {
    for (const auto& t : game.transitions())
        if (game.owner(t.source) == Player::angel && !is_zero(t.update)) return false;
    return true;
}

}  // namespace vassan
