#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vassan/core.hpp"
#include "vassan/generators.hpp"
#include "vassan/graph.hpp"
#include "vassan/growth_vector.hpp"
#include "vassan/lp.hpp"
#include "vassan/oracle.hpp"
#include "vassan/transform.hpp"

namespace vassan {

struct CirculationWitness {
    std::vector<Rational> multiplicity;  // per transition of the analysed SCC
};

struct ExpCounters {
    std::vector<bool> member;
    std::vector<std::optional<CirculationWitness>> witness;

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t c = 0; c < member.size(); ++c)
            if (member[c]) out.push_back(c);
        return out;
    }
};

inline bool is_strongly_connected(const CounterVass& vass) {
    if (vass.state_count() == 0) return false;
    std::vector<std::vector<std::size_t>> adj(vass.state_count());
    for (const auto& t : vass.transitions()) adj[t.source].push_back(t.target);
    std::size_t count = 0;
    strongly_connected_components(adj, &count);
    return count == 1;
}

// Flow conservation, non-negativity, non-negative total effect, and effect >= 1 on `counter`.
inline bool verify_circulation(const CounterVass& vass, const CirculationWitness& w, std::size_t counter) {
    if (w.multiplicity.size() != vass.transition_count()) return false;
    std::vector<Rational> balance(vass.state_count(), 0), effect(vass.dimension(), 0);
    for (std::size_t t = 0; t < vass.transition_count(); ++t) {
        const auto& x = w.multiplicity[t];
        if (x < 0) return false;
        if (x == 0) continue;
        const auto& tr = vass.transition(t);
        balance[tr.source] -= x;
        balance[tr.target] += x;
        for (std::size_t c = 0; c < vass.dimension(); ++c) effect[c] += x * tr.update[c];
    }
    for (const auto& b : balance)
        if (b != 0) return false;
    for (const auto& e : effect)
        if (e < 0) return false;
    return effect.at(counter) >= 1;
}

namespace detail {

struct CirculationComponent {
    std::vector<std::size_t> states;
    std::vector<std::size_t> transitions;
};

// Circulation constraints for each component plus a zero effect on every counter in `zero`.
// Variables are the transitions of all components, in component order.
inline LpProblem circulation_lp(const CounterVass& a, const std::vector<CirculationComponent>& comps,
                                const std::vector<bool>& zero, std::vector<std::size_t>& var_of) {
    LpProblem lp;
    var_of.assign(a.transition_count(), npos);
    for (const auto& k : comps)
        for (auto t : k.transitions) var_of[t] = lp.variable_count++;
    for (const auto& k : comps) {
        std::map<std::size_t, std::vector<std::pair<std::size_t, Rational>>> flow;
        for (auto s : k.states) flow[s];
        for (auto t : k.transitions) {
            const auto& tr = a.transition(t);
            if (tr.source == tr.target) continue;
            flow[tr.source].push_back({var_of[t], Rational(1)});
            flow[tr.target].push_back({var_of[t], Rational(-1)});
        }
        for (auto& [s, terms] : flow)
            if (!terms.empty()) lp.add(std::move(terms), Relation::eq, 0);
        for (std::size_t c = 0; c < a.dimension(); ++c) {
            if (!zero[c]) continue;
            std::vector<std::pair<std::size_t, Rational>> terms;
            for (auto t : k.transitions)
                if (a.transition(t).update[c] != 0) terms.push_back({var_of[t], Rational(a.transition(t).update[c])});
            if (!terms.empty()) lp.add(std::move(terms), Relation::eq, 0);
        }
    }
    return lp;
}

// Splits components until each one supports a circulation with full support and zero effect on
// `zero`. Every cycle with zero effect on `zero` stays inside one of the returned components.
inline std::vector<CirculationComponent> refine_components(const CounterVass& a, CirculationComponent start,
                                                           const std::vector<bool>& zero) {
    std::vector<CirculationComponent> done, work{std::move(start)};
    while (!work.empty()) {
        auto k = std::move(work.back());
        work.pop_back();
        if (k.transitions.empty()) continue;
        std::set<std::size_t> support;
        for (auto t : k.transitions) {
            if (support.count(t)) continue;
            std::vector<std::size_t> var_of;
            auto lp = circulation_lp(a, {k}, zero, var_of);
            lp.add({{var_of[t], Rational(1)}}, Relation::ge, 1);
            auto x = find_feasible_point(lp);
            if (!x) continue;
            for (auto u : k.transitions)
                if ((*x)[var_of[u]] > 0) support.insert(u);
        }
        if (support.empty()) continue;
        std::map<std::size_t, std::size_t> local;
        for (auto s : k.states) local.emplace(s, local.size());
        std::vector<std::vector<std::size_t>> adj(k.states.size());
        for (auto t : support) adj[local[a.transition(t).source]].push_back(local[a.transition(t).target]);
        std::size_t count = 0;
        auto comp = strongly_connected_components(adj, &count);
        std::vector<CirculationComponent> parts(count);
        for (auto s : k.states) parts[comp[local[s]]].states.push_back(s);
        for (auto t : support) parts[comp[local[a.transition(t).source]]].transitions.push_back(t);
        std::vector<CirculationComponent> nonempty;
        for (auto& p : parts)
            if (!p.transitions.empty()) nonempty.push_back(std::move(p));
        if (nonempty.size() == 1 && nonempty.front().transitions.size() == k.transitions.size()) {
            done.push_back(std::move(k));
        } else {
            for (auto& p : nonempty) work.push_back(std::move(p));
        }
    }
    return done;
}

}  // namespace detail

// Counters of a strongly connected VASS that can be pumped exponentially from v-consistent
// initial values: the largest set E admitting cycles with zero effect outside E whose summed
// effect is strictly positive on all of E. Computed as a greatest fixed point over E.
inline ExpCounters exp_counters(const CounterVass& scc, const GrowthVector& v) {
    if (!is_strongly_connected(scc)) throw ModelError("exp_counters requires a strongly connected VASS");
    const auto a = restrict_to_infinite(scc, v);
    const std::size_t d = a.dimension();
    ExpCounters out;
    out.member.assign(d, false);
    out.witness.assign(d, std::nullopt);

    std::vector<bool> in_e(d, false);
    for (std::size_t c = 0; c < d; ++c) in_e[c] = !v[c].is_infinite();
    detail::CirculationComponent whole;
    for (std::size_t s = 0; s < a.state_count(); ++s) whole.states.push_back(s);
    for (std::size_t t = 0; t < a.transition_count(); ++t) whole.transitions.push_back(t);

    std::vector<std::optional<CirculationWitness>> witness(d);
    while (true) {
        bool any = std::find(in_e.begin(), in_e.end(), true) != in_e.end();
        if (!any) break;
        std::vector<bool> zero(d);
        for (std::size_t c = 0; c < d; ++c) zero[c] = !in_e[c];
        auto comps = detail::refine_components(a, whole, zero);
        std::vector<bool> next(d, false);
        witness.assign(d, std::nullopt);
        if (!comps.empty()) {
            for (std::size_t c = 0; c < d; ++c) {
                if (!in_e[c]) continue;
                std::vector<std::size_t> var_of;
                auto lp = detail::circulation_lp(a, comps, zero, var_of);
                bool possible = true;
                for (std::size_t e = 0; e < d && possible; ++e) {
                    if (!in_e[e]) continue;
                    std::vector<std::pair<std::size_t, Rational>> terms;
                    for (const auto& k : comps)
                        for (auto t : k.transitions)
                            if (a.transition(t).update[e] != 0)
                                terms.push_back({var_of[t], Rational(a.transition(t).update[e])});
                    if (terms.empty()) {
                        possible = e != c;
                        continue;
                    }
                    lp.add(std::move(terms), Relation::ge, e == c ? 1 : 0);
                }
                if (!possible) continue;
                if (auto x = find_feasible_point(lp)) {
                    next[c] = true;
                    CirculationWitness w;
                    w.multiplicity.assign(a.transition_count(), 0);
                    for (std::size_t t = 0; t < a.transition_count(); ++t)
                        if (var_of[t] != npos) w.multiplicity[t] = (*x)[var_of[t]];
                    witness[c] = std::move(w);
                }
            }
        }
        if (next == in_e) break;
        in_e = next;
    }
    for (std::size_t c = 0; c < d; ++c) {
        out.member[c] = in_e[c];
        if (in_e[c]) out.witness[c] = witness[c];
    }
    return out;
}

struct LiftedVass {
    CounterVass vass;
    std::size_t in = 0;   // the pumper's entry state
    std::size_t out = 0;  // the pumper's exit state
};

// Strongly connected union of an SCC with the pumping program for v, bridged at every SCC state.
// The SCC's counters keep their positions; pumper-internal counters and states are appended.
inline LiftedVass lift_with_pumper(const CounterVass& scc, const GrowthVector& v) {
    if (scc.state_count() == 0) throw ModelError("cannot lift an empty SCC");
    if (v.size() != scc.dimension()) throw ModelError("growth vector dimension mismatch");
    for (const auto& e : v)
        if (e.is_infinite()) throw ModelError("lift_with_pumper needs a finite growth vector; restrict first");
    auto pumper = gen_pumper(v, scc.counters());
    VassBuilder b;
    for (const auto& c : scc.counters()) b.add_counter(c);
    for (std::size_t c = scc.dimension(); c < pumper.vass.dimension(); ++c) {
        auto name = fresh_name(pumper.vass.counter_name(c), [&](const std::string& s) { return b.has_counter(s); });
        b.add_counter(name);
    }
    for (const auto& s : scc.states()) b.add_state(s.name, Player::demon);
    std::vector<std::size_t> pstate;
    for (const auto& s : pumper.vass.states())
        pstate.push_back(b.add_state(fresh_name("pump" + s.name, [&](const std::string& x) { return b.has_state(x); })));
    const std::size_t dim = pumper.vass.dimension();
    auto widen = [&](const UpdateVector& u) {
        UpdateVector w(dim, 0);
        std::copy(u.begin(), u.end(), w.begin());
        return w;
    };
    for (const auto& t : scc.transitions()) b.add_transition(t.source, widen(t.update), t.target);
    for (const auto& t : pumper.vass.transitions()) b.add_transition(pstate[t.source], t.update, pstate[t.target]);
    std::int64_t big = 0;
    for (const auto& t : scc.transitions())
        for (auto x : t.update) big = std::max<std::int64_t>(big, x < 0 ? -x : x);
    const std::int64_t m = static_cast<std::int64_t>(scc.state_count()) * big;
    UpdateVector minus_m(dim, -m);
    for (std::size_t p = 0; p < scc.state_count(); ++p) {
        b.add_transition(p, minus_m, pstate[pumper.in]);
        b.add_transition(pstate[pumper.out], minus_m, p);
    }
    return {b.build(), pstate[pumper.in], pstate[pumper.out]};
}

struct GrowthOptions {
    std::vector<std::uint64_t> samples{2, 4, 8, 16};
    ExploreLimits limits{};
    bool use_lift = false;
};

struct CounterEstimate {
    std::size_t counter = 0;
    GrowthExponent exponent = GrowthExponent::poly(1);
    bool stable = false;
    std::vector<Sample> samples;
    FitResult fit;
};

// Estimates polynomial exponents of counters that are known not to be exponential.
class ExponentOracle {
public:
    virtual ~ExponentOracle() = default;
    // `scc` already has every infinite component of v zeroed.
    virtual std::vector<CounterEstimate> estimate(const CounterVass& scc, const GrowthVector& v,
                                                  const std::vector<std::size_t>& counters) = 0;
};

// Exact maxima at small n from v-consistent initial values, followed by a slope fit.
class SimulationOracle : public ExponentOracle {
public:
    explicit SimulationOracle(GrowthOptions opts = {}) : opts_(std::move(opts)) {}

    std::vector<CounterEstimate> estimate(const CounterVass& scc, const GrowthVector& v,
                                          const std::vector<std::size_t>& counters) override {
        std::vector<CounterEstimate> out;
        for (auto c : counters) out.push_back({c, v.at(c), false, {}, {}});
        std::vector<bool> live(counters.size(), true);
        for (auto n : opts_.samples) {
            if (std::none_of(live.begin(), live.end(), [](bool b) { return b; })) break;
            ExploreResult r;
            try {
                r = opts_.use_lift ? run_lifted(scc, v, n) : run_direct(scc, v, n);
            } catch (const BudgetExceeded&) {
                break;
            }
            for (std::size_t i = 0; i < counters.size(); ++i) {
                if (!live[i]) continue;
                const auto& cv = r.counter_max[counters[i]];
                if (!cv.exact()) {
                    live[i] = false;
                    continue;
                }
                out[i].samples.push_back({n, double(cv.value), false});
            }
        }
        for (auto& est : out) {
            const auto floor = v.at(est.counter);
            if (est.samples.size() < 2) {
                est.exponent = floor;
                est.stable = false;
                continue;
            }
            est.fit = fit_exponent(est.samples);
            est.exponent = std::max(floor, GrowthExponent::poly(est.fit.k));
            est.stable = est.fit.stable;
        }
        return out;
    }

    const GrowthOptions& options() const { return opts_; }

private:
    ExploreResult run_direct(const CounterVass& scc, const GrowthVector& v, std::uint64_t n) {
        auto sched = initial_schedule(v, n, BigInt(opts_.limits.value_cap));
        for (std::size_t c = 0; c < v.size(); ++c)
            if (v[c].is_infinite()) sched.values[c] = 0;  // zeroed counters never change
        std::vector<Configuration> starts;
        for (std::size_t p = 0; p < scc.state_count(); ++p) starts.push_back({p, sched.values});
        return explore_demonic_max(scc, starts, opts_.limits);
    }

    ExploreResult run_lifted(const CounterVass& scc, const GrowthVector& v, std::uint64_t n) {
        GrowthVector finite = v;
        for (auto& e : finite)
            if (e.is_infinite()) e = GrowthExponent::poly(1);
        auto lifted = lift_with_pumper(scc, finite);
        auto res = explore_demonic_max(lifted.vass, uniform_configuration(lifted.vass, lifted.in, BigInt(n)),
                                       opts_.limits);
        res.counter_max.resize(scc.dimension());
        return res;
    }

    GrowthOptions opts_;
};

struct GrowthStepResult {
    GrowthVector output;
    std::vector<std::size_t> exponential;        // counters classified exponential here
    std::vector<CirculationWitness> witnesses;   // parallel to `exponential`
    std::vector<CounterEstimate> estimates;
};

// Evaluates the growth function of single SCCs, memoised on the SCC's structure restricted to
// the counters it touches together with the projection of v onto those counters.
class GrowthEngine {
public:
    explicit GrowthEngine(GrowthOptions opts = {}, std::shared_ptr<ExponentOracle> oracle = nullptr)
        : opts_(opts), oracle_(oracle ? std::move(oracle) : std::make_shared<SimulationOracle>(opts)) {}

    void set_memoize(bool on) { memoize_ = on; }
    std::size_t cache_size() const { return cache_.size(); }
    std::size_t evaluations() const { return evaluations_; }
    const GrowthOptions& options() const { return opts_; }

    GrowthVector operator()(const CounterVass& scc, const GrowthVector& v) { return step(scc, v).output; }

    GrowthStepResult step(const CounterVass& scc, const GrowthVector& v) {
        if (v.size() != scc.dimension()) throw ModelError("growth vector dimension mismatch");
        GrowthStepResult res;
        res.output = v;
        if (scc.transition_count() == 0) return res;
        auto touched = touched_counters(scc, v);
        if (touched.empty()) return res;

        const auto key = signature(scc, v, touched);
        const Cached* entry = nullptr;
        Cached fresh;
        if (memoize_) {
            if (auto it = cache_.find(key); it != cache_.end()) entry = &it->second;
        }
        if (!entry) {
            fresh = compute(scc, v, touched);
            ++evaluations_;
            if (memoize_) entry = &cache_.emplace(key, std::move(fresh)).first->second;
            else entry = &fresh;
        }
        for (std::size_t i = 0; i < touched.size(); ++i) res.output[touched[i]] = entry->output[i];
        for (std::size_t i = 0; i < entry->exponential.size(); ++i) {
            res.exponential.push_back(touched[entry->exponential[i]]);
            res.witnesses.push_back(entry->witnesses[i]);
        }
        for (auto est : entry->estimates) {
            est.counter = touched[est.counter];
            res.estimates.push_back(std::move(est));
        }
        return res;
    }

    static std::vector<std::size_t> touched_counters(const CounterVass& scc, const GrowthVector& v) {
        std::vector<std::size_t> out;
        for (std::size_t c = 0; c < scc.dimension(); ++c) {
            if (v[c].is_infinite()) continue;
            for (const auto& t : scc.transitions())
                if (t.update[c] != 0) {
                    out.push_back(c);
                    break;
                }
        }
        return out;
    }

private:
    struct Cached {
        GrowthVector output;                     // over touched positions
        std::vector<std::size_t> exponential;    // touched positions
        std::vector<CirculationWitness> witnesses;
        std::vector<CounterEstimate> estimates;  // counter field is a touched position
    };

    static std::string signature(const CounterVass& scc, const GrowthVector& v, const std::vector<std::size_t>& touched) {
        std::string key = std::to_string(scc.state_count()) + ";";
        for (const auto& t : scc.transitions()) {
            key += std::to_string(t.source) + ">" + std::to_string(t.target) + ":";
            for (auto c : touched) key += std::to_string(t.update[c]) + ",";
            key += ";";
        }
        key += "|";
        for (auto c : touched) key += v[c].to_string() + ",";
        return key;
    }

    Cached compute(const CounterVass& scc, const GrowthVector& v, const std::vector<std::size_t>& touched) {
        // Work on a copy projected to the touched counters so the oracle sees a small dimension.
        std::vector<std::string> names;
        for (auto c : touched) names.push_back(scc.counter_name(c));
        std::vector<Transition> ts;
        for (const auto& t : scc.transitions()) {
            UpdateVector u;
            for (auto c : touched) u.push_back(t.update[c]);
            ts.push_back({t.source, std::move(u), t.target});
        }
        CounterVass local(names, scc.states(), std::move(ts));
        GrowthVector lv;
        for (auto c : touched) lv.push_back(v[c]);

        Cached out;
        out.output = lv;
        auto exp = exp_counters(local, lv);
        GrowthVector pumped = lv;
        std::vector<std::size_t> targets;
        for (std::size_t i = 0; i < touched.size(); ++i) {
            if (exp.member[i]) {
                pumped[i] = GrowthExponent::infinity();
                out.output[i] = GrowthExponent::infinity();
                out.exponential.push_back(i);
                out.witnesses.push_back(*exp.witness[i]);
            } else {
                targets.push_back(i);
            }
        }
        if (!targets.empty()) {
            auto restricted = restrict_to_infinite(local, pumped);
            out.estimates = oracle_->estimate(restricted, pumped, targets);
            for (const auto& est : out.estimates)
                out.output[est.counter] = std::max(lv[est.counter], est.exponent);
        }
        return out;
    }

    GrowthOptions opts_;
    std::shared_ptr<ExponentOracle> oracle_;
    std::map<std::string, Cached> cache_;
    bool memoize_ = true;
    std::size_t evaluations_ = 0;
};

inline GrowthVector growth_step(const CounterVass& scc, const GrowthVector& v, GrowthEngine& engine) {
    if (scc.transition_count() > 0 && !is_strongly_connected(scc))
        throw ModelError("growth_step requires a strongly connected VASS");
    return engine(scc, v);
}

// Polynomial exponent of one counter of an SCC under v, after zeroing exponential counters.
inline CounterEstimate estimate_exponent(const CounterVass& scc, const GrowthVector& v, std::size_t counter,
                                         const GrowthOptions& opts = {}) {
    if (v.at(counter).is_infinite()) throw ModelError("estimate_exponent requires a finite v component");
    auto exp = exp_counters(scc, v);
    if (exp.member[counter]) throw ModelError("counter " + scc.counter_name(counter) + " is exponential");
    GrowthVector pumped = v;
    for (auto c : exp.members()) pumped[c] = GrowthExponent::infinity();
    SimulationOracle oracle(opts);
    return oracle.estimate(restrict_to_infinite(scc, pumped), pumped, {counter}).front();
}

}  // namespace vassan
