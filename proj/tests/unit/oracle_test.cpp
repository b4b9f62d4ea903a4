#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace vassan;
using namespace testsupport;

namespace {

// Every state as a start with all counters at n, matching the naive explorer's convention.
ExploreResult explore_all(const CounterVass& v, long long n) {
    std::vector<Configuration> starts;
    for (std::size_t p = 0; p < v.state_count(); ++p) starts.push_back(uniform_configuration(v, p, BigInt(n)));
    return explore_demonic_max(v, starts);
}

}  // namespace

TEST(Schedule, PolynomialAndExponentialComponents) {
    auto a = initial_schedule(gv("(1,1)"), 5, BigInt(1000000));
    EXPECT_EQ(a.values, (std::vector<BigInt>{5, 5}));
    auto b = initial_schedule(gv("(2,inf)"), 3, BigInt(1000000));
    EXPECT_EQ(b.values, (std::vector<BigInt>{9, 8}));
    EXPECT_EQ(b.saturated, (std::vector<bool>{false, false}));
    auto c = initial_schedule(gv("(1,inf)"), 30, BigInt(1000000));
    EXPECT_EQ(c.values, (std::vector<BigInt>{30, 1000000}));
    EXPECT_TRUE(c.saturated[1]);
    EXPECT_THROW(initial_schedule(gv("(1)"), 0, BigInt(10)), ModelError);
}

TEST(Fit, ExactPowers) {
    auto f = fit_exponent({{2, 4}, {4, 16}, {8, 64}});
    EXPECT_EQ(f.k, 2u);
    EXPECT_TRUE(f.stable);
    EXPECT_EQ(fit_exponent({{2, 2}, {4, 4}, {8, 8}, {16, 16}}).k, 1u);
}

TEST(Fit, LowerOrderTermsAreCorrected) {
    auto f = fit_exponent({{2, 5}, {4, 17}, {8, 65}});
    EXPECT_EQ(f.k, 2u);
    EXPECT_TRUE(f.stable);
    EXPECT_NEAR(f.estimate, 2.0, 0.15);
    // Two samples give a raw slope but never a stable fit.
    EXPECT_FALSE(fit_exponent({{2, 4}, {4, 16}}).stable);
}

TEST(Fit, RejectsBadSamples) {
    EXPECT_THROW(fit_exponent({{2, 4}}), ModelError);
    EXPECT_THROW(fit_exponent({{2, 4}, {2, 8}}), ModelError);
    EXPECT_THROW(fit_exponent({{2, 0}, {4, 8}}), ModelError);
    EXPECT_THROW(fit_exponent({{2, 4}, {4, 8, true}}), ModelError);
}

TEST(Explore, DecrementLoop) {
    auto v = load_fixture("decrement_loop.vass");
    auto r = explore_demonic_max(v, uniform_configuration(v, 0, BigInt(3)));
    EXPECT_EQ(r.max_length.value, 3);
    EXPECT_EQ(r.counter_max[0].value, 3);
    EXPECT_TRUE(r.max_length.exact());
}

TEST(Explore, IncrementLoopIsUnbounded) {
    auto v = load_fixture("incrementing_loop.vass");
    auto r = explore_demonic_max(v, uniform_configuration(v, 0, BigInt(1)));
    EXPECT_TRUE(r.max_length.unbounded);
    EXPECT_TRUE(r.counter_max[0].unbounded);
}

TEST(Explore, Example1GoldenLengths) {
    auto v = gen_example1().vass;
    const std::pair<long long, std::int64_t> golden[] = {{4, 148}, {8, 484}, {16, 1732}};
    for (auto [n, len] : golden) {
        auto r = explore_all(v, n);
        EXPECT_EQ(r.max_length.value, len) << "n=" << n;
        EXPECT_EQ(r.counter_max[0].value, 2 * n);
    }
}

TEST(Explore, AgreesWithNaiveSearch) {
    std::mt19937_64 rng(23);
    int compared = 0;
    for (int i = 0; i < 80; ++i) {
        auto v = random_vass(rng, {5, 2, 2, 0.0});
        for (long long n = 1; n <= 3; ++n) {
            auto naive = naive_explore_uniform(v, n, 300);
            auto lib = explore_all(v, n);
            if (naive.unbounded) {
                EXPECT_TRUE(lib.max_length.unbounded) << i;
                continue;
            }
            ++compared;
            EXPECT_EQ(lib.max_length.value, naive.length) << i << " n=" << n;
            for (std::size_t c = 0; c < v.dimension(); ++c)
                EXPECT_EQ(lib.counter_max[c].value, naive.counter_max[c]) << i << " n=" << n;
        }
    }
    EXPECT_GT(compared, 20);
}

TEST(Explore, NodeBudgetSaturates) {
    auto p = gen_pumper(gv("(2)"));
    ExploreLimits tight;
    tight.max_nodes = 50;
    auto r = explore_demonic_max(p.vass, uniform_configuration(p.vass, p.in, BigInt(3)), tight);
    EXPECT_TRUE(r.truncated);
    EXPECT_TRUE(r.counter_max[0].saturated);
    EXPECT_LE(r.counter_max[0].value, 24);
}

TEST(Horizon, BoundedBreadthFirst) {
    auto v = load_fixture("incrementing_loop.vass");
    auto r = explore_horizon(v, uniform_configuration(v, 0, BigInt(2)), 5);
    EXPECT_EQ(r.counter_max[0], 7);
    EXPECT_FALSE(r.truncated);
}

TEST(GameValues, WithoutAngelEqualsExploration) {
    auto v = gen_example1().vass;
    auto length = game_values(v, 4, Measure::length());
    auto j = game_values(v, 4, Measure::of_counter(1));
    auto r = explore_all(v, 4);
    std::int64_t best = 0;
    for (std::size_t p = 0; p < v.state_count(); ++p) {
        EXPECT_EQ(length.table.per_state[p], (GameValue{r.start_length[p].value, false})) << p;
        EXPECT_EQ(j.table.per_state[p].value, r.start_counter_max[p][1].value) << p;
        best = std::max(best, length.table.per_state[p].value);
    }
    EXPECT_EQ(best, 148);
}

TEST(GameValues, AngelAvoidsThePump) {
    VassBuilder b;
    b.add_counter("c");
    b.add_state("a", Player::angel);
    b.add_state("stop");
    b.add_state("pump");
    b.add_transition("a", {0}, "stop");
    b.add_transition("a", {0}, "pump");
    b.add_transition("stop", {-1}, "stop");
    b.add_transition("pump", {1}, "pump");
    auto g = b.build();
    auto sol = game_values(g, 3, Measure::length(), {100000, 50});
    EXPECT_EQ(sol.table.per_state[0], (GameValue{4, false}));
    EXPECT_TRUE(sol.table.per_state[2].top);
    // The angel's positional choice at the start node leads to the draining loop.
    const auto start = sol.graph.start_node[0];
    const auto e = sol.graph.begin[start] + sol.angel.choice[start];
    EXPECT_EQ(sol.graph.state_of(sol.graph.dst[e]), 1u);
    EXPECT_EQ(replay_strategies(g, sol, start), sol.table.per_state[0]);
}

TEST(GameValues, ControllerChoiceIsLinear) {
    auto g = load_fixture("controller_choice.vass");
    const auto z = 3u;
    for (std::int64_t n : {2, 4, 8}) {
        auto sol = game_values(g, n, Measure::of_counter(z), {2000000, 200});
        EXPECT_EQ(sol.table.per_state[0], (GameValue{2 * n, false})) << "n=" << n;
    }
}

TEST(GameValues, BestResponsesBoundTheValue) {
    auto g = load_fixture("controller_choice.vass");
    auto sol = game_values(g, 3, Measure::length(), {2000000, 200});
    auto vs_angel = best_response_values(g, sol, sol.angel, Player::angel);
    auto vs_demon = best_response_values(g, sol, sol.demon, Player::demon);
    for (std::size_t v = 0; v < sol.graph.size(); ++v) {
        EXPECT_EQ(vs_angel[v], sol.node_value[v]);
        EXPECT_EQ(vs_demon[v], sol.node_value[v]);
    }
    for (std::size_t p = 0; p < g.state_count(); ++p)
        EXPECT_EQ(replay_strategies(g, sol, sol.graph.start_node[p]), sol.table.per_state[p]) << p;
}

TEST(GameValues, BudgetIsReported) {
    auto g = load_fixture("controller_choice.vass");
    EXPECT_THROW(game_values(g, 8, Measure::length(), {100, 200}), BudgetExceeded);
}

TEST(GameValues, CsvRendering) {
    auto v = load_fixture("decrement_loop.vass");
    std::vector<ValueTable> tables{game_values(v, 1, Measure::length()).table,
                                   game_values(v, 2, Measure::length()).table};
    EXPECT_EQ(values_csv(v, tables), "n,state,value\n1,q,1\n2,q,2\n");
}
