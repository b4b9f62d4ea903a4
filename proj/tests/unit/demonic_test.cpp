#include <gtest/gtest.h>

#include "support.hpp"

using namespace vassan;
using namespace testsupport;

namespace {

// A diamond with a scripted growth function per (vertex, input vector).
struct MockDiamond {
    SccDag dag = diamond_dag();
    std::map<std::pair<std::size_t, std::string>, GrowthVector> script{
        {{0, "(1,1,1)"}, gv("(2,1,inf)")},   {{1, "(2,1,inf)"}, gv("(5,1,inf)")},
        {{2, "(2,1,inf)"}, gv("(2,inf,inf)")}, {{3, "(5,1,inf)"}, gv("(5,5,inf)")},
        {{3, "(2,inf,inf)"}, gv("(2,inf,inf)")}};

    VectTable run() const {
        auto growth = [&](std::size_t v, const GrowthVector& in) {
            auto it = script.find({v, to_string(in)});
            if (it == script.end()) throw ModelError("unscripted input " + to_string(in));
            return it->second;
        };
        return compute_vect(dag, 3, growth);
    }
};

CounterVass sat_instance(bool satisfiable) {
    return gen_sat(satisfiable ? tautology_clause_formula() : all_sign_patterns_formula(), 2).vass;
}

}  // namespace

TEST(Vect, MockDiamondSets) {
    auto t = MockDiamond{}.run();
    EXPECT_EQ(t.sets[0], std::vector<GrowthVector>{gv("(2,1,inf)")});
    EXPECT_EQ(t.sets[3], (std::vector<GrowthVector>{gv("(2,inf,inf)"), gv("(5,5,inf)")}));
}

TEST(Vect, QueriesAndWitnesses) {
    auto t = MockDiamond{}.run();
    auto lower = query_table(t, 0, 5, QueryMode::lower);
    EXPECT_TRUE(lower.verdict);
    EXPECT_EQ(lower.witness, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(lower.witness_role, "realizes-lower");
    EXPECT_TRUE(query_table(t, 0, 5, QueryMode::upper).verdict);
    EXPECT_TRUE(query_table(t, 0, 5, QueryMode::theta).verdict);
    EXPECT_FALSE(query_table(t, 0, 6, QueryMode::lower).verdict);

    auto second = query_table(t, 1, 5, QueryMode::upper);
    EXPECT_FALSE(second.verdict);
    EXPECT_TRUE(second.exponent.is_infinite());
    EXPECT_EQ(second.witness_role, "violates-upper");
    EXPECT_EQ(second.witness, (std::vector<std::size_t>{0, 2}));

    for (std::size_t c = 0; c < 3; ++c) EXPECT_TRUE(query_table(t, c, 1, QueryMode::lower).verdict);
    EXPECT_THROW(query_table(t, 0, 0, QueryMode::upper), ModelError);
}

TEST(Demonic, Example1LengthIsQuadratic) {
    GrowthEngine engine;
    auto v = gen_example1().vass;
    EXPECT_TRUE(query_length(v, 2, QueryMode::theta, engine).verdict);
    EXPECT_FALSE(query_length(v, 1, QueryMode::upper, engine).verdict);
    auto i = query_counter(v, "i", 1, QueryMode::theta, engine);
    EXPECT_TRUE(i.verdict);
}

TEST(Demonic, SatReductionSeparatesFormulas) {
    GrowthEngine engine;
    EXPECT_TRUE(query_length(sat_instance(true), 3, QueryMode::theta, engine).verdict);
    EXPECT_TRUE(query_length(sat_instance(false), 2, QueryMode::theta, engine).verdict);
    auto sat = gen_sat(tautology_clause_formula(), 2), unsat = gen_sat(all_sign_patterns_formula(), 2);
    EXPECT_TRUE(query_counter(sat.vass, sat.counter, 2, QueryMode::theta, engine).verdict);
    EXPECT_TRUE(query_counter(unsat.vass, unsat.counter, 1, QueryMode::theta, engine).verdict);
}

TEST(Demonic, ExponentialCounters) {
    GrowthEngine engine;
    auto v = load_fixture("doubling_pair.vass");
    auto a = analyze_demonic(v, engine);
    EXPECT_TRUE(counter_exponent(a, 0).is_infinite());
    EXPECT_TRUE(counter_exponent(a, 1).is_infinite());
    auto bound = query_counter(a, 0, 4, QueryMode::upper);
    EXPECT_FALSE(bound.verdict);
    EXPECT_EQ(bound.witness_role, "violates-upper");
}

TEST(Demonic, ReplayReproducesTheTable) {
    GrowthEngine engine;
    auto a = analyze_length(gen_sat(tautology_clause_formula(), 2).vass, engine);
    const auto sc = a.model.vass.dimension() - 1;
    auto q = query_counter(a, sc, 3, QueryMode::lower);
    ASSERT_TRUE(q.verdict);
    auto replay = replay_path(a, q.witness, engine);
    EXPECT_EQ(replay.back(), q.witness_vector);
    EXPECT_EQ(replay.back()[sc], GrowthExponent::poly(3));
    EXPECT_THROW(replay_path(a, {}, engine), ModelError);
}

TEST(Tractability, PathDegrees) {
    auto single = tractability_report(load_fixture("doubling_pair.vass"));
    EXPECT_EQ(single.max_degree, 1);
    EXPECT_TRUE(single.tractable);
    EXPECT_EQ(tractability_report(diamond_dag()).max_degree, 2);
    EXPECT_FALSE(tractability_report(diamond_dag(), 1).tractable);

    auto g = sat_instance(false);
    auto dag = scc_dag(g);
    auto report = tractability_report(dag);
    for (const auto& [leaf, degree] : report.leaf_degree)
        EXPECT_EQ(degree, BigInt(count_paths_to(dag.view(), leaf))) << leaf;
}

TEST(Demonic, MemoisationDoesNotChangeResults) {
    GrowthEngine cached, plain;
    plain.set_memoize(false);
    auto v = sat_instance(true);
    auto a = analyze_length(v, cached), b = analyze_length(v, plain);
    EXPECT_EQ(a.table.sets, b.table.sets);
    EXPECT_LT(cached.evaluations(), plain.evaluations());
}

TEST(Demonic, FocusDoesNotChangeTheFocusedCounter) {
    GrowthEngine engine;
    auto v = gen_example1().vass;
    auto all = analyze_demonic(v, engine);
    for (std::size_t c = 0; c < v.dimension(); ++c)
        EXPECT_EQ(counter_exponent(analyze_demonic(v, engine, {c}), c), counter_exponent(all, c)) << c;
}
