#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace vassan;
using namespace testsupport;

namespace {

CounterVass two_loops_one_bridge() {
    VassBuilder b;
    b.add_counter("c");
    b.add_state("p");
    b.add_state("q");
    b.add_transition("p", {-1}, "p");
    b.add_transition("q", {-1}, "q");
    b.add_transition("p", {0}, "q");
    return b.build();
}

CounterVass angel_forks() {
    VassBuilder b;
    b.add_counter("c");
    b.add_state("a", Player::angel);
    b.add_state("d1");
    b.add_state("d2");
    b.add_transition("a", {0}, "d1");
    b.add_transition("a", {0}, "d2");
    b.add_transition("d1", {-1}, "d1");
    b.add_transition("d2", {1}, "d2");
    return b.build();
}

// Reachability closure computed independently of the Tarjan implementation.
std::vector<std::vector<bool>> closure(const CounterVass& v) {
    const std::size_t n = v.state_count();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t p = 0; p < n; ++p) r[p][p] = true;
    for (const auto& t : v.transitions()) r[t.source][t.target] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

}  // namespace

TEST(SccDag, SingleComponent) {
    auto dag = scc_dag(load_fixture("doubling_pair.vass"));
    EXPECT_EQ(dag.size(), 1u);
    EXPECT_EQ(dag.edge_count(), 0u);
    EXPECT_TRUE(dag.root[0]);
}

TEST(SccDag, TwoComponentsOneEdge) {
    auto dag = scc_dag(two_loops_one_bridge());
    EXPECT_EQ(dag.size(), 2u);
    EXPECT_EQ(dag.edge_count(), 1u);
    EXPECT_TRUE(is_acyclic(dag.view()));
}

TEST(SccDag, MatchesReachabilityClosure) {
    std::mt19937_64 rng(11);
    std::vector<CounterVass> models{gen_sat(tautology_clause_formula(), 2).vass, gen_example1().vass};
    for (int i = 0; i < 50; ++i) models.push_back(random_vass(rng, {7, 1, 2, 0.0}));
    for (const auto& v : models) {
        auto dag = scc_dag(v);
        auto r = closure(v);
        for (std::size_t p = 0; p < v.state_count(); ++p)
            for (std::size_t q = 0; q < v.state_count(); ++q) {
                const bool same = r[p][q] && r[q][p];
                EXPECT_EQ(dag.component_of[p] == dag.component_of[q], same);
                // Edges of the condensation follow reachability.
                if (dag.component_of[p] != dag.component_of[q] && r[p][q]) {
                    EXPECT_LT(dag.component_of[p], dag.component_of[q]) << "ids must be topological";
                }
            }
        EXPECT_TRUE(is_acyclic(dag.view()));
    }
}

TEST(SccDag, GeneratedSatInstanceCount) {
    // Component count checked against the partition by mutual reachability; 20 is frozen from it.
    auto g = gen_sat(tautology_clause_formula(), 2).vass;
    auto dag = scc_dag(g);
    auto r = closure(g);
    std::set<std::vector<std::size_t>> classes;
    for (std::size_t p = 0; p < g.state_count(); ++p) {
        std::vector<std::size_t> cls;
        for (std::size_t q = 0; q < g.state_count(); ++q)
            if (r[p][q] && r[q][p]) cls.push_back(q);
        classes.insert(cls);
    }
    EXPECT_EQ(dag.size(), classes.size());
    EXPECT_EQ(dag.size(), 20u);
}

TEST(DemonicDecomposition, EqualsSccDagOnDemonicVass) {
    auto v = gen_example1().vass;
    auto g = demonic_decomposition(v);
    auto dag = scc_dag(v);
    EXPECT_EQ(g.size(), dag.size());
    for (std::size_t p = 0; p < v.state_count(); ++p)
        for (std::size_t q = 0; q < v.state_count(); ++q)
            EXPECT_EQ(g.class_of[p] == g.class_of[q], dag.component_of[p] == dag.component_of[q]);
}

TEST(DemonicDecomposition, AngelicStateIsItsOwnClass) {
    VassBuilder b;
    b.add_counter("c");
    b.add_state("a", Player::angel);
    b.add_state("d");
    b.add_transition("a", {0}, "a");
    b.add_transition("a", {0}, "d");
    b.add_transition("d", {-1}, "d");
    auto g = demonic_decomposition(b.build());
    ASSERT_EQ(g.size(), 2u);
    EXPECT_NE(g.class_of[0], g.class_of[1]);
    EXPECT_EQ(g.successors[g.class_of[0]], std::vector<std::size_t>{g.class_of[1]});
    EXPECT_TRUE(g.successors[g.class_of[1]].empty());
    EXPECT_EQ(g.tag[g.class_of[0]], Player::angel);
}

TEST(LockingDecomposition, DemonicVassIsItsSccDag) {
    auto v = gen_example1().vass;
    auto ld = locking_decomposition(v);
    auto dag = scc_dag(v);
    EXPECT_EQ(ld.size(), dag.size());
    EXPECT_EQ(ld.edge_count(), dag.edge_count());
    for (const auto& x : ld.vertices) EXPECT_TRUE(x.locks.empty());
}

TEST(LockingDecomposition, AngelicForkLocksEachBranch) {
    auto g = angel_forks();
    auto ld = locking_decomposition(g);
    const auto root = ld.initial[0];
    EXPECT_EQ(ld.vertices[root].tag, Player::angel);
    ASSERT_EQ(ld.successors[root].size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& w = ld.vertices[ld.successors[root][i]];
        EXPECT_EQ(w.locks, LockingSet{i});
        EXPECT_EQ(w.tag, Player::demon);
        EXPECT_EQ(w.members, std::vector<std::size_t>{1 + i});
        EXPECT_EQ(ld.edge_transition[root][i], i);
    }
    // ([d1], {}) and ([d2], {}) are initial vertices as well.
    EXPECT_EQ(ld.initial.size(), 3u);
    EXPECT_EQ(ld.size(), 5u);
    EXPECT_EQ(ld.edge_count(), 2u);
}

TEST(LockingDecomposition, QbfPathsLockTheUniversalChoice) {
    auto game = normalize_angelic(gen_qbf(parse_qdimacs(read_file(fixture("qbf_valid.qdimacs"))), 2).vass);
    auto ld = locking_decomposition(game);
    const auto angelic = game.angelic_states();
    ASSERT_EQ(angelic.size(), 1u);
    std::size_t angelic_vertices = 0;
    for (const auto& v : ld.vertices) angelic_vertices += v.tag == Player::angel;
    EXPECT_EQ(angelic_vertices, 1u);
    // Maximal paths that pass the universal choice lock exactly one transition.
    std::size_t through = 0;
    for_each_root_path(ld.view(), [&](const std::vector<std::size_t>& path) {
        bool crossed = false;
        for (auto v : path) crossed = crossed || ld.vertices[v].tag == Player::angel;
        const auto& last = ld.vertices[path.back()];
        if (crossed) {
            ++through;
            EXPECT_EQ(last.locks.size(), 1u);
        }
        return true;
    });
    EXPECT_GT(through, 0u);
}

TEST(LockingDecomposition, BudgetIsEnforced) {
    auto game = normalize_angelic(gen_qbf(parse_qdimacs(read_file(fixture("qbf_valid.qdimacs"))), 2).vass);
    try {
        locking_decomposition(game, {10});
        FAIL() << "budget ignored";
    } catch (const BudgetExceeded& e) {
        EXPECT_EQ(e.reached(), 10u);
    }
}

TEST(PathDegree, SmallShapes) {
    DagView single{{{}}, {true}};
    EXPECT_EQ(path_degree(single, 0), 1);
    auto d = diamond_dag();
    EXPECT_EQ(path_degree(d.view(), 3), 2);
    auto paths = enumerate_root_paths(d.view(), 100);
    ASSERT_EQ(paths.paths.size(), 2u);
    EXPECT_EQ(paths.paths[0], (std::vector<std::size_t>{0, 1, 3}));
    EXPECT_EQ(paths.paths[1], (std::vector<std::size_t>{0, 2, 3}));
    EXPECT_EQ(enumerate_root_paths(single, 10).paths, (std::vector<std::vector<std::size_t>>{{0}}));
    EXPECT_THROW(path_degree(d.view(), 0), ModelError);
}

TEST(PathDegree, DiamondChainsMatchEnumeration) {
    for (std::size_t m = 1; m <= 10; ++m) {
        auto chain = diamond_chain(m);
        const auto leaf = chain.size() - 1;
        EXPECT_EQ(path_degree(chain, leaf), BigInt(1) << m);
        EXPECT_EQ(enumerate_root_paths(chain, 5000).paths.size(), std::size_t(1) << m);
        EXPECT_EQ(count_paths_to(chain, leaf), std::uint64_t(1) << m);
    }
}

TEST(PathDegree, EnumerationRespectsBudget) {
    auto r = enumerate_root_paths(diamond_chain(6), 10);
    EXPECT_TRUE(r.truncated);
    EXPECT_EQ(r.paths.size(), 10u);
}

TEST(Dot, RendersEveryVertex) {
    auto v = two_loops_one_bridge();
    auto text = to_dot(scc_dag(v), v);
    EXPECT_NE(text.find("digraph"), std::string::npos);
    EXPECT_NE(text.find("->"), std::string::npos);
    auto g = angel_forks();
    auto locking = to_dot(locking_decomposition(g), g);
    EXPECT_NE(locking.find("label=\"t0\""), std::string::npos);
    EXPECT_NE(locking.find("shape=box"), std::string::npos);
}
