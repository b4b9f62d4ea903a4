#include <gtest/gtest.h>

#include "support.hpp"

using namespace vassan;
using namespace testsupport;

TEST(Formulas, DimacsParsing) {
    auto f = parse_dimacs(read_file(fixture("sat_single_clause.cnf")));
    EXPECT_EQ(f.variable_count, 1);
    ASSERT_EQ(f.clauses.size(), 1u);
    EXPECT_EQ(f.clauses[0], (Clause{1, -1, 1}));
    EXPECT_EQ(parse_dimacs(to_dimacs(f)).clauses, f.clauses);
    EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 2 0\n"), ModelError);
    EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 2 2 0\n"), ModelError);
    EXPECT_THROW(parse_dimacs("p cnf 1 1\n1 2 1 0\n"), ModelError);
}

TEST(Formulas, QdimacsParsing) {
    auto q = parse_qdimacs(read_file(fixture("qbf_valid.qdimacs")));
    ASSERT_EQ(q.blocks.size(), 1u);
    EXPECT_EQ(q.blocks[0], std::make_pair(1, 2));
    EXPECT_EQ(q.matrix.clauses.size(), 2u);
    EXPECT_EQ(parse_qdimacs(to_qdimacs(q)).matrix.clauses, q.matrix.clauses);
    EXPECT_THROW(parse_qdimacs("p cnf 2 1\ne 1 0\na 2 0\n1 2 2 0\n"), ModelError);
}

TEST(Formulas, SatisfiabilityAndValidity) {
    EXPECT_TRUE(is_satisfiable(tautology_clause_formula()));
    EXPECT_FALSE(is_satisfiable(all_sign_patterns_formula()));
    EXPECT_EQ(all_sign_patterns_formula().clauses.size(), 8u);
    EXPECT_TRUE(is_valid(parse_qdimacs(read_file(fixture("qbf_valid.qdimacs")))));
    EXPECT_FALSE(is_valid(parse_qdimacs(read_file(fixture("qbf_invalid.qdimacs")))));
}

TEST(Generators, SatProgramLines) {
    auto g = gen_sat(tautology_clause_formula(), 2);
    EXPECT_EQ(g.counter, "s1");
    const std::string expected =
        "decl d1 d2 e1 x1 nx1 s0 s1 f\n"
        "d2 <- d1 * e1\n"
        "choose {\n  x1 <- d2\n} or {\n  nx1 <- d2\n}\n"
        "s0 <- d2\n"
        "choose {\n  s1 <- min(x1, s0)\n} or {\n  s1 <- min(nx1, s0)\n} or {\n  s1 <- min(x1, s0)\n}\n"
        "f <- s1 * n\n";
    EXPECT_EQ(to_dsl(g.program), expected);
    EXPECT_TRUE(g.vass.is_demonic());
    EXPECT_TRUE(validate(g.vass).empty());
    EXPECT_THROW(gen_sat(tautology_clause_formula(), 1), ModelError);
}

TEST(Generators, QbfDiffersOnlyInOwners) {
    auto q = parse_qdimacs(read_file(fixture("qbf_valid.qdimacs")));
    auto game = gen_qbf(q, 2);
    auto plain = gen_sat(q.matrix, 2);
    EXPECT_EQ(game.vass.angelic_states().size(), q.blocks.size());
    ASSERT_EQ(game.vass.state_count(), plain.vass.state_count());
    EXPECT_EQ(game.vass.transitions(), plain.vass.transitions());
    EXPECT_EQ(game.vass.counters(), plain.vass.counters());
    std::size_t differing = 0;
    for (std::size_t p = 0; p < game.vass.state_count(); ++p) differing += game.vass.owner(p) != plain.vass.owner(p);
    EXPECT_EQ(differing, 1u);
}

TEST(Generators, SatunsatPreconditions) {
    EXPECT_THROW(gen_satunsat_length(tautology_clause_formula(), tautology_clause_formula(), 2), ModelError);
    EXPECT_THROW(gen_satunsat_counter(tautology_clause_formula(), tautology_clause_formula(), 1), ModelError);
    auto c = gen_satunsat_counter(tautology_clause_formula(), all_sign_patterns_formula(), 2);
    EXPECT_EQ(c.counter, "c");
    auto& body = c.program.body;
    ASSERT_GE(body.size(), 3u);
    EXPECT_EQ(body.back(), Statement::min("c", "a", "b"));
}

TEST(Generators, Example1Shape) {
    auto g = gen_example1();
    EXPECT_EQ(g.vass.state_count(), 5u);
    EXPECT_EQ(g.vass.transition_count(), 9u);
    EXPECT_EQ(g.vass.counters(), (std::vector<std::string>{"i", "j", "Aux"}));
}

TEST(Generators, PumperPrograms) {
    auto three = gen_pumper(gv("(3)"));
    EXPECT_EQ(to_dsl(three.program),
              "decl c1 _m0 _m1 _s1 _a1_1\n_m1 <- _m0 * _m0\n_s1 <- _m0\n_a1_1 <- _s1\n_s1 <- _m1 * _a1_1\nc1 <- [_s1]\n");
    auto ones = gen_pumper(gv("(1,1)"));
    ASSERT_EQ(ones.program.body.size(), 2u);
    EXPECT_EQ(ones.program.body[0].kind, StmtKind::destructive_copy);
    EXPECT_EQ(ones.program.body[1].kind, StmtKind::destructive_copy);
    EXPECT_THROW(gen_pumper(gv("(inf)")), ModelError);
    EXPECT_THROW(gen_pumper({}), ModelError);
}

TEST(Generators, PumperGoldenValue) {
    auto p = gen_pumper(gv("(2)"));
    const long long n = 3;
    auto naive = naive_explore(p.vass, p.in, std::vector<long long>(p.vass.dimension(), n), 10000);
    ASSERT_FALSE(naive.unbounded);
    EXPECT_EQ(naive.counter_max[0], 24);
    auto lib = explore_demonic_max(p.vass, uniform_configuration(p.vass, p.in, BigInt(n)));
    EXPECT_EQ(lib.counter_max[0].value, 24);
    EXPECT_TRUE(lib.counter_max[0].exact());
}

TEST(Generators, PumperGrowsQuadratically) {
    auto p = gen_pumper(gv("(2)"));
    std::vector<Sample> s;
    for (long long n : {2, 3, 4})
        s.push_back({std::uint64_t(n), double(naive_explore(p.vass, p.in, std::vector<long long>(p.vass.dimension(), n),
                                                            10000).counter_max[0]), false});
    // 12, 24, 40: second differences constant
    EXPECT_EQ(s[2].value - 2 * s[1].value + s[0].value, 4.0);
}
