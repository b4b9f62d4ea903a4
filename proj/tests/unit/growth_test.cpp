#include <gtest/gtest.h>

#include "support.hpp"

using namespace vassan;
using namespace testsupport;

namespace {

CounterVass single_loop(std::vector<std::int64_t> update) {
    VassBuilder b;
    for (std::size_t c = 0; c < update.size(); ++c) b.add_counter("c" + std::to_string(c));
    b.add_state("q");
    b.add_transition("q", update, "q");
    return b.build();
}

// The two loop states of a multiplication gadget with counters x y z alpha.
CounterVass mul_core() {
    VassBuilder b;
    for (const char* c : {"x", "y", "z", "alpha"}) b.add_counter(c);
    b.add_state("in");
    b.add_state("mid");
    b.add_transition("in", {-1, 0, 1, 1}, "in");
    b.add_transition("mid", {1, 0, 1, -1}, "mid");
    b.add_transition("in", {0, -1, 0, 0}, "mid");
    b.add_transition("mid", {0, -1, 0, 0}, "in");
    return b.build();
}

GrowthVector ones(std::size_t d) { return GrowthVector(d, GrowthExponent::poly(1)); }

}  // namespace

TEST(Lp, FeasibleAndInfeasible) {
    LpProblem lp;
    lp.variable_count = 2;
    lp.add({{0, 1}, {1, 1}}, Relation::eq, 3);
    lp.add({{0, 1}, {1, -1}}, Relation::ge, 1);
    auto x = find_feasible_point(lp);
    ASSERT_TRUE(x);
    EXPECT_TRUE(satisfies(lp, *x));
    lp.add({{0, 1}}, Relation::le, Rational(1, 2));
    lp.add({{1, 1}}, Relation::le, 1);
    EXPECT_FALSE(find_feasible_point(lp));
}

TEST(Lp, RationalSolutions) {
    LpProblem lp;
    lp.variable_count = 1;
    lp.add({{0, 3}}, Relation::eq, 1);
    auto x = find_feasible_point(lp);
    ASSERT_TRUE(x);
    EXPECT_EQ((*x)[0], Rational(1, 3));
}

TEST(ExpCounters, DecrementLoopHasNone) {
    EXPECT_TRUE(exp_counters(load_fixture("decrement_loop.vass"), ones(1)).members().empty());
}

TEST(ExpCounters, IncrementLoopIsExponential) {
    auto v = load_fixture("incrementing_loop.vass");
    auto e = exp_counters(v, ones(1));
    ASSERT_EQ(e.members(), std::vector<std::size_t>{0});
    ASSERT_TRUE(e.witness[0]);
    EXPECT_EQ(e.witness[0]->multiplicity, std::vector<Rational>{1});
    EXPECT_TRUE(verify_circulation(v, *e.witness[0], 0));
}

TEST(ExpCounters, DoublingPairPumpsBoth) {
    auto v = load_fixture("doubling_pair.vass");
    auto e = exp_counters(v, ones(2));
    EXPECT_EQ(e.members(), (std::vector<std::size_t>{0, 1}));
    for (auto c : e.members()) EXPECT_TRUE(verify_circulation(v, *e.witness[c], c));
}

TEST(ExpCounters, InfiniteComponentsAreIgnored) {
    // y is already unbounded, so the loop only drains x.
    auto v = single_loop({-1, 1});
    EXPECT_TRUE(exp_counters(v, gv("(1,inf)")).members().empty());
    // Transfer without a source of growth: the total over x and y cannot be positive.
    EXPECT_TRUE(exp_counters(v, ones(2)).members().empty());
}

TEST(ExpCounters, MulCoreIsPolynomial) { EXPECT_TRUE(exp_counters(mul_core(), ones(4)).members().empty()); }

TEST(ExpCounters, RequiresStrongConnectivity) {
    VassBuilder b;
    b.add_counter("c");
    b.add_state("p");
    b.add_state("q");
    b.add_transition("p", {1}, "q");
    b.add_transition("q", {1}, "q");
    EXPECT_THROW(exp_counters(b.build(), ones(1)), ModelError);
}

TEST(Lift, IsStronglyConnectedAndKeepsCounterPositions) {
    auto scc = load_fixture("doubling_pair.vass");
    auto lifted = lift_with_pumper(scc, gv("(2,1)"));
    EXPECT_TRUE(is_strongly_connected(lifted.vass));
    EXPECT_EQ(lifted.vass.counter_name(0), "x");
    EXPECT_EQ(lifted.vass.counter_name(1), "y");
    EXPECT_GT(lifted.vass.state_count(), scc.state_count());
    EXPECT_THROW(lift_with_pumper(scc, gv("(inf,1)")), ModelError);
}

TEST(EstimateExponent, DecrementLoopIsLinear) {
    auto est = estimate_exponent(load_fixture("decrement_loop.vass"), ones(1), 0);
    EXPECT_EQ(est.exponent, GrowthExponent::poly(1));
}

TEST(EstimateExponent, TransferDoublesTheTarget) {
    auto v = single_loop({-1, 1});
    auto est = estimate_exponent(v, ones(2), 1);
    EXPECT_EQ(est.exponent, GrowthExponent::poly(1));
    ASSERT_FALSE(est.samples.empty());
    for (const auto& s : est.samples) EXPECT_EQ(s.value, 2.0 * double(s.n));
}

TEST(EstimateExponent, MulCoreIsQuadratic) {
    auto est = estimate_exponent(mul_core(), ones(4), 2);
    EXPECT_EQ(est.exponent, GrowthExponent::poly(2));
    EXPECT_TRUE(est.stable);
    // Only finite components can be estimated.
    EXPECT_THROW(estimate_exponent(mul_core(), gv("(1,1,inf,1)"), 2), ModelError);
}

TEST(EstimateExponent, LiftAgreesWithDirectRun) {
    GrowthOptions lifted;
    lifted.use_lift = true;
    lifted.samples = {2, 3, 4, 5};
    auto v = single_loop({-1, 1});
    EXPECT_EQ(estimate_exponent(v, ones(2), 1, lifted).exponent, GrowthExponent::poly(1));
}

TEST(GrowthStep, ZeroLoopsLeaveTheVectorUnchanged) {
    auto v = single_loop({0, 0});
    GrowthEngine engine;
    EXPECT_EQ(growth_step(v, gv("(2,1)"), engine), gv("(2,1)"));
    EXPECT_EQ(engine.evaluations(), 0u);
}

TEST(GrowthStep, InfiniteComponentsStayInfinite) {
    auto v = single_loop({-1, 1});
    GrowthEngine engine;
    // Once x is exponential the transfer into y has an unbounded source.
    EXPECT_EQ(growth_step(v, gv("(inf,1)"), engine), gv("(inf,inf)"));
    EXPECT_EQ(growth_step(v, gv("(1,inf)"), engine), gv("(1,inf)"));
}

TEST(GrowthStep, ExponentialCountersBecomeInfinite) {
    GrowthEngine engine;
    auto r = engine.step(load_fixture("doubling_pair.vass"), ones(2));
    EXPECT_EQ(r.output, gv("(inf,inf)"));
    EXPECT_EQ(r.exponential, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(r.witnesses.size(), 2u);
}

TEST(GrowthStep, Example1StepCounterIsQuadratic) {
    auto v = add_step_counter(gen_example1().vass);
    GrowthEngine engine;
    auto out = growth_step(v, ones(v.dimension()), engine);
    EXPECT_EQ(out.back(), GrowthExponent::poly(2));
    EXPECT_EQ(out[0], GrowthExponent::poly(1));
}

TEST(GrowthStep, InputsNeverDecrease) {
    auto v = load_fixture("decrement_loop.vass");
    GrowthEngine engine;
    EXPECT_EQ(growth_step(v, gv("(3)"), engine), gv("(3)"));
}

TEST(GrowthStep, MemoisationIsTransparent) {
    GrowthEngine cached, plain;
    plain.set_memoize(false);
    const auto core = mul_core();
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(cached(core, ones(4)), plain(core, ones(4)));
        EXPECT_EQ(cached(core, gv("(2,1,1,1)")), plain(core, gv("(2,1,1,1)")));
    }
    EXPECT_EQ(cached.evaluations(), 2u);
    EXPECT_EQ(cached.cache_size(), 2u);
    EXPECT_EQ(plain.evaluations(), 6u);
}
