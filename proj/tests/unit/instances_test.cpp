#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace scenrisk;
using namespace scenrisk::testing;

namespace {

/// -2 (p .1), 0 (p .6), 1 (p .3)
StaticRV three_atom_payoff() { return static_of(tree_three_atoms(), {{"a", -2.0}, {"b", 0.0}, {"c", 1.0}}); }

TreePtr small_leaf_tree(Rng& rng, std::size_t max_leaves) {
    for (;;) {
        auto t = random_tree(rng, rng.integer(1, 3), 3);
        if (t->leaf_count() <= max_leaves) return t;
    }
}

double worst_loss(const StaticRV& y) {
    double w = -y[0];
    for (auto v : y.values()) w = std::max(w, -v);
    return w;
}

} // namespace

TEST(QuantileLevel, Validation) {
    EXPECT_THROW(QuantileLevel(0.0), ValidationError);
    EXPECT_THROW(QuantileLevel(1.0), ValidationError);
    EXPECT_THROW(QuantileLevel(-0.5), ValidationError);
    EXPECT_THROW(QuantileLevel(NAN), ValidationError);
    EXPECT_EQ(QuantileLevel(0.25).value(), 0.25);
}

TEST(VaR, Fixture) {
    const auto y = three_atom_payoff();
    EXPECT_EQ(var_alpha(y, QuantileLevel(0.05)), 2.0);
    EXPECT_EQ(var_alpha(y, QuantileLevel(0.2)), 0.0);
    // cumulative mass 0.7 at zero is not strictly above 0.7
    EXPECT_EQ(var_alpha(y, QuantileLevel(0.75)), -1.0);
    for (double a : {0.01, 0.5, 0.99}) EXPECT_EQ(var_alpha(StaticRV::constant(tree_t1(), 3.0), QuantileLevel(a)), -3.0);
}

TEST(VaR, StrictInequalityAtAtoms) {
    const auto t = ScenarioTree::uniform_binomial(1);
    const auto y = static_of(t, {{"u", 1.0}, {"d", -1.0}});
    // P[Y <= -1] = 0.5 is not > 0.5
    EXPECT_EQ(var_alpha(y, QuantileLevel(0.5)), -1.0);
    EXPECT_EQ(var_alpha(y, QuantileLevel(0.4999)), 1.0);
}

TEST(TailConditionalExpectation, Fixture) {
    EXPECT_EQ(es_tce(three_atom_payoff(), QuantileLevel(0.2)), -2.0);
    try {
        es_tce(StaticRV::constant(tree_t1(), 1.0), QuantileLevel(0.3));
        FAIL() << "expected UndefinedError";
    } catch (const UndefinedError& e) {
        EXPECT_NE(std::string(e.what()).find("undefined TCE"), std::string::npos);
    }
    // two equally likely atoms below the quantile: their plain average
    const auto t = ScenarioTree::uniform_binomial(2);
    const auto y = static_of(t, {{"uu", -3.0}, {"ud", -1.0}, {"du", 5.0}, {"dd", 5.0}});
    EXPECT_EQ(es_tce(y, QuantileLevel(0.5)), -2.0);
}

TEST(TailConditionalExpectation, SubadditivityFailsWhereAvarHolds) {
    const auto t = ScenarioTree::build({
        {"root", std::nullopt, 1.0, 0.0},
        {"x", "root", 0.125, 1.0},
        {"y", "root", 0.125, 1.0},
        {"z", "root", 0.75, 1.0},
    });
    const QuantileLevel alpha(0.25);
    const auto y1 = static_of(t, {{"x", -4.0}, {"y", -1.0}, {"z", 0.0}});
    const auto y2 = static_of(t, {{"x", -4.0}, {"y", 0.0}, {"z", -1.0}});
    const auto sum = y1 + y2;
    // loss read of the tail expectation: -TCE
    const double r1 = -es_tce(y1, alpha), r2 = -es_tce(y2, alpha), r12 = -es_tce(sum, alpha);
    EXPECT_EQ(r1, 2.5);
    EXPECT_EQ(r2, 4.0);
    EXPECT_EQ(r12, 8.0);
    EXPECT_GT(r12, r1 + r2);

    EXPECT_EQ(avar(y1, alpha), 2.5);
    EXPECT_EQ(avar(y2, alpha), 2.5);
    EXPECT_EQ(avar(sum, alpha), 4.5);
    EXPECT_LE(avar(sum, alpha), avar(y1, alpha) + avar(y2, alpha));
}

TEST(Avar, Fixture) {
    EXPECT_NEAR(avar(three_atom_payoff(), QuantileLevel(0.2)), 1.0, 1e-15);
    for (double a : {0.05, 0.5, 0.95}) EXPECT_EQ(avar(StaticRV::constant(tree_t1(), -1.5), QuantileLevel(a)), 1.5);
}

TEST(Avar, MatchesDualGreedyAndIsBracketed) {
    Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const auto t = random_tree(rng, rng.integer(1, 4), 3);
        const auto y = random_static(t, rng, 5.0);
        const QuantileLevel alpha(rng.uniform(0.01, 0.99));
        const double a = avar(y, alpha);
        EXPECT_NEAR(a, avar_dual_greedy(y, alpha.value()), 1e-10);
        EXPECT_GE(a, var_alpha(y, alpha) - 1e-12);
        EXPECT_LE(a, worst_loss(y) + 1e-12);
        EXPECT_GE(a, -y.expectation() - 1e-12);
    }
}

TEST(Avar, MaximizingDensity) {
    Rng rng(63);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = random_tree(rng, rng.integer(1, 4), 3);
        const auto y = random_static(t, rng, 5.0);
        const QuantileLevel alpha(rng.uniform(0.05, 0.95));
        const auto f = avar_maximizing_density(y, alpha);
        EXPECT_NEAR(f.expectation(), 1.0, 1e-12);
        std::size_t fractional = 0;
        for (auto v : f.values()) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0 / alpha.value() + 1e-12);
            if (v > 1e-12 && v < 1.0 / alpha.value() - 1e-12) ++fractional;
        }
        EXPECT_LE(fractional, 1u);
        EXPECT_NEAR(-expectation_of_product(f, y), avar(y, alpha), 1e-10);
    }
}

TEST(AvarSpec, TwoLeafVertices) {
    const auto t = tree_t1();
    const auto spec = avar_spec(t, QuantileLevel(0.5));
    ASSERT_EQ(spec.size(), 2u);
    EXPECT_TRUE(spec.coherent());
    std::vector<StaticRV> vars;
    for (const auto& e : spec.elements()) vars.push_back(variation(e.measure));
    const auto u = t->leaf_index(t->index_of("u")), d = t->leaf_index(t->index_of("d"));
    const bool order1 = vars[0][u] == 2.0 && vars[1][d] == 2.0;
    const bool order2 = vars[0][d] == 2.0 && vars[1][u] == 2.0;
    EXPECT_TRUE(order1 || order2);
    const auto y = static_of(t, {{"u", 3.0}, {"d", -0.5}});
    EXPECT_EQ(static_rho(spec, y), 0.5);
}

TEST(AvarSpec, TripleAgreement) {
    Rng rng(65);
    for (int trial = 0; trial < 40; ++trial) {
        const auto t = small_leaf_tree(rng, 12);
        const QuantileLevel alpha(rng.uniform(0.05, 0.95));
        const auto spec = avar_spec(t, alpha);
        for (int k = 0; k < 5; ++k) {
            const auto y = random_static(t, rng, 4.0);
            const double scan = avar(y, alpha);
            EXPECT_NEAR(static_rho(spec, y), scan, 1e-10);
            EXPECT_NEAR(static_rho_coherent_direct(spec, y), scan, 1e-10);
        }
    }
}

TEST(AvarSpec, LevelNearOneApproachesExpectation) {
    Rng rng(67);
    const QuantileLevel alpha(0.999);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = small_leaf_tree(rng, 8);
        const auto spec = avar_spec(t, alpha);
        // saturated leaves sit 1/alpha - 1 above f = 1; the one fractional leaf
        // absorbs the excess of all others, (1/alpha - 1)(1 - p)/p below it
        double p_min = 1.0;
        for (LeafIndex l = 0; l < t->leaf_count(); ++l) p_min = std::min(p_min, t->leaf_probability(l));
        const double spread = (1.0 / alpha.value() - 1.0) * (1.0 - p_min) / p_min;
        for (const auto& e : spec.elements()) {
            const auto f = variation(e.measure);
            for (auto v : f.values()) EXPECT_LE(std::abs(v - 1.0), spread + 1e-9);
        }
        const auto y = random_static(t, rng, 3.0);
        EXPECT_NEAR(static_rho(spec, y), -y.expectation(), 2.0 * 3.0 * (1.0 / alpha.value() - 1.0));
    }
}

TEST(AvarSpec, LeafCap) {
    const auto t = ScenarioTree::uniform_binomial(5);
    EXPECT_THROW(avar_spec(t, QuantileLevel(0.5)), ValidationError);
    EXPECT_THROW(avar_spec(ScenarioTree::uniform_binomial(3), QuantileLevel(0.5), 4), ValidationError);
}

TEST(AvarSupportSpec, AgreesOnItsPayoffs) {
    Rng rng(69);
    const auto t = ScenarioTree::uniform_binomial(6);
    const QuantileLevel alpha(0.1);
    std::vector<StaticRV> ys;
    for (int k = 0; k < 5; ++k) ys.push_back(random_static(t, rng, 2.0));
    const auto spec = avar_support_spec(t, alpha, ys);
    EXPECT_LE(spec.size(), ys.size());
    for (const auto& y : ys) EXPECT_NEAR(static_rho(spec, y), avar(y, alpha), 1e-10);
    const auto other = random_static(t, rng, 2.0);
    EXPECT_LE(static_rho(spec, other), avar(other, alpha) + 1e-10);
    EXPECT_THROW(avar_support_spec(t, alpha, {}), ValidationError);
}

TEST(WorstCaseSpec, Examples) {
    const auto t = tree_t1();
    const auto spec = worst_case_spec(t);
    ASSERT_EQ(spec.size(), 2u);
    EXPECT_EQ(spec[0].label, "a_d");
    EXPECT_EQ(spec[1].label, "a_u");
    EXPECT_EQ(spec[0].measure, dirac_leaf(t, "d"));
    EXPECT_EQ(spec[1].measure, dirac_leaf(t, "u"));
    EXPECT_EQ(static_rho(spec, static_of(t, {{"u", 1.0}, {"d", -1.0}})), 1.0);
}

TEST(WorstCaseSpec, TerminalPayoffsReadTheWorstLeaf) {
    Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = random_tree(rng, rng.integer(1, 4), 3);
        const auto y = random_static(t, rng, 3.0);
        const auto spec = worst_case_spec(t);
        EXPECT_NEAR(rho(spec, AdaptedProcess::terminal_payoff(y)), worst_loss(y), 1e-12);
        EXPECT_NEAR(static_rho(spec, y), worst_loss(y), 1e-12);
    }
}

TEST(Entropic, Fixture) {
    const auto y = static_of(tree_t1(), {{"u", 1.0}, {"d", -1.0}});
    const double v = entropic(y, 1.0);
    EXPECT_NEAR(v, 0.433780830484, 1e-12);
    EXPECT_NEAR(v, std::log(std::cosh(1.0)), 1e-15);
    for (double b : {0.1, 1.0, 50.0}) EXPECT_NEAR(entropic(StaticRV::constant(tree_t1(), 2.0), b), -2.0, 1e-15);
    EXPECT_THROW(entropic(y, 0.0), ValidationError);
    EXPECT_THROW(entropic(y, -1.0), ValidationError);
    // large exponents stay finite through the shift
    const auto far = static_of(tree_t1(), {{"u", -1000.0}, {"d", -1000.0}});
    EXPECT_NEAR(entropic(far, 10.0), 1000.0, 1e-9);
}

TEST(Entropic, OrderingAndConvexity) {
    Rng rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = random_tree(rng, rng.integer(1, 4), 3);
        const auto y = random_static(t, rng, 3.0);
        const auto z = random_static(t, rng, 3.0);
        const double b = rng.uniform(0.1, 5.0);
        EXPECT_GE(entropic(y, b), -y.expectation() - 1e-12);
        EXPECT_LE(entropic(y, b), entropic(y, 2.0 * b) + 1e-12);
        EXPECT_LE(entropic(0.5 * y + 0.5 * z, b), 0.5 * entropic(y, b) + 0.5 * entropic(z, b) + 1e-12);
    }
}

TEST(StoppedWorstCase, Examples) {
    const auto t = tree_t1();
    const auto r = stopped_worst_case(process_of(t, {{"root", 0.0}, {"u", 1.0}, {"d", -1.0}}));
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.tau, (std::vector<int>{0, 0}));

    // decreasing paths: the last time is worst
    const auto t2 = ScenarioTree::uniform_binomial(3);
    auto x = AdaptedProcess::constant(t2, 0.0);
    for (NodeIndex n = 0; n < t2->node_count(); ++n) x[n] = -static_cast<double>(t2->node(n).depth) - (n % 3);
    auto dec = x;
    for (NodeIndex n = 1; n < t2->node_count(); ++n) dec[n] = std::min(dec[n], dec[*t2->node(n).parent] - 1.0);
    const auto rd = stopped_worst_case(dec);
    for (auto k : rd.tau) EXPECT_EQ(k, 3);
}

TEST(StoppedWorstCase, MartingaleStopsAtOnce) {
    Rng rng(75);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = random_tree(rng, rng.integer(1, 3), 3, true);
        // dyadic payoffs on dyadic trees keep conditional means exact
        std::vector<double> v(t->leaf_count());
        for (auto& e : v) e = rng.integer(-16, 16) * 0.25;
        const auto m = optional_projection_static(StaticRV(t, v));
        const auto r = stopped_worst_case(m);
        EXPECT_EQ(r.value, -m[t->root()]);
        EXPECT_GE(r.value, -m.terminal().expectation());
        for (auto k : r.tau) EXPECT_EQ(k, 0);
        EXPECT_EQ(r.value, stopping_enumeration_value(m));
    }
}

TEST(StoppedWorstCase, EqualsEnumeration) {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const bool dyadic = trial % 2 == 0;
        const auto t = random_tree(rng, rng.integer(1, 3), dyadic ? 3 : 2, dyadic);
        const auto x = dyadic ? random_integer_process(t, rng, 5) : random_process(t, rng, 3.0);
        const auto r = stopped_worst_case(x);
        const double oracle = stopping_enumeration_value(x);
        if (dyadic) {
            EXPECT_EQ(r.value, oracle);
        } else {
            EXPECT_NEAR(r.value, oracle, 1e-12);
        }
        // the returned time is itself a stopping time attaining the value
        EXPECT_NEAR(pairing(x, stopping_time_measure(t, r.tau)), -r.value, 1e-12);
    }
}
