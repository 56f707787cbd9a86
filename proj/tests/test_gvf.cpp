#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "pavsig/gvf.hpp"
#include "pavsig/probe.hpp"

using namespace pavsig;

namespace {

// Periodic schedule: `isi` absent steps then `len` present steps, repeated.
std::vector<bool> periodic(int isi, int len, std::size_t steps) {
    std::vector<bool> s(steps);
    for (std::size_t t = 0; t < steps; ++t) s[t] = static_cast<int>(t % static_cast<std::size_t>(isi + len)) >= isi;
    return s;
}

// Reference return by forward simulation, sharing nothing with the library.
double brute_accumulation(const std::vector<bool>& s, std::size_t t, double gamma) {
    double g = 0.0, w = 1.0;
    for (std::size_t k = t + 1; k < s.size() && w > 1e-15; ++k) {
        g += w * (s[k] ? 1.0 : 0.0);
        w *= gamma;
    }
    return g;
}

int brute_countdown(const std::vector<bool>& s, std::size_t t) {
    int n = 0;
    for (std::size_t k = t + 1; k < s.size(); ++k) {
        ++n;
        if (s[k]) return n;
    }
    return -1;
}

}  // namespace

TEST(Gvf, QuestionParameters) {
    const auto acc = GvfQuestion::accumulation(0.9);
    EXPECT_EQ(acc.cumulant(true), 1.0);
    EXPECT_EQ(acc.cumulant(false), 0.0);
    EXPECT_EQ(acc.discount(true), 0.9);
    EXPECT_EQ(acc.discount(false), 0.9);
    const auto cd = GvfQuestion::countdown();
    EXPECT_EQ(cd.cumulant(true), 1.0);
    EXPECT_EQ(cd.cumulant(false), 1.0);
    EXPECT_EQ(cd.discount(true), 0.0);
    EXPECT_EQ(cd.discount(false), 1.0);
    EXPECT_THROW(GvfQuestion::accumulation(1.0), ConfigError);
}

TEST(Gvf, SingleUpdateByHand) {
    GvfLearner g(3, 0.1, 0.5);
    const FeatureVector x(3, true, 0);   // {0, 1}
    const FeatureVector y(3, false, 1);  // {2}
    const double d = g.td_update(x, 1.0, 0.8, y);
    EXPECT_DOUBLE_EQ(d, 1.0);
    EXPECT_DOUBLE_EQ(g.weights()[0], 0.1);
    EXPECT_DOUBLE_EQ(g.weights()[1], 0.1);
    EXPECT_DOUBLE_EQ(g.weights()[2], 0.0);
    EXPECT_DOUBLE_EQ(g.trace()[0], 0.4);
    EXPECT_DOUBLE_EQ(g.trace()[1], 0.4);
    // Second step: e = [0.4, 0.4, 1]; delta = 0 + 0.8*0.2 - 0 = 0.16.
    const double d2 = g.td_update(y, 0.0, 0.8, x);
    EXPECT_DOUBLE_EQ(d2, 0.16);
    EXPECT_NEAR(g.weights()[0], 0.1 + 0.1 * 0.16 * 0.4, 1e-15);
    EXPECT_NEAR(g.weights()[2], 0.1 * 0.16, 1e-15);
}

TEST(Gvf, ConstantCumulantFixedPoint) {
    GvfLearner g(2, 0.1, 0.0);
    const FeatureVector x(2, false, 0);
    for (int i = 0; i < 5000; ++i) g.td_update(x, 1.0, 0.9, x);
    EXPECT_NEAR(g.predict(x), 10.0, 1e-9);
}

TEST(Gvf, TerminationClearsTrace) {
    GvfLearner g(4, 0.1, 0.9);
    const FeatureVector a(4, false, 1), b(4, true, 0);
    g.td_update(a, 1.0, 1.0, a);
    g.td_update(a, 1.0, 0.0, b);
    for (double e : g.trace()) EXPECT_EQ(e, 0.0);
}

// Two-state cycle A -> B -> A, cumulant 1 on arrival at B. Tabular TD(lambda)
// converges to the Bellman solution for every lambda.
TEST(Gvf, TwoStateMrpFixedPoint) {
    const double gamma = 0.9;
    const double va = 1.0 / (1.0 - gamma * gamma);
    const double vb = gamma * va;
    for (double lambda : {0.0, 0.5, 0.9, 1.0}) {
        GvfLearner g(3, 0.05, lambda);
        const FeatureVector a(3, false, 0), b(3, false, 1);
        for (int i = 0; i < 20000; ++i) {
            g.td_update(a, 1.0, gamma, b);
            g.td_update(b, 0.0, gamma, a);
        }
        EXPECT_NEAR(g.predict(a), va, 1e-3) << lambda;
        EXPECT_NEAR(g.predict(b), vb, 1e-3) << lambda;
    }
}

// A -> B with cumulant 2 and discount 0.5; B -> A with cumulant 1 and termination.
TEST(Gvf, TwoStateMrpWithTermination) {
    GvfLearner g(3, 0.05, 0.8);
    const FeatureVector a(3, false, 0), b(3, false, 1);
    for (int i = 0; i < 20000; ++i) {
        g.td_update(a, 2.0, 0.5, b);
        g.td_update(b, 1.0, 0.0, a);
    }
    // V_b = 1, V_a = 2 + 0.5 * 1.
    EXPECT_NEAR(g.predict(b), 1.0, 1e-3);
    EXPECT_NEAR(g.predict(a), 2.5, 1e-3);
}

TEST(Gvf, RejectsMismatchedFeatures) {
    GvfLearner g(3, 0.1, 0.9);
    EXPECT_THROW(g.predict(FeatureVector(4, false, 0)), ConfigError);
    EXPECT_THROW(g.td_update(FeatureVector(3, false, 0), 1.0, 1.0, FeatureVector(5, false, 0)), ConfigError);
    EXPECT_THROW(GvfLearner(0, 0.1, 0.9), ConfigError);
    EXPECT_THROW(GvfLearner(3, 0.0, 0.9), ConfigError);
    EXPECT_THROW(GvfLearner(3, 0.1, 1.5), ConfigError);
}

TEST(Gvf, NonFiniteErrorSignalsDivergence) {
    GvfLearner g(2, 0.1, 0.9);
    const std::vector<double> w = {0.0, std::numeric_limits<double>::infinity()};
    g.set_weights(w);
    const FeatureVector x(2, false, 0);
    EXPECT_THROW(g.td_update(x, 1.0, 0.9, x), DivergenceError);
}

TEST(IdealReturn, CountdownIsStepsToOnset) {
    const auto s = periodic(8, 2, 400);
    for (std::size_t t = 0; t < 350; ++t) {
        const int expected = brute_countdown(s, t);
        ASSERT_GT(expected, 0);
        EXPECT_EQ(ideal_return(s, GvfQuestion::countdown(), t), static_cast<double>(expected)) << t;
    }
}

TEST(IdealReturn, CountdownOnIrregularSchedule) {
    std::vector<bool> s(300, false);
    for (std::size_t t : {3u, 4u, 17u, 18u, 19u, 40u, 41u, 90u, 91u, 250u, 251u}) s[t] = true;
    for (std::size_t t = 0; t < 240; ++t) {
        EXPECT_EQ(ideal_return(s, GvfQuestion::countdown(), t), static_cast<double>(brute_countdown(s, t)));
    }
}

TEST(IdealReturn, AccumulationMatchesBruteForce) {
    const auto s = periodic(8, 2, 2000);
    for (double gamma : {0.0, 0.5, 0.9, 0.95}) {
        const auto q = GvfQuestion::accumulation(gamma);
        // Truncating once the weight drops below 1e-9 leaves at most
        // 1e-9 / (1 - gamma) of tail.
        const double tol = 1e-9 / (1.0 - gamma) + 1e-12;
        for (std::size_t t = 0; t < 300; ++t) {
            EXPECT_NEAR(ideal_return(s, q, t), brute_accumulation(s, t, gamma), tol);
        }
    }
}

// On a Fixed(8)/2 cycle, the step before onset has G = (1 + gamma) / (1 - gamma^10).
TEST(IdealReturn, AccumulationPeriodicClosedForm) {
    const auto s = periodic(8, 2, 2000);
    const double closed = 1.9 / (1.0 - std::pow(0.9, 10));
    EXPECT_NEAR(closed, 2.9171458723, 1e-9);
    EXPECT_NEAR(ideal_return(s, GvfQuestion::accumulation(0.9), 7), closed, 1e-6);
    EXPECT_NEAR(ideal_return(s, GvfQuestion::accumulation(0.9), 17), closed, 1e-6);
}

TEST(IdealReturn, ContractAndPrecisionErrors) {
    const auto s = periodic(8, 2, 100);
    EXPECT_THROW(ideal_return(s, GvfQuestion::countdown(), 95, 10), ContractViolation);
    EXPECT_THROW(ideal_return(s, GvfQuestion::accumulation(0.9), 0, 10), OraclePrecisionError);
    EXPECT_THROW(ideal_return(s, GvfQuestion::countdown(), 0, 3), OraclePrecisionError);
    EXPECT_THROW(ideal_return(s, GvfQuestion::accumulation(0.9), 0), ContractViolation);
    const std::vector<bool> never(50, false);
    EXPECT_THROW(ideal_return(never, GvfQuestion::countdown(), 0), OraclePrecisionError);
}

TEST(Probe, BitCascadeCountdownConverges) {
    ProbeConfig cfg;
    cfg.training_steps = 5000;
    cfg.checkpoint_every = 500;
    const auto report = prediction_probe(cfg);
    EXPECT_LT(report.points.back().max_error, 1e-3);
    // Untrained weights are zero, so the error is the largest ideal return.
    EXPECT_DOUBLE_EQ(report.at(0).max_error, 8.0);
}

TEST(Probe, NeedsFixedCondition) {
    ProbeConfig cfg;
    cfg.hazard = HazardConfig::random();
    EXPECT_THROW(prediction_probe(cfg), ContractViolation);
}
