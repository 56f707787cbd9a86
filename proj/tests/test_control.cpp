#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "pavsig/control.hpp"

using namespace pavsig;

namespace {

ControlParams params(double alpha, double lambda, double gamma, double epsilon) {
    ControlParams p;
    p.alpha = alpha;
    p.lambda = lambda;
    p.gamma = gamma;
    p.epsilon = epsilon;
    return p;
}

}  // namespace

TEST(StateLayout, EndpointsAndSize) {
    const StateLayout layout = StateLayout::for_env(EnvConfig{});
    EXPECT_EQ(layout.n_heat_levels, 13);
    EXPECT_EQ(layout.size(), 2 * 2 * 7 * 13);
    EXPECT_EQ(layout.index({0, 0, 0, 0}), 0);
    EXPECT_EQ(layout.index({1, 1, 6, 12}), 363);
    // Token-major: the token bit splits the table in half.
    EXPECT_EQ(layout.index({1, 0, 0, 0}), 182);
}

TEST(StateLayout, RoundTrip) {
    const StateLayout layout;
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const AgentState s{static_cast<int>(rng.uniform_int(0, 1)), static_cast<int>(rng.uniform_int(0, 1)),
                           static_cast<int>(rng.uniform_int(0, 6)), static_cast<int>(rng.uniform_int(0, 12))};
        EXPECT_EQ(layout.decode(layout.index(s)), s);
    }
    std::vector<bool> hit(static_cast<std::size_t>(layout.size()), false);
    for (int i = 0; i < layout.size(); ++i) {
        const int j = layout.index(layout.decode(i));
        ASSERT_EQ(j, i);
        hit[static_cast<std::size_t>(j)] = true;
    }
    EXPECT_TRUE(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
}

TEST(StateLayout, RejectsOutOfRange) {
    const StateLayout layout;
    EXPECT_THROW(layout.index({2, 0, 0, 0}), ContractViolation);
    EXPECT_THROW(layout.index({0, 0, 7, 0}), ContractViolation);
    EXPECT_THROW(layout.index({0, 0, 0, 13}), ContractViolation);
    EXPECT_THROW(layout.index({0, -1, 0, 0}), ContractViolation);
    EXPECT_THROW(layout.decode(364), ContractViolation);
}

TEST(AgentState, HeatLevelIsRounded) {
    const Observation obs{2, true, 3.5};
    const AgentState s = make_agent_state(1, obs, 0.5);
    EXPECT_EQ(s, (AgentState{1, 1, 2, 7}));
}

TEST(ExpectedSarsa, OptimisticStart) {
    ExpectedSarsa agent(StateLayout{}, ControlParams{});
    for (double w : agent.weights()) EXPECT_EQ(w, 1.0);
    EXPECT_EQ(agent.weights().size(), 364u * 3u);
}

TEST(ExpectedSarsa, TiesAreBrokenUniformly) {
    ExpectedSarsa agent(StateLayout{}, params(0.01, 0.8, 0.99, 0.0));
    Rng rng(42);
    std::array<int, 3> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(agent.select_action(17, rng))];
    for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 3.0, 0.02);
}

TEST(ExpectedSarsa, GreedyAndFullyRandomSelection) {
    ExpectedSarsa greedy(StateLayout{}, params(0.01, 0.8, 0.99, 0.0));
    std::vector<double> w(greedy.weights().begin(), greedy.weights().end());
    w[5 * 3 + 2] = 2.0;
    greedy.set_weights(w);
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(greedy.select_action(5, rng), 2);

    ExpectedSarsa random(StateLayout{}, params(0.01, 0.8, 0.99, 1.0));
    random.set_weights(w);
    std::array<int, 3> counts{};
    for (int i = 0; i < 60000; ++i) ++counts[static_cast<std::size_t>(random.select_action(5, rng))];
    for (int c : counts) EXPECT_NEAR(c / 60000.0, 1.0 / 3.0, 0.02);
}

TEST(ExpectedSarsa, PolicySplitsTiedGreedyMass) {
    ExpectedSarsa agent(StateLayout{}, params(0.01, 0.8, 0.99, 0.1));
    std::vector<double> w(agent.weights().begin(), agent.weights().end());
    w[0] = 3.0;
    w[1] = 3.0;
    w[2] = 1.0;
    agent.set_weights(w);
    const auto p = agent.policy(0);
    EXPECT_NEAR(p[0], 0.1 / 3 + 0.45, 1e-15);
    EXPECT_NEAR(p[1], 0.1 / 3 + 0.45, 1e-15);
    EXPECT_NEAR(p[2], 0.1 / 3, 1e-15);
    EXPECT_NEAR(agent.expected_value(0), p[0] * 3 + p[1] * 3 + p[2] * 1, 1e-12);
}

TEST(ExpectedSarsa, ZeroDiscountErrorIsReward) {
    ExpectedSarsa agent(StateLayout{}, params(0.5, 0.8, 0.0, 0.01));
    EXPECT_DOUBLE_EQ(agent.update(3, 1, 0.25, 9), 0.25 - 1.0);
    EXPECT_DOUBLE_EQ(agent.q(3, 1), 1.0 + 0.5 * (0.25 - 1.0));
}

// With epsilon 0 and a unique maximum the expectation collapses to the max.
TEST(ExpectedSarsa, GreedyExpectationIsQLearning) {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        ExpectedSarsa agent(StateLayout{}, params(0.1, 0.8, 0.9, 0.0));
        std::vector<double> w(agent.weights().size());
        for (double& x : w) x = rng.uniform01() * 4.0 - 2.0;
        agent.set_weights(w);
        const int s = static_cast<int>(rng.uniform_int(0, 363));
        const int s2 = static_cast<int>(rng.uniform_int(0, 363));
        const int a = static_cast<int>(rng.uniform_int(0, 2));
        const double r = rng.uniform01();
        const double qmax = std::max({w[s2 * 3u], w[s2 * 3u + 1], w[s2 * 3u + 2]});
        const double expected = r + 0.9 * qmax - w[static_cast<std::size_t>(s) * 3 + static_cast<std::size_t>(a)];
        EXPECT_NEAR(agent.update(s, a, r, s2), expected, 1e-12);
    }
}

// Two-state chain under the uniform random policy (epsilon = 1): every
// action from A reaches B with reward 1, every action from B returns to A
// with reward 0. Bellman: Q(A,.) = 1 + gamma Q(B,.), Q(B,.) = gamma Q(A,.).
TEST(ExpectedSarsa, TwoStateChainBellman) {
    const double gamma = 0.9;
    ExpectedSarsa agent(StateLayout{}, params(0.05, 0.8, gamma, 1.0));
    Rng rng(2);
    const int A = 10, B = 20;
    int s = A;
    for (int t = 0; t < 100000; ++t) {
        const int a = agent.select_action(s, rng);
        const int next = s == A ? B : A;
        agent.update(s, a, s == A ? 1.0 : 0.0, next);
        s = next;
    }
    const double qa = 1.0 / (1.0 - gamma * gamma);
    for (int a = 0; a < 3; ++a) {
        EXPECT_NEAR(agent.q(A, a), qa, 1e-3);
        EXPECT_NEAR(agent.q(B, a), gamma * qa, 1e-3);
    }
}

TEST(ExpectedSarsa, TracesDecayAndAreDroppedBelowCutoff) {
    ExpectedSarsa agent(StateLayout{}, params(0.01, 0.8, 0.99, 0.01));
    agent.update(0, 0, 0.0, 1);
    const double decay = 0.99 * 0.8;
    EXPECT_DOUBLE_EQ(agent.trace_at(0, 0), decay);
    // decay^n <= 1e-6 first at n = 60.
    for (int n = 2; n <= 59; ++n) agent.update(1, 1, 0.0, 1);
    EXPECT_GT(agent.trace_at(0, 0), 0.0);
    agent.update(1, 1, 0.0, 1);
    EXPECT_EQ(agent.trace_at(0, 0), 0.0);
    agent.reset_trace();
    EXPECT_EQ(agent.trace_at(1, 1), 0.0);
}

TEST(ExpectedSarsa, NonFiniteErrorSignalsDivergence) {
    ExpectedSarsa agent(StateLayout{}, ControlParams{});
    std::vector<double> w(agent.weights().size(), 1.0);
    w[3] = std::numeric_limits<double>::quiet_NaN();
    agent.set_weights(w);
    EXPECT_THROW(agent.update(0, 0, 0.0, 1), DivergenceError);
    EXPECT_THROW(agent.set_weights(std::vector<double>(5, 0.0)), ConfigError);
}

// With no reward anywhere the optimistic values can only fall.
TEST(ExpectedSarsa, OptimismDecaysWithoutReward) {
    ExpectedSarsa agent(StateLayout{}, ControlParams{});
    Rng rng(4);
    int s = 0;
    double prev_max = 1.0;
    for (int t = 0; t < 20000; ++t) {
        const int a = agent.select_action(s, rng);
        const int next = static_cast<int>(rng.uniform_int(0, 40));
        agent.update(s, a, 0.0, next);
        const double m = *std::max_element(agent.weights().begin(), agent.weights().end());
        ASSERT_LE(m, prev_max + 1e-15);
        prev_max = m;
        s = next;
    }
    double visited_max = 0.0;
    for (int i = 0; i <= 40; ++i) {
        for (int a = 0; a < 3; ++a) visited_max = std::max(visited_max, agent.q(i, a));
    }
    EXPECT_LT(visited_max, 1.0);
}

TEST(ControlParams, Validation) {
    EXPECT_THROW(ExpectedSarsa(StateLayout{}, params(0.0, 0.8, 0.99, 0.01)), ConfigError);
    EXPECT_THROW(ExpectedSarsa(StateLayout{}, params(0.01, 1.2, 0.99, 0.01)), ConfigError);
    EXPECT_THROW(ExpectedSarsa(StateLayout{}, params(0.01, 0.8, 1.5, 0.01)), ConfigError);
    EXPECT_THROW(ExpectedSarsa(StateLayout{}, params(0.01, 0.8, 0.99, -0.1)), ConfigError);
}
