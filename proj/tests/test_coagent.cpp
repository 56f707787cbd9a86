#include <gtest/gtest.h>

#include <vector>

#include "pavsig/coagent.hpp"
#include "pavsig/probe.hpp"

using namespace pavsig;

namespace {

ProbeConfig long_run(ReprKind repr, GvfQuestion q) {
    ProbeConfig cfg;
    cfg.repr = repr;
    cfg.question = q;
    cfg.training_steps = 20000;
    return cfg;
}

// Slope of V over the 3 steps before onset: last ISI step minus the one three
// steps earlier.
double pre_onset_slope(const CyclePredictions& c) {
    for (std::size_t t = 4; t < c.prediction.size(); ++t) {
        if (!c.stimulus[t - 1] && c.time_to_onset[t - 1] == 1) return c.prediction[t - 1] - c.prediction[t - 4];
    }
    ADD_FAILURE() << "no onset in the final cycle";
    return 0.0;
}

}  // namespace

TEST(TokenRule, RisingIsStrict) {
    const TokenRule r = TokenRule::for_question(GvfQuestion::accumulation());
    EXPECT_EQ(r.direction, TokenDirection::Rising);
    EXPECT_EQ(r.tau, 2.05);
    EXPECT_EQ(r.apply(2.05), 0);
    EXPECT_EQ(r.apply(2.0500001), 1);
    EXPECT_EQ(r.apply(-5.0), 0);
}

TEST(TokenRule, FallingIncludesThreshold) {
    const TokenRule r = TokenRule::for_question(GvfQuestion::countdown());
    EXPECT_EQ(r.direction, TokenDirection::Falling);
    EXPECT_EQ(r.tau, 3.0);
    EXPECT_EQ(r.apply(3.0), 1);
    EXPECT_EQ(r.apply(3.0000001), 0);
    EXPECT_EQ(r.apply(0.0), 1);
}

TEST(Coagent, OracleSignalsLeadAndStimulus) {
    Coagent c(OracleConfig{3});
    EXPECT_EQ(c.step(false, 5), 0);
    EXPECT_EQ(c.step(false, 4), 0);
    EXPECT_EQ(c.step(false, 3), 1);
    EXPECT_EQ(c.step(false, 1), 1);
    EXPECT_EQ(c.step(true, 0), 1);
    EXPECT_THROW(c.step(false), ConfigError);
}

TEST(Coagent, NoneIsSilent) {
    Coagent c(NoCoagent{});
    for (int t = 0; t < 20; ++t) EXPECT_EQ(c.step(t % 10 >= 8), 0);
    EXPECT_EQ(c.learner(), nullptr);
}

TEST(Coagent, ValidationRejectsMismatchedRule) {
    PavlovianConfig p;
    p.question = GvfQuestion::countdown();
    p.rule = TokenRule::for_question(GvfQuestion::accumulation());
    EXPECT_THROW(Coagent{p}, ConfigError);
    p.rule = TokenRule::for_question(p.question);
    p.alpha = 0.0;
    EXPECT_THROW(Coagent{p}, ConfigError);
    EXPECT_THROW(Coagent{OracleConfig{0}}, ConfigError);
}

TEST(Coagent, Labels) {
    EXPECT_EQ(label(NoCoagent{}), "None");
    EXPECT_EQ(label(OracleConfig{}), "Oracle");
    PavlovianConfig p;
    EXPECT_EQ(label(p), "BC-countdown");
    p.repr = ReprKind::tiled_trace(16, 0.3);
    p.question = GvfQuestion::accumulation();
    p.rule = TokenRule::for_question(p.question);
    EXPECT_EQ(label(p), "TCT3-accumulation");
}

TEST(Coagent, TokenTraceIsDeterministic) {
    const auto s = hazard_stream(HazardConfig::random(), 3000, 7);
    PavlovianConfig p;
    EXPECT_EQ(token_trace(p, s), token_trace(p, s));
    const auto tto = onset_stream(HazardConfig::random(), 3000, 7);
    EXPECT_THROW(token_trace(OracleConfig{}, s), ConfigError);
    const auto oracle = token_trace(OracleConfig{}, s, tto);
    for (std::size_t t = 0; t < s.size(); ++t) EXPECT_EQ(oracle[t], (s[t] || tto[t] <= 3) ? 1 : 0);
}

// Raising tau on a rising rule can only turn tokens off.
TEST(Coagent, RisingThresholdIsMonotone) {
    const auto s = hazard_stream(HazardConfig::drift(), 4000, 3);
    PavlovianConfig lo, hi;
    lo.question = hi.question = GvfQuestion::accumulation();
    lo.rule = hi.rule = TokenRule::for_question(lo.question);
    lo.rule.tau = 1.5;
    hi.rule.tau = 2.5;
    const auto a = token_trace(lo, s), b = token_trace(hi, s);
    for (std::size_t t = 0; t < s.size(); ++t) ASSERT_LE(b[t], a[t]);
}

// After convergence on Fixed(8), a BC countdown co-agent with the standard
// threshold signals exactly when a 3-step oracle does on every ISI step.
TEST(Coagent, ConvergedCountdownMatchesOracleLead) {
    const auto c = converged_cycle(long_run(ReprKind::bit_cascade(16), GvfQuestion::countdown()));
    const TokenRule rule = TokenRule::for_question(GvfQuestion::countdown());
    int checked = 0;
    for (std::size_t t = 0; t < c.prediction.size(); ++t) {
        if (c.stimulus[t]) continue;
        EXPECT_EQ(rule.apply(c.prediction[t]), c.time_to_onset[t] <= 3 ? 1 : 0) << t;
        ++checked;
    }
    EXPECT_EQ(checked, 8);
}

TEST(Coagent, BiasPredictionsRunBackwards) {
    const auto cd = converged_cycle(long_run(ReprKind::bias(), GvfQuestion::countdown()));
    const auto acc = converged_cycle(long_run(ReprKind::bias(), GvfQuestion::accumulation()));
    EXPECT_GT(pre_onset_slope(cd), 0.0);
    EXPECT_LT(pre_onset_slope(acc), 0.0);
    // The ideal returns move the other way.
    const auto bc = converged_cycle(long_run(ReprKind::bit_cascade(16), GvfQuestion::countdown()));
    EXPECT_LT(pre_onset_slope(bc), 0.0);
}
