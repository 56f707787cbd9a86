#pragma once

// Prediction probe: train a co-agent's GVF alone on a deterministic hazard
// schedule and track how far its predictions are from the ideal return at
// every phase of the inter-stimulus interval.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "pavsig/coagent.hpp"
#include "pavsig/frost_hollow.hpp"
#include "pavsig/gvf.hpp"
#include "pavsig/repr.hpp"

namespace pavsig {

struct ProbeConfig {
    ReprKind repr = ReprKind::bit_cascade(16);
    GvfQuestion question = GvfQuestion::countdown();
    double alpha = 0.1;
    double lambda = 0.915;
    HazardConfig hazard = HazardConfig::fixed();
    int training_steps = 1000;
    int checkpoint_every = 10;
};

struct ProbePoint {
    int step = 0;                       // training steps taken
    double max_error = 0.0;             // over all ISI phases
    std::map<int, double> phase_error;  // keyed by steps until onset
    std::map<int, double> prediction;   // frozen-weight V per phase
    std::map<int, double> ideal;        // ideal return per phase
};

struct ProbeReport {
    std::vector<ProbePoint> points;

    // First checkpoint from which the error stays below `tol`, or -1.
    int settled_step(double tol) const {
        int settled = -1;
        for (const auto& p : points) {
            if (p.max_error < tol) {
                if (settled < 0) settled = p.step;
            } else {
                settled = -1;
            }
        }
        return settled;
    }

    const ProbePoint& at(int step) const {
        for (const auto& p : points) {
            if (p.step == step) return p;
        }
        throw ContractViolation("no probe checkpoint at the requested step");
    }
};

// Stimulus stream of a hazard schedule, starting from a fresh cycle.
inline std::vector<bool> hazard_stream(const HazardConfig& hazard, std::size_t steps, std::uint64_t seed = 0) {
    Rng rng(seed);
    HazardSchedule schedule(hazard);
    schedule.restart(rng, true);
    std::vector<bool> out;
    out.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        out.push_back(schedule.active());
        schedule.advance(rng);
    }
    return out;
}

// Matching hidden time-to-onset stream, for oracle co-agents.
inline std::vector<int> onset_stream(const HazardConfig& hazard, std::size_t steps, std::uint64_t seed = 0) {
    Rng rng(seed);
    HazardSchedule schedule(hazard);
    schedule.restart(rng, true);
    std::vector<int> out;
    out.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        out.push_back(schedule.steps_until_onset());
        schedule.advance(rng);
    }
    return out;
}

inline ProbeReport prediction_probe(const ProbeConfig& cfg) {
    if (cfg.hazard.condition != HazardCondition::Fixed) {
        throw ContractViolation("prediction_probe needs a deterministic (fixed) hazard schedule");
    }
    if (cfg.training_steps < 0 || cfg.checkpoint_every <= 0) {
        throw ContractViolation("prediction_probe: bad step counts");
    }
    const std::size_t cycle = static_cast<std::size_t>(cfg.hazard.max_cycle());
    // Room for the last evaluation cycle plus the oracle's look-ahead.
    const std::size_t margin = cycle * 2 + 400;
    const auto stream = hazard_stream(cfg.hazard, static_cast<std::size_t>(cfg.training_steps) + margin);
    const auto onset = onset_stream(cfg.hazard, stream.size());

    GvfLearner learner(cfg.repr.dimension(), cfg.alpha, cfg.lambda);
    ReprState state{};
    FeatureVector previous;
    bool has_previous = false;

    // Frozen-weight evaluation over the cycle starting at step `t`.
    auto evaluate = [&](int trained, std::size_t t) {
        ProbePoint point;
        point.step = trained;
        ReprState s = state;
        for (std::size_t k = 0; k < cycle; ++k) {
            const auto next = repr_step(s, cfg.repr, stream[t + k]);
            s = next.state;
            if (stream[t + k]) continue;  // ISI phases only
            const double v = learner.predict(next.features);
            const double g = ideal_return(stream, cfg.question, t + k);
            const int phase = onset[t + k];
            point.prediction[phase] = v;
            point.ideal[phase] = g;
            point.phase_error[phase] = std::abs(v - g);
            point.max_error = std::max(point.max_error, std::abs(v - g));
        }
        return point;
    };

    ProbeReport report;
    for (int t = 0; t <= cfg.training_steps; ++t) {
        if (t % cfg.checkpoint_every == 0 || t == cfg.training_steps) {
            report.points.push_back(evaluate(t, static_cast<std::size_t>(t)));
        }
        if (t == cfg.training_steps) break;
        const bool stim = stream[static_cast<std::size_t>(t)];
        const auto next = repr_step(state, cfg.repr, stim);
        if (has_previous) {
            learner.td_update(previous, cfg.question.cumulant(stim), cfg.question.discount(stim), next.features);
        }
        state = next.state;
        previous = next.features;
        has_previous = true;
    }
    return report;
}

// Converged predictions over the final cycle of a long training run, in
// cycle order, for shape checks (slope before onset, countdown decrements).
struct CyclePredictions {
    std::vector<double> prediction;
    std::vector<double> ideal;
    std::vector<bool> stimulus;
    std::vector<int> time_to_onset;
};

inline CyclePredictions converged_cycle(const ProbeConfig& cfg) {
    const std::size_t cycle = static_cast<std::size_t>(cfg.hazard.max_cycle());
    const auto stream = hazard_stream(cfg.hazard, static_cast<std::size_t>(cfg.training_steps) + cycle * 2 + 400);
    const auto onset = onset_stream(cfg.hazard, stream.size());
    GvfLearner learner(cfg.repr.dimension(), cfg.alpha, cfg.lambda);
    ReprState state{};
    FeatureVector previous;
    CyclePredictions out;
    const std::size_t end = static_cast<std::size_t>(cfg.training_steps);
    for (std::size_t t = 0; t < end; ++t) {
        const auto next = repr_step(state, cfg.repr, stream[t]);
        if (t > 0) {
            learner.td_update(previous, cfg.question.cumulant(stream[t]), cfg.question.discount(stream[t]),
                              next.features);
        }
        state = next.state;
        previous = next.features;
        // The online prediction on each step of the last cycle.
        if (t + cycle >= end) {
            out.prediction.push_back(learner.predict(next.features));
            out.ideal.push_back(ideal_return(stream, cfg.question, t));
            out.stimulus.push_back(stream[t]);
            out.time_to_onset.push_back(onset[t]);
        }
    }
    return out;
}

}  // namespace pavsig
