#pragma once

// Experiment runner: seeded, independent (config, run) pairs executed over a
// pool of worker threads, plus summary statistics over episode windows.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pavsig/coagent.hpp"
#include "pavsig/common.hpp"
#include "pavsig/control.hpp"
#include "pavsig/frost_hollow.hpp"

namespace pavsig {

struct ExperimentConfig {
    std::string name = "experiment";
    EnvConfig env{};
    CoagentKind coagent = OracleConfig{};
    ControlParams control{};
    int n_runs = 30;
    int n_episodes = 5000;
    std::uint64_t seed_base = 0;

    void validate() const {
        env.validate();
        control.validate();
        validate_coagent(coagent, env);
        if (n_runs < 1) throw ConfigError("n_runs must be at least 1");
        if (n_episodes < 1) throw ConfigError("n_episodes must be at least 1");
    }

    static void validate_coagent(const CoagentKind& kind, const EnvConfig& env) {
        pavsig::validate(kind);
        if (const auto* p = std::get_if<PavlovianConfig>(&kind)) {
            p->repr.validate_for_cycle(static_cast<std::size_t>(env.hazard.max_cycle()));
        }
    }

    std::uint64_t run_seed(int run_index) const { return seed_base + static_cast<std::uint64_t>(run_index); }
};

// One row of a per-step trace.
struct TraceRow {
    int episode = 0;
    int step = 0;
    int location = 0;
    double heat = 0.0;
    bool hazard = false;
    int action = 0;
    int token = 0;
    int reward = 0;
    double prediction = 0.0;
    std::vector<std::size_t> features;
};

struct RunRecord {
    int run_index = 0;
    std::vector<int> episode_rewards;
    bool failed = false;
    std::string failure;
    double wall_seconds = 0.0;
    std::vector<double> q_weights;    // final control weights
    std::vector<double> gvf_weights;  // final co-agent GVF weights, if it learns
};

// Receives trace rows for one run; called from that run's worker thread.
using TraceSink = std::function<void(int run_index, const TraceRow&)>;

// Executes a single run from fresh environment, co-agent and agent.
inline RunRecord run_single(const ExperimentConfig& cfg, int run_index, const TraceSink& trace = {}) {
    const auto start = std::chrono::steady_clock::now();
    RunRecord record;
    record.run_index = run_index;
    record.episode_rewards.reserve(static_cast<std::size_t>(cfg.n_episodes));

    const std::uint64_t seed = cfg.run_seed(run_index);
    FrostHollow env(cfg.env, seed);
    Coagent coagent(cfg.coagent);
    const StateLayout layout = StateLayout::for_env(cfg.env);
    ExpectedSarsa agent(layout, cfg.control);
    Rng agent_rng = Rng::derive(seed, 0xA6E7);
    const bool oracle = coagent.needs_hidden_information();
    const double heat_rate = cfg.env.heat_rate;

    auto token_for = [&](const Observation& obs) {
        return coagent.step(obs.hazard_active,
                            oracle ? std::optional<int>(env.steps_until_onset()) : std::nullopt);
    };

    try {
        for (int episode = 0; episode < cfg.n_episodes; ++episode) {
            agent.reset_trace();
            Observation obs = env.reset();
            int s = layout.index(make_agent_state(token_for(obs), obs, heat_rate));
            int a = agent.select_action(s, agent_rng);
            int total = 0;
            for (;;) {
                const StepResult r = env.step(action_value(a));
                const int token = token_for(r.observation);
                const int s_next = layout.index(make_agent_state(token, r.observation, heat_rate));
                agent.update(s, a, static_cast<double>(r.reward), s_next);
                total += r.reward;
                if (trace) {
                    const auto& d = coagent.diagnostics();
                    TraceRow row{episode, env.step_count(), r.observation.location, r.observation.heat,
                                 r.observation.hazard_active, action_value(a), token, r.reward,
                                 d.prediction, {}};
                    for (std::size_t i : d.features.active()) row.features.push_back(i);
                    trace(run_index, row);
                }
                if (r.done) break;
                s = s_next;
                a = agent.select_action(s, agent_rng);
            }
            record.episode_rewards.push_back(total);
        }
    } catch (const DivergenceError& e) {
        record.failed = true;
        record.failure = e.what();
    }
    const auto q = agent.weights();
    record.q_weights.assign(q.begin(), q.end());
    if (const auto* learner = coagent.learner()) {
        record.gvf_weights.assign(learner->weights().begin(), learner->weights().end());
    }
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs `count` independent jobs on `workers` threads; jobs are claimed from a
// shared counter so faster workers take more. job(i) must not share mutable
// state with other jobs.
inline void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, unsigned workers = default_workers(),
                                             const TraceSink& trace = {}) {
    cfg.validate();
    std::vector<RunRecord> records(static_cast<std::size_t>(cfg.n_runs));
    parallel_for(records.size(), workers,
                 [&](std::size_t i) { records[i] = run_single(cfg, static_cast<int>(i), trace); });
    return records;
}

// Several configurations as one pool of (config, run) jobs.
inline std::vector<std::vector<RunRecord>> run_sweep(const std::vector<ExperimentConfig>& configs,
                                                     unsigned workers = default_workers()) {
    std::vector<std::vector<RunRecord>> results(configs.size());
    std::vector<std::pair<std::size_t, int>> jobs;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        configs[c].validate();
        results[c].resize(static_cast<std::size_t>(configs[c].n_runs));
        for (int r = 0; r < configs[c].n_runs; ++r) jobs.emplace_back(c, r);
    }
    parallel_for(jobs.size(), workers, [&](std::size_t j) {
        const auto [c, r] = jobs[j];
        results[c][static_cast<std::size_t>(r)] = run_single(configs[c], r);
    });
    return results;
}

// ---------------------------------------------------------------------------
// Summary statistics

struct EpisodeWindow {
    int first = 0;  // inclusive
    int last = 0;   // exclusive

    static EpisodeWindow early(int n_episodes) { return {0, std::min(800, n_episodes)}; }
    static EpisodeWindow asymptotic(int n_episodes) { return {std::max(0, n_episodes - 1000), n_episodes}; }
    static EpisodeWindow last_n(int n_episodes, int n) { return {std::max(0, n_episodes - n), n_episodes}; }
};

// Linear interpolation between order statistics at position (n - 1) p.
inline double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw ContractViolation("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct Summary {
    std::size_t n_runs = 0;
    std::size_t n_failed = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t n_outliers = 0;
};

// Statistics over per-run values (one value per run).
inline Summary summarize_values(const std::vector<double>& values) {
    if (values.empty()) throw ContractViolation("summarize: no values");
    Summary s;
    s.n_runs = values.size();
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    s.median = quantile(values, 0.5);
    s.q1 = quantile(values, 0.25);
    s.q3 = quantile(values, 0.75);
    double var = 0.0;
    if (values.size() > 1) {
        for (double v : values) var += (v - s.mean) * (v - s.mean);
        var /= n - 1.0;
    }
    const double half = 1.96 * std::sqrt(var / n);
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
    const double iqr = s.q3 - s.q1;
    const double fence_lo = s.q1 - 1.5 * iqr;
    const double fence_hi = s.q3 + 1.5 * iqr;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    // Whiskers end at the most extreme values inside the fences.
    s.whisker_low = s.max;
    s.whisker_high = s.min;
    for (double v : values) {
        if (v < fence_lo || v > fence_hi) {
            ++s.n_outliers;
        } else {
            s.whisker_low = std::min(s.whisker_low, v);
            s.whisker_high = std::max(s.whisker_high, v);
        }
    }
    return s;
}

// Mean per-episode reward inside the window for one run.
inline double window_mean(const RunRecord& r, EpisodeWindow w) {
    if (w.first < 0 || w.last <= w.first || w.last > static_cast<int>(r.episode_rewards.size())) {
        throw ContractViolation("episode window is empty or outside the recorded episodes");
    }
    double total = 0.0;
    for (int e = w.first; e < w.last; ++e) total += r.episode_rewards[static_cast<std::size_t>(e)];
    return total / static_cast<double>(w.last - w.first);
}

// Per-config summary across runs of the windowed mean reward. Failed runs
// are counted but excluded from the statistics.
inline Summary summarize(const std::vector<RunRecord>& records, EpisodeWindow w) {
    std::vector<double> values;
    std::size_t failed = 0;
    for (const auto& r : records) {
        if (r.failed) {
            ++failed;
            continue;
        }
        values.push_back(window_mean(r, w));
    }
    if (values.empty()) throw ContractViolation("summarize: every run failed or no runs given");
    Summary s = summarize_values(values);
    s.n_failed = failed;
    return s;
}

// Mean reward per episode across runs, one entry per episode (learning curve).
inline std::vector<double> mean_curve(const std::vector<RunRecord>& records) {
    std::vector<double> curve;
    std::size_t n = 0;
    for (const auto& r : records) {
        if (r.failed) continue;
        if (curve.empty()) curve.assign(r.episode_rewards.size(), 0.0);
        for (std::size_t e = 0; e < curve.size() && e < r.episode_rewards.size(); ++e) {
            curve[e] += r.episode_rewards[e];
        }
        ++n;
    }
    for (double& c : curve) c /= static_cast<double>(std::max<std::size_t>(n, 1));
    return curve;
}

}  // namespace pavsig
