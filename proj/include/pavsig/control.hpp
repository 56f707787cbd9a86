#pragma once

// Tabular Expected Sarsa(lambda) control agent for the discrete chain.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pavsig/common.hpp"
#include "pavsig/frost_hollow.hpp"

namespace pavsig {

inline constexpr int kNumActions = 3;

inline int action_value(int action_index) { return action_index - 1; }
inline int action_index(int action) { return action + 1; }

// Everything the control agent sees. The co-agent token is its only source
// of temporal information about the hazard.
struct AgentState {
    int token = 0;
    int presence = 0;
    int location = 0;
    int heat_level = 0;  // heat / heat_rate, rounded

    friend bool operator==(const AgentState&, const AgentState&) = default;
};

// Token-major flattening:
//   index = ((token * 2 + presence) * n_locations + location) * n_heat_levels + heat_level
struct StateLayout {
    int n_locations = 7;
    int n_heat_levels = 13;

    static StateLayout for_env(const EnvConfig& env) {
        const int levels = static_cast<int>(std::lround(env.heat_capacity / env.heat_rate)) + 1;
        return {env.n_locations, levels};
    }

    int size() const { return 2 * 2 * n_locations * n_heat_levels; }

    int index(const AgentState& s) const {
        if (s.token < 0 || s.token > 1 || s.presence < 0 || s.presence > 1 || s.location < 0 ||
            s.location >= n_locations || s.heat_level < 0 || s.heat_level >= n_heat_levels) {
            throw ContractViolation("agent state field out of range");
        }
        return ((s.token * 2 + s.presence) * n_locations + s.location) * n_heat_levels + s.heat_level;
    }

    AgentState decode(int index) const {
        if (index < 0 || index >= size()) throw ContractViolation("state index out of range");
        AgentState s;
        s.heat_level = index % n_heat_levels;
        index /= n_heat_levels;
        s.location = index % n_locations;
        index /= n_locations;
        s.presence = index % 2;
        s.token = index / 2;
        return s;
    }

    friend bool operator==(const StateLayout&, const StateLayout&) = default;
};

inline AgentState make_agent_state(int token, const Observation& obs, double heat_rate) {
    return {token, obs.hazard_active ? 1 : 0, obs.location,
            static_cast<int>(std::lround(obs.heat / heat_rate))};
}

struct ControlParams {
    double alpha = 0.01;
    double lambda = 0.8;
    double gamma = 0.99;
    double epsilon = 0.01;
    double initial_value = 1.0;
    double trace_cutoff = 1e-6;  // trace entries below this are dropped

    void validate() const {
        if (!(alpha > 0.0)) throw ConfigError("control alpha must be positive");
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("control lambda must lie in [0, 1]");
        if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("control gamma must lie in [0, 1]");
        if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
        if (!(trace_cutoff >= 0.0)) throw ConfigError("trace_cutoff must be non-negative");
    }

    friend bool operator==(const ControlParams&, const ControlParams&) = default;
};

class ExpectedSarsa {
public:
    ExpectedSarsa(StateLayout layout, ControlParams params)
        : layout_(layout),
          params_(params),
          weights_(static_cast<std::size_t>(layout.size() * kNumActions), params.initial_value),
          trace_(weights_.size(), 0.0) {
        params_.validate();
    }

    const StateLayout& layout() const { return layout_; }
    const ControlParams& params() const { return params_; }
    std::span<const double> weights() const { return weights_; }

    void set_weights(std::span<const double> w) {
        if (w.size() != weights_.size()) throw ConfigError("Q-table size mismatch");
        weights_.assign(w.begin(), w.end());
    }

    double q(const AgentState& s, int action_idx) const { return weights_[slot(layout_.index(s), action_idx)]; }
    double q(int state_idx, int action_idx) const { return weights_[slot(state_idx, action_idx)]; }

    // Epsilon-greedy probabilities with the greedy mass split evenly across
    // tied maxima.
    std::array<double, kNumActions> policy(int state_idx) const {
        const double* qs = &weights_[slot(state_idx, 0)];
        const double best = std::max({qs[0], qs[1], qs[2]});
        int ties = 0;
        for (int a = 0; a < kNumActions; ++a) ties += qs[a] == best ? 1 : 0;
        std::array<double, kNumActions> p{};
        for (int a = 0; a < kNumActions; ++a) {
            p[a] = params_.epsilon / kNumActions + (qs[a] == best ? (1.0 - params_.epsilon) / ties : 0.0);
        }
        return p;
    }

    double expected_value(int state_idx) const {
        const auto p = policy(state_idx);
        double v = 0.0;
        for (int a = 0; a < kNumActions; ++a) v += p[a] * weights_[slot(state_idx, a)];
        return v;
    }

    // Returns an action index in [0, 3).
    int select_action(const AgentState& s, Rng& rng) const { return select_action(layout_.index(s), rng); }

    int select_action(int state_idx, Rng& rng) const {
        if (params_.epsilon > 0.0 && rng.uniform01() < params_.epsilon) {
            return static_cast<int>(rng.uniform_int(0, kNumActions - 1));
        }
        const double* qs = &weights_[slot(state_idx, 0)];
        const double best = std::max({qs[0], qs[1], qs[2]});
        std::array<int, kNumActions> ties{};
        int n = 0;
        for (int a = 0; a < kNumActions; ++a) {
            if (qs[a] == best) ties[n++] = a;
        }
        return n == 1 ? ties[0] : ties[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
    }

    double update(const AgentState& s, int a, double reward, const AgentState& s_next) {
        return update(layout_.index(s), a, reward, layout_.index(s_next));
    }

    // e += x(s,a); delta = r + gamma * E_pi[Q(s',.)] - Q(s,a); w += alpha delta e;
    // e *= gamma lambda. Returns delta.
    double update(int s, int a, double reward, int s_next) {
        const std::size_t here = slot(s, a);
        if (trace_[here] == 0.0) active_.push_back(here);
        trace_[here] += 1.0;
        const double delta = reward + params_.gamma * expected_value(s_next) - weights_[here];
        if (!std::isfinite(delta)) throw DivergenceError("control TD error is not finite");
        const double step = params_.alpha * delta;
        const double decay = params_.gamma * params_.lambda;
        for (std::size_t k = 0; k < active_.size();) {
            const std::size_t i = active_[k];
            weights_[i] += step * trace_[i];
            trace_[i] *= decay;
            if (trace_[i] <= params_.trace_cutoff) {
                trace_[i] = 0.0;
                active_[k] = active_.back();
                active_.pop_back();
            } else {
                ++k;
            }
        }
        return delta;
    }

    void reset_trace() {
        for (std::size_t i : active_) trace_[i] = 0.0;
        active_.clear();
    }

    double trace_at(int s, int a) const { return trace_[slot(s, a)]; }

private:
    std::size_t slot(int state_idx, int action_idx) const {
        return static_cast<std::size_t>(state_idx) * kNumActions + static_cast<std::size_t>(action_idx);
    }

    StateLayout layout_;
    ControlParams params_;
    std::vector<double> weights_;
    std::vector<double> trace_;
    std::vector<std::size_t> active_;
};

}  // namespace pavsig
