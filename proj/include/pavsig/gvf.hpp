#pragma once

// General value function questions and their online TD(lambda) learner.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pavsig/common.hpp"
#include "pavsig/repr.hpp"

namespace pavsig {

enum class QuestionType { Accumulation, Countdown };

// A prediction question over the stimulus stream. The policy is always the
// behaviour policy: the co-agent takes no actions.
struct GvfQuestion {
    QuestionType type = QuestionType::Accumulation;
    double gamma = 0.9;  // Accumulation only

    static GvfQuestion accumulation(double gamma = 0.9) {
        if (!(gamma >= 0.0 && gamma < 1.0)) {
            throw ConfigError("accumulation discount must lie in [0, 1)");
        }
        return {QuestionType::Accumulation, gamma};
    }
    static GvfQuestion countdown() { return {QuestionType::Countdown, 1.0}; }

    // Cumulant observed on a step with the given stimulus state.
    double cumulant(bool stimulus_present) const {
        if (type == QuestionType::Countdown) return 1.0;
        return stimulus_present ? 1.0 : 0.0;
    }

    // Continuation probability on a step with the given stimulus state.
    double discount(bool stimulus_present) const {
        if (type == QuestionType::Countdown) return stimulus_present ? 0.0 : 1.0;
        return gamma;
    }

    std::string label() const { return type == QuestionType::Countdown ? "countdown" : "accumulation"; }

    friend bool operator==(const GvfQuestion&, const GvfQuestion&) = default;
};

// Linear TD(lambda) with accumulating traces. Weights start at zero.
class GvfLearner {
public:
    GvfLearner(std::size_t dimension, double alpha, double lambda)
        : weights_(dimension, 0.0), trace_(dimension, 0.0), alpha_(alpha), lambda_(lambda) {
        if (dimension == 0) throw ConfigError("GVF dimension must be positive");
        if (!(alpha > 0.0)) throw ConfigError("GVF step size must be positive");
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("GVF lambda must lie in [0, 1]");
    }

    std::size_t dimension() const { return weights_.size(); }
    double alpha() const { return alpha_; }
    double lambda() const { return lambda_; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> trace() const { return trace_; }

    void set_weights(std::span<const double> w) {
        if (w.size() != weights_.size()) throw ConfigError("GVF weight dimension mismatch");
        weights_.assign(w.begin(), w.end());
    }

    void reset_trace() { std::fill(trace_.begin(), trace_.end(), 0.0); }

    double predict(const FeatureVector& x) const {
        check_dimension(x);
        double v = 0.0;
        for (std::size_t i : x.active()) v += weights_[i];
        return v;
    }

    // One TD(lambda) step on the transition x_t -> x_next, where c_next and
    // gamma_next are the cumulant and discount observed on arrival at x_next.
    // Returns the TD error.
    double td_update(const FeatureVector& x_t, double c_next, double gamma_next,
                     const FeatureVector& x_next) {
        check_dimension(x_t);
        check_dimension(x_next);
        for (std::size_t i : x_t.active()) trace_[i] += 1.0;
        const double delta = c_next + gamma_next * predict(x_next) - predict(x_t);
        if (!std::isfinite(delta)) throw DivergenceError("GVF TD error is not finite");
        const double step = alpha_ * delta;
        const double decay = gamma_next * lambda_;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            weights_[i] += step * trace_[i];
            trace_[i] *= decay;
        }
        return delta;
    }

private:
    void check_dimension(const FeatureVector& x) const {
        if (x.dimension() != weights_.size()) {
            throw ConfigError("feature dimension " + std::to_string(x.dimension()) +
                              " does not match GVF dimension " + std::to_string(weights_.size()));
        }
    }

    std::vector<double> weights_;
    std::vector<double> trace_;
    double alpha_;
    double lambda_;
};

// Truncated return G_t computed directly from a stimulus schedule:
//
//   G_t = sum_{k=0}^{horizon-1} (prod_{j=1}^{k} gamma_{t+j}) C_{t+k+1}
//
// This is the reference all prediction learning is tested against. An
// accumulation horizon must shrink the tail below 1e-9; a countdown horizon
// must reach the first termination.
inline double ideal_return(const std::vector<bool>& schedule, const GvfQuestion& question,
                           std::size_t t, std::size_t horizon) {
    if (horizon == 0) throw ContractViolation("ideal_return: horizon must be positive");
    if (t + horizon >= schedule.size()) {
        throw ContractViolation("ideal_return: t + horizon runs past the end of the schedule");
    }
    if (question.type == QuestionType::Accumulation &&
        !(std::pow(question.gamma, static_cast<double>(horizon)) < 1e-9)) {
        throw OraclePrecisionError("ideal_return: horizon too short for 1e-9 truncation error");
    }
    double total = 0.0;
    double weight = 1.0;
    for (std::size_t k = 0; k < horizon; ++k) {
        const bool s = schedule[t + k + 1];
        if (k > 0) {
            weight *= question.discount(schedule[t + k]);
            if (weight == 0.0) return total;
        }
        total += weight * question.cumulant(s);
    }
    if (question.type == QuestionType::Countdown && weight * question.discount(schedule[t + horizon]) != 0.0) {
        throw OraclePrecisionError("ideal_return: countdown did not terminate within the horizon");
    }
    return total;
}

// Smallest horizon that satisfies the oracle's precision rule at step t.
inline std::size_t oracle_horizon(const std::vector<bool>& schedule, const GvfQuestion& question,
                                  std::size_t t) {
    if (question.type == QuestionType::Accumulation) {
        if (question.gamma == 0.0) return 1;
        return static_cast<std::size_t>(std::floor(std::log(1e-9) / std::log(question.gamma))) + 1;
    }
    for (std::size_t k = 1; t + k < schedule.size(); ++k) {
        if (schedule[t + k]) return k;
    }
    throw OraclePrecisionError("ideal_return: no stimulus onset after step " + std::to_string(t));
}

inline double ideal_return(const std::vector<bool>& schedule, const GvfQuestion& question, std::size_t t) {
    return ideal_return(schedule, question, t, oracle_horizon(schedule, question, t));
}

}  // namespace pavsig
