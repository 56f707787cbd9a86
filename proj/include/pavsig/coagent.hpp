#pragma once

// Pavlovian-signalling co-agents: map a learned GVF prediction through a
// fixed threshold to a one-bit token. A token of 1 means "hazard soon".

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pavsig/common.hpp"
#include "pavsig/gvf.hpp"
#include "pavsig/repr.hpp"

namespace pavsig {

enum class TokenDirection {
    Rising,   // token = 1 iff V > tau
    Falling,  // token = 1 iff V <= tau
};

struct TokenRule {
    double tau = 2.05;
    TokenDirection direction = TokenDirection::Rising;

    static constexpr double kAccumulationThreshold = 2.05;
    static constexpr double kCountdownThreshold = 3.0;

    // Accumulation predictions rise ahead of a stimulus, countdowns fall.
    static TokenRule for_question(const GvfQuestion& q) {
        if (q.type == QuestionType::Countdown) return {kCountdownThreshold, TokenDirection::Falling};
        return {kAccumulationThreshold, TokenDirection::Rising};
    }

    int apply(double v) const {
        if (direction == TokenDirection::Rising) return v > tau ? 1 : 0;
        return v <= tau ? 1 : 0;
    }

    friend bool operator==(const TokenRule&, const TokenRule&) = default;
};

struct PavlovianConfig {
    ReprKind repr = ReprKind::bit_cascade(16);
    GvfQuestion question = GvfQuestion::countdown();
    TokenRule rule = TokenRule::for_question(GvfQuestion::countdown());
    double alpha = 0.1;
    double lambda = 0.915;

    friend bool operator==(const PavlovianConfig&, const PavlovianConfig&) = default;
};

struct OracleConfig {
    int lead_steps = 3;

    friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

struct NoCoagent {
    friend bool operator==(const NoCoagent&, const NoCoagent&) = default;
};

using CoagentKind = std::variant<NoCoagent, OracleConfig, PavlovianConfig>;

inline void validate(const CoagentKind& kind) {
    if (const auto* p = std::get_if<PavlovianConfig>(&kind)) {
        if (!(p->alpha > 0.0 && p->alpha < 1.0)) throw ConfigError("alpha_gvf must lie in (0, 1)");
        const auto expected = p->question.type == QuestionType::Countdown ? TokenDirection::Falling
                                                                          : TokenDirection::Rising;
        if (p->rule.direction != expected) {
            throw ConfigError("accumulation questions use a rising token rule, countdowns a falling one");
        }
    } else if (const auto* o = std::get_if<OracleConfig>(&kind)) {
        if (o->lead_steps <= 0) throw ConfigError("oracle lead_steps must be positive");
    }
}

inline std::string label(const CoagentKind& kind) {
    if (std::holds_alternative<NoCoagent>(kind)) return "None";
    if (std::holds_alternative<OracleConfig>(kind)) return "Oracle";
    const auto& p = std::get<PavlovianConfig>(kind);
    return p.repr.label() + "-" + p.question.label();
}

// What the co-agent did on its most recent step, for trace dumps.
struct CoagentDiagnostics {
    double prediction = 0.0;
    int token = 0;
    FeatureVector features;
};

class Coagent {
public:
    explicit Coagent(CoagentKind kind) : kind_(std::move(kind)) {
        validate(kind_);
        if (const auto* p = std::get_if<PavlovianConfig>(&kind_)) {
            learner_.emplace(p->repr.dimension(), p->alpha, p->lambda);
        }
    }

    const CoagentKind& kind() const { return kind_; }
    bool needs_hidden_information() const { return std::holds_alternative<OracleConfig>(kind_); }
    const CoagentDiagnostics& diagnostics() const { return diag_; }
    const GvfLearner* learner() const { return learner_ ? &*learner_ : nullptr; }

    // Consume one stimulus bit and emit a token. `time_to_onset` is the
    // environment's hidden count of steps until the next hazard; only the
    // oracle reads it.
    int step(bool stimulus_present, std::optional<int> time_to_onset = std::nullopt) {
        return std::visit([&](const auto& cfg) { return step_impl(cfg, stimulus_present, time_to_onset); },
                          kind_);
    }

private:
    int step_impl(const NoCoagent&, bool, std::optional<int>) {
        diag_ = {};
        return 0;
    }

    int step_impl(const OracleConfig& cfg, bool stimulus_present, std::optional<int> time_to_onset) {
        if (!time_to_onset) throw ConfigError("oracle co-agent requires the hidden time to onset");
        const int token = (stimulus_present || *time_to_onset <= cfg.lead_steps) ? 1 : 0;
        diag_ = {static_cast<double>(*time_to_onset), token, {}};
        return token;
    }

    int step_impl(const PavlovianConfig& cfg, bool stimulus_present, std::optional<int>) {
        const auto next = repr_step(repr_state_, cfg.repr, stimulus_present);
        if (has_previous_) {
            learner_->td_update(previous_, cfg.question.cumulant(stimulus_present),
                                cfg.question.discount(stimulus_present), next.features);
        }
        repr_state_ = next.state;
        previous_ = next.features;
        has_previous_ = true;
        const double v = learner_->predict(next.features);
        const int token = cfg.rule.apply(v);
        diag_ = {v, token, next.features};
        return token;
    }

    CoagentKind kind_;
    std::optional<GvfLearner> learner_;
    ReprState repr_state_{};
    FeatureVector previous_{};
    bool has_previous_ = false;
    CoagentDiagnostics diag_{};
};

// Token sequence of a fresh co-agent run over a stimulus schedule. Oracle
// co-agents need the matching time-to-onset sequence.
inline std::vector<int> token_trace(const CoagentKind& kind, const std::vector<bool>& schedule,
                                    std::span<const int> time_to_onset = {}) {
    Coagent coagent(kind);
    if (coagent.needs_hidden_information() && time_to_onset.size() < schedule.size()) {
        throw ConfigError("oracle token trace needs a time-to-onset entry for every step");
    }
    std::vector<int> tokens;
    tokens.reserve(schedule.size());
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        std::optional<int> tto;
        if (!time_to_onset.empty()) tto = time_to_onset[t];
        tokens.push_back(coagent.step(schedule[t], tto));
    }
    return tokens;
}

}  // namespace pavsig
