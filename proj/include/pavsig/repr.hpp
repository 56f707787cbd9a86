#pragma once

// Temporal state representations for the signalling co-agent.
//
// Every representation takes a single stimulus-presence bit and produces a
// binary feature vector laid out as
//
//   index 0        presence bit (1 iff the stimulus is present this step)
//   index 1..n     one-hot temporal code, exactly one bit active
//
// The temporal code depends on the number of steps since the stimulus was
// last present:
//
//   Bias        n = 1, the single bit is always on (no notion of time)
//   BitCascade  bit k is on after k absent steps, saturating at n-1
//   TiledTrace  trace z(t) = exp(-a t) is tiled into n equal-width bins over
//               (0, 1]; active bit = min(n-1, floor(n (1 - z(t))))

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "pavsig/common.hpp"

namespace pavsig {

enum class ReprType { Bias, BitCascade, TiledTrace };

struct ReprKind {
    ReprType type = ReprType::Bias;
    std::size_t length = 1;  // temporal one-hot length n
    double decay = 0.0;      // TiledTrace only

    static ReprKind bias() { return {ReprType::Bias, 1, 0.0}; }

    static ReprKind bit_cascade(std::size_t n) {
        if (n == 0) throw ConfigError("bit cascade length must be positive");
        return {ReprType::BitCascade, n, 0.0};
    }

    static ReprKind tiled_trace(std::size_t n, double a) {
        if (n == 0) throw ConfigError("tiled trace length must be positive");
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("tiled trace decay must lie in (0, 1)");
        return {ReprType::TiledTrace, n, a};
    }

    // Feature vector dimension: presence bit plus temporal code.
    std::size_t dimension() const { return 1 + length; }

    // Throws unless the temporal code can tell apart every step of the longest
    // hazard cycle (inter-stimulus interval plus stimulus length).
    void validate_for_cycle(std::size_t max_cycle) const {
        if (type == ReprType::BitCascade && length <= max_cycle) {
            throw ConfigError("bit cascade length " + std::to_string(length) +
                              " must exceed the longest hazard cycle " +
                              std::to_string(max_cycle));
        }
    }

    std::string label() const {
        switch (type) {
            case ReprType::Bias: return "Bias";
            case ReprType::BitCascade: return "BC";
            case ReprType::TiledTrace: {
                // "TCT3" for a = 0.3, matching the usual figure labels.
                const long tenths = std::lround(decay * 10.0);
                if (std::abs(decay * 10.0 - static_cast<double>(tenths)) < 1e-9) {
                    return "TCT" + std::to_string(tenths);
                }
                return "TCT" + std::to_string(decay);
            }
        }
        return "?";
    }

    friend bool operator==(const ReprKind&, const ReprKind&) = default;
};

struct ReprState {
    std::uint64_t steps_since_reset = 0;

    friend bool operator==(const ReprState&, const ReprState&) = default;
};

// Sparse binary vector with at most two active entries (presence + one
// temporal bit). Indices are kept in ascending order.
class FeatureVector {
public:
    FeatureVector() = default;
    FeatureVector(std::size_t dimension, bool presence, std::size_t temporal_index)
        : dimension_(dimension) {
        if (presence) active_[count_++] = 0;
        active_[count_++] = 1 + temporal_index;
    }

    std::size_t dimension() const { return dimension_; }
    std::span<const std::size_t> active() const { return {active_.data(), count_}; }
    bool presence() const { return count_ == 2; }
    std::size_t temporal_index() const { return active_[count_ - 1] - 1; }

    bool operator[](std::size_t i) const {
        for (std::size_t k = 0; k < count_; ++k) {
            if (active_[k] == i) return true;
        }
        return false;
    }

    friend bool operator==(const FeatureVector& a, const FeatureVector& b) {
        if (a.dimension_ != b.dimension_ || a.count_ != b.count_) return false;
        for (std::size_t k = 0; k < a.count_; ++k) {
            if (a.active_[k] != b.active_[k]) return false;
        }
        return true;
    }

private:
    std::size_t dimension_ = 0;
    std::array<std::size_t, 2> active_{};
    std::size_t count_ = 0;
};

inline double tiled_trace_value(double decay, std::uint64_t t) {
    return std::exp(-decay * static_cast<double>(t));
}

// Temporal index for `t` steps since the last stimulus.
inline std::size_t temporal_index(const ReprKind& kind, std::uint64_t t) {
    switch (kind.type) {
        case ReprType::Bias:
            return 0;
        case ReprType::BitCascade:
            return t >= kind.length ? kind.length - 1 : static_cast<std::size_t>(t);
        case ReprType::TiledTrace: {
            const double n = static_cast<double>(kind.length);
            const double bin = std::floor(n * (1.0 - tiled_trace_value(kind.decay, t)));
            if (bin >= n - 1.0) return kind.length - 1;
            return bin <= 0.0 ? 0 : static_cast<std::size_t>(bin);
        }
    }
    return 0;
}

struct ReprStep {
    ReprState state;
    FeatureVector features;
};

inline FeatureVector features_for(const ReprKind& kind, const ReprState& state,
                                  bool stimulus_present) {
    return FeatureVector(kind.dimension(), stimulus_present,
                         temporal_index(kind, state.steps_since_reset));
}

// Advance the representation by one step. The returned features describe the
// post-update state.
inline ReprStep repr_step(const ReprState& state, const ReprKind& kind, bool stimulus_present) {
    ReprState next{stimulus_present ? 0 : state.steps_since_reset + 1};
    return {next, features_for(kind, next, stimulus_present)};
}

// Largest reachable temporal index. Bias has no temporal progression.
inline std::size_t saturation_index(const ReprKind& kind) {
    if (kind.type == ReprType::Bias) {
        throw NotApplicableError("saturation_index is undefined for the bias representation");
    }
    return kind.length - 1;
}

// Smallest number of absent steps that reaches the saturation index.
inline std::uint64_t saturation_step(const ReprKind& kind) {
    const std::size_t last = saturation_index(kind);
    std::uint64_t t = 0;
    while (temporal_index(kind, t) < last) ++t;
    return t;
}

}  // namespace pavsig
