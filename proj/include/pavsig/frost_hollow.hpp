#pragma once

// The Frost Hollow hazard-avoidance environment.
//
// Discrete variant: a chain of locations. Standing in the heat region gains
// heat; when heat reaches capacity it converts to one point of reward. A
// periodic hazard (the "wind") zeroes the heat of anyone inside the hazard
// region while it is active. Only the two chain ends are sheltered.
//
// Continuous variant: a 1-D corridor measured as signed distance from the
// centre, with concentric heat and hazard radii, heat gained per second and
// an explicit bank action that converts a full heat gauge into reward.
//
// Hazard timing is shared by both: an inter-stimulus interval (ISI) of
// inactive steps followed by `stimulus_length` active steps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pavsig/common.hpp"

namespace pavsig {

enum class HazardCondition { Fixed, Random, Drift };

inline std::string to_string(HazardCondition c) {
    switch (c) {
        case HazardCondition::Fixed: return "fixed";
        case HazardCondition::Random: return "random";
        case HazardCondition::Drift: return "drift";
    }
    return "?";
}

struct HazardConfig {
    HazardCondition condition = HazardCondition::Fixed;
    int isi = 8;              // Fixed
    int random_lo = 5;        // Random
    int random_hi = 10;
    int drift_start = 8;      // Drift
    int drift_delta = 1;
    int drift_min = 6;
    int drift_max = 11;
    bool drift_excludes_zero = false;  // draw the drift step from {-d, +d} only
    int stimulus_length = 2;

    static HazardConfig fixed(int isi = 8, int length = 2) {
        HazardConfig c;
        c.condition = HazardCondition::Fixed;
        c.isi = isi;
        c.stimulus_length = length;
        return c;
    }
    static HazardConfig random(int lo = 5, int hi = 10, int length = 2) {
        HazardConfig c;
        c.condition = HazardCondition::Random;
        c.random_lo = lo;
        c.random_hi = hi;
        c.stimulus_length = length;
        return c;
    }
    static HazardConfig drift(int start = 8, int delta = 1, int lo = 6, int hi = 11, int length = 2) {
        HazardConfig c;
        c.condition = HazardCondition::Drift;
        c.drift_start = start;
        c.drift_delta = delta;
        c.drift_min = lo;
        c.drift_max = hi;
        c.stimulus_length = length;
        return c;
    }

    void validate() const {
        if (stimulus_length <= 0) throw ConfigError("stimulus_length must be positive");
        switch (condition) {
            case HazardCondition::Fixed:
                if (isi <= 0) throw ConfigError("fixed ISI must be positive");
                break;
            case HazardCondition::Random:
                if (random_lo <= 0 || random_lo > random_hi) throw ConfigError("random ISI needs 0 < lo <= hi");
                break;
            case HazardCondition::Drift:
                if (drift_min <= 0 || drift_min > drift_start || drift_start > drift_max) {
                    throw ConfigError("drift ISI needs 0 < min <= start <= max");
                }
                if (drift_delta < 0) throw ConfigError("drift delta must be non-negative");
                break;
        }
    }

    int initial_isi() const {
        switch (condition) {
            case HazardCondition::Fixed: return isi;
            case HazardCondition::Random: return random_lo;
            case HazardCondition::Drift: return drift_start;
        }
        return isi;
    }

    int max_isi() const {
        switch (condition) {
            case HazardCondition::Fixed: return isi;
            case HazardCondition::Random: return random_hi;
            case HazardCondition::Drift: return drift_max;
        }
        return isi;
    }

    // Longest span between two onsets, in steps.
    int max_cycle() const { return max_isi() + stimulus_length; }

    friend bool operator==(const HazardConfig&, const HazardConfig&) = default;
};

// ISI for the next hazard cycle.
inline int next_isi(const HazardConfig& cfg, int current_isi, Rng& rng) {
    switch (cfg.condition) {
        case HazardCondition::Fixed:
            return cfg.isi;
        case HazardCondition::Random:
            return static_cast<int>(rng.uniform_int(cfg.random_lo, cfg.random_hi));
        case HazardCondition::Drift: {
            int step;
            if (cfg.drift_excludes_zero) {
                step = rng.uniform_int(0, 1) == 0 ? -cfg.drift_delta : cfg.drift_delta;
            } else {
                step = static_cast<int>(rng.uniform_int(-cfg.drift_delta, cfg.drift_delta));
            }
            return std::clamp(current_isi + step, cfg.drift_min, cfg.drift_max);
        }
    }
    return cfg.isi;
}

// Hazard phase bookkeeping. `phase` counts steps into the current cycle: the
// first `isi` phases are inactive, the next `stimulus_length` are active.
class HazardSchedule {
public:
    HazardSchedule() = default;
    explicit HazardSchedule(HazardConfig cfg) : cfg_(cfg), isi_(cfg.initial_isi()) { cfg_.validate(); }

    const HazardConfig& config() const { return cfg_; }
    int current_isi() const { return isi_; }
    int phase() const { return phase_; }
    bool active() const { return phase_ >= isi_; }

    // Steps until the hazard is next observed active; 0 while it is active.
    int steps_until_onset() const { return active() ? 0 : isi_ - phase_; }

    // Start a fresh cycle at the first inactive step. Drift keeps its
    // current ISI across resets; Random draws a new one.
    void restart(Rng& rng, bool first = false) {
        if (first) {
            isi_ = cfg_.condition == HazardCondition::Random ? next_isi(cfg_, isi_, rng) : cfg_.initial_isi();
        } else if (cfg_.condition == HazardCondition::Random) {
            isi_ = next_isi(cfg_, isi_, rng);
        }
        phase_ = 0;
    }

    void advance(Rng& rng) {
        if (++phase_ >= isi_ + cfg_.stimulus_length) {
            isi_ = next_isi(cfg_, isi_, rng);
            phase_ = 0;
        }
    }

private:
    HazardConfig cfg_{};
    int isi_ = 8;
    int phase_ = 0;
};

// ---------------------------------------------------------------------------
// Discrete chain

struct LocationRange {
    int lo = 0;
    int hi = 0;
    bool contains(int loc) const { return loc >= lo && loc <= hi; }
    friend bool operator==(const LocationRange&, const LocationRange&) = default;
};

struct EnvConfig {
    int n_locations = 7;
    double heat_rate = 0.5;
    double heat_capacity = 6.0;
    int episode_length = 1000;
    int start_location = 3;
    LocationRange heat_region{3, 3};
    LocationRange hazard_region{1, 5};
    HazardConfig hazard{};

    void validate() const {
        if (n_locations < 3) throw ConfigError("n_locations must be at least 3");
        if (!(heat_rate > 0.0)) throw ConfigError("heat_rate must be positive");
        if (!(heat_capacity > 0.0)) throw ConfigError("heat_capacity must be positive");
        if (episode_length <= 0) throw ConfigError("episode_length must be positive");
        if (start_location < 0 || start_location >= n_locations) throw ConfigError("start_location out of range");
        for (const auto& r : {heat_region, hazard_region}) {
            if (r.lo < 0 || r.hi >= n_locations || r.lo > r.hi) throw ConfigError("region out of range");
        }
        hazard.validate();
    }

    friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

struct Observation {
    int location = 0;  // the one-hot location vector, stored as its index
    bool hazard_active = false;
    double heat = 0.0;

    std::vector<int> location_one_hot(int n_locations) const {
        std::vector<int> v(static_cast<std::size_t>(n_locations), 0);
        v[static_cast<std::size_t>(location)] = 1;
        return v;
    }
};

struct StepResult {
    Observation observation;
    int reward = 0;
    bool done = false;
};

class FrostHollow {
public:
    FrostHollow(EnvConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(Rng::derive(seed, 0x0E17)) {
        cfg_.validate();
        schedule_ = HazardSchedule(cfg_.hazard);
        schedule_.restart(rng_, true);
        location_ = cfg_.start_location;
    }

    const EnvConfig& config() const { return cfg_; }
    int location() const { return location_; }
    double heat() const { return heat_; }
    int step_count() const { return step_count_; }
    bool hazard_active() const { return schedule_.active(); }
    const HazardSchedule& schedule() const { return schedule_; }

    // Hidden information: never part of an Observation.
    int steps_until_onset() const { return schedule_.steps_until_onset(); }

    Observation observe() const { return {location_, schedule_.active(), heat_}; }

    // Start a new episode: centre of the chain, no heat, full ISI ahead.
    Observation reset() {
        if (started_) schedule_.restart(rng_);
        started_ = true;
        location_ = cfg_.start_location;
        heat_ = 0.0;
        step_count_ = 0;
        return observe();
    }

    // Move, advance the hazard, apply the hazard, gain heat, convert.
    StepResult step(int action) {
        if (action < -1 || action > 1) throw ContractViolation("action must be -1, 0 or +1");
        started_ = true;
        location_ = std::clamp(location_ + action, 0, cfg_.n_locations - 1);
        schedule_.advance(rng_);
        int reward = 0;
        if (schedule_.active() && cfg_.hazard_region.contains(location_)) {
            heat_ = 0.0;
        } else if (cfg_.heat_region.contains(location_)) {
            heat_ += cfg_.heat_rate;
            if (heat_ >= cfg_.heat_capacity) {
                reward = 1;
                heat_ = 0.0;
            }
        }
        ++step_count_;
        return {observe(), reward, step_count_ >= cfg_.episode_length};
    }

private:
    EnvConfig cfg_;
    Rng rng_;
    HazardSchedule schedule_{};
    int location_ = 3;
    double heat_ = 0.0;
    int step_count_ = 0;
    bool started_ = false;
};

// ---------------------------------------------------------------------------
// Continuous corridor

enum class Region { Heat, Hazard, Safe };

inline std::string to_string(Region r) {
    switch (r) {
        case Region::Heat: return "heat";
        case Region::Hazard: return "hazard";
        case Region::Safe: return "safe";
    }
    return "?";
}

struct ContinuousConfig {
    double half_width = 1.5;      // metres from centre to corridor end
    double heat_radius = 0.165;
    double hazard_radius = 1.0;
    double heat_rate = 0.1875;    // per second
    double heat_capacity = 5.0;   // heat needed to bank one point
    double max_speed = 2.0;       // m/s

    Region region(double position) const {
        const double r = std::abs(position);
        if (r <= heat_radius) return Region::Heat;
        if (r <= hazard_radius) return Region::Hazard;
        return Region::Safe;
    }

    void validate() const {
        if (!(heat_radius > 0.0 && heat_radius < hazard_radius && hazard_radius < half_width)) {
            throw ConfigError("need 0 < heat_radius < hazard_radius < half_width");
        }
        if (!(heat_rate > 0.0) || !(heat_capacity > 0.0) || !(max_speed > 0.0)) {
            throw ConfigError("heat_rate, heat_capacity and max_speed must be positive");
        }
    }

    friend bool operator==(const ContinuousConfig&, const ContinuousConfig&) = default;
};

struct ContinuousState {
    double position = 0.0;
    double heat = 0.0;
    int score = 0;
};

struct ContinuousStep {
    ContinuousState state;
    int reward = 0;
};

// One integration step of the corridor physics under a known hazard state.
inline ContinuousStep continuous_step(const ContinuousConfig& cfg, ContinuousState s, double velocity,
                                      bool bank, double dt, bool hazard_active) {
    if (std::abs(velocity) > cfg.max_speed + 1e-12) throw ContractViolation("velocity exceeds max speed");
    if (!(dt > 0.0)) throw ContractViolation("dt must be positive");
    s.position = std::clamp(s.position + velocity * dt, -cfg.half_width, cfg.half_width);
    const Region region = cfg.region(s.position);
    int reward = 0;
    if (hazard_active && region != Region::Safe) {
        s.heat = 0.0;
    } else if (region == Region::Heat) {
        s.heat = std::min(cfg.heat_capacity, s.heat + cfg.heat_rate * dt);
    }
    // Banking is allowed a hair below capacity so float accumulation of
    // rate*dt does not leave the player one tick short.
    if (bank && region == Region::Heat && s.heat >= cfg.heat_capacity - 1e-9) {
        reward = 1;
        s.heat = 0.0;
        ++s.score;
    }
    return {s, reward};
}

}  // namespace pavsig
