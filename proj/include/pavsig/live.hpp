#pragma once

// Real-time session for a human player on the continuous corridor. A session
// owns one trial at a time; the caller drives it one tick per `tick` seconds
// of wall time (or faster, for replay and tests).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pavsig/coagent.hpp"
#include "pavsig/common.hpp"
#include "pavsig/frost_hollow.hpp"

namespace pavsig::live {

using json = nlohmann::json;

// Hazard timing in seconds; converted to ticks per trial.
struct HazardSeconds {
    HazardCondition condition = HazardCondition::Fixed;
    double isi = 20.0;
    double stimulus = 4.0;
    double random_lo = 12.5;
    double random_hi = 25.0;
    double drift_delta = 2.5;
    double drift_min = 15.0;
    double drift_max = 27.5;
    double jitter = 2.5;  // starting ISI drawn from isi +/- jitter (Fixed, Drift)
};

enum class CoagentOption { None, BC, TCT };

inline std::string to_string(CoagentOption c) {
    switch (c) {
        case CoagentOption::None: return "none";
        case CoagentOption::BC: return "BC";
        case CoagentOption::TCT: return "TCT";
    }
    return "?";
}

struct SessionConfig {
    double tick = 0.05;
    double trial_length = 300.0;
    HazardSeconds hazard{};
    ContinuousConfig arena{};
    // The co-agent steps once per `coagent_period` and holds its token in
    // between, so a 20 s ISI spans a BC of modest length.
    double coagent_period = 0.25;
    std::size_t bc_length = 128;
    std::size_t tct_length = 16;
    double tct_decay = 0.03;
    double gvf_gamma = 0.95;
    double gvf_alpha = 0.1;
    double gvf_lambda = 0.915;
    double tau = TokenRule::kAccumulationThreshold;
    std::uint64_t seed = 1;

    int ticks_per_trial() const { return static_cast<int>(std::lround(trial_length / tick)); }
    int ticks_per_coagent_step() const { return std::max(1, static_cast<int>(std::lround(coagent_period / tick))); }
    int to_ticks(double seconds) const { return static_cast<int>(std::lround(seconds / tick)); }

    void validate() const {
        if (!(tick > 0.0)) throw ConfigError("tick must be positive");
        if (!(trial_length > 0.0)) throw ConfigError("trial_length must be positive");
        if (!(coagent_period >= tick)) throw ConfigError("coagent_period must be at least one tick");
        arena.validate();
        if (!(hazard.jitter >= 0.0 && hazard.jitter < hazard.isi)) throw ConfigError("jitter must lie in [0, isi)");
        hazard_ticks(0).validate();
        coagent(CoagentOption::BC);
        coagent(CoagentOption::TCT);
    }

    // Hazard schedule in ticks with the given starting-ISI offset.
    HazardConfig hazard_ticks(int start_offset_ticks) const {
        const int stim = to_ticks(hazard.stimulus);
        switch (hazard.condition) {
            case HazardCondition::Fixed:
                return HazardConfig::fixed(to_ticks(hazard.isi) + start_offset_ticks, stim);
            case HazardCondition::Random:
                return HazardConfig::random(to_ticks(hazard.random_lo), to_ticks(hazard.random_hi), stim);
            case HazardCondition::Drift: {
                const int lo = to_ticks(hazard.drift_min);
                const int hi = to_ticks(hazard.drift_max);
                const int start = std::clamp(to_ticks(hazard.isi) + start_offset_ticks, lo, hi);
                return HazardConfig::drift(start, to_ticks(hazard.drift_delta), lo, hi, stim);
            }
        }
        return {};
    }

    CoagentKind coagent(CoagentOption option) const {
        if (option == CoagentOption::None) return NoCoagent{};
        PavlovianConfig p;
        p.repr = option == CoagentOption::BC ? ReprKind::bit_cascade(bc_length)
                                             : ReprKind::tiled_trace(tct_length, tct_decay);
        p.question = GvfQuestion::accumulation(gvf_gamma);
        p.rule = {tau, TokenDirection::Rising};
        p.alpha = gvf_alpha;
        p.lambda = gvf_lambda;
        pavsig::validate(p);
        return p;
    }
};

struct TrialSpec {
    int trial_id = 0;
    CoagentOption coagent = CoagentOption::None;
    HazardCondition condition = HazardCondition::Fixed;
};

// The nine-trial block (three co-agent options by three conditions) in a
// seeded random order.
inline std::vector<TrialSpec> trial_plan(std::uint64_t seed) {
    std::vector<TrialSpec> plan;
    for (auto c : {CoagentOption::None, CoagentOption::BC, CoagentOption::TCT}) {
        for (auto h : {HazardCondition::Fixed, HazardCondition::Random, HazardCondition::Drift}) {
            plan.push_back({0, c, h});
        }
    }
    Rng rng = Rng::derive(seed, 0x9A7);
    for (std::size_t i = plan.size() - 1; i > 0; --i) {
        std::swap(plan[i], plan[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    }
    for (std::size_t i = 0; i < plan.size(); ++i) plan[i].trial_id = static_cast<int>(i);
    return plan;
}

// Held-key state from the client; applies from the next tick on.
struct PlayerInput {
    double vx = 0.0;
    bool bank = false;
};

struct TickRecord {
    int tick = 0;
    double t = 0.0;  // simulated time at the end of the tick
    double position = 0.0;
    Region region = Region::Heat;
    bool hazard = false;
    double heat = 0.0;
    int token = 0;
    int score = 0;
    PlayerInput input{};
    double prediction = 0.0;
};

struct TrialMeta {
    int trial_id = 0;
    CoagentOption coagent = CoagentOption::None;
    HazardCondition condition = HazardCondition::Fixed;
    int start_isi_ticks = 0;
    double tick = 0.05;
    double trial_length = 300.0;
    std::uint64_t seed = 0;
    ContinuousConfig arena{};
};

struct TrialLog {
    TrialMeta meta;
    std::vector<TickRecord> records;
};

struct StateBroadcast {
    double t = 0.0;
    double pos = 0.0;
    bool hazard = false;
    double heat = 0.0;
    int token = 0;
    int score = 0;
    double remaining = 0.0;
};

// ---------------------------------------------------------------------------
// Metrics

struct WastedSteps {
    int total = 0;
    std::vector<int> per_pulse;  // index k: ticks before the (k+1)-th onset
};

// Ticks spent outside the heat region while the hazard is inactive, grouped
// by the hazard onset that ends each interval. Ticks after the last onset
// form the final group.
inline WastedSteps wasted_steps(const TrialLog& log) {
    WastedSteps out;
    out.per_pulse.push_back(0);
    bool was_active = false;
    for (const auto& r : log.records) {
        if (r.hazard && !was_active) out.per_pulse.push_back(0);
        was_active = r.hazard;
        if (!r.hazard && r.region != Region::Heat) {
            ++out.total;
            ++out.per_pulse.back();
        }
    }
    return out;
}

struct PulseSignal {
    double onset_time = 0.0;
    std::optional<double> token_time;  // start of the token run covering the onset
    double lead = 0.0;
    bool useful = false;
};

struct SignalReport {
    double required_lead = 0.0;
    std::vector<PulseSignal> pulses;

    int useful_count(std::size_t from_pulse = 0) const {
        int n = 0;
        for (std::size_t i = from_pulse; i < pulses.size(); ++i) n += pulses[i].useful ? 1 : 0;
        return n;
    }
};

inline double required_lead(const ContinuousConfig& arena, double exit_speed) {
    if (!(exit_speed > 0.0)) throw ContractViolation("exit speed must be positive");
    return (arena.hazard_radius - arena.heat_radius) / exit_speed;
}

// Per-pulse check of whether the token came on early enough for a player
// leaving at `exit_speed` to clear the hazard region. The token run must have
// started after the previous pulse ended; a token that never drops between
// pulses carries no timing and counts as absent.
inline SignalReport minimum_useful_signal(const TrialLog& log, double exit_speed) {
    SignalReport out;
    out.required_lead = required_lead(log.meta.arena, exit_speed);
    const auto& rs = log.records;
    std::size_t last_pulse_end = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const bool onset = rs[i].hazard && (i == 0 || !rs[i - 1].hazard);
        if (!onset) {
            if (i > 0 && !rs[i].hazard && rs[i - 1].hazard) last_pulse_end = i;
            continue;
        }
        PulseSignal p;
        p.onset_time = rs[i].t;
        if (i > 0 && rs[i - 1].token == 1) {
            std::size_t k = i - 1;
            while (k > last_pulse_end && rs[k - 1].token == 1) --k;
            const bool carried_over = last_pulse_end > 0 && k == last_pulse_end && rs[k - 1].token == 1;
            if (!carried_over) {
                p.token_time = rs[k].t;
                p.lead = p.onset_time - rs[k].t;
                p.useful = p.lead >= out.required_lead - 1e-9;
            }
        }
        out.pulses.push_back(p);
    }
    return out;
}

// Mean speed over complete exits from the heat-region edge to the
// hazard-region edge, or nullopt if the player never made one.
inline std::optional<double> measure_exit_speed(const TrialLog& log) {
    const auto& arena = log.meta.arena;
    double total = 0.0;
    int n = 0;
    double left_heat = -1.0;  // negative: not on an exit
    for (std::size_t i = 1; i < log.records.size(); ++i) {
        const auto& prev = log.records[i - 1];
        const auto& cur = log.records[i];
        if (prev.region == Region::Heat && cur.region != Region::Heat) left_heat = prev.t;
        if (cur.region == Region::Heat) left_heat = -1.0;
        if (left_heat >= 0.0 && prev.region == Region::Hazard && cur.region == Region::Safe) {
            const double dt = cur.t - left_heat;
            if (dt > 0.0) {
                total += (arena.hazard_radius - arena.heat_radius) / dt;
                ++n;
            }
            left_heat = -1.0;
        }
    }
    if (n == 0) return std::nullopt;
    return total / n;
}

// ---------------------------------------------------------------------------
// Session

struct TrialSummary {
    int trial_id = 0;
    std::string coagent;
    std::string condition;
    int score = 0;
    int ticks = 0;
    int pulses = 0;
    int hits = 0;  // pulses that caught the player outside the safe region
    int wasted_steps = 0;
};

inline TrialSummary summarize_trial(const TrialLog& log) {
    TrialSummary s;
    s.trial_id = log.meta.trial_id;
    s.coagent = to_string(log.meta.coagent);
    s.condition = to_string(log.meta.condition);
    s.ticks = static_cast<int>(log.records.size());
    s.score = log.records.empty() ? 0 : log.records.back().score;
    s.wasted_steps = wasted_steps(log).total;
    bool was_active = false;
    bool hit_this_pulse = false;
    for (const auto& r : log.records) {
        if (r.hazard && !was_active) {
            ++s.pulses;
            hit_this_pulse = false;
        }
        if (r.hazard && r.region != Region::Safe && !hit_this_pulse) {
            ++s.hits;
            hit_this_pulse = true;
        }
        was_active = r.hazard;
    }
    return s;
}

struct TickResult {
    std::optional<StateBroadcast> state;
    std::optional<TrialSummary> trial_end;  // set on the tick that ends a trial
    std::optional<std::string> notice;
};

class Session {
public:
    explicit Session(SessionConfig cfg) : cfg_(std::move(cfg)), plan_(trial_plan(cfg_.seed)) { cfg_.validate(); }

    const SessionConfig& config() const { return cfg_; }
    const std::vector<TrialSpec>& plan() const { return plan_; }
    bool active() const { return active_; }
    const TrialLog& log() const { return log_; }
    const Coagent* coagent() const { return coagent_ ? &*coagent_ : nullptr; }

    // Starts a trial from the plan. A running trial is abandoned.
    void start_trial(int trial_id) {
        if (trial_id < 0 || trial_id >= static_cast<int>(plan_.size())) {
            throw ContractViolation("trial_id must lie in [0, " + std::to_string(plan_.size()) + ")");
        }
        start_trial(plan_[static_cast<std::size_t>(trial_id)]);
    }

    void start_trial(const TrialSpec& spec) {
        const std::uint64_t trial_seed = cfg_.seed * 1000003ULL + static_cast<std::uint64_t>(spec.trial_id);
        rng_ = Rng::derive(trial_seed, 0x11FE);
        SessionConfig c = cfg_;
        c.hazard.condition = spec.condition;
        const int jitter = c.to_ticks(c.hazard.jitter);
        const int offset = jitter > 0 ? static_cast<int>(rng_.uniform_int(-jitter, jitter)) : 0;
        schedule_ = HazardSchedule(c.hazard_ticks(offset));
        schedule_.restart(rng_, true);
        coagent_.emplace(cfg_.coagent(spec.coagent));
        state_ = {};
        input_ = {};
        token_ = 0;
        tick_ = 0;
        active_ = true;
        log_ = {};
        log_.meta = {spec.trial_id, spec.coagent, spec.condition, schedule_.current_isi(),
                     cfg_.tick, cfg_.trial_length, trial_seed, cfg_.arena};
    }

    // Latest held-key state; returns a notice when no trial is running.
    std::optional<std::string> submit_input(const PlayerInput& in) {
        if (!active_) return std::string("input ignored: no trial running");
        input_ = in;
        input_.vx = std::clamp(in.vx, -cfg_.arena.max_speed, cfg_.arena.max_speed);
        return std::nullopt;
    }

    // Advances one tick under the held input.
    TickResult tick() {
        TickResult out;
        if (!active_) {
            out.notice = "tick ignored: no trial running";
            return out;
        }
        const bool hazard = schedule_.active();
        if (tick_ % cfg_.ticks_per_coagent_step() == 0) {
            token_ = coagent_->step(hazard, std::nullopt);
        }
        const auto step = continuous_step(cfg_.arena, state_, input_.vx, input_.bank, cfg_.tick, hazard);
        state_ = step.state;
        ++tick_;
        const double t = tick_ * cfg_.tick;
        log_.records.push_back({tick_ - 1, t, state_.position, cfg_.arena.region(state_.position), hazard,
                                state_.heat, token_, state_.score, input_, coagent_->diagnostics().prediction});
        schedule_.advance(rng_);
        const int total = cfg_.ticks_per_trial();
        out.state = StateBroadcast{t, state_.position, hazard, state_.heat, token_, state_.score,
                                   (total - tick_) * cfg_.tick};
        if (tick_ >= total) {
            active_ = false;
            out.trial_end = summarize_trial(log_);
        }
        return out;
    }

private:
    SessionConfig cfg_;
    std::vector<TrialSpec> plan_;
    Rng rng_{0};
    HazardSchedule schedule_{};
    std::optional<Coagent> coagent_;
    ContinuousState state_{};
    PlayerInput input_{};
    int token_ = 0;
    int tick_ = 0;
    bool active_ = false;
    TrialLog log_{};
};

inline TickResult session_tick(Session& session, const PlayerInput& input) {
    if (auto notice = session.submit_input(input)) {
        TickResult r;
        r.notice = *notice;
        return r;
    }
    return session.tick();
}

// ---------------------------------------------------------------------------
// Scripted player: leaves for the nearer safe side at `exit_speed` when the
// token (or the hazard) is on, walks back when both are off, banks when full.
// Stands in for a participant in tests and for the headless client.

struct TokenFollower {
    double exit_speed = 0.938;
    double return_speed = 1.0;
    double side = 1.0;  // +1 or -1: which safe region to use

    PlayerInput act(const StateBroadcast& s, const ContinuousConfig& arena) const {
        PlayerInput in;
        const double safe_edge = arena.hazard_radius + 0.05;
        if (s.token == 1 || s.hazard) {
            if (std::abs(s.pos) < safe_edge) in.vx = side * exit_speed;
        } else if (std::abs(s.pos) > 0.05) {
            in.vx = s.pos > 0 ? -return_speed : return_speed;
        }
        in.bank = s.heat >= arena.heat_capacity - 1e-9;
        return in;
    }
};

// ---------------------------------------------------------------------------
// Wire protocol and log files

inline json to_json(const StateBroadcast& s) {
    return {{"type", "state"}, {"t", s.t},       {"pos", s.pos},     {"hazard", s.hazard},
            {"heat", s.heat},  {"token", s.token}, {"score", s.score}, {"remaining", s.remaining}};
}

inline json to_json(const TrialSummary& s) {
    return {{"trial_id", s.trial_id}, {"coagent", s.coagent}, {"condition", s.condition},
            {"score", s.score},       {"ticks", s.ticks},     {"pulses", s.pulses},
            {"hits", s.hits},         {"wasted_steps", s.wasted_steps}};
}

inline json trial_end_message(const TrialSummary& s) { return {{"type", "trial_end"}, {"summary", to_json(s)}}; }
inline json notice_message(const std::string& text) { return {{"type", "notice"}, {"message", text}}; }

inline json plan_message(const std::vector<TrialSpec>& plan) {
    json trials = json::array();
    for (const auto& t : plan) {
        trials.push_back({{"trial_id", t.trial_id}, {"coagent", to_string(t.coagent)},
                          {"condition", to_string(t.condition)}});
    }
    return {{"type", "plan"}, {"trials", trials}};
}

// Client messages.
struct InputMessage {
    PlayerInput input;
};
struct StartTrialMessage {
    int trial_id = 0;
};
using ClientMessage = std::variant<InputMessage, StartTrialMessage>;

// Throws ConfigError on anything that is not a well-formed client message.
inline ClientMessage parse_client_message(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed message: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ConfigError("message needs a string 'type'");
    }
    const auto type = j["type"].get<std::string>();
    try {
        if (type == "input") {
            InputMessage m;
            m.input.vx = j.at("vx").get<double>();
            m.input.bank = j.value("bank", false);
            if (!std::isfinite(m.input.vx)) throw ConfigError("vx must be finite");
            return m;
        }
        if (type == "start_trial") return StartTrialMessage{j.at("trial_id").get<int>()};
    } catch (const json::exception& e) {
        throw ConfigError("bad " + type + " message: " + e.what());
    }
    throw ConfigError("unknown message type '" + type + "'");
}

inline json to_json(const TrialMeta& m) {
    return {{"type", "meta"},
            {"trial_id", m.trial_id},
            {"coagent", to_string(m.coagent)},
            {"condition", to_string(m.condition)},
            {"start_isi_ticks", m.start_isi_ticks},
            {"tick", m.tick},
            {"trial_length", m.trial_length},
            {"seed", m.seed},
            {"heat_radius", m.arena.heat_radius},
            {"hazard_radius", m.arena.hazard_radius},
            {"half_width", m.arena.half_width}};
}

inline json to_json(const TickRecord& r) {
    return {{"type", "tick"},   {"tick", r.tick},     {"t", r.t},           {"pos", r.position},
            {"region", to_string(r.region)},        {"hazard", r.hazard}, {"heat", r.heat},
            {"token", r.token}, {"score", r.score},   {"vx", r.input.vx},   {"bank", r.input.bank},
            {"v", r.prediction}};
}

// JSON lines: one meta line, then one line per tick.
inline void write_trial_log(std::ostream& os, const TrialLog& log) {
    os << to_json(log.meta).dump() << '\n';
    for (const auto& r : log.records) os << to_json(r).dump() << '\n';
}

inline Region region_from_string(const std::string& s) {
    if (s == "heat") return Region::Heat;
    if (s == "hazard") return Region::Hazard;
    if (s == "safe") return Region::Safe;
    throw ConfigError("unknown region '" + s + "'");
}

inline CoagentOption coagent_option_from_string(const std::string& s) {
    if (s == "none") return CoagentOption::None;
    if (s == "BC") return CoagentOption::BC;
    if (s == "TCT") return CoagentOption::TCT;
    throw ConfigError("unknown co-agent option '" + s + "'");
}

inline HazardCondition condition_option_from_string(const std::string& s) {
    for (auto c : {HazardCondition::Fixed, HazardCondition::Random, HazardCondition::Drift}) {
        if (to_string(c) == s) return c;
    }
    throw ConfigError("unknown hazard condition '" + s + "'");
}

inline TrialLog read_trial_log(std::istream& is) {
    TrialLog log;
    std::string line;
    bool have_meta = false;
    double last_t = -1.0;
    try {
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line);
            const auto type = j.at("type").get<std::string>();
            if (type == "meta") {
                auto& m = log.meta;
                m.trial_id = j.at("trial_id").get<int>();
                m.coagent = coagent_option_from_string(j.at("coagent").get<std::string>());
                m.condition = condition_option_from_string(j.at("condition").get<std::string>());
                m.start_isi_ticks = j.at("start_isi_ticks").get<int>();
                m.tick = j.at("tick").get<double>();
                m.trial_length = j.at("trial_length").get<double>();
                m.seed = j.at("seed").get<std::uint64_t>();
                m.arena.heat_radius = j.at("heat_radius").get<double>();
                m.arena.hazard_radius = j.at("hazard_radius").get<double>();
                m.arena.half_width = j.at("half_width").get<double>();
                have_meta = true;
            } else if (type == "tick") {
                TickRecord r;
                r.tick = j.at("tick").get<int>();
                r.t = j.at("t").get<double>();
                r.position = j.at("pos").get<double>();
                r.region = region_from_string(j.at("region").get<std::string>());
                r.hazard = j.at("hazard").get<bool>();
                r.heat = j.at("heat").get<double>();
                r.token = j.at("token").get<int>();
                r.score = j.at("score").get<int>();
                r.input.vx = j.at("vx").get<double>();
                r.input.bank = j.at("bank").get<bool>();
                r.prediction = j.value("v", 0.0);
                if (!(r.t > last_t)) throw ConfigError("trial log timestamps must increase");
                last_t = r.t;
                log.records.push_back(r);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed trial log: ") + e.what());
    }
    if (!have_meta) throw ConfigError("trial log has no meta line");
    return log;
}

// Session config file: any subset of the SessionConfig fields, with the
// hazard and arena as nested objects.
inline SessionConfig session_config_from_json(const json& j) {
    SessionConfig c;
    auto num = [&](const json& obj, const char* key, auto& out) {
        if (obj.contains(key)) out = obj.at(key).get<std::remove_reference_t<decltype(out)>>();
    };
    auto only = [](const json& obj, std::initializer_list<std::string_view> keys, const std::string& where) {
        if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
        for (const auto& [k, v] : obj.items()) {
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
                throw ConfigError("unknown key '" + k + "' in " + where);
            }
        }
    };
    only(j,
         {"tick", "trial_length", "coagent_period", "bc_length", "tct_length", "tct_decay", "gvf_gamma", "gvf_alpha",
          "gvf_lambda", "tau", "seed", "hazard", "arena"},
         "session config");
    if (j.contains("hazard")) {
        only(j.at("hazard"),
             {"isi", "stimulus", "random_lo", "random_hi", "drift_delta", "drift_min", "drift_max", "jitter"},
             "session config hazard");
    }
    if (j.contains("arena")) {
        only(j.at("arena"), {"half_width", "heat_radius", "hazard_radius", "heat_rate", "heat_capacity", "max_speed"},
             "session config arena");
    }
    try {
        num(j, "tick", c.tick);
        num(j, "trial_length", c.trial_length);
        num(j, "coagent_period", c.coagent_period);
        num(j, "bc_length", c.bc_length);
        num(j, "tct_length", c.tct_length);
        num(j, "tct_decay", c.tct_decay);
        num(j, "gvf_gamma", c.gvf_gamma);
        num(j, "gvf_alpha", c.gvf_alpha);
        num(j, "gvf_lambda", c.gvf_lambda);
        num(j, "tau", c.tau);
        num(j, "seed", c.seed);
        if (j.contains("hazard")) {
            const auto& h = j.at("hazard");
            num(h, "isi", c.hazard.isi);
            num(h, "stimulus", c.hazard.stimulus);
            num(h, "random_lo", c.hazard.random_lo);
            num(h, "random_hi", c.hazard.random_hi);
            num(h, "drift_delta", c.hazard.drift_delta);
            num(h, "drift_min", c.hazard.drift_min);
            num(h, "drift_max", c.hazard.drift_max);
            num(h, "jitter", c.hazard.jitter);
        }
        if (j.contains("arena")) {
            const auto& a = j.at("arena");
            num(a, "half_width", c.arena.half_width);
            num(a, "heat_radius", c.arena.heat_radius);
            num(a, "hazard_radius", c.arena.hazard_radius);
            num(a, "heat_rate", c.arena.heat_rate);
            num(a, "heat_capacity", c.arena.heat_capacity);
            num(a, "max_speed", c.arena.max_speed);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad session config: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace pavsig::live
