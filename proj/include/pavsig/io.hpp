#pragma once

// JSON configuration, grid files, CSV results, summaries and checkpoints.
//
// Config objects accept any subset of their keys; missing keys keep the
// defaults, unknown keys are rejected so typos fail loudly.

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pavsig/harness.hpp"

namespace pavsig {

using json = nlohmann::json;

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
        if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

inline LocationRange read_range(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(where + " must be a [lo, hi] pair");
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hazard and environment

inline HazardCondition condition_from_string(const std::string& s) {
    if (s == "fixed") return HazardCondition::Fixed;
    if (s == "random") return HazardCondition::Random;
    if (s == "drift") return HazardCondition::Drift;
    throw ConfigError("unknown hazard condition '" + s + "'");
}

inline json to_json(const HazardConfig& h) {
    return {{"condition", to_string(h.condition)},
            {"isi", h.isi},
            {"random_lo", h.random_lo},
            {"random_hi", h.random_hi},
            {"drift_start", h.drift_start},
            {"drift_delta", h.drift_delta},
            {"drift_min", h.drift_min},
            {"drift_max", h.drift_max},
            {"drift_excludes_zero", h.drift_excludes_zero},
            {"stimulus_length", h.stimulus_length}};
}

inline HazardConfig hazard_from_json(const json& j, HazardConfig h = {}) {
    const std::string where = "hazard";
    detail::reject_unknown(j,
                           {"condition", "isi", "random_lo", "random_hi", "drift_start", "drift_delta", "drift_min",
                            "drift_max", "drift_excludes_zero", "stimulus_length"},
                           where);
    if (j.contains("condition")) h.condition = condition_from_string(j.at("condition").get<std::string>());
    detail::read(j, "isi", h.isi, where);
    detail::read(j, "random_lo", h.random_lo, where);
    detail::read(j, "random_hi", h.random_hi, where);
    detail::read(j, "drift_start", h.drift_start, where);
    detail::read(j, "drift_delta", h.drift_delta, where);
    detail::read(j, "drift_min", h.drift_min, where);
    detail::read(j, "drift_max", h.drift_max, where);
    detail::read(j, "drift_excludes_zero", h.drift_excludes_zero, where);
    detail::read(j, "stimulus_length", h.stimulus_length, where);
    return h;
}

inline json to_json(const EnvConfig& e) {
    return {{"n_locations", e.n_locations},
            {"heat_rate", e.heat_rate},
            {"heat_capacity", e.heat_capacity},
            {"episode_length", e.episode_length},
            {"start_location", e.start_location},
            {"heat_region", {e.heat_region.lo, e.heat_region.hi}},
            {"hazard_region", {e.hazard_region.lo, e.hazard_region.hi}},
            {"hazard", to_json(e.hazard)}};
}

inline EnvConfig env_from_json(const json& j, EnvConfig e = {}) {
    const std::string where = "env";
    detail::reject_unknown(j,
                           {"n_locations", "heat_rate", "heat_capacity", "episode_length", "start_location",
                            "heat_region", "hazard_region", "hazard"},
                           where);
    detail::read(j, "n_locations", e.n_locations, where);
    detail::read(j, "heat_rate", e.heat_rate, where);
    detail::read(j, "heat_capacity", e.heat_capacity, where);
    detail::read(j, "episode_length", e.episode_length, where);
    detail::read(j, "start_location", e.start_location, where);
    if (j.contains("heat_region")) e.heat_region = detail::read_range(j.at("heat_region"), "env.heat_region");
    if (j.contains("hazard_region")) e.hazard_region = detail::read_range(j.at("hazard_region"), "env.hazard_region");
    if (j.contains("hazard")) e.hazard = hazard_from_json(j.at("hazard"), e.hazard);
    return e;
}

// ---------------------------------------------------------------------------
// Co-agent

inline json to_json(const ReprKind& r) {
    json j;
    switch (r.type) {
        case ReprType::Bias: j = {{"type", "bias"}}; break;
        case ReprType::BitCascade: j = {{"type", "bc"}, {"length", r.length}}; break;
        case ReprType::TiledTrace: j = {{"type", "tct"}, {"length", r.length}, {"decay", r.decay}}; break;
    }
    return j;
}

inline ReprKind repr_from_json(const json& j) {
    detail::reject_unknown(j, {"type", "length", "decay"}, "coagent.repr");
    const auto type = j.value("type", std::string("bc"));
    if (type == "bias") return ReprKind::bias();
    if (type == "bc") return ReprKind::bit_cascade(j.value("length", std::size_t{16}));
    if (type == "tct") return ReprKind::tiled_trace(j.value("length", std::size_t{16}), j.value("decay", 0.3));
    throw ConfigError("unknown representation type '" + type + "'");
}

inline json to_json(const CoagentKind& kind) {
    if (std::holds_alternative<NoCoagent>(kind)) return {{"kind", "none"}};
    if (const auto* o = std::get_if<OracleConfig>(&kind)) return {{"kind", "oracle"}, {"lead_steps", o->lead_steps}};
    const auto& p = std::get<PavlovianConfig>(kind);
    json j = {{"kind", "pavlovian"},
              {"repr", to_json(p.repr)},
              {"question", p.question.label()},
              {"tau", p.rule.tau},
              {"alpha", p.alpha},
              {"lambda", p.lambda}};
    if (p.question.type == QuestionType::Accumulation) j["gamma"] = p.question.gamma;
    return j;
}

// The token direction always follows the question; tau defaults to the
// question's standard threshold.
inline CoagentKind coagent_from_json(const json& j) {
    const std::string where = "coagent";
    detail::reject_unknown(j, {"kind", "repr", "question", "gamma", "tau", "alpha", "lambda", "lead_steps"}, where);
    const auto kind = j.value("kind", std::string("pavlovian"));
    if (kind == "none") return NoCoagent{};
    if (kind == "oracle") {
        OracleConfig o;
        detail::read(j, "lead_steps", o.lead_steps, where);
        return o;
    }
    if (kind != "pavlovian") throw ConfigError("unknown co-agent kind '" + kind + "'");
    PavlovianConfig p;
    if (j.contains("repr")) p.repr = repr_from_json(j.at("repr"));
    const auto q = j.value("question", std::string("countdown"));
    if (q == "countdown") {
        p.question = GvfQuestion::countdown();
    } else if (q == "accumulation") {
        p.question = GvfQuestion::accumulation(j.value("gamma", 0.9));
    } else {
        throw ConfigError("unknown GVF question '" + q + "'");
    }
    p.rule = TokenRule::for_question(p.question);
    detail::read(j, "tau", p.rule.tau, where);
    detail::read(j, "alpha", p.alpha, where);
    detail::read(j, "lambda", p.lambda, where);
    return p;
}

// ---------------------------------------------------------------------------
// Control and experiments

inline json to_json(const ControlParams& c) {
    return {{"alpha", c.alpha},     {"lambda", c.lambda},
            {"gamma", c.gamma},     {"epsilon", c.epsilon},
            {"initial_value", c.initial_value}, {"trace_cutoff", c.trace_cutoff}};
}

inline ControlParams control_from_json(const json& j, ControlParams c = {}) {
    const std::string where = "control";
    detail::reject_unknown(j, {"alpha", "lambda", "gamma", "epsilon", "initial_value", "trace_cutoff"}, where);
    detail::read(j, "alpha", c.alpha, where);
    detail::read(j, "lambda", c.lambda, where);
    detail::read(j, "gamma", c.gamma, where);
    detail::read(j, "epsilon", c.epsilon, where);
    detail::read(j, "initial_value", c.initial_value, where);
    detail::read(j, "trace_cutoff", c.trace_cutoff, where);
    return c;
}

inline json to_json(const ExperimentConfig& cfg) {
    return {{"name", cfg.name},
            {"n_runs", cfg.n_runs},
            {"n_episodes", cfg.n_episodes},
            {"seed_base", cfg.seed_base},
            {"env", to_json(cfg.env)},
            {"coagent", to_json(cfg.coagent)},
            {"control", to_json(cfg.control)}};
}

inline ExperimentConfig config_from_json(const json& j) {
    const std::string where = "config";
    detail::reject_unknown(j, {"name", "n_runs", "n_episodes", "seed_base", "env", "coagent", "control"}, where);
    ExperimentConfig cfg;
    detail::read(j, "name", cfg.name, where);
    detail::read(j, "n_runs", cfg.n_runs, where);
    detail::read(j, "n_episodes", cfg.n_episodes, where);
    detail::read(j, "seed_base", cfg.seed_base, where);
    if (j.contains("env")) cfg.env = env_from_json(j.at("env"));
    if (j.contains("coagent")) cfg.coagent = coagent_from_json(j.at("coagent"));
    if (j.contains("control")) cfg.control = control_from_json(j.at("control"));
    cfg.validate();
    return cfg;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline ExperimentConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Grids: {"defaults": {...}, "configs": [{...}, ...]}. Each entry is merged
// onto the defaults as a JSON merge patch, so it only lists what differs.

inline std::vector<ExperimentConfig> grid_from_json(const json& j) {
    detail::reject_unknown(j, {"defaults", "configs"}, "grid");
    const json defaults = j.value("defaults", json::object());
    if (!j.contains("configs") || !j.at("configs").is_array()) throw ConfigError("grid needs a 'configs' array");
    std::vector<ExperimentConfig> out;
    std::set<std::string> names;
    for (const auto& entry : j.at("configs")) {
        json merged = defaults;
        merged.merge_patch(entry);
        out.push_back(config_from_json(merged));
        if (!names.insert(out.back().name).second) {
            throw ConfigError("duplicate config name '" + out.back().name + "' in grid");
        }
    }
    return out;
}

inline std::vector<ExperimentConfig> load_grid(const std::string& path) {
    return grid_from_json(read_json_file(path));
}

inline std::string grid_name(const CoagentKind& kind, double alpha, HazardCondition c) {
    std::ostringstream os;
    os << label(kind);
    if (std::holds_alternative<PavlovianConfig>(kind)) os << "-a" << alpha;
    os << "-" << to_string(c);
    return os.str();
}

// Every representation x question x step size x condition, plus the oracle
// and no-co-agent baselines under each condition.
inline std::vector<ExperimentConfig> default_grid(int n_runs = 30, int n_episodes = 5000) {
    const std::vector<ReprKind> reprs = {ReprKind::bias(), ReprKind::bit_cascade(16),
                                         ReprKind::tiled_trace(16, 0.3), ReprKind::tiled_trace(16, 0.6)};
    const std::vector<GvfQuestion> questions = {GvfQuestion::accumulation(), GvfQuestion::countdown()};
    const std::vector<HazardConfig> hazards = {HazardConfig::fixed(), HazardConfig::random(), HazardConfig::drift()};
    std::vector<ExperimentConfig> out;
    auto add = [&](CoagentKind kind, double alpha, const HazardConfig& h) {
        ExperimentConfig cfg;
        cfg.coagent = std::move(kind);
        cfg.env.hazard = h;
        cfg.n_runs = n_runs;
        cfg.n_episodes = n_episodes;
        cfg.name = grid_name(cfg.coagent, alpha, h.condition);
        out.push_back(std::move(cfg));
    };
    for (const auto& h : hazards) {
        for (const auto& r : reprs) {
            for (const auto& q : questions) {
                for (double alpha : {0.01, 0.1}) {
                    PavlovianConfig p;
                    p.repr = r;
                    p.question = q;
                    p.rule = TokenRule::for_question(q);
                    p.alpha = alpha;
                    add(p, alpha, h);
                }
            }
        }
        add(OracleConfig{}, 0.0, h);
        add(NoCoagent{}, 0.0, h);
    }
    return out;
}

inline json grid_to_json(const std::vector<ExperimentConfig>& configs) {
    json arr = json::array();
    for (const auto& c : configs) arr.push_back(to_json(c));
    return {{"configs", arr}};
}

// ---------------------------------------------------------------------------
// Results

// Columns run,episode,reward; one row per completed episode.
inline void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << "run,episode,reward\n";
    for (const auto& r : records) {
        for (std::size_t e = 0; e < r.episode_rewards.size(); ++e) {
            os << r.run_index << ',' << e << ',' << r.episode_rewards[e] << '\n';
        }
    }
}

// Inverse of write_csv. Runs with fewer than `n_episodes` rows are marked
// failed; pass 0 to skip that check.
inline std::vector<RunRecord> read_csv(std::istream& is, int n_episodes = 0) {
    std::string line;
    if (!std::getline(is, line) || line != "run,episode,reward") {
        throw ConfigError("results CSV must start with the header run,episode,reward");
    }
    std::vector<RunRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int run = 0, episode = 0, reward = 0;
        char c1 = 0, c2 = 0;
        std::istringstream row(line);
        if (!(row >> run >> c1 >> episode >> c2 >> reward) || c1 != ',' || c2 != ',' || run < 0) {
            throw ConfigError("malformed CSV row: " + line);
        }
        if (static_cast<std::size_t>(run) >= records.size()) records.resize(static_cast<std::size_t>(run) + 1);
        auto& rec = records[static_cast<std::size_t>(run)];
        rec.run_index = run;
        if (episode != static_cast<int>(rec.episode_rewards.size())) {
            throw ConfigError("CSV episodes out of order for run " + std::to_string(run));
        }
        rec.episode_rewards.push_back(reward);
    }
    if (n_episodes > 0) {
        for (auto& r : records) {
            if (static_cast<int>(r.episode_rewards.size()) < n_episodes) {
                r.failed = true;
                r.failure = "incomplete run";
            }
        }
    }
    return records;
}

inline json to_json(const Summary& s) {
    return {{"n_runs", s.n_runs},           {"n_failed", s.n_failed},     {"mean", s.mean},
            {"median", s.median},           {"q1", s.q1},                 {"q3", s.q3},
            {"ci_low", s.ci_low},           {"ci_high", s.ci_high},       {"whisker_low", s.whisker_low},
            {"whisker_high", s.whisker_high}, {"min", s.min},             {"max", s.max},
            {"n_outliers", s.n_outliers}};
}

// Summary document for one config. Holds no timing, so identical runs give
// identical files.
inline json summary_json(const ExperimentConfig& cfg, const std::vector<RunRecord>& records) {
    json failures = json::array();
    for (const auto& r : records) {
        if (r.failed) failures.push_back({{"run", r.run_index}, {"reason", r.failure}});
    }
    json windows = json::object();
    const bool any_ok = std::any_of(records.begin(), records.end(), [](const RunRecord& r) { return !r.failed; });
    if (any_ok) {
        const auto early = EpisodeWindow::early(cfg.n_episodes);
        const auto late = EpisodeWindow::asymptotic(cfg.n_episodes);
        windows["early"] = to_json(summarize(records, early));
        windows["early"]["episodes"] = {early.first, early.last};
        windows["asymptotic"] = to_json(summarize(records, late));
        windows["asymptotic"]["episodes"] = {late.first, late.last};
    }
    return {{"name", cfg.name}, {"label", label(cfg.coagent)}, {"config", to_json(cfg)},
            {"windows", windows}, {"failures", failures}};
}

inline json to_json(int run_index, const TraceRow& row) {
    return {{"run", run_index},       {"episode", row.episode}, {"step", row.step},
            {"location", row.location}, {"heat", row.heat},     {"hazard", row.hazard},
            {"action", row.action},   {"token", row.token},     {"reward", row.reward},
            {"v", row.prediction},    {"features", row.features}};
}

// Checkpoints: weight vectors as flat JSON arrays.
inline json weights_to_json(std::span<const double> w) { return json(std::vector<double>(w.begin(), w.end())); }

inline std::vector<double> weights_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("checkpoint must be a flat JSON array");
    std::vector<double> w;
    w.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("checkpoint entries must be numbers");
        w.push_back(v.get<double>());
    }
    return w;
}

}  // namespace pavsig
