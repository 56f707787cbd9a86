// pavsig: run, sweep, summarize and probe experiments from the command line.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pavsig/io.hpp"
#include "pavsig/probe.hpp"

namespace fs = std::filesystem;
using namespace pavsig;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

void write_outputs(const fs::path& dir, const ExperimentConfig& cfg, const std::vector<RunRecord>& records,
                   bool checkpoint) {
    fs::create_directories(dir);
    {
        std::ofstream csv(dir / (cfg.name + ".csv"), std::ios::binary);
        write_csv(csv, records);
    }
    write_text(dir / (cfg.name + ".config.json"), to_json(cfg).dump(2) + "\n");
    write_text(dir / (cfg.name + ".summary.json"), summary_json(cfg, records).dump(2) + "\n");
    if (checkpoint) {
        for (const auto& r : records) {
            json w = {{"q", weights_to_json(r.q_weights)}, {"gvf", weights_to_json(r.gvf_weights)}};
            write_text(dir / (cfg.name + ".run" + std::to_string(r.run_index) + ".weights.json"), w.dump() + "\n");
        }
    }
}

void print_row(const std::string& name, const Summary& s) {
    std::printf("%-32s %4zu %3zu %9.3f %9.3f %9.3f %9.3f [%8.3f, %8.3f]\n", name.c_str(), s.n_runs, s.n_failed,
                s.mean, s.median, s.q1, s.q3, s.ci_low, s.ci_high);
}

void print_header() {
    std::printf("%-32s %4s %3s %9s %9s %9s %9s %21s\n", "config", "runs", "bad", "mean", "median", "q1", "q3",
                "95% CI");
}

int cmd_run(const std::string& config_path, const std::string& out_dir, unsigned workers, bool trace,
            bool checkpoint) {
    const ExperimentConfig cfg = load_config(config_path);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::vector<RunRecord> records;
    if (trace) {
        // One trace file per run, each written only by the worker running it.
        std::vector<std::ofstream> files;
        for (int r = 0; r < cfg.n_runs; ++r) {
            files.emplace_back(dir / (cfg.name + ".run" + std::to_string(r) + ".trace.jsonl"), std::ios::binary);
        }
        records = run_experiment(cfg, workers, [&](int run, const TraceRow& row) {
            files[static_cast<std::size_t>(run)] << to_json(run, row).dump() << '\n';
        });
    } else {
        records = run_experiment(cfg, workers);
    }
    write_outputs(dir, cfg, records, checkpoint);
    print_header();
    int failed = 0;
    for (const auto& r : records) failed += r.failed ? 1 : 0;
    if (failed < cfg.n_runs) print_row(cfg.name, summarize(records, EpisodeWindow::asymptotic(cfg.n_episodes)));
    if (failed > 0) std::fprintf(stderr, "%d run(s) diverged; see %s.summary.json\n", failed, cfg.name.c_str());
    return 0;
}

int cmd_sweep(const std::string& grid_path, const std::string& out_dir, unsigned workers, int runs, int episodes) {
    std::vector<ExperimentConfig> configs = grid_path == "default" ? default_grid() : load_grid(grid_path);
    for (auto& c : configs) {
        if (runs > 0) c.n_runs = runs;
        if (episodes > 0) c.n_episodes = episodes;
    }
    const auto results = run_sweep(configs, workers);
    const fs::path dir(out_dir);
    print_header();
    for (std::size_t i = 0; i < configs.size(); ++i) {
        write_outputs(dir, configs[i], results[i], false);
        const auto& recs = results[i];
        if (std::any_of(recs.begin(), recs.end(), [](const RunRecord& r) { return !r.failed; })) {
            print_row(configs[i].name, summarize(recs, EpisodeWindow::asymptotic(configs[i].n_episodes)));
        }
    }
    return 0;
}

int cmd_summarize(const std::string& in_dir, const std::string& window_name) {
    if (window_name != "early" && window_name != "asymptotic") throw ConfigError("--window must be early or asymptotic");
    std::vector<fs::path> config_files;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        const auto name = entry.path().filename().string();
        if (name.size() > 12 && name.ends_with(".config.json")) config_files.push_back(entry.path());
    }
    std::sort(config_files.begin(), config_files.end());
    if (config_files.empty()) throw ConfigError("no *.config.json files in " + in_dir);
    json table = json::object();
    print_header();
    for (const auto& path : config_files) {
        const ExperimentConfig cfg = config_from_json(read_json_file(path.string()));
        std::ifstream csv(fs::path(in_dir) / (cfg.name + ".csv"));
        if (!csv) throw ConfigError("missing results CSV for " + cfg.name);
        const auto records = read_csv(csv, cfg.n_episodes);
        const auto window = window_name == "early" ? EpisodeWindow::early(cfg.n_episodes)
                                                   : EpisodeWindow::asymptotic(cfg.n_episodes);
        const Summary s = summarize(records, window);
        print_row(cfg.name, s);
        table[cfg.name] = to_json(s);
        table[cfg.name]["episodes"] = {window.first, window.last};
    }
    write_text(fs::path(in_dir) / ("summary_" + window_name + ".json"), table.dump(2) + "\n");
    return 0;
}

struct ProbeArgs {
    std::string repr = "bc";
    std::size_t length = 16;
    double decay = 0.3;
    std::string question = "countdown";
    double gamma = 0.9;
    double alpha = 0.1;
    double lambda = ProbeConfig{}.lambda;
    int isi = 8;
    int stimulus = 2;
    int steps = 1000;
    int every = 10;
    double tol = 0.25;
};

int cmd_probe(const ProbeArgs& a) {
    ProbeConfig cfg;
    cfg.repr = repr_from_json({{"type", a.repr}, {"length", a.length}, {"decay", a.decay}});
    cfg.question = a.question == "countdown" ? GvfQuestion::countdown() : GvfQuestion::accumulation(a.gamma);
    if (a.question != "countdown" && a.question != "accumulation") throw ConfigError("unknown question");
    cfg.alpha = a.alpha;
    cfg.lambda = a.lambda;
    cfg.hazard = HazardConfig::fixed(a.isi, a.stimulus);
    cfg.training_steps = a.steps;
    cfg.checkpoint_every = a.every;
    const auto report = prediction_probe(cfg);
    std::printf("step,max_error\n");
    for (const auto& p : report.points) std::printf("%d,%.6f\n", p.step, p.max_error);
    const int settled = report.settled_step(a.tol);
    if (settled < 0) {
        std::printf("# error never settled below %.3g\n", a.tol);
    } else {
        std::printf("# error below %.3g from step %d\n", a.tol, settled);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pavlovian signalling experiments on Frost Hollow"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "results", grid_path = "default", in_dir = "results", window = "asymptotic";
    unsigned workers = default_workers();
    bool trace = false, checkpoint = false;
    int runs = 0, episodes = 0;

    auto* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker threads");
    run->add_flag("--trace", trace, "write per-step JSON-lines traces, one file per run");
    run->add_flag("--checkpoint", checkpoint, "write final Q and GVF weights per run");

    auto* sweep = app.add_subcommand("sweep", "run every config in a grid");
    sweep->add_option("--grid", grid_path, "grid file (JSON), or 'default' for the built-in grid");
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--workers", workers, "worker threads");
    sweep->add_option("--runs", runs, "override n_runs for every config");
    sweep->add_option("--episodes", episodes, "override n_episodes for every config");

    auto* summ = app.add_subcommand("summarize", "summary statistics over a results directory");
    summ->add_option("--in", in_dir, "results directory")->check(CLI::ExistingDirectory);
    summ->add_option("--window", window, "early (first 800 episodes) or asymptotic (last 1000)")
        ->check(CLI::IsMember({"early", "asymptotic"}));

    ProbeArgs pa;
    auto* probe = app.add_subcommand("probe", "train a co-agent GVF alone and report prediction error");
    probe->add_option("--repr", pa.repr, "bias, bc or tct")->check(CLI::IsMember({"bias", "bc", "tct"}));
    probe->add_option("--length", pa.length, "temporal code length");
    probe->add_option("--decay", pa.decay, "tile-coded trace decay");
    probe->add_option("--question", pa.question, "countdown or accumulation")
        ->check(CLI::IsMember({"countdown", "accumulation"}));
    probe->add_option("--gamma", pa.gamma, "accumulation discount");
    probe->add_option("--alpha", pa.alpha, "GVF step size");
    probe->add_option("--lambda", pa.lambda, "GVF trace decay");
    probe->add_option("--isi", pa.isi, "fixed inter-stimulus interval");
    probe->add_option("--stimulus", pa.stimulus, "stimulus length");
    probe->add_option("--steps", pa.steps, "training steps");
    probe->add_option("--every", pa.every, "checkpoint interval");
    probe->add_option("--tol", pa.tol, "settling tolerance");

    auto* grid = app.add_subcommand("grid", "print the built-in grid as a grid file");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config_path, out_dir, workers, trace, checkpoint);
        if (*sweep) return cmd_sweep(grid_path, out_dir, workers, runs, episodes);
        if (*summ) return cmd_summarize(in_dir, window);
        if (*probe) return cmd_probe(pa);
        if (*grid) {
            std::cout << grid_to_json(default_grid()).dump(2) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
