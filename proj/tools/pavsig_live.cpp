// pavsig_live: real-time session server for human play over WebSocket.

#include <csignal>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "pavsig/io.hpp"
#include "pavsig/live_server.hpp"

using namespace pavsig;
using namespace pavsig::live;

int main(int argc, char** argv) {
    CLI::App app{"Frost Hollow live session server"};
    unsigned short port = 8080;
    std::string config_path, log_dir = "trial_logs", static_dir;
    double speed = 1.0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    app.add_option("--port", port, "TCP port on 127.0.0.1 (0 picks a free one)");
    app.add_option("--config", config_path, "session config (JSON)")->check(CLI::ExistingFile);
    app.add_option("--log-dir", log_dir, "directory for JSON-lines trial logs");
    app.add_option("--static", static_dir, "directory of browser client files to serve")
        ->check(CLI::ExistingDirectory);
    app.add_option("--speed", speed, "simulated seconds per wall-clock second");
    auto* seed_opt = app.add_option("--seed", seed, "session seed (trial order, hazard jitter)");
    CLI11_PARSE(app, argc, argv);
    seed_given = seed_opt->count() > 0;

    try {
        ServerOptions options;
        if (!config_path.empty()) options.session = session_config_from_json(read_json_file(config_path));
        if (seed_given) options.session.seed = seed;
        options.log_dir = log_dir;
        options.static_dir = static_dir;
        options.speed = speed;

        net::io_context ioc{1};
        LiveServer server(ioc, options, port);
        net::signal_set signals(ioc, SIGINT, SIGTERM);
        signals.async_wait([&](beast::error_code, int) { ioc.stop(); });
        std::printf("listening on 127.0.0.1:%u\n", static_cast<unsigned>(server.port()));
        std::fflush(stdout);
        ioc.run();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
