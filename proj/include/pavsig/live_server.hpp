#pragma once

// WebSocket front end for live sessions on Boost.Beast, plus plain static
// file serving for the browser client on the same port.
//
// Each connection owns one Session. Inbound messages are queued as they
// arrive and drained once per tick; the tick timer runs on absolute
// deadlines so simulated time never drifts with message latency.

#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "pavsig/live.hpp"

namespace pavsig::live {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

struct ServerOptions {
    SessionConfig session{};
    std::string log_dir;     // empty: do not write trial logs
    std::string static_dir;  // empty: no static files
    double speed = 1.0;      // simulated seconds per wall second
};

namespace detail {

inline std::string mime_type(const std::string& ext) {
    if (ext == ".html") return "text/html";
    if (ext == ".js" || ext == ".mjs") return "application/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".wav") return "audio/wav";
    return "application/octet-stream";
}

}  // namespace detail

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket socket, const ServerOptions& options, int id)
        : ws_(std::move(socket)), timer_(ws_.get_executor()), options_(options), session_(options.session), id_(id) {}

    void run(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->send(plan_message(self->session_.plan()).dump());
            self->do_read();
            self->next_tick_ = std::chrono::steady_clock::now();
            self->schedule_tick();
        });
    }

private:
    void do_read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->closed_ = true;
                self->timer_.cancel();
                return;
            }
            const std::string text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            try {
                self->inbox_.push_back(parse_client_message(text));
            } catch (const ConfigError& e) {
                self->send(notice_message(e.what()).dump());
            }
            self->do_read();
        });
    }

    void schedule_tick() {
        const auto period = std::chrono::duration<double>(options_.session.tick / options_.speed);
        next_tick_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
        timer_.expires_at(next_tick_);
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (ec || self->closed_) return;
            self->on_tick();
            self->schedule_tick();
        });
    }

    void on_tick() {
        while (!inbox_.empty()) {
            const ClientMessage msg = std::move(inbox_.front());
            inbox_.pop_front();
            if (const auto* start = std::get_if<StartTrialMessage>(&msg)) {
                try {
                    session_.start_trial(start->trial_id);
                } catch (const ContractViolation& e) {
                    send(notice_message(e.what()).dump());
                }
            } else if (auto notice = session_.submit_input(std::get<InputMessage>(msg).input)) {
                send(notice_message(*notice).dump());
            }
        }
        if (!session_.active()) return;
        const TickResult r = session_.tick();
        if (r.state) send(to_json(*r.state).dump());
        if (r.trial_end) {
            send(trial_end_message(*r.trial_end).dump());
            write_log();
        }
    }

    void write_log() {
        if (options_.log_dir.empty()) return;
        namespace fs = std::filesystem;
        fs::create_directories(options_.log_dir);
        const auto& log = session_.log();
        const auto name = "session" + std::to_string(id_) + "_trial" + std::to_string(log.meta.trial_id) + "_" +
                          std::to_string(trials_logged_++) + ".jsonl";
        std::ofstream out(fs::path(options_.log_dir) / name, std::ios::binary);
        write_trial_log(out, log);
    }

    void send(std::string text) {
        outbox_.push_back(std::move(text));
        if (outbox_.size() == 1) do_write();
    }

    void do_write() {
        ws_.text(true);
        ws_.async_write(net::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->closed_ = true;
                self->timer_.cancel();
                return;
            }
            self->outbox_.pop_front();
            if (!self->outbox_.empty()) self->do_write();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    net::steady_timer timer_;
    beast::flat_buffer buffer_;
    const ServerOptions& options_;
    Session session_;
    int id_;
    int trials_logged_ = 0;
    bool closed_ = false;
    std::chrono::steady_clock::time_point next_tick_{};
    std::deque<ClientMessage> inbox_;
    std::deque<std::string> outbox_;
};

// Reads one HTTP request: upgrades to a WsSession or answers with a file.
class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket socket, const ServerOptions& options, int id)
        : stream_(std::move(socket)), options_(options), id_(id) {}

    void run() {
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return;
            if (websocket::is_upgrade(self->req_)) {
                stream_ready(self);
                return;
            }
            self->serve_file();
        });
    }

private:
    static void stream_ready(const std::shared_ptr<HttpConnection>& self) {
        self->stream_.expires_never();
        std::make_shared<WsSession>(self->stream_.release_socket(), self->options_, self->id_)
            ->run(std::move(self->req_));
    }

    void serve_file() {
        namespace fs = std::filesystem;
        auto res = std::make_shared<http::response<http::string_body>>();
        res->version(req_.version());
        res->keep_alive(false);
        std::string target(req_.target());
        if (auto q = target.find('?'); q != std::string::npos) target.resize(q);
        if (target.empty() || target.back() == '/') target += "index.html";
        const bool bad = target.find("..") != std::string::npos || options_.static_dir.empty();
        const fs::path path = fs::path(options_.static_dir) / target.substr(1);
        std::ifstream in(path, std::ios::binary);
        if (req_.method() != http::verb::get || bad || !in) {
            res->result(http::status::not_found);
            res->set(http::field::content_type, "text/plain");
            res->body() = "not found\n";
        } else {
            std::ostringstream body;
            body << in.rdbuf();
            res->result(http::status::ok);
            res->set(http::field::content_type, detail::mime_type(path.extension().string()));
            res->body() = body.str();
        }
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
            beast::error_code ignored;
            self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        });
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
    const ServerOptions& options_;
    int id_;
};

class LiveServer {
public:
    LiveServer(net::io_context& ioc, ServerOptions options, unsigned short port)
        : ioc_(ioc), acceptor_(ioc), options_(std::move(options)) {
        options_.session.validate();
        if (!(options_.speed > 0.0)) throw ConfigError("speed must be positive");
        const tcp::endpoint endpoint(net::ip::make_address("127.0.0.1"), port);
        acceptor_.open(endpoint.protocol());
        acceptor_.set_option(net::socket_base::reuse_address(true));
        acceptor_.bind(endpoint);
        acceptor_.listen(net::socket_base::max_listen_connections);
        do_accept();
    }

    unsigned short port() const { return acceptor_.local_endpoint().port(); }
    void stop() { net::post(ioc_, [this] { acceptor_.close(); }); }

private:
    void do_accept() {
        acceptor_.async_accept(net::make_strand(ioc_), [this](beast::error_code ec, tcp::socket socket) {
            if (ec == net::error::operation_aborted) return;
            if (!ec) std::make_shared<HttpConnection>(std::move(socket), options_, next_id_++)->run();
            do_accept();
        });
    }

    net::io_context& ioc_;
    tcp::acceptor acceptor_;
    ServerOptions options_;
    int next_id_ = 0;
};

// ---------------------------------------------------------------------------
// Blocking headless client: plays one trial with a TokenFollower and
// returns everything the server sent.

struct ClientTranscript {
    json plan;
    std::vector<StateBroadcast> states;
    std::vector<std::string> notices;
    std::optional<json> trial_end;
};

class HeadlessClient {
public:
    HeadlessClient(const std::string& host, unsigned short port) : resolver_(ioc_), ws_(ioc_) {
        const auto results = resolver_.resolve(host, std::to_string(port));
        net::connect(ws_.next_layer(), results.begin(), results.end());
        ws_.handshake(host, "/");
    }

    json read_json() {
        beast::flat_buffer buf;
        ws_.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    }

    void send(const json& j) { ws_.write(net::buffer(j.dump())); }

    void send_input(const PlayerInput& in) { send({{"type", "input"}, {"vx", in.vx}, {"bank", in.bank}}); }

    // Starts `trial_id` and steers with `player` until the trial ends.
    ClientTranscript play_trial(int trial_id, const TokenFollower& player, const ContinuousConfig& arena) {
        ClientTranscript t;
        t.plan = read_json();
        send({{"type", "start_trial"}, {"trial_id", trial_id}});
        PlayerInput last{};
        while (!t.trial_end) {
            const json msg = read_json();
            const auto type = msg.at("type").get<std::string>();
            if (type == "state") {
                StateBroadcast s{msg.at("t"), msg.at("pos"), msg.at("hazard"), msg.at("heat"),
                                 msg.at("token"), msg.at("score"), msg.at("remaining")};
                t.states.push_back(s);
                const PlayerInput in = player.act(s, arena);
                if (in.vx != last.vx || in.bank != last.bank) send_input(in);
                last = in;
            } else if (type == "trial_end") {
                t.trial_end = msg.at("summary");
            } else if (type == "notice") {
                t.notices.push_back(msg.value("message", ""));
            }
        }
        return t;
    }

    void close() {
        beast::error_code ec;
        ws_.close(websocket::close_code::normal, ec);
    }

private:
    net::io_context ioc_;
    tcp::resolver resolver_;
    websocket::stream<tcp::socket> ws_;
};

}  // namespace pavsig::live
