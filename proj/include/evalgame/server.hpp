#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "evalgame/fairness.hpp"
#include "evalgame/ordering.hpp"
#include "evalgame/search.hpp"

namespace httplib {
class Server;
}

namespace evalgame::server {

using json = nlohmann::json;

enum class Role { max, min };

std::string to_string(Role r);
std::optional<Role> parse_role(std::string_view text);

struct ServerConfig {
    std::string host = "0.0.0.0";
    int port = 8080;
    /// Written after every change when nonempty; read once at startup.
    std::string snapshot_path;
    /// Directory served at "/" (the browser client), if nonempty.
    std::string static_dir;
    std::chrono::seconds idle_timeout = std::chrono::hours(24);
    std::size_t max_variables = 5;
    std::size_t ordering_samples = kDefaultOrderingSamples;
};

/// Status code plus JSON body, independent of the HTTP transport.
struct ApiResponse {
    int status = 200;
    json body;
};

struct HistoryEntry {
    Role player;
    Move move;
};

struct GameSession {
    std::string id;
    std::shared_ptr<const Expression> expr;
    Role human_role = Role::max;
    std::uint64_t seed = 0;
    DigitSequence digit_order = kAscendingDigits;
    Position position;
    std::vector<HistoryEntry> history;
    bool finished = false;
    Value minimax;
    Value final_value;
    std::optional<Outcome> outcome;
    int hint_count = 0;
    std::chrono::steady_clock::time_point last_access;
    std::mutex mutex;

    explicit GameSession(std::shared_ptr<const Expression> e) : expr(e), position(std::move(e)) {}
};

/// JSON encoding of a value: {valid, num, den, display}.
json value_json(const Value& v);
json move_json(const Move& m);

/// The game API. Every operation returns the HTTP status and body it
/// would send; the HTTP layer only translates. Distinct sessions can be
/// used concurrently; operations on one session are serialized.
class GameService {
public:
    explicit GameService(ServerConfig config);

    ApiResponse create_game(const json& request);
    ApiResponse get_state(const std::string& id);
    ApiResponse post_move(const std::string& id, const json& request);
    ApiResponse get_hint(const std::string& id);
    ApiResponse delete_game(const std::string& id);

    /// Drops sessions idle for longer than the configured timeout.
    std::size_t expire_idle(std::chrono::steady_clock::time_point now);
    std::size_t session_count() const;

    void save_snapshot() const;
    /// Restores sessions from the snapshot file; returns how many.
    std::size_t load_snapshot();

    const ServerConfig& config() const { return config_; }

private:
    std::shared_ptr<GameSession> find(const std::string& id);
    std::string new_id();
    void engine_play(GameSession& s);
    void finish_if_terminal(GameSession& s);
    json state_json(const GameSession& s) const;
    SearchOptions search_options(const GameSession& s) const;
    void persist() const;

    ServerConfig config_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<GameSession>> sessions_;
    std::mutex id_mutex_;
    std::uint64_t id_state_;
    mutable std::mutex snapshot_mutex_;
};

/// Wires the JSON API (and optional static files) onto `server`.
void register_routes(httplib::Server& server, GameService& service);

/// Blocks serving HTTP until the process is stopped.
int run_server(const ServerConfig& config);

}  // namespace evalgame::server
