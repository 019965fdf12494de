#include "evalgame/server.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "httplib.h"

namespace evalgame::server {

namespace {

ApiResponse error(int status, const std::string& message) {
    return {status, json{{"error", message}}};
}

Role turn_of(const Position& pos) {
    return pos.is_max_node() ? Role::max : Role::min;
}

Move move_from_json(const json& request) {
    if (!request.is_object() || !request.contains("type") || !request["type"].is_string())
        throw std::invalid_argument("move needs a \"type\" of \"digit\" or \"assign\"");
    const std::string type = request["type"];
    if (type == "digit") {
        if (!request.contains("digit") || !request["digit"].is_number_integer())
            throw std::invalid_argument("digit move needs an integer \"digit\"");
        return ProposeDigit{request["digit"].get<int>()};
    }
    if (type == "assign") {
        if (!request.contains("variable") || !request["variable"].is_string())
            throw std::invalid_argument("assign move needs a string \"variable\"");
        return AssignVariable{request["variable"].get<std::string>()};
    }
    throw std::invalid_argument("unknown move type '" + type + "'");
}

std::string illegal_reason(IllegalMove::Reason r) {
    switch (r) {
        case IllegalMove::Reason::wrong_turn: return "wrong_turn";
        case IllegalMove::Reason::digit_out_of_range: return "digit_out_of_range";
        case IllegalMove::Reason::unknown_variable: return "unknown_variable";
        case IllegalMove::Reason::variable_bound: return "variable_bound";
        case IllegalMove::Reason::game_over: return "game_over";
    }
    return "illegal";
}

}  // namespace

std::string to_string(Role r) {
    return r == Role::max ? "MAX" : "MIN";
}

std::optional<Role> parse_role(std::string_view text) {
    std::string lower;
    for (char c : text)
        lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "max")
        return Role::max;
    if (lower == "min")
        return Role::min;
    return std::nullopt;
}

json value_json(const Value& v) {
    if (v.is_invalid())
        return {{"valid", false}, {"num", nullptr}, {"den", nullptr}, {"display", "undefined"}};
    return {{"valid", true},
            {"num", v.rational().numerator()},
            {"den", v.rational().denominator()},
            {"display", v.to_string()}};
}

json move_json(const Move& m) {
    if (const auto* d = std::get_if<ProposeDigit>(&m))
        return {{"type", "digit"}, {"digit", d->digit}};
    return {{"type", "assign"}, {"variable", std::get<AssignVariable>(m).variable}};
}

GameService::GameService(ServerConfig config)
    : config_(std::move(config)), id_state_(std::random_device{}() ^ (std::uint64_t{std::random_device{}()} << 32)) {}

std::string GameService::new_id() {
    std::lock_guard lock(id_mutex_);
    std::mt19937_64 rng(id_state_++);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

std::shared_ptr<GameSession> GameService::find(const std::string& id) {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::size_t GameService::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

std::size_t GameService::expire_idle(std::chrono::steady_clock::time_point now) {
    std::unique_lock lock(sessions_mutex_);
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        bool idle;
        {
            std::lock_guard session_lock(it->second->mutex);
            idle = now - it->second->last_access > config_.idle_timeout;
        }
        if (idle) {
            it = sessions_.erase(it);
            ++dropped;
        } else {
            ++it;
        }
    }
    return dropped;
}

SearchOptions GameService::search_options(const GameSession& s) const {
    SearchOptions opts;
    opts.digit_order = s.digit_order;
    opts.use_tt = true;
    opts.max_variables = config_.max_variables;
    return opts;
}

void GameService::finish_if_terminal(GameSession& s) {
    if (s.finished || !s.position.is_terminal())
        return;
    s.finished = true;
    s.final_value = evaluate(*s.expr, s.position.assignment());
    s.outcome = judge(s.final_value, s.minimax);
}

// Engine moves come from a fresh solve of the current position, so a
// human deviation from the principal line is punished optimally.
void GameService::engine_play(GameSession& s) {
    while (!s.position.is_terminal() && turn_of(s.position) != s.human_role) {
        Move m;
        try {
            SearchOutcome best = solve_position(s.position, search_options(s));
            const Placement& first = best.result.pv.front();
            m = s.position.is_max_node() ? Move{ProposeDigit{first.digit}} : Move{AssignVariable{first.variable}};
        } catch (const Unsolvable&) {
            // Every continuation is undefined; any legal move will do.
            m = legal_moves(s.position, s.digit_order).front();
        }
        Role player = turn_of(s.position);
        s.position = apply_move(s.position, m);
        s.history.push_back({player, m});
    }
    finish_if_terminal(s);
}

json GameService::state_json(const GameSession& s) const {
    json vars = json::array();
    auto digits = s.position.digits();
    for (std::size_t i = 0; i < s.expr->variable_count(); ++i) {
        json v = {{"name", s.expr->variables()[i]}, {"digit", nullptr}};
        if (digits[i] >= 0)
            v["digit"] = digits[i];
        vars.push_back(std::move(v));
    }
    json history = json::array();
    for (const HistoryEntry& h : s.history) {
        json e = move_json(h.move);
        e["player"] = to_string(h.player);
        history.push_back(std::move(e));
    }
    json state = {
        {"id", s.id},
        {"expression", s.expr->source()},
        {"display", render_with_bindings(s.expr->source(), s.position.assignment())},
        {"variables", std::move(vars)},
        {"pending", nullptr},
        {"human_role", to_string(s.human_role)},
        {"turn", nullptr},
        {"your_turn", false},
        {"history", std::move(history)},
        {"status", s.finished ? "finished" : "in_progress"},
        {"hint_count", s.hint_count},
    };
    if (s.position.pending())
        state["pending"] = *s.position.pending();
    if (!s.finished) {
        state["turn"] = to_string(turn_of(s.position));
        state["your_turn"] = turn_of(s.position) == s.human_role;
    } else {
        state["final_value"] = value_json(s.final_value);
        state["minimax"] = value_json(s.minimax);
        state["outcome"] = to_string(*s.outcome);
    }
    return state;
}

ApiResponse GameService::create_game(const json& request) {
    expire_idle(std::chrono::steady_clock::now());
    if (!request.is_object() || !request.contains("expression") || !request["expression"].is_string())
        return error(400, "request needs a string \"expression\"");
    std::optional<Role> role = Role::max;
    if (request.contains("human_role")) {
        role = request["human_role"].is_string() ? parse_role(request["human_role"].get<std::string>()) : std::nullopt;
        if (!role)
            return error(400, "human_role must be \"MAX\" or \"MIN\"");
    }
    std::uint64_t seed = 0;
    if (request.contains("seed")) {
        if (!request["seed"].is_number_unsigned())
            return error(400, "seed must be a non-negative integer");
        seed = request["seed"].get<std::uint64_t>();
    }

    std::shared_ptr<const Expression> expr;
    try {
        expr = std::make_shared<const Expression>(parse(request["expression"].get<std::string>()));
    } catch (const ExprError& e) {
        return error(400, e.what());
    }
    if (expr->variable_count() == 0)
        return error(400, "expression has no variables to play for");
    if (expr->variable_count() > config_.max_variables)
        return error(400, "expression has " + std::to_string(expr->variable_count()) +
                              " variables; interactive games allow at most " + std::to_string(config_.max_variables));

    auto session = std::make_shared<GameSession>(expr);
    session->human_role = *role;
    session->seed = seed;
    try {
        session->digit_order = estimate_digit_order(*expr, config_.ordering_samples, seed).sequence;
        session->minimax = solve_alphabeta(*expr, search_options(*session)).result.value;
        engine_play(*session);
    } catch (const Unsolvable& e) {
        return error(422, e.what());
    } catch (const OverflowError& e) {
        return error(422, e.what());
    }
    session->id = new_id();
    session->last_access = std::chrono::steady_clock::now();
    json state = state_json(*session);
    {
        std::unique_lock lock(sessions_mutex_);
        sessions_[session->id] = session;
    }
    persist();
    return {201, json{{"id", session->id}, {"state", std::move(state)}}};
}

ApiResponse GameService::get_state(const std::string& id) {
    auto s = find(id);
    if (!s)
        return error(404, "no game with id '" + id + "'");
    std::lock_guard lock(s->mutex);
    s->last_access = std::chrono::steady_clock::now();
    return {200, state_json(*s)};
}

ApiResponse GameService::post_move(const std::string& id, const json& request) {
    auto s = find(id);
    if (!s)
        return error(404, "no game with id '" + id + "'");
    Move m;
    try {
        m = move_from_json(request);
    } catch (const std::invalid_argument& e) {
        return error(400, e.what());
    }
    json state;
    {
        std::lock_guard lock(s->mutex);
        s->last_access = std::chrono::steady_clock::now();
        if (s->finished)
            return error(409, "the game is over");
        if (turn_of(s->position) != s->human_role)
            return error(409, "it is " + to_string(turn_of(s->position)) + "'s turn");
        try {
            Role player = turn_of(s->position);
            s->position = apply_move(s->position, m);
            s->history.push_back({player, m});
        } catch (const IllegalMove& e) {
            ApiResponse r = error(400, e.what());
            r.body["reason"] = illegal_reason(e.reason());
            return r;
        }
        try {
            engine_play(*s);
        } catch (const OverflowError& e) {
            return error(422, e.what());
        }
        state = state_json(*s);
    }
    persist();
    return {200, std::move(state)};
}

ApiResponse GameService::get_hint(const std::string& id) {
    auto s = find(id);
    if (!s)
        return error(404, "no game with id '" + id + "'");
    json body;
    {
        std::lock_guard lock(s->mutex);
        s->last_access = std::chrono::steady_clock::now();
        if (s->finished)
            return error(409, "the game is over");
        if (turn_of(s->position) != s->human_role)
            return error(409, "it is not your turn");
        try {
            SearchOutcome best = solve_position(s->position, search_options(*s));
            const Placement& first = best.result.pv.front();
            Move m = s->position.is_max_node() ? Move{ProposeDigit{first.digit}}
                                               : Move{AssignVariable{first.variable}};
            body = {{"move", move_json(m)}, {"value", value_json(best.result.value)}};
        } catch (const Unsolvable&) {
            body = {{"move", move_json(legal_moves(s->position, s->digit_order).front())},
                    {"value", value_json(Value::invalid())}};
        }
        ++s->hint_count;
    }
    persist();
    return {200, std::move(body)};
}

ApiResponse GameService::delete_game(const std::string& id) {
    {
        std::unique_lock lock(sessions_mutex_);
        if (sessions_.erase(id) == 0)
            return error(404, "no game with id '" + id + "'");
    }
    persist();
    return {204, nullptr};
}

void GameService::persist() const {
    if (!config_.snapshot_path.empty())
        save_snapshot();
}

void GameService::save_snapshot() const {
    json games = json::array();
    {
        std::shared_lock lock(sessions_mutex_);
        for (const auto& [id, s] : sessions_) {
            std::lock_guard session_lock(s->mutex);
            json moves = json::array();
            for (const HistoryEntry& h : s->history)
                moves.push_back(move_json(h.move));
            games.push_back({{"id", id},
                             {"expression", s->expr->source()},
                             {"human_role", to_string(s->human_role)},
                             {"seed", s->seed},
                             {"digit_order", s->digit_order},
                             {"minimax", s->minimax.to_string()},
                             {"hint_count", s->hint_count},
                             {"history", std::move(moves)}});
        }
    }
    std::lock_guard lock(snapshot_mutex_);
    const std::filesystem::path path(config_.snapshot_path);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw std::runtime_error("cannot write snapshot " + tmp.string());
        out << json{{"games", std::move(games)}}.dump(1) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::size_t GameService::load_snapshot() {
    if (config_.snapshot_path.empty() || !std::filesystem::exists(config_.snapshot_path))
        return 0;
    std::ifstream in(config_.snapshot_path);
    json doc = json::parse(in);
    std::size_t restored = 0;
    for (const json& g : doc.at("games")) {
        auto expr = std::make_shared<const Expression>(parse(g.at("expression").get<std::string>()));
        auto s = std::make_shared<GameSession>(expr);
        s->id = g.at("id").get<std::string>();
        s->human_role = parse_role(g.at("human_role").get<std::string>()).value_or(Role::max);
        s->seed = g.at("seed").get<std::uint64_t>();
        s->digit_order = g.at("digit_order").get<DigitSequence>();
        s->minimax = parse_value(g.at("minimax").get<std::string>());
        s->hint_count = g.at("hint_count").get<int>();
        for (const json& mj : g.at("history")) {
            Move m = move_from_json(mj);
            Role player = turn_of(s->position);
            s->position = apply_move(s->position, m);
            s->history.push_back({player, m});
        }
        finish_if_terminal(*s);
        s->last_access = std::chrono::steady_clock::now();
        std::unique_lock lock(sessions_mutex_);
        sessions_[s->id] = std::move(s);
        ++restored;
    }
    return restored;
}

void register_routes(httplib::Server& server, GameService& service) {
    auto reply = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        if (r.status != 204)
            res.set_content(r.body.dump(), "application/json");
    };
    auto parse_body = [](const httplib::Request& req, json& out) {
        out = json::parse(req.body, nullptr, false);
        return !out.is_discarded();
    };

    server.Post("/api/games", [&, reply, parse_body](const httplib::Request& req, httplib::Response& res) {
        json body;
        if (!parse_body(req, body))
            return reply(res, error(400, "request body is not valid JSON"));
        reply(res, service.create_game(body));
    });
    server.Get(R"(/api/games/([A-Za-z0-9]+))", [&, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.get_state(req.matches[1]));
    });
    server.Delete(R"(/api/games/([A-Za-z0-9]+))", [&, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.delete_game(req.matches[1]));
    });
    server.Post(R"(/api/games/([A-Za-z0-9]+)/moves)",
                [&, reply, parse_body](const httplib::Request& req, httplib::Response& res) {
                    json body;
                    if (!parse_body(req, body))
                        return reply(res, error(400, "request body is not valid JSON"));
                    reply(res, service.post_move(req.matches[1], body));
                });
    server.Get(R"(/api/games/([A-Za-z0-9]+)/hint)", [&, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.get_hint(req.matches[1]));
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(json{{"error", what}}.dump(), "application/json");
    });
    if (!service.config().static_dir.empty())
        server.set_mount_point("/", service.config().static_dir);
}

int run_server(const ServerConfig& config) {
    GameService service(config);
    std::size_t restored = service.load_snapshot();
    httplib::Server server;
    register_routes(server, service);
    std::cerr << "evalgame: restored " << restored << " games, listening on " << config.host << ':' << config.port
              << '\n';
    if (!server.listen(config.host, config.port)) {
        std::cerr << "evalgame: cannot listen on " << config.host << ':' << config.port << '\n';
        return 1;
    }
    return 0;
}

}  // namespace evalgame::server
