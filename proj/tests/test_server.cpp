#include "doctest.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <unistd.h>

#include "httplib.h"

#include "evalgame/ordering.hpp"
#include "evalgame/search.hpp"
#include "evalgame/server.hpp"

using namespace evalgame;
using namespace evalgame::server;

namespace {

ServerConfig test_config() {
    ServerConfig c;
    c.port = 0;
    return c;
}

json digit(int d) { return {{"type", "digit"}, {"digit", d}}; }
json assign(const std::string& v) { return {{"type", "assign"}, {"variable", v}}; }

std::string create(GameService& svc, const std::string& expr, const std::string& role) {
    ApiResponse r = svc.create_game({{"expression", expr}, {"human_role", role}});
    REQUIRE(r.status == 201);
    return r.body["id"].get<std::string>();
}

bool mentions_minimax(const json& body) { return body.dump().find("minimax") != std::string::npos; }

// Plays the human side from the hint endpoint until the game ends.
json play_hints(GameService& svc, const std::string& id) {
    for (;;) {
        json state = svc.get_state(id).body;
        if (state["status"] == "finished")
            return state;
        ApiResponse hint = svc.get_hint(id);
        REQUIRE(hint.status == 200);
        ApiResponse moved = svc.post_move(id, hint.body["move"]);
        REQUIRE(moved.status == 200);
    }
}

// Rebuilds the position from the reported history and checks it against
// the reported variables and pending digit.
void check_history_consistent(const json& state) {
    auto e = std::make_shared<const Expression>(parse(state["expression"].get<std::string>()));
    std::vector<Move> moves;
    for (const json& h : state["history"]) {
        if (h["type"] == "digit")
            moves.push_back(ProposeDigit{h["digit"].get<int>()});
        else
            moves.push_back(AssignVariable{h["variable"].get<std::string>()});
    }
    Position p = Position::from_history(e, moves);
    auto digits = p.digits();
    for (std::size_t i = 0; i < e->variable_count(); ++i) {
        const json& slot = state["variables"][i];
        REQUIRE(slot["name"] == e->variables()[i]);
        if (digits[i] < 0)
            REQUIRE(slot["digit"].is_null());
        else
            REQUIRE(slot["digit"] == digits[i]);
    }
    if (p.pending())
        REQUIRE(state["pending"] == *p.pending());
    else
        REQUIRE(state["pending"].is_null());
    REQUIRE((state["status"] == "finished") == p.is_terminal());
}

}  // namespace

TEST_CASE("engine as MAX opens (10-X)*Y with 5") {
    GameService svc(test_config());
    ApiResponse r = svc.create_game({{"expression", "(10-X)*Y"}, {"human_role", "MIN"}});
    REQUIRE(r.status == 201);
    const json& state = r.body["state"];
    CHECK(state["pending"] == 5);
    CHECK(state["turn"] == "MIN");
    CHECK(state["your_turn"] == true);
    REQUIRE(state["history"].size() == 1);
    CHECK(state["history"][0] == json{{"type", "digit"}, {"digit", 5}, {"player", "MAX"}});
    CHECK_FALSE(mentions_minimax(r.body));
}

TEST_CASE("a human MIN following the principal line draws (10-X)*Y") {
    GameService svc(test_config());
    std::string id = create(svc, "(10-X)*Y", "MIN");
    ApiResponse r = svc.post_move(id, assign("X"));
    REQUIRE(r.status == 200);
    CHECK(r.body["display"] == "(10-5)*Y");
    CHECK(r.body["pending"] == 9);
    CHECK_FALSE(mentions_minimax(r.body));
    r = svc.post_move(id, assign("Y"));
    REQUIRE(r.status == 200);
    CHECK(r.body["status"] == "finished");
    CHECK(r.body["final_value"]["num"] == 45);
    CHECK(r.body["final_value"]["den"] == 1);
    CHECK(r.body["minimax"]["display"] == "45");
    CHECK(r.body["outcome"] == "Draw");
}

TEST_CASE("a human MAX playing 5, 3, 9 on X*(Y-Z) loses to -12") {
    GameService svc(test_config());
    ApiResponse created = svc.create_game({{"expression", "X*(Y-Z)"}, {"human_role", "MAX"}});
    REQUIRE(created.status == 201);
    std::string id = created.body["id"];
    CHECK(created.body["state"]["history"].empty());
    CHECK(created.body["state"]["your_turn"] == true);
    json state;
    for (int d : {5, 3, 9}) {
        ApiResponse r = svc.post_move(id, digit(d));
        REQUIRE(r.status == 200);
        state = r.body;
    }
    CHECK(state["status"] == "finished");
    CHECK(state["final_value"]["display"] == "-12");
    CHECK(state["minimax"]["display"] == "18");
    CHECK(state["outcome"] == "MinWins");
    CHECK(state["history"].size() == 6);
    check_history_consistent(state);
}

TEST_CASE("create_game errors") {
    GameService svc(test_config());
    CHECK(svc.create_game({{"expression", "X*+Y"}, {"human_role", "MAX"}}).status == 400);
    CHECK(svc.create_game({{"expression", "a+b+c+d+e+f"}, {"human_role", "MAX"}}).status == 400);
    CHECK(svc.create_game({{"expression", "3+4"}, {"human_role", "MAX"}}).status == 400);
    CHECK(svc.create_game({{"expression", "X"}, {"human_role", "referee"}}).status == 400);
    CHECK(svc.create_game({{"human_role", "MAX"}}).status == 400);
    CHECK(svc.create_game(json::array()).status == 400);
    CHECK(svc.create_game({{"expression", "1/(X-X)"}, {"human_role", "MAX"}}).status == 422);
    CHECK(svc.session_count() == 0);
}

TEST_CASE("post_move errors") {
    GameService svc(test_config());
    std::string id = create(svc, "(10-X)*Y", "MAX");
    CHECK(svc.post_move("nope", digit(1)).status == 404);

    ApiResponse r = svc.post_move(id, digit(11));
    CHECK(r.status == 400);
    CHECK(r.body["reason"] == "digit_out_of_range");
    r = svc.post_move(id, assign("X"));
    CHECK(r.status == 400);
    CHECK(r.body["reason"] == "wrong_turn");
    CHECK(svc.post_move(id, json{{"type", "resign"}}).status == 400);
    CHECK(svc.post_move(id, json{{"type", "digit"}, {"digit", "5"}}).status == 400);

    // Illegal attempts leave the game untouched.
    CHECK(svc.get_state(id).body["history"].empty());

    REQUIRE(svc.post_move(id, digit(5)).status == 200);
    REQUIRE(svc.post_move(id, digit(9)).status == 200);
    r = svc.post_move(id, digit(1));
    CHECK(r.status == 409);
}

TEST_CASE("a human cannot move for the engine") {
    GameService svc(test_config());
    std::string id = create(svc, "X*(Y-Z)", "MIN");
    // Engine (MAX) has already proposed, so a digit now is the wrong kind of move.
    ApiResponse r = svc.post_move(id, digit(3));
    CHECK(r.status == 400);
    CHECK(r.body["reason"] == "wrong_turn");
    REQUIRE(svc.post_move(id, assign("X")).status == 200);
    r = svc.post_move(id, assign("X"));
    CHECK(r.status == 400);
    CHECK(r.body["reason"] == "variable_bound");
}

TEST_CASE("hints") {
    GameService svc(test_config());
    std::string max_id = create(svc, "(10-X)*Y", "MAX");
    ApiResponse h = svc.get_hint(max_id);
    REQUIRE(h.status == 200);
    CHECK(h.body["move"] == digit(5));
    CHECK(h.body["value"]["num"] == 45);
    CHECK(svc.get_state(max_id).body["hint_count"] == 1);

    std::string min_id = create(svc, "(10-X)*Y", "MIN");
    h = svc.get_hint(min_id);
    REQUIRE(h.status == 200);
    CHECK(h.body["move"] == assign("X"));
    CHECK(h.body["value"]["display"] == "45");

    play_hints(svc, min_id);
    CHECK(svc.get_hint(min_id).status == 409);
    CHECK(svc.get_hint("missing").status == 404);
}

TEST_CASE("state view") {
    GameService svc(test_config());
    std::string id = create(svc, "(10-X)*Y", "MAX");
    json fresh = svc.get_state(id).body;
    CHECK(fresh["history"].empty());
    CHECK(fresh["status"] == "in_progress");
    CHECK(fresh["display"] == "(10-X)*Y");
    CHECK_FALSE(fresh.contains("outcome"));
    REQUIRE(svc.post_move(id, digit(5)).status == 200);
    // The engine put 5 somewhere; the display shows it.
    json after = svc.get_state(id).body;
    CHECK(after["display"] != "(10-X)*Y");
    CHECK(svc.get_state("missing").status == 404);
    json finished = play_hints(svc, id);
    CHECK(finished.contains("outcome"));
    CHECK(finished.contains("minimax"));
}

TEST_CASE("delete, expiry and session count") {
    ServerConfig config = test_config();
    config.idle_timeout = std::chrono::hours(1);
    GameService svc(config);
    std::string a = create(svc, "X+Y", "MAX");
    std::string b = create(svc, "X-Y", "MIN");
    CHECK(svc.session_count() == 2);
    CHECK(svc.delete_game(a).status == 204);
    CHECK(svc.get_state(a).status == 404);
    CHECK(svc.delete_game(a).status == 404);
    CHECK(svc.expire_idle(std::chrono::steady_clock::now()) == 0);
    CHECK(svc.expire_idle(std::chrono::steady_clock::now() + std::chrono::hours(2)) == 1);
    CHECK(svc.get_state(b).status == 404);
}

TEST_CASE("snapshot round trip") {
    auto path = std::filesystem::temp_directory_path() / ("evalgame_snapshot_" + std::to_string(::getpid()) + ".json");
    std::filesystem::remove(path);
    ServerConfig config = test_config();
    config.snapshot_path = path.string();

    std::string live, done;
    json live_state, done_state;
    {
        GameService svc(config);
        live = create(svc, "X*(Y-Z)", "MIN");
        REQUIRE(svc.post_move(live, assign("Y")).status == 200);
        svc.get_hint(live);
        done = create(svc, "(10-X)*Y", "MIN");
        play_hints(svc, done);
        live_state = svc.get_state(live).body;
        done_state = svc.get_state(done).body;
    }
    GameService restored(config);
    CHECK(restored.load_snapshot() == 2);
    CHECK(restored.get_state(live).body == live_state);
    CHECK(restored.get_state(done).body == done_state);
    // The restored game keeps playing.
    CHECK(play_hints(restored, live)["outcome"] == "Draw");
    std::filesystem::remove(path);
}

TEST_CASE("property: hint-following humans always draw") {
    GameService svc(test_config());
    for (const char* text : {"(10-X)*Y", "X*(Y-Z)", "X+Y", "x/y + 2*y/z - z/x", "1/X", "X-Y-Z", "X/(Y-Z)"}) {
        for (const char* role : {"MAX", "MIN"}) {
            CAPTURE(text);
            CAPTURE(role);
            std::string id = create(svc, text, role);
            json state = play_hints(svc, id);
            CHECK(state["outcome"] == "Draw");
            check_history_consistent(state);
        }
    }
}

TEST_CASE("property: a human playing the solved principal line draws") {
    GameService svc(test_config());
    for (const char* text : {"(10-X)*Y", "X*(Y-Z)", "x/y + 2*y/z - z/x", "w - y*z/3 + 3*x"}) {
        for (const char* role : {"MAX", "MIN"}) {
            CAPTURE(text);
            CAPTURE(role);
            Expression e = parse(text);
            SearchOptions opts;
            opts.digit_order = estimate_digit_order(e, svc.config().ordering_samples, 0).sequence;
            opts.use_tt = true;
            SolveResult pv = solve_alphabeta(e, opts).result;

            std::string id = create(svc, text, role);
            for (const Placement& step : pv.pv) {
                json state = svc.get_state(id).body;
                if (state["status"] == "finished")
                    break;
                json move = state["turn"] == "MAX" ? digit(step.digit) : assign(step.variable);
                REQUIRE(svc.post_move(id, move).status == 200);
            }
            json state = svc.get_state(id).body;
            CHECK(state["status"] == "finished");
            CHECK(state["outcome"] == "Draw");
            CHECK(state["final_value"]["display"] == pv.value.to_string());
        }
    }
}

TEST_CASE("property: random API traffic never breaks the rules") {
    GameService svc(test_config());
    std::mt19937_64 rng(11);
    std::vector<std::string> ids;
    for (const char* text : {"X*(Y-Z)", "(10-X)*Y", "a/b - c"})
        for (const char* role : {"MAX", "MIN"})
            ids.push_back(create(svc, text, role));
    const std::vector<std::string> names{"X", "Y", "Z", "a", "b", "c", "Q"};
    std::uniform_int_distribution<int> kind(0, 3), d(-2, 12);
    std::uniform_int_distribution<std::size_t> pick_id(0, ids.size() - 1), pick_name(0, names.size() - 1);
    for (int step = 0; step < 3000; ++step) {
        const std::string& id = ids[pick_id(rng)];
        json before = svc.get_state(id).body;
        ApiResponse r;
        switch (kind(rng)) {
            case 0: r = svc.post_move(id, digit(d(rng))); break;
            case 1: r = svc.post_move(id, assign(names[pick_name(rng)])); break;
            case 2: r = svc.get_hint(id); break;
            default: r = svc.post_move(id, json{{"type", "digit"}}); break;
        }
        json after = svc.get_state(id).body;
        if (r.status >= 400)
            REQUIRE(after["history"] == before["history"]);
        if (after["status"] != "finished")
            REQUIRE_FALSE(mentions_minimax(after));
        bool leaked = mentions_minimax(r.body) && after["status"] != "finished";
        REQUIRE_FALSE(leaked);
        check_history_consistent(after);
        for (const json& h : after["history"])
            if (h["type"] == "digit")
            {
                int dg = h["digit"];
                REQUIRE(dg >= 0);
                REQUIRE(dg <= 9);
            }
    }
}

TEST_CASE("concurrent requests on shared and separate sessions") {
    GameService svc(test_config());
    std::string shared = create(svc, "X*(Y-Z)", "MAX");
    std::vector<std::thread> threads;
    std::atomic<int> created{0};
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            std::string own = svc.create_game({{"expression", "(10-X)*Y"}, {"human_role", t % 2 ? "MIN" : "MAX"}})
                                  .body["id"];
            ++created;
            for (int i = 0; i < 20; ++i) {
                svc.post_move(shared, digit((t + i) % 10));
                svc.get_hint(own);
                svc.get_state(shared);
            }
            while (svc.get_state(own).body["status"] != "finished") {
                ApiResponse h = svc.get_hint(own);
                svc.post_move(own, h.body["move"]);
            }
        });
    }
    for (auto& th : threads)
        th.join();
    CHECK(created == 8);
    CHECK(svc.session_count() == 9);
    check_history_consistent(svc.get_state(shared).body);
}

TEST_CASE("HTTP routes") {
    auto dir = std::filesystem::temp_directory_path() / ("evalgame_static_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "index.html") << "<html>board</html>";
    }
    ServerConfig config = test_config();
    config.static_dir = dir.string();
    GameService svc(config);
    httplib::Server http;
    register_routes(http, svc);
    int port = http.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread runner([&] { http.listen_after_bind(); });
    http.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/api/games", json{{"expression", "(10-X)*Y"}, {"human_role", "MIN"}}.dump(),
                           "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    json body = json::parse(res->body);
    std::string id = body["id"];
    CHECK(body["state"]["pending"] == 5);

    res = client.Get("/api/games/" + id + "/hint");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["move"] == assign("X"));

    res = client.Post("/api/games/" + id + "/moves", assign("X").dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    res = client.Post("/api/games/" + id + "/moves", assign("Y").dump(), "application/json");
    REQUIRE(res);
    body = json::parse(res->body);
    CHECK(body["outcome"] == "Draw");

    res = client.Get("/api/games/" + id);
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/json");

    res = client.Post("/api/games", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    res = client.Post("/api/games/" + id + "/moves", digit(3).dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 409);

    res = client.Delete("/api/games/" + id);
    REQUIRE(res);
    CHECK(res->status == 204);
    res = client.Get("/api/games/" + id);
    REQUIRE(res);
    CHECK(res->status == 404);

    res = client.Get("/index.html");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == "<html>board</html>");

    http.stop();
    runner.join();
    std::filesystem::remove_all(dir);
}
