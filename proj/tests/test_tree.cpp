#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "evalgame/tree.hpp"

using namespace evalgame;

namespace {

std::shared_ptr<const Expression> expr_ptr(std::string_view text) {
    return std::make_shared<const Expression>(parse(text));
}

BigInt factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i)
        f *= i;
    return f;
}

BigInt pow10(unsigned n) {
    BigInt p = 1;
    for (unsigned i = 0; i < n; ++i)
        p *= 10;
    return p;
}

struct Census {
    std::uint64_t nodes = 0;
    std::uint64_t terminals = 0;
    std::map<int, std::uint64_t> by_height;
};

void walk(const Position& pos, Census& c) {
    ++c.nodes;
    ++c.by_height[pos.height()];
    if (pos.is_terminal()) {
        ++c.terminals;
        return;
    }
    for (const Move& m : legal_moves(pos))
        walk(apply_move(pos, m), c);
}

}  // namespace

TEST_CASE("tree size values") {
    CHECK(tree_size(0) == 1);
    CHECK(tree_size(1) == 21);
    CHECK(tree_size(2) == 431);
    CHECK(tree_size(3) == 12941);
    CHECK(tree_size(5) == 25882561);
    CHECK(tree_size(6) == BigInt("1552953671"));
    CHECK(leaf_count(0) == 1);
    CHECK(leaf_count(2) == 200);
    CHECK(leaf_count(3) == 6000);
    for (unsigned n = 0; n <= 8; ++n)
        CHECK(tree_size_u64(n) == tree_size(n).convert_to<std::uint64_t>());
}

TEST_CASE("tree size bounds: 2 n! 10^n <= T(n) <= e^(1/10) 2 n! 10^n") {
    for (unsigned n = 1; n <= 7; ++n) {
        BigInt low = 2 * factorial(n) * pow10(n);
        CAPTURE(n);
        CHECK(low <= tree_size(n));
        long double ratio = tree_size(n).convert_to<long double>() / low.convert_to<long double>();
        CHECK(ratio <= std::exp(0.1L));
    }
}

TEST_CASE("property: T(n) ends in the digit 1") {
    for (unsigned n = 0; n <= 20; ++n) {
        CAPTURE(n);
        CHECK(tree_size(n) % 10 == 1);
    }
}

TEST_CASE("node_count pairs n with T(n)") {
    NodeCount c = node_count(4);
    CHECK(c.n == 4);
    CHECK(c.total == 517651);
}

TEST_CASE("exhaustive generation matches the closed form") {
    Census one;
    walk(Position(expr_ptr("X+1")), one);
    CHECK(one.nodes == 21);
    CHECK(one.terminals == 10);

    Census two;
    walk(Position(expr_ptr("(10-X)*Y")), two);
    CHECK(two.nodes == 431);
    CHECK(two.terminals == 200);
    CHECK(two.by_height == std::map<int, std::uint64_t>{{4, 1}, {3, 10}, {2, 20}, {1, 200}, {0, 200}});

    Census three;
    walk(Position(expr_ptr("X*(Y-Z)")), three);
    CHECK(three.nodes == 12941);
    CHECK(three.terminals == 6000);
}

TEST_CASE("legal moves") {
    Position root(expr_ptr("(10-X)*Y"));
    auto moves = legal_moves(root);
    REQUIRE(moves.size() == 10);
    CHECK(std::get<ProposeDigit>(moves[0]).digit == 0);
    CHECK(std::get<ProposeDigit>(moves[9]).digit == 9);

    DigitSequence rev{9, 8, 7, 6, 5, 4, 3, 2, 1, 0};
    CHECK(std::get<ProposeDigit>(legal_moves(root, rev)[0]).digit == 9);

    Position p = apply_move(root, ProposeDigit{5});
    auto assigns = legal_moves(p);
    REQUIRE(assigns.size() == 2);
    CHECK(std::get<AssignVariable>(assigns[0]).variable == "X");
    CHECK(std::get<AssignVariable>(assigns[1]).variable == "Y");

    p = apply_move(p, AssignVariable{"X"});
    p = apply_move(p, ProposeDigit{9});
    assigns = legal_moves(p);
    REQUIRE(assigns.size() == 1);
    CHECK(std::get<AssignVariable>(assigns[0]).variable == "Y");

    p = apply_move(p, AssignVariable{"Y"});
    CHECK(p.is_terminal());
    CHECK_THROWS_AS(legal_moves(p), TerminalPosition);
}

TEST_CASE("apply_move rejects illegal moves with a reason") {
    Position root(expr_ptr("(10-X)*Y"));
    auto reason_of = [](auto&& f) {
        try {
            f();
        } catch (const IllegalMove& e) {
            return e.reason();
        }
        FAIL("no IllegalMove");
        return IllegalMove::Reason::game_over;
    };
    CHECK(reason_of([&] { apply_move(root, AssignVariable{"X"}); }) == IllegalMove::Reason::wrong_turn);
    CHECK(reason_of([&] { apply_move(root, ProposeDigit{10}); }) == IllegalMove::Reason::digit_out_of_range);
    CHECK(reason_of([&] { apply_move(root, ProposeDigit{-1}); }) == IllegalMove::Reason::digit_out_of_range);
    Position p = apply_move(root, ProposeDigit{5});
    CHECK(reason_of([&] { apply_move(p, ProposeDigit{3}); }) == IllegalMove::Reason::wrong_turn);
    CHECK(reason_of([&] { apply_move(p, AssignVariable{"Q"}); }) == IllegalMove::Reason::unknown_variable);
    p = apply_move(apply_move(p, AssignVariable{"X"}), ProposeDigit{2});
    CHECK(reason_of([&] { apply_move(p, AssignVariable{"X"}); }) == IllegalMove::Reason::variable_bound);
    p = apply_move(p, AssignVariable{"Y"});
    CHECK(reason_of([&] { apply_move(p, ProposeDigit{1}); }) == IllegalMove::Reason::game_over);
}

TEST_CASE("positions expose bindings and assignment") {
    Position p(expr_ptr("X*(Y-Z)"));
    p = apply_move(p, ProposeDigit{2});
    p = apply_move(p, AssignVariable{"Y"});
    CHECK(p.is_max_node());
    CHECK(p.is_bound("Y"));
    CHECK_FALSE(p.is_bound("X"));
    CHECK(p.unbound_variables() == std::vector<std::string>{"X", "Z"});
    CHECK(p.assignment() == Assignment{{"Y", 2}});
    CHECK(p.digits() == std::vector<std::int8_t>{-1, 2, -1});
    CHECK(to_string(p.bindings()) == "2\xe2\x86\x92Y");
}

TEST_CASE("property: random playouts are consistent with their own history") {
    std::mt19937_64 rng(99);
    auto e = expr_ptr("a*b - c/d + e");
    for (int game = 0; game < 300; ++game) {
        Position p(e);
        int plies = 0;
        while (!p.is_terminal()) {
            auto moves = legal_moves(p);
            std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
            p = apply_move(p, moves[pick(rng)]);
            ++plies;
            REQUIRE(p.height() == 10 - plies);
            REQUIRE(Position::from_history(e, p.history()) == p);
            REQUIRE(p.bindings().size() + p.unbound_count() == e->variable_count());
        }
        REQUIRE(plies == 10);
    }
}
