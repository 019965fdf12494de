#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "evalgame/expr.hpp"

namespace evalgame {

using BigInt = boost::multiprecision::cpp_int;

/// Hard ceiling on variables for anything that searches. T(11) is the
/// largest node count that fits the 64-bit search counters.
constexpr std::size_t kMaxVariables = 11;

/// Order in which a MAX node tries its ten digits.
using DigitSequence = std::array<int, 10>;
constexpr DigitSequence kAscendingDigits{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

/// Node count of the game tree for n variables: T(0) = 1, T(n) = 11 + 10 n T(n-1).
BigInt tree_size(unsigned n);

/// Same as tree_size, for n <= kMaxVariables.
std::uint64_t tree_size_u64(unsigned n);

/// Terminal positions: n! * 10^n.
BigInt leaf_count(unsigned n);

struct NodeCount {
    unsigned n = 0;
    BigInt total;
};

NodeCount node_count(unsigned n);

/// One completed MAX/MIN exchange: `digit` was assigned to `variable`.
struct Placement {
    int digit = 0;
    std::string variable;

    friend bool operator==(const Placement&, const Placement&) = default;
};

/// "5→X"
std::string to_string(const Placement& p);
/// "5→X, 9→Y"
std::string to_string(const std::vector<Placement>& line);

struct ProposeDigit {
    int digit = 0;
    friend bool operator==(const ProposeDigit&, const ProposeDigit&) = default;
};

struct AssignVariable {
    std::string variable;
    friend bool operator==(const AssignVariable&, const AssignVariable&) = default;
};

using Move = std::variant<ProposeDigit, AssignVariable>;

std::string to_string(const Move& m);

class IllegalMove : public std::runtime_error {
public:
    enum class Reason { wrong_turn, digit_out_of_range, unknown_variable, variable_bound, game_over };

    IllegalMove(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

class TerminalPosition : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A node of the game tree: the moves played so far on a fixed root
/// expression, plus the digit MAX has proposed if it is MIN's turn.
class Position {
public:
    explicit Position(std::shared_ptr<const Expression> expr);

    /// Replays `history` from the root.
    static Position from_history(std::shared_ptr<const Expression> expr, const std::vector<Move>& history);

    const Expression& expr() const { return *expr_; }
    const std::shared_ptr<const Expression>& expr_ptr() const { return expr_; }
    const std::vector<Placement>& bindings() const { return bindings_; }
    std::optional<int> pending() const { return pending_; }

    bool is_min_node() const { return pending_.has_value(); }
    bool is_max_node() const { return !pending_.has_value(); }
    bool is_terminal() const { return is_max_node() && unbound_count() == 0; }

    std::size_t unbound_count() const { return expr_->variable_count() - bindings_.size(); }
    /// 2k for MAX nodes, 2k - 1 for MIN nodes, where k = unbound_count().
    int height() const;

    bool is_bound(std::string_view variable) const;
    /// Unbound variables in first-occurrence order.
    std::vector<std::string> unbound_variables() const;

    Assignment assignment() const;
    /// Per-variable digits indexed like expr().variables(); -1 if unbound.
    std::vector<std::int8_t> digits() const;

    /// The moves that produced this position.
    std::vector<Move> history() const;

    friend bool operator==(const Position& a, const Position& b);

private:
    friend Position apply_move(const Position&, const Move&);

    std::shared_ptr<const Expression> expr_;
    std::vector<Placement> bindings_;
    std::optional<int> pending_;
};

/// MAX node: ten digit proposals in `order`. MIN node: one assignment per
/// unbound variable, first-occurrence order. Throws TerminalPosition.
std::vector<Move> legal_moves(const Position& pos, const DigitSequence& order = kAscendingDigits);

/// Throws IllegalMove with the reason if `m` is not legal at `pos`.
Position apply_move(const Position& pos, const Move& m);

}  // namespace evalgame
