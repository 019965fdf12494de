#include "evalgame/tree.hpp"

#include <algorithm>

namespace evalgame {

BigInt tree_size(unsigned n) {
    BigInt t = 1;
    for (unsigned k = 1; k <= n; ++k)
        t = 11 + 10 * BigInt(k) * t;
    return t;
}

std::uint64_t tree_size_u64(unsigned n) {
    if (n > kMaxVariables)
        throw std::out_of_range("tree_size_u64: n = " + std::to_string(n) + " exceeds " +
                                std::to_string(kMaxVariables));
    static const auto table = [] {
        std::array<std::uint64_t, kMaxVariables + 1> t{};
        for (unsigned k = 0; k <= kMaxVariables; ++k)
            t[k] = tree_size(k).convert_to<std::uint64_t>();
        return t;
    }();
    return table[n];
}

BigInt leaf_count(unsigned n) {
    BigInt out = 1;
    for (unsigned k = 1; k <= n; ++k)
        out *= 10 * k;
    return out;
}

NodeCount node_count(unsigned n) {
    return {n, tree_size(n)};
}

std::string to_string(const Placement& p) {
    return std::to_string(p.digit) + "→" + p.variable;
}

std::string to_string(const std::vector<Placement>& line) {
    std::string out;
    for (const Placement& p : line) {
        if (!out.empty())
            out += ", ";
        out += to_string(p);
    }
    return out;
}

std::string to_string(const Move& m) {
    if (const auto* d = std::get_if<ProposeDigit>(&m))
        return "digit " + std::to_string(d->digit);
    return "assign " + std::get<AssignVariable>(m).variable;
}

Position::Position(std::shared_ptr<const Expression> expr) : expr_(std::move(expr)) {
    if (!expr_)
        throw std::invalid_argument("Position requires an expression");
}

Position Position::from_history(std::shared_ptr<const Expression> expr, const std::vector<Move>& history) {
    Position pos(std::move(expr));
    for (const Move& m : history)
        pos = apply_move(pos, m);
    return pos;
}

int Position::height() const {
    int k = static_cast<int>(unbound_count());
    return is_min_node() ? 2 * k - 1 : 2 * k;
}

bool Position::is_bound(std::string_view variable) const {
    return std::any_of(bindings_.begin(), bindings_.end(),
                       [&](const Placement& p) { return p.variable == variable; });
}

std::vector<std::string> Position::unbound_variables() const {
    std::vector<std::string> out;
    for (const std::string& v : expr_->variables())
        if (!is_bound(v))
            out.push_back(v);
    return out;
}

Assignment Position::assignment() const {
    Assignment a;
    for (const Placement& p : bindings_)
        a.emplace(p.variable, p.digit);
    return a;
}

std::vector<std::int8_t> Position::digits() const {
    std::vector<std::int8_t> out(expr_->variable_count(), -1);
    for (const Placement& p : bindings_)
        out[*expr_->variable_index(p.variable)] = static_cast<std::int8_t>(p.digit);
    return out;
}

std::vector<Move> Position::history() const {
    std::vector<Move> out;
    for (const Placement& p : bindings_) {
        out.emplace_back(ProposeDigit{p.digit});
        out.emplace_back(AssignVariable{p.variable});
    }
    if (pending_)
        out.emplace_back(ProposeDigit{*pending_});
    return out;
}

bool operator==(const Position& a, const Position& b) {
    bool same_expr = a.expr_ == b.expr_ || a.expr_->postfix() == b.expr_->postfix();
    return same_expr && a.bindings_ == b.bindings_ && a.pending_ == b.pending_;
}

std::vector<Move> legal_moves(const Position& pos, const DigitSequence& order) {
    if (pos.is_terminal())
        throw TerminalPosition("no moves at a terminal position");
    std::vector<Move> out;
    if (pos.is_max_node()) {
        for (int d : order)
            out.emplace_back(ProposeDigit{d});
    } else {
        for (std::string& v : pos.unbound_variables())
            out.emplace_back(AssignVariable{std::move(v)});
    }
    return out;
}

Position apply_move(const Position& pos, const Move& m) {
    using Reason = IllegalMove::Reason;
    if (pos.is_terminal())
        throw IllegalMove(Reason::game_over, "the game is over");
    Position next = pos;
    if (const auto* d = std::get_if<ProposeDigit>(&m)) {
        if (pos.is_min_node())
            throw IllegalMove(Reason::wrong_turn, "MIN must assign the pending digit");
        if (d->digit < 0 || d->digit > 9)
            throw IllegalMove(Reason::digit_out_of_range,
                              "digit " + std::to_string(d->digit) + " is outside 0-9");
        next.pending_ = d->digit;
        return next;
    }
    const std::string& v = std::get<AssignVariable>(m).variable;
    if (pos.is_max_node())
        throw IllegalMove(Reason::wrong_turn, "MAX must propose a digit");
    if (!pos.expr().variable_index(v))
        throw IllegalMove(Reason::unknown_variable, "no variable named '" + v + "'");
    if (pos.is_bound(v))
        throw IllegalMove(Reason::variable_bound, "variable '" + v + "' is already bound");
    next.bindings_.push_back({*pos.pending_, v});
    next.pending_.reset();
    return next;
}

}  // namespace evalgame
