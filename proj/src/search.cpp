#include "evalgame/search.hpp"

#include <algorithm>
#include <memory>
#include <optional>

namespace evalgame {

namespace {

void check_cap(std::size_t n, std::size_t cap) {
    std::size_t limit = std::min(cap, kMaxVariables);
    if (n > limit)
        throw VariableCapExceeded("expression has " + std::to_string(n) + " variables; limit is " +
                                  std::to_string(limit));
}

bool better_for_max(const Value& candidate, const Value& best) {
    return candidate.is_finite() && (best.is_invalid() || candidate.rational() > best.rational());
}

bool better_for_min(const Value& candidate, const Value& best) {
    return candidate.is_finite() && (best.is_invalid() || candidate.rational() < best.rational());
}

// Alpha-beta over one expression. Invalid doubles as the "no value yet"
// sentinel: -inf for a MAX node's running maximum, +inf for a MIN node's
// running minimum, and "no bound" for the parent value.
class AlphaBeta {
public:
    AlphaBeta(const Expression& expr, const SearchOptions& opts, TranspositionTable* tt)
        : expr_(expr),
          order_(opts.digit_order),
          tt_(tt),
          rank_(sorted_variable_rank(expr)),
          digits_(expr.variable_count(), -1) {}

    void bind(std::size_t variable, int digit) { digits_[variable] = static_cast<std::int8_t>(digit); }

    Value max_node(std::size_t unbound, const Value& parent, CompactLine& pv, bool is_root) {
        ++stats_.visited;
        if (unbound == 0) {
            pv.clear();
            return evaluate(expr_, digits_);
        }

        std::optional<PositionKey> key;
        if (tt_) {
            key = PositionKey::from_digits(rank_, digits_);
            if (!is_root) {
                if (const TTEntry* hit = tt_->lookup(*key)) {
                    ++stats_.tt_hits;
                    stats_.tt_prunes += tree_size_u64(static_cast<unsigned>(unbound)) - 1;
                    pv = hit->pv_suffix;
                    return hit->value;
                }
            }
        }

        Value best;
        CompactLine best_line;
        CompactLine child_line;
        bool cut = false;
        for (std::size_t idx = 0; idx < order_.size(); ++idx) {
            int digit = order_[idx];
            Value v = min_node(unbound, digit, best, child_line);
            if (better_for_max(v, best)) {
                best = v;
                best_line = child_line;
            }
            if (best.is_finite() && parent.is_finite() && best.rational() >= parent.rational()) {
                std::uint64_t remaining = order_.size() - 1 - idx;
                stats_.beta_prunes += remaining * ((tree_size_u64(static_cast<unsigned>(unbound)) - 1) / 10);
                if (remaining > 0)
                    ++stats_.beta_cutoffs;
                cut = true;
                break;
            }
        }
        // Only exact values go in the table: a beta cutoff leaves a lower bound.
        if (tt_ && !cut) {
            if (tt_->store(*key, TTEntry{best, best_line}))
                ++stats_.tt_stores;
        }
        pv = best_line;
        return best;
    }

    Value min_node(std::size_t unbound, int digit, const Value& parent, CompactLine& pv) {
        ++stats_.visited;
        Value best;
        CompactLine child_line;
        std::size_t remaining = unbound;
        pv.clear();
        for (std::size_t var = 0; var < digits_.size(); ++var) {
            if (digits_[var] >= 0)
                continue;
            --remaining;
            digits_[var] = static_cast<std::int8_t>(digit);
            Value v = max_node(unbound - 1, best, child_line, false);
            digits_[var] = -1;
            if (better_for_min(v, best)) {
                best = v;
                pv.assign({static_cast<std::int8_t>(digit), static_cast<std::int8_t>(var)}, child_line);
            }
            if (best.is_finite() && parent.is_finite() && best.rational() <= parent.rational()) {
                stats_.alpha_prunes += remaining * tree_size_u64(static_cast<unsigned>(unbound - 1));
                if (remaining > 0)
                    ++stats_.alpha_cutoffs;
                break;
            }
        }
        return best;
    }

    const SearchStats& stats() const { return stats_; }

private:
    const Expression& expr_;
    DigitSequence order_;
    TranspositionTable* tt_;
    std::vector<std::size_t> rank_;
    std::vector<std::int8_t> digits_;
    SearchStats stats_;
};

struct OracleNode {
    Value value;
    std::vector<Placement> line;
};

OracleNode oracle(const Position& pos) {
    if (pos.is_terminal())
        return {evaluate(pos.expr(), pos.assignment()), {}};
    OracleNode best;
    for (const Move& m : legal_moves(pos)) {
        Position child = apply_move(pos, m);
        OracleNode sub = oracle(child);
        bool improves = pos.is_max_node() ? better_for_max(sub.value, best.value)
                                          : better_for_min(sub.value, best.value);
        if (!improves)
            continue;
        best.value = sub.value;
        best.line = std::move(sub.line);
        if (pos.is_min_node())
            best.line.insert(best.line.begin(), Placement{*pos.pending(), std::get<AssignVariable>(m).variable});
    }
    return best;
}

}  // namespace

bool is_digit_permutation(const DigitSequence& order) {
    std::array<bool, 10> seen{};
    for (int d : order) {
        if (d < 0 || d > 9 || seen[static_cast<std::size_t>(d)])
            return false;
        seen[static_cast<std::size_t>(d)] = true;
    }
    return true;
}

SolveResult solve_oracle(const Expression& expr, std::size_t max_variables) {
    return solve_oracle(Position(std::make_shared<const Expression>(expr)), max_variables);
}

SolveResult solve_oracle(const Position& pos, std::size_t max_variables) {
    check_cap(pos.unbound_count(), max_variables);
    OracleNode root = oracle(pos);
    if (root.value.is_invalid())
        throw Unsolvable("no line of play from this position has a defined value");
    return {root.value, std::move(root.line)};
}

SearchOutcome solve_alphabeta(const Expression& expr, const SearchOptions& opts) {
    return solve_position(Position(std::make_shared<const Expression>(expr)), opts);
}

SearchOutcome solve_position(const Position& pos, const SearchOptions& opts) {
    const Expression& expr = pos.expr();
    check_cap(expr.variable_count(), opts.max_variables);
    if (!is_digit_permutation(opts.digit_order))
        throw std::invalid_argument("digit order must be a permutation of 0-9");

    std::unique_ptr<TranspositionTable> local_tt;
    TranspositionTable* tt = nullptr;
    if (opts.use_tt) {
        if (opts.tt) {
            tt = opts.tt;
        } else {
            local_tt = std::make_unique<TranspositionTable>();
            tt = local_tt.get();
        }
        tt->bind_expression(expr.source());
    }

    AlphaBeta search(expr, opts, tt);
    for (const Placement& p : pos.bindings())
        search.bind(*expr.variable_index(p.variable), p.digit);

    CompactLine line;
    Value root_no_bound;
    Value value = pos.is_min_node()
                      ? search.min_node(pos.unbound_count(), *pos.pending(), root_no_bound, line)
                      : search.max_node(pos.unbound_count(), root_no_bound, line, true);
    if (value.is_invalid())
        throw Unsolvable("no line of play from this position has a defined value");
    return {{value, line.to_placements(expr)}, search.stats()};
}

std::uint64_t subtree_size(const Position& pos) {
    std::uint64_t t = tree_size_u64(static_cast<unsigned>(pos.unbound_count()));
    return pos.is_min_node() ? (t - 1) / 10 : t;
}

SolveResult solve_min_first(const Expression& expr, const SearchOptions& opts) {
    SearchOptions negated_opts = opts;
    // A caller's table holds positions of `expr`, not of its negation.
    if (negated_opts.use_tt)
        negated_opts.tt = nullptr;
    SearchOutcome negated = solve_alphabeta(negate(expr), negated_opts);
    return {negated.result.value.negated(), std::move(negated.result.pv)};
}

Value replay(const Expression& expr, const std::vector<Placement>& pv) {
    Position pos(std::make_shared<const Expression>(expr));
    for (const Placement& p : pv) {
        pos = apply_move(pos, ProposeDigit{p.digit});
        pos = apply_move(pos, AssignVariable{p.variable});
    }
    if (!pos.is_terminal())
        throw IllegalMove(IllegalMove::Reason::wrong_turn,
                          "line leaves " + std::to_string(pos.unbound_count()) + " variables unbound");
    return evaluate(expr, pos.assignment());
}

}  // namespace evalgame
