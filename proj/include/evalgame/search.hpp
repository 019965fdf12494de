#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evalgame/expr.hpp"
#include "evalgame/tree.hpp"
#include "evalgame/ttable.hpp"

namespace evalgame {

/// Root (or every line from it) evaluates to Invalid.
class Unsolvable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class VariableCapExceeded : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SolveResult {
    Value value;
    std::vector<Placement> pv;
};

/// Node accounting for one solve. Every node of the searched tree is
/// either visited or counted in exactly one of the prune counters.
struct SearchStats {
    std::uint64_t visited = 0;
    std::uint64_t alpha_prunes = 0;
    std::uint64_t beta_prunes = 0;
    std::uint64_t tt_prunes = 0;

    // Events, not nodes. Cutoffs that skip nothing (the last child) are not counted.
    std::uint64_t alpha_cutoffs = 0;
    std::uint64_t beta_cutoffs = 0;
    std::uint64_t tt_hits = 0;
    std::uint64_t tt_stores = 0;

    std::uint64_t pruned() const { return alpha_prunes + beta_prunes + tt_prunes; }
    std::uint64_t accounted() const { return visited + pruned(); }
};

struct SearchOptions {
    DigitSequence digit_order = kAscendingDigits;
    bool use_tt = false;
    /// Table to use when use_tt is set; a fresh one per solve if null.
    TranspositionTable* tt = nullptr;
    std::size_t max_variables = 6;
};

struct SearchOutcome {
    SolveResult result;
    SearchStats stats;
};

bool is_digit_permutation(const DigitSequence& order);

/// Plain backward induction over the whole tree. Exponential; meant as a
/// reference for small expressions (max_variables defaults to 4).
SolveResult solve_oracle(const Expression& expr, std::size_t max_variables = 4);
/// Backward induction from an arbitrary position (MAX or MIN node).
SolveResult solve_oracle(const Position& pos, std::size_t max_variables = 4);

/// Alpha-beta with a single parent-value window. MAX nodes try digits in
/// opts.digit_order, MIN nodes try variables in first-occurrence order.
/// Throws Unsolvable, VariableCapExceeded, OverflowError.
SearchOutcome solve_alphabeta(const Expression& expr, const SearchOptions& opts = {});

/// Same search rooted at `pos`. For a MIN node the PV starts with the
/// assignment of the pending digit.
SearchOutcome solve_position(const Position& pos, const SearchOptions& opts = {});

/// Node count of the subtree below `pos`: T(k) for MAX, (T(k) - 1) / 10 for MIN.
std::uint64_t subtree_size(const Position& pos);

/// Value when MIN moves first: -minimax(-E), with the PV of the negated solve.
SolveResult solve_min_first(const Expression& expr, const SearchOptions& opts = {});

/// Plays `pv` from the root and evaluates the terminal. Throws IllegalMove
/// if the line is not a complete, legal game.
Value replay(const Expression& expr, const std::vector<Placement>& pv);

}  // namespace evalgame
