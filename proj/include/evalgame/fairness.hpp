#pragma once

#include <cstdint>
#include <string>

#include "evalgame/expr.hpp"
#include "evalgame/search.hpp"

namespace evalgame {

enum class Outcome { max_wins, min_wins, draw, invalid_final };

std::string to_string(Outcome o);

/// Compares a finished game's value with the minimax value. Throws
/// std::invalid_argument if `minimax` is Invalid.
Outcome judge(const Value& final_value, const Value& minimax);

/// Outcome counts of uniformly random play: MAX proposes a uniform digit,
/// MIN assigns it to a uniformly chosen unbound variable.
struct FairnessReport {
    std::uint64_t trials = 0;
    std::uint64_t max_wins = 0;
    std::uint64_t min_wins = 0;
    std::uint64_t draws = 0;
    std::uint64_t invalid = 0;
    Value minimax;

    double p_max_win() const { return fraction(max_wins); }
    double p_min_win() const { return fraction(min_wins); }
    double p_draw() const { return fraction(draws); }
    double p_invalid() const { return fraction(invalid); }

private:
    double fraction(std::uint64_t count) const {
        return trials == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(trials);
    }
};

/// Monte Carlo over `trials` random games. Deterministic given `seed`.
FairnessReport estimate_fairness(const Expression& expr, std::uint64_t trials, std::uint64_t seed);

/// Every random-play line enumerated once. All n! * 10^n lines are equally
/// likely, so `trials` is the line count and the counts are exact weights.
FairnessReport exact_fairness(const Expression& expr, std::size_t max_variables = 4);

}  // namespace evalgame
