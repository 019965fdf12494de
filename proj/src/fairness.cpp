#include "evalgame/fairness.hpp"

#include <random>
#include <stdexcept>
#include <vector>

#include "evalgame/ordering.hpp"

namespace evalgame {

namespace {

Value solved_minimax(const Expression& expr) {
    SearchOptions opts;
    opts.use_tt = true;
    return solve_alphabeta(expr, opts).result.value;
}

void tally(FairnessReport& report, Outcome o, std::uint64_t weight = 1) {
    switch (o) {
        case Outcome::max_wins: report.max_wins += weight; break;
        case Outcome::min_wins: report.min_wins += weight; break;
        case Outcome::draw: report.draws += weight; break;
        case Outcome::invalid_final: report.invalid += weight; break;
    }
}

void enumerate_lines(const Expression& expr, std::vector<std::int8_t>& digits, std::size_t unbound,
                     FairnessReport& report) {
    if (unbound == 0) {
        tally(report, judge(evaluate(expr, digits), report.minimax));
        ++report.trials;
        return;
    }
    for (int d = 0; d <= 9; ++d) {
        for (std::size_t v = 0; v < digits.size(); ++v) {
            if (digits[v] >= 0)
                continue;
            digits[v] = static_cast<std::int8_t>(d);
            enumerate_lines(expr, digits, unbound - 1, report);
            digits[v] = -1;
        }
    }
}

}  // namespace

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::max_wins: return "MaxWins";
        case Outcome::min_wins: return "MinWins";
        case Outcome::draw: return "Draw";
        case Outcome::invalid_final: return "InvalidFinal";
    }
    return {};
}

Outcome judge(const Value& final_value, const Value& minimax) {
    if (minimax.is_invalid())
        throw std::invalid_argument("cannot judge against an undefined minimax value");
    if (final_value.is_invalid())
        return Outcome::invalid_final;
    auto cmp = final_value.rational() <=> minimax.rational();
    if (cmp > 0)
        return Outcome::max_wins;
    if (cmp < 0)
        return Outcome::min_wins;
    return Outcome::draw;
}

FairnessReport estimate_fairness(const Expression& expr, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0)
        throw std::invalid_argument("fairness estimate needs at least one trial");
    FairnessReport report;
    report.minimax = solved_minimax(expr);
    report.trials = trials;

    const std::size_t n = expr.variable_count();
    std::mt19937_64 rng(seed);
    std::vector<std::int8_t> digits(n);
    std::vector<std::size_t> unbound(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::fill(digits.begin(), digits.end(), -1);
        for (std::size_t v = 0; v < n; ++v)
            unbound[v] = v;
        for (std::size_t left = n; left > 0; --left) {
            int digit = uniform_digit(rng);
            std::size_t pick = uniform_below(rng, left);
            digits[unbound[pick]] = static_cast<std::int8_t>(digit);
            unbound[pick] = unbound[left - 1];
        }
        tally(report, judge(evaluate(expr, digits), report.minimax));
    }
    return report;
}

FairnessReport exact_fairness(const Expression& expr, std::size_t max_variables) {
    const std::size_t n = expr.variable_count();
    if (n > max_variables)
        throw VariableCapExceeded("exact fairness enumerates n! * 10^n lines; " + std::to_string(n) +
                                  " variables exceeds the limit of " + std::to_string(max_variables));
    FairnessReport report;
    report.minimax = solved_minimax(expr);
    std::vector<std::int8_t> digits(n, -1);
    enumerate_lines(expr, digits, n, report);
    return report;
}

}  // namespace evalgame
