#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "evalgame/expr.hpp"
#include "evalgame/tree.hpp"

namespace evalgame {

/// Static MAX-node digit order with the per-digit estimates it was sorted by.
struct DigitOrder {
    DigitSequence sequence = kAscendingDigits;
    /// estimates[d] is the backed-up estimate for proposing digit d.
    std::array<Value, 10> estimates{};
    bool exhaustive = false;
};

enum class EstimationMode {
    /// Enumerate completions when there are at most kExhaustiveCompletionLimit
    /// of them, sample otherwise.
    automatic,
    sampled,
    exhaustive,
};

constexpr std::uint64_t kExhaustiveCompletionLimit = 1000;
constexpr std::size_t kDefaultOrderingSamples = 100;

/// Estimates the value of every MAX node two plies below the root by the
/// best of `samples` random completions (or all completions), backs the
/// estimates up by taking the minimum over variables, and sorts digits by
/// estimate descending. Invalid estimates go last; ties by ascending digit.
/// Deterministic in (expr, samples, seed).
DigitOrder estimate_digit_order(const Expression& expr, std::size_t samples, std::uint64_t seed,
                                EstimationMode mode = EstimationMode::automatic);

/// Sort rule shared by every estimation mode.
DigitSequence order_by_estimates(const std::array<Value, 10>& estimates);

/// Uniform digit 0-9 from a 64-bit engine, by rejection so the result does
/// not depend on the standard library's distribution implementation.
int uniform_digit(std::mt19937_64& rng);
/// Uniform integer in [0, bound).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace evalgame
