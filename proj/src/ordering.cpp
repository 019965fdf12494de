#include "evalgame/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace evalgame {

namespace {

std::uint64_t completion_count(std::size_t free_variables) {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < free_variables; ++i) {
        if (c > kExhaustiveCompletionLimit)
            return c;
        c *= 10;
    }
    return c;
}

void keep_max(Value& best, const Value& v) {
    if (v.is_finite() && (best.is_invalid() || v.rational() > best.rational()))
        best = v;
}

void keep_min(Value& best, const Value& v) {
    if (v.is_finite() && (best.is_invalid() || v.rational() < best.rational()))
        best = v;
}

// Max over every completion of the variables still at -1.
Value enumerate_max(const Expression& expr, std::vector<std::int8_t>& digits, std::size_t from) {
    while (from < digits.size() && digits[from] >= 0)
        ++from;
    if (from == digits.size())
        return evaluate(expr, digits);
    Value best;
    for (int d = 0; d <= 9; ++d) {
        digits[from] = static_cast<std::int8_t>(d);
        keep_max(best, enumerate_max(expr, digits, from + 1));
    }
    digits[from] = -1;
    return best;
}

}  // namespace

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("uniform_below: empty range");
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

int uniform_digit(std::mt19937_64& rng) {
    return static_cast<int>(uniform_below(rng, 10));
}

DigitSequence order_by_estimates(const std::array<Value, 10>& estimates) {
    DigitSequence seq;
    std::iota(seq.begin(), seq.end(), 0);
    std::stable_sort(seq.begin(), seq.end(), [&](int a, int b) {
        const Value& va = estimates[static_cast<std::size_t>(a)];
        const Value& vb = estimates[static_cast<std::size_t>(b)];
        if (va.is_invalid() || vb.is_invalid())
            return va.is_finite() && vb.is_invalid();
        return va.rational() > vb.rational();
    });
    return seq;
}

DigitOrder estimate_digit_order(const Expression& expr, std::size_t samples, std::uint64_t seed,
                                EstimationMode mode) {
    const std::size_t n = expr.variable_count();
    if (n == 0)
        throw std::invalid_argument("digit ordering needs at least one variable");
    if (samples == 0)
        throw std::invalid_argument("digit ordering needs at least one sample");

    DigitOrder out;
    out.exhaustive = mode == EstimationMode::exhaustive ||
                     (mode == EstimationMode::automatic && completion_count(n - 1) <= kExhaustiveCompletionLimit);

    std::mt19937_64 rng(seed);
    std::vector<std::int8_t> digits(n, -1);
    for (int i = 0; i <= 9; ++i) {
        Value backed_up;
        for (std::size_t x = 0; x < n; ++x) {
            Value estimate;
            if (out.exhaustive) {
                std::fill(digits.begin(), digits.end(), -1);
                digits[x] = static_cast<std::int8_t>(i);
                estimate = enumerate_max(expr, digits, 0);
            } else {
                for (std::size_t s = 0; s < samples; ++s) {
                    for (std::size_t v = 0; v < n; ++v)
                        digits[v] = static_cast<std::int8_t>(v == x ? i : uniform_digit(rng));
                    keep_max(estimate, evaluate(expr, digits));
                }
            }
            keep_min(backed_up, estimate);
        }
        // Same skip rule as MIN nodes in the search: an all-undefined
        // variable does not veto the finite estimates.
        out.estimates[static_cast<std::size_t>(i)] = backed_up;
    }
    out.sequence = order_by_estimates(out.estimates);
    return out;
}

}  // namespace evalgame
