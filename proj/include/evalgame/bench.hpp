#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evalgame/ordering.hpp"
#include "evalgame/search.hpp"

namespace evalgame {

/// The four benchmark expressions, in table order.
inline constexpr std::array<std::string_view, 4> kBenchExpressions{
    "x/y + 2*y/z - z/x",
    "w - y*z/3 + 3*x",
    "v + w + x - y - z",
    "(a+b)/c + (d+e)/f",
};

inline constexpr std::string_view kMethodPlain = "alphabeta";
inline constexpr std::string_view kMethodOrdered = "ordered+tt";

/// One solve of one expression under one configuration.
struct BenchRun {
    std::string expression;
    std::string method;
    Value minimax;
    std::vector<Placement> pv;
    SearchStats stats;
    DigitSequence digit_order = kAscendingDigits;
    /// Wall time, rounded to whole microseconds.
    double millis = 0;
};

/// Both configurations for one expression. A failed configuration leaves
/// its run empty and records the message.
struct BenchRow {
    std::string expression;
    std::optional<BenchRun> plain;
    std::optional<BenchRun> ordered;
    std::string error;
    std::uint64_t tree_size = 0;
};

struct BenchConfig {
    std::size_t samples = kDefaultOrderingSamples;
    std::uint64_t seed = 0;
    std::size_t max_variables = 6;
    bool run_plain = true;
    bool run_ordered = true;
};

/// Plain alpha-beta with ascending digits, no table.
BenchRun run_plain(const Expression& expr, const BenchConfig& config);
/// Heuristic digit order plus transposition table. Ordering time is included.
BenchRun run_ordered(const Expression& expr, const BenchConfig& config);

BenchRow run_bench_row(std::string_view expression, const BenchConfig& config);

std::string format_digit_order(const DigitSequence& order);
DigitSequence parse_digit_order(std::string_view text);

/// Aligned text table, one line per configuration.
std::string format_bench_table(const std::vector<BenchRow>& rows);

/// CSV with header: expression,minimax,pv,method,visited,alpha_prunes,
/// beta_prunes,tt_prunes,digit_order,millis
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Parses what write_bench_csv produced back into runs. Cutoff and TT event
/// counts are not part of the CSV and come back as zero.
std::vector<BenchRun> read_bench_csv(std::istream& in);

/// Inverse of to_string(std::vector<Placement>).
std::vector<Placement> parse_line(std::string_view text);

}  // namespace evalgame
