#include "evalgame/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace evalgame {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_millis(Clock::time_point start) {
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
    return static_cast<double>(us) / 1000.0;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw std::invalid_argument("unterminated quote in CSV line");
    fields.push_back(std::move(cur));
    return fields;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size())
        throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

std::string pad(std::string s, std::size_t width) {
    // Column widths count code points; the PV arrow is three bytes.
    std::size_t cps = 0;
    for (unsigned char c : s)
        cps += (c & 0xC0) != 0x80;
    if (cps < width)
        s.append(width - cps, ' ');
    return s;
}

}  // namespace

BenchRun run_plain(const Expression& expr, const BenchConfig& config) {
    SearchOptions opts;
    opts.max_variables = config.max_variables;
    auto start = Clock::now();
    SearchOutcome out = solve_alphabeta(expr, opts);
    return {expr.source(), std::string(kMethodPlain), out.result.value, out.result.pv, out.stats,
            opts.digit_order, elapsed_millis(start)};
}

BenchRun run_ordered(const Expression& expr, const BenchConfig& config) {
    auto start = Clock::now();
    DigitOrder order = estimate_digit_order(expr, config.samples, config.seed);
    SearchOptions opts;
    opts.digit_order = order.sequence;
    opts.use_tt = true;
    opts.max_variables = config.max_variables;
    SearchOutcome out = solve_alphabeta(expr, opts);
    return {expr.source(), std::string(kMethodOrdered), out.result.value, out.result.pv, out.stats,
            order.sequence, elapsed_millis(start)};
}

BenchRow run_bench_row(std::string_view expression, const BenchConfig& config) {
    BenchRow row;
    row.expression = std::string(expression);
    try {
        Expression expr = parse(expression);
        row.tree_size = tree_size_u64(static_cast<unsigned>(std::min(expr.variable_count(), kMaxVariables)));
        if (config.run_plain)
            row.plain = run_plain(expr, config);
        if (config.run_ordered)
            row.ordered = run_ordered(expr, config);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

std::string format_digit_order(const DigitSequence& order) {
    std::string out;
    for (int d : order) {
        if (!out.empty())
            out += ' ';
        out += std::to_string(d);
    }
    return out;
}

DigitSequence parse_digit_order(std::string_view text) {
    DigitSequence out{};
    std::size_t count = 0;
    for (char c : text) {
        if (c == ' ' || c == ',')
            continue;
        if (c < '0' || c > '9' || count == out.size())
            throw std::invalid_argument("bad digit order '" + std::string(text) + "'");
        out[count++] = c - '0';
    }
    if (count != out.size() || !is_digit_permutation(out))
        throw std::invalid_argument("digit order must list each digit 0-9 once: '" + std::string(text) + "'");
    return out;
}

std::vector<Placement> parse_line(std::string_view text) {
    static constexpr std::string_view kArrow = "→";
    std::vector<Placement> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == ','))
            ++i;
        if (i == text.size())
            break;
        std::size_t arrow = text.find(kArrow, i);
        if (arrow == std::string_view::npos || arrow != i + 1 || text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("bad placement in '" + std::string(text) + "'");
        std::size_t name_start = arrow + kArrow.size();
        std::size_t name_end = text.find_first_of(", ", name_start);
        if (name_end == std::string_view::npos)
            name_end = text.size();
        if (name_end == name_start)
            throw std::invalid_argument("missing variable in '" + std::string(text) + "'");
        out.push_back({text[i] - '0', std::string(text.substr(name_start, name_end - name_start))});
        i = name_end;
    }
    return out;
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << pad("expression", 20) << pad("method", 12) << pad("minimax", 16) << pad("pruned", 14)
       << pad("visited", 12) << pad("digit order", 22) << pad("ms", 12) << "principal variation\n";
    for (const BenchRow& row : rows) {
        if (!row.error.empty()) {
            os << pad(row.expression, 20) << "error: " << row.error << '\n';
            continue;
        }
        for (const auto* run : {&row.plain, &row.ordered}) {
            if (!*run)
                continue;
            const BenchRun& r = **run;
            char ms[32];
            std::snprintf(ms, sizeof ms, "%.3f", r.millis);
            os << pad(r.expression, 20) << pad(r.method, 12) << pad(r.minimax.to_display(), 16)
               << pad(std::to_string(r.stats.pruned()), 14) << pad(std::to_string(r.stats.visited), 12)
               << pad(format_digit_order(r.digit_order), 22) << pad(ms, 12) << to_string(r.pv) << '\n';
        }
    }
    return os.str();
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "expression,minimax,pv,method,visited,alpha_prunes,beta_prunes,tt_prunes,digit_order,millis\n";
    for (const BenchRow& row : rows) {
        for (const auto* run : {&row.plain, &row.ordered}) {
            if (!*run)
                continue;
            const BenchRun& r = **run;
            char ms[32];
            std::snprintf(ms, sizeof ms, "%.3f", r.millis);
            out << csv_field(r.expression) << ',' << csv_field(r.minimax.to_string()) << ','
                << csv_field(to_string(r.pv)) << ',' << csv_field(r.method) << ',' << r.stats.visited << ','
                << r.stats.alpha_prunes << ',' << r.stats.beta_prunes << ',' << r.stats.tt_prunes << ','
                << csv_field(format_digit_order(r.digit_order)) << ',' << ms << '\n';
        }
    }
}

std::vector<BenchRun> read_bench_csv(std::istream& in) {
    std::vector<BenchRun> out;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty CSV");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto f = split_csv_line(line);
        if (f.size() != 10)
            throw std::invalid_argument("expected 10 CSV fields, got " + std::to_string(f.size()));
        BenchRun r;
        r.expression = f[0];
        r.minimax = parse_value(f[1]);
        r.pv = parse_line(f[2]);
        r.method = f[3];
        r.stats.visited = parse_u64(f[4]);
        r.stats.alpha_prunes = parse_u64(f[5]);
        r.stats.beta_prunes = parse_u64(f[6]);
        r.stats.tt_prunes = parse_u64(f[7]);
        r.digit_order = parse_digit_order(f[8]);
        r.millis = std::stod(f[9]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace evalgame
