// evalgame: solve, benchmark and serve e-Valuate games.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evalgame/bench.hpp"
#include "evalgame/fairness.hpp"
#include "evalgame/ordering.hpp"
#include "evalgame/search.hpp"
#include "evalgame/server.hpp"

using namespace evalgame;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitUnsolvable = 3;

struct SolveFlags {
    std::string expression;
    std::string order = "ascending";
    std::string tt = "off";
    std::size_t samples = kDefaultOrderingSamples;
    std::uint64_t seed = 0;
    std::size_t max_vars = 6;
    bool min_first = false;
};

int cmd_solve(const SolveFlags& f) {
    Expression expr;
    try {
        expr = parse(f.expression);
    } catch (const ExprError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    try {
        SearchOptions opts;
        opts.use_tt = f.tt == "on";
        opts.max_variables = f.max_vars;
        if (f.order == "heuristic" && expr.variable_count() > 0)
            opts.digit_order = estimate_digit_order(expr, f.samples, f.seed).sequence;

        std::cout << "expression:   " << expr.source() << '\n';
        std::cout << "postfix:      " << expr.postfix_string() << '\n';
        std::cout << "digit order:  " << format_digit_order(opts.digit_order) << '\n';
        if (f.min_first) {
            SolveResult r = solve_min_first(expr, opts);
            std::cout << "value:        " << r.value.to_display() << "  (MIN moves first)\n";
            std::cout << "pv (negated): " << to_string(r.pv) << '\n';
            return 0;
        }
        SearchOutcome out = solve_alphabeta(expr, opts);
        std::cout << "value:        " << out.result.value.to_display() << '\n';
        std::cout << "pv:           " << to_string(out.result.pv) << '\n';
        std::cout << "visited:      " << out.stats.visited << '\n';
        std::cout << "alpha_prunes: " << out.stats.alpha_prunes << " (" << out.stats.alpha_cutoffs << " cutoffs)\n";
        std::cout << "beta_prunes:  " << out.stats.beta_prunes << " (" << out.stats.beta_cutoffs << " cutoffs)\n";
        std::cout << "tt_prunes:    " << out.stats.tt_prunes << " (" << out.stats.tt_hits << " hits)\n";
        std::cout << "tree_size:    " << tree_size(static_cast<unsigned>(expr.variable_count())) << '\n';
        return 0;
    } catch (const VariableCapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const Unsolvable& e) {
        std::cerr << "unsolvable: " << e.what() << '\n';
        return kExitUnsolvable;
    } catch (const OverflowError& e) {
        std::cerr << "unsolvable: " << e.what() << '\n';
        return kExitUnsolvable;
    }
}

struct BenchFlags {
    std::vector<int> rows{1, 2, 3, 4};
    std::string csv;
    std::size_t samples = kDefaultOrderingSamples;
    std::uint64_t seed = 0;
    std::size_t max_vars = 6;
};

int cmd_bench(const BenchFlags& f) {
    BenchConfig config;
    config.samples = f.samples;
    config.seed = f.seed;
    config.max_variables = f.max_vars;
    std::vector<BenchRow> rows;
    bool failed = false;
    for (int r : f.rows) {
        if (r < 1 || r > static_cast<int>(kBenchExpressions.size())) {
            std::cerr << "error: no benchmark row " << r << '\n';
            failed = true;
            continue;
        }
        rows.push_back(run_bench_row(kBenchExpressions[static_cast<std::size_t>(r - 1)], config));
        failed |= !rows.back().error.empty();
        // Print as we go; the larger rows take a while.
        std::cout << format_bench_table({rows.back()}) << std::flush;
    }
    if (!f.csv.empty()) {
        std::ofstream out(f.csv);
        if (!out) {
            std::cerr << "error: cannot write " << f.csv << '\n';
            return 1;
        }
        write_bench_csv(out, rows);
    }
    return failed ? 1 : 0;
}

struct FairnessFlags {
    std::string expression;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    bool exact = false;
};

int cmd_fairness(const FairnessFlags& f) {
    Expression expr;
    try {
        expr = parse(f.expression);
    } catch (const ExprError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    try {
        FairnessReport r = f.exact ? exact_fairness(expr) : estimate_fairness(expr, f.trials, f.seed);
        char line[160];
        std::cout << "expression: " << expr.source() << '\n';
        std::cout << "minimax:    " << r.minimax.to_display() << '\n';
        std::cout << (f.exact ? "lines:      " : "trials:     ") << r.trials << '\n';
        std::snprintf(line, sizeof line, "p_max_win:  %.6f (%llu)\np_min_win:  %.6f (%llu)\n", r.p_max_win(),
                      static_cast<unsigned long long>(r.max_wins), r.p_min_win(),
                      static_cast<unsigned long long>(r.min_wins));
        std::cout << line;
        std::snprintf(line, sizeof line, "p_draw:     %.6f (%llu)\np_invalid:  %.6f (%llu)\n", r.p_draw(),
                      static_cast<unsigned long long>(r.draws), r.p_invalid(),
                      static_cast<unsigned long long>(r.invalid));
        std::cout << line;
        return 0;
    } catch (const VariableCapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const Unsolvable& e) {
        std::cerr << "unsolvable: " << e.what() << '\n';
        return kExitUnsolvable;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact minimax solver and play server for e-Valuate"};
    app.require_subcommand(1);

    SolveFlags solve;
    auto* solve_cmd = app.add_subcommand("solve", "Minimax value, principal variation and node counts");
    solve_cmd->add_option("expression", solve.expression, "Arithmetic expression, e.g. \"(10-X)*Y\"")->required();
    solve_cmd->add_option("--order", solve.order, "MAX digit order")
        ->check(CLI::IsMember({"ascending", "heuristic"}))
        ->capture_default_str();
    solve_cmd->add_option("--tt", solve.tt, "Transposition table")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    solve_cmd->add_option("--samples", solve.samples, "Samples per (digit, variable) for --order heuristic")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_option("--seed", solve.seed, "Sampling seed")->capture_default_str();
    solve_cmd->add_option("--max-vars", solve.max_vars, "Variable cap")->capture_default_str();
    solve_cmd->add_flag("--min-first", solve.min_first, "Solve the variant where MIN moves first");

    BenchFlags bench;
    auto* bench_cmd = app.add_subcommand("bench", "Plain vs ordered+TT alpha-beta on the benchmark expressions");
    bench_cmd->add_option("--rows", bench.rows, "Rows to run (1-4)")->delimiter(',');
    bench_cmd->add_option("--csv", bench.csv, "Also write CSV to this path");
    bench_cmd->add_option("--samples", bench.samples, "Ordering samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Ordering seed")->capture_default_str();
    bench_cmd->add_option("--max-vars", bench.max_vars, "Variable cap")->capture_default_str();

    FairnessFlags fair;
    auto* fair_cmd = app.add_subcommand("fairness", "Outcome frequencies under random play");
    fair_cmd->add_option("expression", fair.expression, "Arithmetic expression")->required();
    fair_cmd->add_option("--trials", fair.trials, "Random games")->check(CLI::PositiveNumber)->capture_default_str();
    fair_cmd->add_option("--seed", fair.seed, "Seed")->capture_default_str();
    fair_cmd->add_flag("--exact", fair.exact, "Enumerate every random-play line (n <= 4)");

    server::ServerConfig serve;
    std::int64_t idle_hours = 24;
    auto* serve_cmd = app.add_subcommand("serve", "HTTP game server");
    serve_cmd->add_option("--host", serve.host, "Bind address")->envname("EVALGAME_HOST")->capture_default_str();
    serve_cmd->add_option("--port", serve.port, "Port")->envname("EVALGAME_PORT")->capture_default_str();
    serve_cmd->add_option("--snapshot", serve.snapshot_path, "JSON snapshot file")->envname("EVALGAME_SNAPSHOT");
    serve_cmd->add_option("--static", serve.static_dir, "Directory served at /")->envname("EVALGAME_STATIC");
    serve_cmd->add_option("--max-vars", serve.max_variables, "Variable cap for new games")
        ->envname("EVALGAME_MAX_VARS")
        ->capture_default_str();
    serve_cmd->add_option("--idle-hours", idle_hours, "Drop games idle this long")
        ->envname("EVALGAME_IDLE_HOURS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (solve_cmd->parsed())
        return cmd_solve(solve);
    if (bench_cmd->parsed())
        return cmd_bench(bench);
    if (fair_cmd->parsed())
        return cmd_fairness(fair);
    serve.idle_timeout = std::chrono::hours(idle_hours);
    return server::run_server(serve);
}
