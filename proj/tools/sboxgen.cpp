// Command-line front end: generate S-boxes with the modified GA, evaluate
// S-box files, and run parameter sweeps.
//
// Exit codes: 0 success, 1 search failure, 2 usage/parse error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sboxgen/evolution.hpp"
#include "sboxgen/properties.hpp"
#include "sboxgen/sbox.hpp"
#include "sboxgen/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSearchFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int cmd_generate(const sboxgen::SearchParams& params, const std::string& out_path) {
    sboxgen::RunRecord rec = sboxgen::run_single(params);
    const sboxgen::PropertyReport report = sboxgen::full_report(*rec.outcome.sbox);
    std::cout << sboxgen::run_record_kv(rec, report);
    if (!rec.outcome.success) {
        std::cerr << "search failed: no S-box with nl >= " << params.target_nl
                  << " within " << params.k_iter << " iterations\n";
        return kExitSearchFailed;
    }
    if (out_path.empty()) {
        std::cout << sboxgen::to_text(*rec.outcome.sbox);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot open " << out_path << " for writing\n";
            return kExitIo;
        }
        out << sboxgen::to_text(*rec.outcome.sbox);
        if (!out) {
            std::cerr << "write to " << out_path << " failed\n";
            return kExitIo;
        }
    }
    return kExitOk;
}

int cmd_evaluate(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "cannot open " << in_path << "\n";
        return kExitIo;
    }
    try {
        const sboxgen::SBox s = sboxgen::parse_text(in);
        std::cout << "n=" << s.n() << '\n' << sboxgen::report_kv(sboxgen::full_report(s));
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_sweep(const sboxgen::SweepGrid& grid, const sboxgen::SearchParams& defaults,
              int threads, const std::string& out_path, const std::string& runlog_path) {
    std::vector<sboxgen::RunLogEntry> log;
    const sboxgen::SweepTable table =
        sboxgen::run_sweep(grid, defaults, threads, runlog_path.empty() ? nullptr : &log);
    if (out_path.empty()) {
        sboxgen::write_sweep_csv(table, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot open " << out_path << " for writing\n";
            return kExitIo;
        }
        sboxgen::write_sweep_csv(table, out);
    }
    if (!runlog_path.empty()) {
        std::ofstream out(runlog_path);
        if (!out) {
            std::cerr << "cannot open " << runlog_path << " for writing\n";
            return kExitIo;
        }
        sboxgen::write_run_log_csv(log, out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"S-box generation and analysis via a genetic search driven by the "
                 "Walsh-Hadamard spectrum cost"};
    app.require_subcommand(1);

    sboxgen::SearchParams params;
    std::string out_path;
    std::string in_path;

    auto add_search_flags = [&](CLI::App* cmd) {
        cmd->add_option("--n", params.n, "S-box bit width (3..8)")->default_val(8);
        cmd->add_option("--kpop", params.k_pop, "elite population size")->default_val(1);
        cmd->add_option("--kmut", params.k_mut, "children per parent per iteration")
            ->default_val(7);
        cmd->add_option("--kiter", params.k_iter, "iteration cap")->default_val(150000);
        cmd->add_option("--target-nl", params.target_nl, "nonlinearity target")
            ->default_val(104);
        cmd->add_option("--seed", params.seed, "RNG seed")->default_val(0);
        cmd->add_option("--cost-x", params.cost.x, "WHS offset X")->default_val(0.0);
        cmd->add_option("--cost-r", params.cost.r, "WHS exponent R")->default_val(12);
    };

    CLI::App* generate = app.add_subcommand("generate", "search for an S-box");
    add_search_flags(generate);
    generate->add_option("--threads", params.lanes, "worker lanes")->default_val(8);
    generate->add_option("--out", out_path, "output S-box file (stdout if omitted)");

    CLI::App* evaluate = app.add_subcommand("evaluate", "report properties of an S-box file");
    evaluate->add_option("file", in_path, "S-box text file")->required();

    sboxgen::SweepGrid grid;
    int sweep_threads = 8;
    std::string runlog_path;
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over (k_pop, k_mut)");
    add_search_flags(sweep);
    sweep->add_option("--grid-kpop", grid.k_pop_values, "k_pop grid values");
    sweep->add_option("--grid-kmut", grid.k_mut_values, "k_mut grid values");
    sweep->add_option("--runs", grid.runs_per_cell, "runs per cell")->default_val(100);
    sweep->add_option("--threads", sweep_threads, "concurrent runs")->default_val(8);
    sweep->add_option("--out", out_path, "aggregate CSV path (stdout if omitted)");
    sweep->add_option("--runlog", runlog_path, "per-run CSV log path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(params, out_path);
        if (evaluate->parsed()) return cmd_evaluate(in_path);
        grid.base_seed = params.seed;
        return cmd_sweep(grid, params, sweep_threads, out_path, runlog_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
