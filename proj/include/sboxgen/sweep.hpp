#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sboxgen/evolution.hpp"
#include "sboxgen/properties.hpp"

namespace sboxgen {

inline std::vector<int> default_k_pop_grid() {
    std::vector<int> v;
    for (int k = 1; k <= 21; k += 2) v.push_back(k);
    return v;
}

inline std::vector<int> default_k_mut_grid() {
    std::vector<int> v;
    for (int k = 1; k <= 31; k += 3) v.push_back(k);
    return v;
}

struct SweepGrid {
    std::vector<int> k_pop_values = default_k_pop_grid();
    std::vector<int> k_mut_values = default_k_mut_grid();
    int runs_per_cell = 100;
    std::uint64_t base_seed = 0;
};

struct SweepCell {
    int k_pop = 0;
    int k_mut = 0;
    int runs = 0;
    int successes = 0;
    double mean_k_sbox = 0.0;
    double std_k_sbox = 0.0;
    double mean_duration_ms = 0.0;
};

struct SweepTable {
    std::vector<SweepCell> cells;  // ordered by (k_pop, k_mut)
};

// One line of the persisted run log; column order fixed.
struct RunLogEntry {
    std::uint64_t seed = 0;
    int n = 8;
    int k_pop = 0;
    int k_mut = 0;
    int k_iter = 0;
    int target_nl = 0;
    bool success = false;
    std::uint64_t k_sbox = 0;
    int iterations_used = 0;
    PropertyReport report;
    double duration_ms = 0.0;
};

inline std::uint64_t sweep_run_seed(std::uint64_t base_seed, int k_pop, int k_mut, int run) {
    return derive_stream(base_seed, static_cast<std::uint64_t>(k_pop),
                         static_cast<std::uint64_t>(k_mut), static_cast<std::uint64_t>(run));
}

// Executes runs_per_cell independent ga_modified runs per grid cell.
// Per-run seeds come from (base_seed, k_pop, k_mut, run index) only, so
// the table is reproducible regardless of thread count. A failed run
// contributes its capped k_sbox to the cell mean.
inline SweepTable run_sweep(const SweepGrid& grid, const SearchParams& defaults,
                            int threads = 8, std::vector<RunLogEntry>* log = nullptr) {
    if (grid.runs_per_cell < 1) throw std::invalid_argument("runs_per_cell must be >= 1");
    for (int v : grid.k_pop_values)
        if (v < 1) throw std::invalid_argument("grid k_pop values must be >= 1");
    for (int v : grid.k_mut_values)
        if (v < 1) throw std::invalid_argument("grid k_mut values must be >= 1");
    if (threads < 1) threads = 1;

    struct Task {
        int cell;
        int run;
        SearchParams params;
    };
    std::vector<Task> tasks;
    std::vector<SweepCell> cells;
    for (int kp : grid.k_pop_values) {
        for (int km : grid.k_mut_values) {
            SweepCell cell;
            cell.k_pop = kp;
            cell.k_mut = km;
            cell.runs = grid.runs_per_cell;
            const int cell_idx = static_cast<int>(cells.size());
            cells.push_back(cell);
            for (int r = 0; r < grid.runs_per_cell; ++r) {
                SearchParams p = defaults;
                p.k_pop = kp;
                p.k_mut = km;
                p.seed = sweep_run_seed(grid.base_seed, kp, km, r);
                p.lanes = 1;  // parallelism lives at the run level here
                tasks.push_back(Task{cell_idx, r, std::move(p)});
            }
        }
    }

    std::vector<RunRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            records[i] = run_single(tasks[i].params);
        }
    };
    if (threads == 1 || tasks.size() < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads - 1; ++i) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const RunRecord& rec = records[i];
        SweepCell& cell = cells[static_cast<std::size_t>(tasks[i].cell)];
        if (rec.outcome.success) ++cell.successes;
        cell.mean_k_sbox += static_cast<double>(rec.outcome.k_sbox);
        cell.mean_duration_ms += rec.duration_ms;
        if (log) {
            RunLogEntry e;
            e.seed = rec.params.seed;
            e.n = rec.params.n;
            e.k_pop = rec.params.k_pop;
            e.k_mut = rec.params.k_mut;
            e.k_iter = rec.params.k_iter;
            e.target_nl = rec.params.target_nl;
            e.success = rec.outcome.success;
            e.k_sbox = rec.outcome.k_sbox;
            e.iterations_used = rec.outcome.iterations_used;
            e.report = full_report(*rec.outcome.sbox);
            e.duration_ms = rec.duration_ms;
            log->push_back(e);
        }
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        SweepCell& cell = cells[c];
        cell.mean_k_sbox /= cell.runs;
        cell.mean_duration_ms /= cell.runs;
        double ss = 0.0;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].cell != static_cast<int>(c)) continue;
            const double d = static_cast<double>(records[i].outcome.k_sbox) - cell.mean_k_sbox;
            ss += d * d;
        }
        cell.std_k_sbox = cell.runs > 1 ? std::sqrt(ss / (cell.runs - 1)) : 0.0;
    }
    return SweepTable{std::move(cells)};
}

inline constexpr const char* kSweepCsvHeader =
    "k_pop,k_mut,runs,successes,success_rate,mean_k_sbox,std_k_sbox,mean_duration_ms";

namespace detail {

inline std::string fmt_double(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

}  // namespace detail

inline void write_sweep_csv(const SweepTable& table, std::ostream& out) {
    out << kSweepCsvHeader << '\n';
    for (const SweepCell& c : table.cells) {
        out << c.k_pop << ',' << c.k_mut << ',' << c.runs << ',' << c.successes << ','
            << detail::fmt_double(static_cast<double>(c.successes) / c.runs) << ','
            << detail::fmt_double(c.mean_k_sbox) << ','
            << detail::fmt_double(c.std_k_sbox) << ','
            << detail::fmt_double(c.mean_duration_ms) << '\n';
    }
}

inline SweepTable parse_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader)
        throw ParseError("bad sweep CSV header");
    SweepTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw ParseError("bad sweep CSV row: " + line);
        SweepCell c;
        c.k_pop = std::stoi(fields[0]);
        c.k_mut = std::stoi(fields[1]);
        c.runs = std::stoi(fields[2]);
        c.successes = std::stoi(fields[3]);
        c.mean_k_sbox = std::stod(fields[5]);
        c.std_k_sbox = std::stod(fields[6]);
        c.mean_duration_ms = std::stod(fields[7]);
        table.cells.push_back(c);
    }
    return table;
}

inline constexpr const char* kRunLogCsvHeader =
    "seed,n,k_pop,k_mut,k_iter,target_nl,success,k_sbox,iterations_used,"
    "nl,delta,degree,ai,duration_ms";

inline void write_run_log_csv(const std::vector<RunLogEntry>& log, std::ostream& out) {
    out << kRunLogCsvHeader << '\n';
    for (const RunLogEntry& e : log) {
        out << e.seed << ',' << e.n << ',' << e.k_pop << ',' << e.k_mut << ','
            << e.k_iter << ',' << e.target_nl << ',' << (e.success ? 1 : 0) << ','
            << e.k_sbox << ',' << e.iterations_used << ',' << e.report.nl << ','
            << e.report.delta << ',' << e.report.degree << ',' << e.report.ai << ','
            << detail::fmt_double(e.duration_ms) << '\n';
    }
}

// Flat key=value block for one run, mirroring the CSV columns.
inline std::string run_record_kv(const RunRecord& rec, const PropertyReport& report) {
    std::ostringstream out;
    out << "seed=" << rec.params.seed << '\n'
        << "n=" << rec.params.n << '\n'
        << "k_pop=" << rec.params.k_pop << '\n'
        << "k_mut=" << rec.params.k_mut << '\n'
        << "k_iter=" << rec.params.k_iter << '\n'
        << "target_nl=" << rec.params.target_nl << '\n'
        << "success=" << (rec.outcome.success ? "true" : "false") << '\n'
        << "k_sbox=" << rec.outcome.k_sbox << '\n'
        << "iterations_used=" << rec.outcome.iterations_used << '\n'
        << "nl=" << report.nl << '\n'
        << "delta=" << report.delta << '\n'
        << "degree=" << report.degree << '\n'
        << "ai=" << report.ai << '\n'
        << "duration_ms=" << detail::fmt_double(rec.duration_ms) << '\n';
    return out.str();
}

}  // namespace sboxgen
