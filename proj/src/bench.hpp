#pragma once

// Random-instance experiments:
//   table1: per (n, tol): total iterations and total time over `count` instances;
//   table2: per (n, tol): MEAN over problems of the per-problem iteration
//            standard deviation and mean across `starts` starting points;
//   table3: per (β range, tol): solved count and mean iterations.
// Every solve knows the planted solution and stops on ‖u − x_k‖ < tol·(1 + ‖u‖).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "solver.hpp"

namespace sscqp {

enum class Suite { Table1, Table2, Table3 };

const char* to_string(Suite s) noexcept;
Suite parse_suite(const std::string& name);

struct BetaRange {
    double lb;
    double ub;
};

struct BenchConfig {
    Suite suite = Suite::Table1;
    std::vector<std::size_t> dims{100};
    int count = 100;
    std::vector<double> tols{1e-6, 1e-8, 1e-10};
    std::uint64_t seed = 1;
    int repeats = 5;  ///< timing repeats per solve; must be odd
    int starts = 50;  ///< table2 only
    std::vector<BetaRange> beta_ranges;  ///< table3; empty means the six default decades
    BetaRange regime1{0.0, 0.5};         ///< table1/table2
    int max_iter = 100;
    double value_scale = 1e6;
    unsigned threads = 0;  ///< 0: hardware concurrency capped by $SSCQP_THREADS

    void validate() const;
};

/// Table3 default ranges: [0.5,1e3), [1e3,1e4), ..., [1e7,1e8).
std::vector<BetaRange> default_beta_ranges();

struct BenchRecord {
    std::string group;
    int instance_id;
    int start_id;
    std::uint64_t seed;
    std::size_t n;
    double beta;
    double tol_x;
    int iterations;
    SolveStatus status;
    bool solved;
    double runtime_seconds;  ///< median over repeats
    double final_residual;
    double rate_bound;                ///< NaN when ‖M‖ ≥ 1
    double max_observed_contraction;  ///< NaN with fewer than two iterates
    std::string error;                ///< non-empty when generation or a solve threw
};

struct BenchSummary {
    std::string group;
    double tol_x;
    int group_size;
    int solved_count;
    long total_iterations;  ///< over solved runs
    double total_time;      ///< over all runs
    double mean_iterations;  ///< over solved runs; NaN if none
    double std_iterations;   ///< sample standard deviation over solved runs
    double mean_of_problem_std;   ///< table2
    double mean_of_problem_mean;  ///< table2
};

struct BenchResult {
    BenchConfig config;
    std::vector<BenchRecord> records;
    std::vector<BenchSummary> summaries;

    [[nodiscard]] std::string csv() const;
    [[nodiscard]] std::string table() const;
};

BenchResult run_bench(const BenchConfig& cfg);

/// Aggregates in first-appearance order of (group, tol).
std::vector<BenchSummary> summarize(Suite suite, const std::vector<BenchRecord>& records);

std::string bench_csv_header();
std::vector<BenchRecord> parse_bench_csv(const std::string& text);

/// Worker count: `requested` if nonzero, else hardware concurrency; capped by $SSCQP_THREADS.
unsigned worker_count(unsigned requested);

}  // namespace sscqp
