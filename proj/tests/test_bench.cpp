#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "bench.hpp"
#include "error.hpp"
#include "verify.hpp"

using namespace sscqp;

namespace {

BenchConfig small(Suite suite) {
    BenchConfig c;
    c.suite = suite;
    c.dims = {12};
    c.count = 6;
    c.repeats = 1;
    c.starts = 4;
    c.threads = 3;
    c.beta_ranges = {{0.5, 1e3}, {1e6, 1e7}};
    return c;
}

BenchRecord record(const std::string& group, int id, double tol, int iters, bool solved) {
    return {group, id, 0, 1, 10, 0.1, tol, iters, SolveStatus::ConvergedKnownSolution, solved,
            0.5, 0.0, 0.1, 0.05, {}};
}

}  // namespace

TEST(Summarize, TotalsAndMeansOverSolvedRuns) {
    const std::vector<BenchRecord> recs = {record("n=10", 0, 1e-6, 2, true), record("n=10", 1, 1e-6, 4, true),
                                           record("n=10", 2, 1e-6, 100, false), record("n=10", 0, 1e-8, 3, true)};
    const auto s = summarize(Suite::Table1, recs);
    ASSERT_EQ(s.size(), 2U);
    EXPECT_EQ(s[0].group_size, 3);
    EXPECT_EQ(s[0].solved_count, 2);
    EXPECT_EQ(s[0].total_iterations, 6);
    EXPECT_DOUBLE_EQ(s[0].total_time, 1.5);
    EXPECT_DOUBLE_EQ(s[0].mean_iterations, 3.0);
    EXPECT_DOUBLE_EQ(s[0].std_iterations, std::sqrt(2.0));
    EXPECT_EQ(s[1].total_iterations, 3);
}

TEST(Summarize, Table2PerProblemStatistics) {
    // Problem 0: iterations {2, 2, 2} (std 0); problem 1: {2, 3, 4} (std 1).
    std::vector<BenchRecord> recs;
    for (int it : {2, 2, 2}) recs.push_back(record("n=10", 0, 1e-6, it, true));
    for (int it : {2, 3, 4}) recs.push_back(record("n=10", 1, 1e-6, it, true));
    const auto s = summarize(Suite::Table2, recs);
    ASSERT_EQ(s.size(), 1U);
    EXPECT_DOUBLE_EQ(s[0].mean_of_problem_std, 0.5);
    EXPECT_DOUBLE_EQ(s[0].mean_of_problem_mean, 2.5);
}

TEST(Summarize, NoSolvedRunsGivesNaNMean) {
    const auto s = summarize(Suite::Table3, {record("g", 0, 1e-10, 100, false)});
    EXPECT_EQ(s[0].solved_count, 0);
    EXPECT_TRUE(std::isnan(s[0].mean_iterations));
}

TEST(RunBench, Table1ShapeAndAggregation) {
    const BenchResult r = run_bench(small(Suite::Table1));
    EXPECT_EQ(r.records.size(), 6U * 3U);
    ASSERT_EQ(r.summaries.size(), 3U);
    for (const auto& s : r.summaries) {
        EXPECT_EQ(s.group, "n=12");
        EXPECT_EQ(s.solved_count, 6);
        long sum = 0;
        for (const auto& rec : r.records)
            if (rec.tol_x == s.tol_x) sum += rec.iterations;
        EXPECT_EQ(s.total_iterations, sum);
    }
    EXPECT_NE(r.table().find("Total Iterations"), std::string::npos);
}

TEST(RunBench, Table2StartsPerProblem) {
    BenchConfig c = small(Suite::Table2);
    c.tols = {1e-6};
    const BenchResult r = run_bench(c);
    EXPECT_EQ(r.records.size(), 6U * 4U);
    std::set<int> starts;
    for (const auto& rec : r.records) starts.insert(rec.start_id);
    EXPECT_EQ(starts.size(), 4U);
    EXPECT_NE(r.table().find("MEAN(std)"), std::string::npos);
}

TEST(RunBench, Table3Groups) {
    const BenchResult r = run_bench(small(Suite::Table3));
    ASSERT_EQ(r.summaries.size(), 6U);
    EXPECT_EQ(r.summaries[0].group, "[0.5,1000)");
    EXPECT_EQ(r.summaries[3].group, "[1e+06,1e+07)");
}

TEST(RunBench, CsvRoundTripAndDeterminism) {
    const BenchConfig c = small(Suite::Table3);
    const BenchResult a = run_bench(c);
    const std::string csv = a.csv();
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(csv.substr(0, bench_csv_header().size()), bench_csv_header());
    const auto parsed = parse_bench_csv(csv);
    ASSERT_EQ(parsed.size(), a.records.size());
    const BenchResult b = run_bench(c);
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        EXPECT_EQ(parsed[i].group, a.records[i].group);
        EXPECT_EQ(parsed[i].iterations, a.records[i].iterations);
        EXPECT_EQ(parsed[i].beta, a.records[i].beta);
        EXPECT_EQ(parsed[i].final_residual, a.records[i].final_residual);
        EXPECT_EQ(b.records[i].iterations, a.records[i].iterations);
        EXPECT_EQ(b.records[i].final_residual, a.records[i].final_residual);
    }
}

TEST(RunBench, ThreadCountDoesNotChangeResults) {
    BenchConfig c = small(Suite::Table1);
    c.threads = 1;
    const BenchResult one = run_bench(c);
    c.threads = 4;
    const BenchResult four = run_bench(c);
    ASSERT_EQ(one.records.size(), four.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
        EXPECT_EQ(one.records[i].instance_id, four.records[i].instance_id);
        EXPECT_EQ(one.records[i].iterations, four.records[i].iterations);
    }
}

TEST(RunBench, ValidatesConfig) {
    BenchConfig c = small(Suite::Table1);
    c.repeats = 2;
    EXPECT_THROW(run_bench(c), Error);
    c = small(Suite::Table1);
    c.tols = {};
    EXPECT_THROW(run_bench(c), Error);
    c = small(Suite::Table3);
    c.beta_ranges = {{3, 2}};
    EXPECT_THROW(run_bench(c), Error);
    EXPECT_THROW(parse_suite("table4"), Error);
    EXPECT_EQ(parse_suite("table2"), Suite::Table2);
}

TEST(ParseBenchCsv, RejectsBadInput) {
    EXPECT_THROW(parse_bench_csv("nope\n"), Error);
    EXPECT_THROW(parse_bench_csv(bench_csv_header() + "\ntable1,a,b\n"), Error);
}

TEST(WorkerCount, EnvironmentCap) {
    ::setenv("SSCQP_THREADS", "2", 1);
    EXPECT_EQ(worker_count(8), 2U);
    EXPECT_EQ(worker_count(1), 1U);
    ::setenv("SSCQP_THREADS", "junk", 1);
    EXPECT_EQ(worker_count(8), 8U);
    ::unsetenv("SSCQP_THREADS");
    EXPECT_GE(worker_count(0), 1U);
}

TEST(Verify, DefaultSuitePasses) {
    const VerifyReport r = run_verify(VerifyConfig{});
    EXPECT_TRUE(r.passed()) << r.text();
    EXPECT_EQ(r.properties.size(), property_names().size());
}

TEST(Verify, OnlyFilterAndValidation) {
    VerifyConfig c;
    c.only = {"q_linear_rate"};
    const VerifyReport r = run_verify(c);
    ASSERT_EQ(r.properties.size(), 1U);
    EXPECT_EQ(r.properties[0].name, "q_linear_rate");
    c.only = {"no_such_property"};
    EXPECT_THROW(run_verify(c), Error);
    c.only = {};
    c.oracle_n = 21;
    EXPECT_THROW(run_verify(c), Error);
}
