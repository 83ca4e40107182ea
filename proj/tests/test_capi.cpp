// Links only the shared library; everything goes through sscqp.h.
#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sscqp/sscqp.h"

namespace {

const char* kTrivial =
    "sscqp 1\n"
    "n 2\n"
    "Q\n1 0\n0 1\n"
    "A\n1 0\n0 1\n"
    "b\n1 -2\n"
    "c\n0\n";

}  // namespace

TEST(CApi, VersionAndStatusStrings) {
    EXPECT_STRNE(sscqp_version(), "");
    EXPECT_STRNE(sscqp_status_string(SSCQP_ERR_PARSE), sscqp_status_string(SSCQP_OK));
    EXPECT_NE(sscqp_mix_seed(1, 0), sscqp_mix_seed(1, 1));
}

TEST(CApi, SolveTrivialProblem) {
    sscqp_problem* p = nullptr;
    ASSERT_EQ(sscqp_problem_parse(kTrivial, &p), SSCQP_OK);
    EXPECT_EQ(sscqp_problem_dim(p), 2U);
    double norm = -1;
    ASSERT_EQ(sscqp_problem_norm_m(p, &norm), SSCQP_OK);
    EXPECT_EQ(norm, 0.0);

    sscqp_solver_config cfg;
    sscqp_solver_config_default(&cfg);
    sscqp_report* r = nullptr;
    ASSERT_EQ(sscqp_solve(p, &cfg, nullptr, nullptr, &r), SSCQP_OK);
    EXPECT_NE(sscqp_report_status(r), SSCQP_SOLVE_MAX_ITERATIONS);
    EXPECT_EQ(sscqp_report_iterations(r), 1);
    double x[2], y[2];
    sscqp_report_solution(r, x);
    sscqp_report_qp_solution(r, y);
    EXPECT_EQ(x[0], -1.0);
    EXPECT_EQ(x[1], 2.0);
    EXPECT_EQ(y[0], 0.0);
    EXPECT_EQ(y[1], 2.0);
    sscqp_kkt kkt;
    ASSERT_EQ(sscqp_report_kkt(r, 1e-10, &kkt), SSCQP_OK);
    EXPECT_TRUE(kkt.passed);
    double rate = -1;
    EXPECT_EQ(sscqp_report_rate_bound(r, &rate), 1);
    EXPECT_EQ(rate, 0.0);
    ASSERT_EQ(sscqp_report_trace_length(r), 2U);
    double pivot = 0;
    unsigned char pattern[2];
    ASSERT_EQ(sscqp_report_trace_entry(r, 0, nullptr, nullptr, &pivot, pattern), SSCQP_OK);
    EXPECT_TRUE(std::isnan(pivot));
    EXPECT_EQ(sscqp_report_trace_entry(r, 5, nullptr, nullptr, nullptr, nullptr), SSCQP_ERR_INVALID_ARGUMENT);
    double obj = 0;
    ASSERT_EQ(sscqp_problem_objective(p, y, &obj), SSCQP_OK);
    EXPECT_DOUBLE_EQ(obj, -2.0);
    sscqp_report_destroy(r);
    sscqp_problem_destroy(p);
}

TEST(CApi, CreateRejectsIndefiniteQ) {
    const double q[] = {1, 0, 0, -1};
    const double a[] = {1, 0, 0, 1};
    const double b[] = {0, 0};
    sscqp_problem* p = nullptr;
    EXPECT_EQ(sscqp_problem_create(2, q, b, 0.0, a, &p), SSCQP_ERR_INVALID_PROBLEM);
    EXPECT_EQ(p, nullptr);
    EXPECT_STRNE(sscqp_last_error(), "");
    EXPECT_EQ(sscqp_problem_create(2, nullptr, b, 0.0, a, &p), SSCQP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, CreateRowMajor) {
    // Q = [[2, 1], [1, 2]], A = [[1, 1], [0, 1]]: A is not symmetric, so row order matters.
    const double q[] = {2, 1, 1, 2};
    const double a[] = {1, 1, 0, 1};
    const double b[] = {-1, -1};
    sscqp_problem* p = nullptr;
    ASSERT_EQ(sscqp_problem_create(2, q, b, 0.0, a, &p), SSCQP_OK);
    const char* text = nullptr;
    ASSERT_EQ(sscqp_problem_format(p, &text), SSCQP_OK);
    EXPECT_NE(std::string(text).find("A\n1 1\n0 1\n"), std::string::npos) << text;
    sscqp_problem_destroy(p);
}

TEST(CApi, ParseErrorCarriesLine) {
    sscqp_problem* p = nullptr;
    EXPECT_EQ(sscqp_problem_parse("sscqp 1\nn 2\nQ\n1 0\n0 x\n", &p), SSCQP_ERR_PARSE);
    EXPECT_NE(std::string(sscqp_last_error()).find("line 5"), std::string::npos) << sscqp_last_error();
    EXPECT_EQ(sscqp_problem_read("/nonexistent/file.sscqp", &p), SSCQP_ERR_IO);
}

TEST(CApi, GenerateAndSolve) {
    sscqp_instance_spec spec;
    sscqp_instance_spec_default(&spec);
    spec.n = 20;
    spec.seed = 11;
    sscqp_instance* inst = nullptr;
    ASSERT_EQ(sscqp_generate(&spec, &inst), SSCQP_OK);
    EXPECT_LT(sscqp_instance_norm_m(inst), 0.5);
    EXPECT_EQ(sscqp_instance_seed(inst), 11U);
    sscqp_problem* p = nullptr;
    ASSERT_EQ(sscqp_instance_problem(inst, &p), SSCQP_OK);
    int present = 0;
    std::vector<double> u(20);
    ASSERT_EQ(sscqp_problem_known_solution(p, &present, u.data()), SSCQP_OK);
    ASSERT_TRUE(present);
    sscqp_solver_config cfg;
    sscqp_solver_config_default(&cfg);
    cfg.tol_x = 1e-10;
    sscqp_report* r = nullptr;
    ASSERT_EQ(sscqp_solve(p, &cfg, nullptr, u.data(), &r), SSCQP_OK);
    EXPECT_EQ(sscqp_report_status(r), SSCQP_SOLVE_CONVERGED_KNOWN_SOLUTION);
    EXPECT_LE(sscqp_report_iterations(r), 6);
    sscqp_report_destroy(r);
    sscqp_problem_destroy(p);
    sscqp_instance_destroy(inst);

    spec.beta_ub = spec.beta_lb;
    EXPECT_EQ(sscqp_generate(&spec, &inst), SSCQP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, WriteAndReadBack) {
    sscqp_instance_spec spec;
    sscqp_instance_spec_default(&spec);
    spec.n = 4;
    sscqp_instance* inst = nullptr;
    ASSERT_EQ(sscqp_generate(&spec, &inst), SSCQP_OK);
    const std::string path = ::testing::TempDir() + "capi_roundtrip.sscqp";
    ASSERT_EQ(sscqp_instance_write(inst, path.c_str()), SSCQP_OK);
    sscqp_problem* p = nullptr;
    ASSERT_EQ(sscqp_problem_read(path.c_str(), &p), SSCQP_OK);
    EXPECT_EQ(sscqp_problem_dim(p), 4U);
    sscqp_problem_destroy(p);
    sscqp_instance_destroy(inst);
    std::remove(path.c_str());
}

TEST(CApi, BenchSmallRun) {
    sscqp_bench_config cfg;
    sscqp_bench_config_default(&cfg);
    const size_t dims[] = {10};
    const double tols[] = {1e-8};
    cfg.dims = dims;
    cfg.n_dims = 1;
    cfg.tols = tols;
    cfg.n_tols = 1;
    cfg.count = 5;
    cfg.repeats = 1;
    sscqp_bench* b = nullptr;
    ASSERT_EQ(sscqp_bench_run(&cfg, &b), SSCQP_OK);
    EXPECT_EQ(sscqp_bench_record_count(b), 5U);
    ASSERT_EQ(sscqp_bench_summary_count(b), 1U);
    sscqp_bench_summary s;
    ASSERT_EQ(sscqp_bench_summary_at(b, 0, &s), SSCQP_OK);
    EXPECT_EQ(s.solved_count, 5);
    EXPECT_STREQ(s.group, "n=10");
    sscqp_bench_record rec;
    ASSERT_EQ(sscqp_bench_record_at(b, 4, &rec), SSCQP_OK);
    EXPECT_EQ(rec.instance_id, 4);
    EXPECT_STREQ(rec.error, "");
    EXPECT_EQ(sscqp_bench_record_at(b, 5, &rec), SSCQP_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(std::string(sscqp_bench_csv(b)).rfind("suite,group,", 0), 0U);
    sscqp_bench_destroy(b);

    cfg.repeats = 2;
    EXPECT_EQ(sscqp_bench_run(&cfg, &b), SSCQP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, VerifySubset) {
    sscqp_verify_config cfg;
    sscqp_verify_config_default(&cfg);
    const char* only[] = {"pattern_identity", "planted_solution"};
    cfg.only = only;
    cfg.n_only = 2;
    sscqp_verify* v = nullptr;
    ASSERT_EQ(sscqp_verify_run(&cfg, &v), SSCQP_OK);
    EXPECT_TRUE(sscqp_verify_passed(v)) << sscqp_verify_text(v);
    ASSERT_EQ(sscqp_verify_property_count(v), 2U);
    const char* name = nullptr;
    int checks = 0, passed = 0;
    ASSERT_EQ(sscqp_verify_property_at(v, 1, &name, &checks, &passed), SSCQP_OK);
    EXPECT_STREQ(name, "planted_solution");
    EXPECT_EQ(checks, passed);
    sscqp_verify_destroy(v);

    cfg.only = nullptr;
    cfg.n_only = 0;
    cfg.oracle_n = 21;
    EXPECT_EQ(sscqp_verify_run(&cfg, &v), SSCQP_ERR_INVALID_ARGUMENT);
}
