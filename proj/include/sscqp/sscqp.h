/*
 * sscqp: semi-smooth Newton solver for convex quadratic programs over
 * simplicial cones,
 *
 *     minimize ½ xᵀQx + bᵀx + c   subject to x ∈ A·ℝⁿ₊,
 *
 * through the equation M·u⁺ + u + q = 0 with M = AᵀQA − I, q = Aᵀb.
 *
 * Every function returns an sscqp_status. On failure the message is
 * available from sscqp_last_error() on the calling thread until the next
 * failing call. Handles are opaque; each *_destroy accepts NULL. Matrices
 * cross the boundary row-major.
 */
#ifndef SSCQP_SSCQP_H
#define SSCQP_SSCQP_H

#include <stddef.h>
#include <stdint.h>

#if defined(SSCQP_BUILDING_LIBRARY)
#define SSCQP_API __attribute__((visibility("default")))
#else
#define SSCQP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sscqp_status {
    SSCQP_OK = 0,
    SSCQP_ERR_INVALID_ARGUMENT = 1,
    SSCQP_ERR_SINGULAR_MATRIX = 2,
    SSCQP_ERR_NOT_POSITIVE_DEFINITE = 3,
    SSCQP_ERR_NO_CONVERGENCE = 4,
    SSCQP_ERR_PARSE = 5,
    SSCQP_ERR_INVALID_PROBLEM = 6,
    SSCQP_ERR_DIMENSION_TOO_LARGE = 7,
    SSCQP_ERR_GENERATION_FAILED = 8,
    SSCQP_ERR_PRECONDITION = 9,
    SSCQP_ERR_INTERNAL = 10,
    SSCQP_ERR_IO = 11,
    SSCQP_ERR_OUT_OF_MEMORY = 12
} sscqp_status;

SSCQP_API const char* sscqp_version(void);
SSCQP_API const char* sscqp_status_string(sscqp_status status);
/* Message of the last failure on this thread, "" if none. */
SSCQP_API const char* sscqp_last_error(void);

/* SplitMix64-derived seed for substream `stream` of `seed`. Instance i of
 * a generated batch uses sscqp_mix_seed(seed, i). */
SSCQP_API uint64_t sscqp_mix_seed(uint64_t seed, uint64_t stream);

/* ------------------------------------------------------------------------
 * Problems */

typedef struct sscqp_problem sscqp_problem;

/* q and a are n×n row-major; Q must be symmetric positive definite and A
 * nonsingular (SSCQP_ERR_INVALID_PROBLEM otherwise). */
SSCQP_API sscqp_status sscqp_problem_create(size_t n, const double* q, const double* b, double c, const double* a,
                                            sscqp_problem** out);
/* Text problem format; parse errors carry "line N:" in the message. */
SSCQP_API sscqp_status sscqp_problem_parse(const char* text, sscqp_problem** out);
SSCQP_API sscqp_status sscqp_problem_read(const char* path, sscqp_problem** out);
SSCQP_API sscqp_status sscqp_problem_write(const sscqp_problem* p, const char* path);
/* Serialized text; the string is owned by the handle. */
SSCQP_API sscqp_status sscqp_problem_format(sscqp_problem* p, const char** text);
SSCQP_API void sscqp_problem_destroy(sscqp_problem* p);

SSCQP_API size_t sscqp_problem_dim(const sscqp_problem* p);
/* Optional starting point / planted solution stored with the problem.
 * *present is set to 0 or 1; out (length n) is written only when present. */
SSCQP_API sscqp_status sscqp_problem_x0(const sscqp_problem* p, int* present, double* out);
SSCQP_API sscqp_status sscqp_problem_known_solution(const sscqp_problem* p, int* present, double* out);
/* ‖AᵀQA − I‖₂ */
SSCQP_API sscqp_status sscqp_problem_norm_m(const sscqp_problem* p, double* out);
SSCQP_API sscqp_status sscqp_problem_objective(const sscqp_problem* p, const double* y, double* out);

typedef struct sscqp_kkt {
    double primal_feasibility; /* min_i (A⁻¹y)_i */
    double dual_feasibility;   /* min_i (Aᵀ(Qy + b))_i */
    double complementarity;    /* |⟨Qy + b, y⟩| */
    int passed;
} sscqp_kkt;

SSCQP_API sscqp_status sscqp_check_kkt(const sscqp_problem* p, const double* y, double tol, sscqp_kkt* out);

/* ------------------------------------------------------------------------
 * Solving */

typedef enum sscqp_method { SSCQP_METHOD_NEWTON = 0, SSCQP_METHOD_FIXED_POINT = 1 } sscqp_method;

typedef enum sscqp_solve_status {
    SSCQP_SOLVE_CONVERGED_RESIDUAL = 0,
    SSCQP_SOLVE_CONVERGED_KNOWN_SOLUTION = 1,
    SSCQP_SOLVE_FINITE_TERMINATION = 2,
    SSCQP_SOLVE_MAX_ITERATIONS = 3
} sscqp_solve_status;

typedef struct sscqp_solver_config {
    double tol_x;   /* ‖u − x_k‖ < tol_x·(1 + ‖u‖), used with a known solution */
    double tol_res; /* ‖F(x_k)‖ ≤ tol_res·(1 + ‖q‖) */
    int max_iter;
    sscqp_method method;
} sscqp_solver_config;

SSCQP_API void sscqp_solver_config_default(sscqp_solver_config* cfg);

typedef struct sscqp_report sscqp_report;

/* x0 and known may be NULL: x0 then defaults to the problem's stored start,
 * or zero; known enables the known-solution stopping test. */
SSCQP_API sscqp_status sscqp_solve(const sscqp_problem* p, const sscqp_solver_config* cfg, const double* x0,
                                   const double* known, sscqp_report** out);
SSCQP_API void sscqp_report_destroy(sscqp_report* r);

SSCQP_API sscqp_solve_status sscqp_report_status(const sscqp_report* r);
SSCQP_API const char* sscqp_solve_status_string(sscqp_solve_status s);
SSCQP_API int sscqp_report_iterations(const sscqp_report* r);
SSCQP_API double sscqp_report_final_residual(const sscqp_report* r);
SSCQP_API int sscqp_report_cycle_detected(const sscqp_report* r);
/* ‖M‖/(1 − ‖M‖); returns 0 and leaves *out untouched when ‖M‖ ≥ 1. */
SSCQP_API int sscqp_report_rate_bound(const sscqp_report* r, double* out);
SSCQP_API size_t sscqp_report_dim(const sscqp_report* r);
/* Final iterate u (length n). */
SSCQP_API void sscqp_report_solution(const sscqp_report* r, double* out);
/* QP solution A·u⁺ (length n). */
SSCQP_API void sscqp_report_qp_solution(const sscqp_report* r, double* out);
SSCQP_API sscqp_status sscqp_report_kkt(const sscqp_report* r, double tol, sscqp_kkt* out);

/* Trace entries 0..iterations; entry 0 is the starting point. x and pattern
 * may be NULL; pivot is NaN for entry 0 and for fixed-point iterates. */
SSCQP_API size_t sscqp_report_trace_length(const sscqp_report* r);
SSCQP_API sscqp_status sscqp_report_trace_entry(const sscqp_report* r, size_t k, double* x, double* residual,
                                                double* pivot, unsigned char* pattern);

/* ------------------------------------------------------------------------
 * Instance generation */

typedef struct sscqp_instance_spec {
    size_t n;
    double beta_lb; /* ‖AᵀQA − I‖ is drawn from U[beta_lb, beta_ub) */
    double beta_ub;
    uint64_t seed;
    double value_scale; /* entries of B, C, u, x0 lie in [−scale, scale] */
} sscqp_instance_spec;

SSCQP_API void sscqp_instance_spec_default(sscqp_instance_spec* spec);

typedef struct sscqp_instance sscqp_instance;

SSCQP_API sscqp_status sscqp_generate(const sscqp_instance_spec* spec, sscqp_instance** out);
SSCQP_API void sscqp_instance_destroy(sscqp_instance* inst);
SSCQP_API double sscqp_instance_beta(const sscqp_instance* inst);
SSCQP_API double sscqp_instance_norm_m(const sscqp_instance* inst);
SSCQP_API uint64_t sscqp_instance_seed(const sscqp_instance* inst);
/* New problem handle carrying the planted solution and starting point. */
SSCQP_API sscqp_status sscqp_instance_problem(const sscqp_instance* inst, sscqp_problem** out);
SSCQP_API sscqp_status sscqp_instance_write(const sscqp_instance* inst, const char* path);

/* ------------------------------------------------------------------------
 * Benchmarks */

typedef enum sscqp_suite { SSCQP_SUITE_TABLE1 = 0, SSCQP_SUITE_TABLE2 = 1, SSCQP_SUITE_TABLE3 = 2 } sscqp_suite;

typedef struct sscqp_bench_config {
    sscqp_suite suite;
    const size_t* dims; /* NULL: {100} */
    size_t n_dims;
    int count;
    const double* tols; /* NULL: {1e-6, 1e-8, 1e-10} */
    size_t n_tols;
    uint64_t seed;
    int repeats; /* odd */
    int starts;  /* table2 */
    const double* beta_ranges; /* table3, (lb, ub) pairs; NULL: six decades from [0.5, 1e3) */
    size_t n_beta_ranges;
    double regime_lb; /* table1/table2 */
    double regime_ub;
    int max_iter;
    double value_scale;
    unsigned threads; /* 0: hardware concurrency, capped by $SSCQP_THREADS */
} sscqp_bench_config;

SSCQP_API void sscqp_bench_config_default(sscqp_bench_config* cfg);

typedef struct sscqp_bench_record {
    const char* group;
    int instance_id;
    int start_id;
    uint64_t seed;
    size_t n;
    double beta;
    double tol_x;
    int iterations;
    sscqp_solve_status status;
    int solved;
    double runtime_seconds;
    double final_residual;
    double rate_bound;
    double max_observed_contraction;
    const char* error; /* "" unless the instance or solve failed */
} sscqp_bench_record;

typedef struct sscqp_bench_summary {
    const char* group;
    double tol_x;
    int group_size;
    int solved_count;
    long total_iterations;
    double total_time;
    double mean_iterations;
    double std_iterations;
    double mean_of_problem_std;
    double mean_of_problem_mean;
} sscqp_bench_summary;

typedef struct sscqp_bench sscqp_bench;

SSCQP_API sscqp_status sscqp_bench_run(const sscqp_bench_config* cfg, sscqp_bench** out);
SSCQP_API void sscqp_bench_destroy(sscqp_bench* b);
/* Strings are owned by the handle. */
SSCQP_API const char* sscqp_bench_csv(const sscqp_bench* b);
SSCQP_API const char* sscqp_bench_table(const sscqp_bench* b);
SSCQP_API size_t sscqp_bench_record_count(const sscqp_bench* b);
SSCQP_API sscqp_status sscqp_bench_record_at(const sscqp_bench* b, size_t i, sscqp_bench_record* out);
SSCQP_API size_t sscqp_bench_summary_count(const sscqp_bench* b);
SSCQP_API sscqp_status sscqp_bench_summary_at(const sscqp_bench* b, size_t i, sscqp_bench_summary* out);

/* ------------------------------------------------------------------------
 * Property verification */

typedef struct sscqp_verify_config {
    uint64_t seed;
    int sweep;        /* random checks for pointwise properties */
    int instances;    /* generated instances for solve-based properties */
    size_t n;         /* their dimension */
    size_t oracle_n;  /* largest enumeration-oracle dimension, at most 20 */
    int oracle_count;
    const char* const* only; /* property names to run; NULL: all */
    size_t n_only;
} sscqp_verify_config;

SSCQP_API void sscqp_verify_config_default(sscqp_verify_config* cfg);

typedef struct sscqp_verify sscqp_verify;

/* SSCQP_ERR_INVALID_ARGUMENT for bad sizes or unknown property names;
 * property failures are reported through the handle, not the status. */
SSCQP_API sscqp_status sscqp_verify_run(const sscqp_verify_config* cfg, sscqp_verify** out);
SSCQP_API void sscqp_verify_destroy(sscqp_verify* v);
SSCQP_API int sscqp_verify_passed(const sscqp_verify* v);
SSCQP_API const char* sscqp_verify_text(const sscqp_verify* v);
SSCQP_API size_t sscqp_verify_property_count(const sscqp_verify* v);
SSCQP_API sscqp_status sscqp_verify_property_at(const sscqp_verify* v, size_t i, const char** name, int* checks,
                                                int* passed);

#ifdef __cplusplus
}
#endif

#endif /* SSCQP_SSCQP_H */
