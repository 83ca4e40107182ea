#include "sscqp/sscqp.h"

#include <algorithm>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "bench.hpp"
#include "error.hpp"
#include "generator.hpp"
#include "qp_model.hpp"
#include "solver.hpp"
#include "verify.hpp"

struct sscqp_problem {
    sscqp::ProblemFile file;
    std::string text;  // backing store for sscqp_problem_format
};

struct sscqp_report {
    std::shared_ptr<const sscqp::QpProblem> problem;
    sscqp::SolveReport report;
};

struct sscqp_instance {
    sscqp::GeneratedInstance inst;
};

struct sscqp_bench {
    sscqp::BenchResult result;
    std::string csv;
    std::string table;
};

struct sscqp_verify {
    sscqp::VerifyReport report;
    std::string text;
};

namespace {

thread_local std::string last_error;

sscqp_status map_code(sscqp::ErrorCode code) {
    using sscqp::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return SSCQP_ERR_INVALID_ARGUMENT;
        case ErrorCode::SingularMatrix: return SSCQP_ERR_SINGULAR_MATRIX;
        case ErrorCode::NotPositiveDefinite: return SSCQP_ERR_NOT_POSITIVE_DEFINITE;
        case ErrorCode::NoConvergence: return SSCQP_ERR_NO_CONVERGENCE;
        case ErrorCode::ParseError: return SSCQP_ERR_PARSE;
        case ErrorCode::InvalidProblem: return SSCQP_ERR_INVALID_PROBLEM;
        case ErrorCode::DimensionTooLarge: return SSCQP_ERR_DIMENSION_TOO_LARGE;
        case ErrorCode::GenerationFailed: return SSCQP_ERR_GENERATION_FAILED;
        case ErrorCode::PreconditionViolated: return SSCQP_ERR_PRECONDITION;
        case ErrorCode::InternalConsistency: return SSCQP_ERR_INTERNAL;
        case ErrorCode::Io: return SSCQP_ERR_IO;
    }
    return SSCQP_ERR_INTERNAL;
}

sscqp_status fail(sscqp_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Runs f, translating exceptions into status codes and the thread's message.
template <class F>
sscqp_status guarded(F&& f) {
    try {
        f();
        return SSCQP_OK;
    } catch (const sscqp::Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(SSCQP_ERR_OUT_OF_MEMORY, "out of memory");
    } catch (const std::exception& e) {
        return fail(SSCQP_ERR_INTERNAL, e.what());
    }
}

void require(bool cond, const char* what) {
    if (!cond) throw sscqp::Error(sscqp::ErrorCode::InvalidArgument, what);
}

sscqp::Vector to_vector(const double* p, std::size_t n) { return sscqp::Vector(std::vector<double>(p, p + n)); }

void copy_out(const sscqp::Vector& v, double* out) { std::copy(v.values().begin(), v.values().end(), out); }

sscqp::SolveStatus to_core(sscqp_solve_status s) { return static_cast<sscqp::SolveStatus>(s); }
sscqp_solve_status to_c(sscqp::SolveStatus s) {
    switch (s) {
        case sscqp::SolveStatus::ConvergedResidual: return SSCQP_SOLVE_CONVERGED_RESIDUAL;
        case sscqp::SolveStatus::ConvergedKnownSolution: return SSCQP_SOLVE_CONVERGED_KNOWN_SOLUTION;
        case sscqp::SolveStatus::FiniteTermination: return SSCQP_SOLVE_FINITE_TERMINATION;
        case sscqp::SolveStatus::MaxIterations: return SSCQP_SOLVE_MAX_ITERATIONS;
    }
    return SSCQP_SOLVE_MAX_ITERATIONS;
}

sscqp_kkt to_c(const sscqp::KktCertificate& c) {
    return {c.primal_feasibility, c.dual_feasibility, c.complementarity, c.passed ? 1 : 0};
}

}  // namespace

extern "C" {

const char* sscqp_version(void) { return "1.0.0"; }

const char* sscqp_status_string(sscqp_status status) {
    switch (status) {
        case SSCQP_OK: return "ok";
        case SSCQP_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SSCQP_ERR_SINGULAR_MATRIX: return "singular matrix";
        case SSCQP_ERR_NOT_POSITIVE_DEFINITE: return "not positive definite";
        case SSCQP_ERR_NO_CONVERGENCE: return "no convergence";
        case SSCQP_ERR_PARSE: return "parse error";
        case SSCQP_ERR_INVALID_PROBLEM: return "invalid problem";
        case SSCQP_ERR_DIMENSION_TOO_LARGE: return "dimension too large";
        case SSCQP_ERR_GENERATION_FAILED: return "generation failed";
        case SSCQP_ERR_PRECONDITION: return "precondition violated";
        case SSCQP_ERR_INTERNAL: return "internal error";
        case SSCQP_ERR_IO: return "i/o error";
        case SSCQP_ERR_OUT_OF_MEMORY: return "out of memory";
    }
    return "unknown status";
}

const char* sscqp_last_error(void) { return last_error.c_str(); }

uint64_t sscqp_mix_seed(uint64_t seed, uint64_t stream) { return sscqp::mix_seed(seed, stream); }

// ---------------------------------------------------------------------------
// Problems

sscqp_status sscqp_problem_create(size_t n, const double* q, const double* b, double c, const double* a,
                                  sscqp_problem** out) {
    return guarded([&] {
        require(out && q && b && a, "null argument");
        require(n >= 1, "dimension must be positive");
        *out = nullptr;
        const std::span<const double> qs(q, n * n), as(a, n * n);
        sscqp::QpProblem p(sscqp::DenseMatrix::from_row_major(n, n, qs), to_vector(b, n), c,
                           sscqp::DenseMatrix::from_row_major(n, n, as));
        *out = new sscqp_problem{sscqp::ProblemFile{std::move(p), std::nullopt, std::nullopt, {}}, {}};
    });
}

sscqp_status sscqp_problem_parse(const char* text, sscqp_problem** out) {
    return guarded([&] {
        require(out && text, "null argument");
        *out = nullptr;
        *out = new sscqp_problem{sscqp::parse_problem(text), {}};
    });
}

sscqp_status sscqp_problem_read(const char* path, sscqp_problem** out) {
    return guarded([&] {
        require(out && path, "null argument");
        *out = nullptr;
        *out = new sscqp_problem{sscqp::read_problem(path), {}};
    });
}

sscqp_status sscqp_problem_write(const sscqp_problem* p, const char* path) {
    return guarded([&] {
        require(p && path, "null argument");
        sscqp::write_problem(p->file, path);
    });
}

sscqp_status sscqp_problem_format(sscqp_problem* p, const char** text) {
    return guarded([&] {
        require(p && text, "null argument");
        p->text = sscqp::format_problem(p->file);
        *text = p->text.c_str();
    });
}

void sscqp_problem_destroy(sscqp_problem* p) { delete p; }

size_t sscqp_problem_dim(const sscqp_problem* p) { return p ? p->file.problem.dim() : 0; }

sscqp_status sscqp_problem_x0(const sscqp_problem* p, int* present, double* out) {
    return guarded([&] {
        require(p && present, "null argument");
        *present = p->file.x0 ? 1 : 0;
        if (p->file.x0 && out) copy_out(*p->file.x0, out);
    });
}

sscqp_status sscqp_problem_known_solution(const sscqp_problem* p, int* present, double* out) {
    return guarded([&] {
        require(p && present, "null argument");
        *present = p->file.u ? 1 : 0;
        if (p->file.u && out) copy_out(*p->file.u, out);
    });
}

sscqp_status sscqp_problem_norm_m(const sscqp_problem* p, double* out) {
    return guarded([&] {
        require(p && out, "null argument");
        *out = sscqp::build_system(p->file.problem).norm_M();
    });
}

sscqp_status sscqp_problem_objective(const sscqp_problem* p, const double* y, double* out) {
    return guarded([&] {
        require(p && y && out, "null argument");
        *out = p->file.problem.objective(to_vector(y, p->file.problem.dim()));
    });
}

sscqp_status sscqp_check_kkt(const sscqp_problem* p, const double* y, double tol, sscqp_kkt* out) {
    return guarded([&] {
        require(p && y && out, "null argument");
        require(tol >= 0.0, "tolerance must be nonnegative");
        *out = to_c(sscqp::check_kkt(p->file.problem, to_vector(y, p->file.problem.dim()), tol));
    });
}

// ---------------------------------------------------------------------------
// Solving

void sscqp_solver_config_default(sscqp_solver_config* cfg) {
    if (!cfg) return;
    const sscqp::SolverConfig d;
    *cfg = {d.tol_x, d.tol_res, d.max_iter, SSCQP_METHOD_NEWTON};
}

sscqp_status sscqp_solve(const sscqp_problem* p, const sscqp_solver_config* cfg, const double* x0,
                         const double* known, sscqp_report** out) {
    return guarded([&] {
        require(p && out, "null argument");
        *out = nullptr;
        sscqp::SolverConfig sc;
        if (cfg) {
            require(cfg->method == SSCQP_METHOD_NEWTON || cfg->method == SSCQP_METHOD_FIXED_POINT, "unknown method");
            sc.tol_x = cfg->tol_x;
            sc.tol_res = cfg->tol_res;
            sc.max_iter = cfg->max_iter;
            sc.method = cfg->method == SSCQP_METHOD_NEWTON ? sscqp::Method::Newton : sscqp::Method::FixedPoint;
        }
        sc.validate();
        const std::size_t n = p->file.problem.dim();
        const sscqp::Vector start = x0 ? to_vector(x0, n) : p->file.x0.value_or(sscqp::Vector(n));
        std::optional<sscqp::Vector> u;
        if (known) u = to_vector(known, n);
        auto problem = std::make_shared<const sscqp::QpProblem>(p->file.problem);
        sscqp::SolveReport report = sscqp::solve(sscqp::build_system(*problem), start, sc, u);
        *out = new sscqp_report{std::move(problem), std::move(report)};
    });
}

void sscqp_report_destroy(sscqp_report* r) { delete r; }

sscqp_solve_status sscqp_report_status(const sscqp_report* r) { return to_c(r->report.status); }

const char* sscqp_solve_status_string(sscqp_solve_status s) {
    if (s < SSCQP_SOLVE_CONVERGED_RESIDUAL || s > SSCQP_SOLVE_MAX_ITERATIONS) return "unknown";
    return sscqp::to_string(to_core(s));
}

int sscqp_report_iterations(const sscqp_report* r) { return r->report.iterations; }
double sscqp_report_final_residual(const sscqp_report* r) { return r->report.final_residual_norm; }
int sscqp_report_cycle_detected(const sscqp_report* r) { return r->report.cycle_detected ? 1 : 0; }

int sscqp_report_rate_bound(const sscqp_report* r, double* out) {
    if (!r->report.rate_bound) return 0;
    if (out) *out = *r->report.rate_bound;
    return 1;
}

size_t sscqp_report_dim(const sscqp_report* r) { return r->report.final_x.size(); }

void sscqp_report_solution(const sscqp_report* r, double* out) { copy_out(r->report.final_x, out); }

void sscqp_report_qp_solution(const sscqp_report* r, double* out) {
    copy_out(sscqp::recover_qp_solution(*r->problem, r->report.final_x), out);
}

sscqp_status sscqp_report_kkt(const sscqp_report* r, double tol, sscqp_kkt* out) {
    return guarded([&] {
        require(r && out, "null argument");
        *out = to_c(sscqp::check_kkt(*r->problem, sscqp::recover_qp_solution(*r->problem, r->report.final_x), tol));
    });
}

size_t sscqp_report_trace_length(const sscqp_report* r) { return r->report.trace.size(); }

sscqp_status sscqp_report_trace_entry(const sscqp_report* r, size_t k, double* x, double* residual, double* pivot,
                                      unsigned char* pattern) {
    return guarded([&] {
        require(r != nullptr, "null argument");
        require(k < r->report.trace.size(), "trace index out of range");
        const auto& e = r->report.trace[k];
        if (x) copy_out(e.x, x);
        if (residual) *residual = e.residual_norm;
        if (pivot) *pivot = e.smallest_pivot;
        if (pattern) std::copy(e.pattern.bits().begin(), e.pattern.bits().end(), pattern);
    });
}

// ---------------------------------------------------------------------------
// Instance generation

void sscqp_instance_spec_default(sscqp_instance_spec* spec) {
    if (!spec) return;
    const sscqp::InstanceSpec d;
    *spec = {d.n, d.beta_lb, d.beta_ub, d.seed, d.value_scale};
}

sscqp_status sscqp_generate(const sscqp_instance_spec* spec, sscqp_instance** out) {
    return guarded([&] {
        require(spec && out, "null argument");
        *out = nullptr;
        const sscqp::InstanceSpec s{spec->n, spec->beta_lb, spec->beta_ub, spec->seed, spec->value_scale};
        *out = new sscqp_instance{sscqp::generate(s)};
    });
}

void sscqp_instance_destroy(sscqp_instance* inst) { delete inst; }
double sscqp_instance_beta(const sscqp_instance* inst) { return inst->inst.beta; }
double sscqp_instance_norm_m(const sscqp_instance* inst) { return inst->inst.norm_M; }
uint64_t sscqp_instance_seed(const sscqp_instance* inst) { return inst->inst.seed; }

sscqp_status sscqp_instance_problem(const sscqp_instance* inst, sscqp_problem** out) {
    return guarded([&] {
        require(inst && out, "null argument");
        *out = nullptr;
        *out = new sscqp_problem{inst->inst.to_file(), {}};
    });
}

sscqp_status sscqp_instance_write(const sscqp_instance* inst, const char* path) {
    return guarded([&] {
        require(inst && path, "null argument");
        sscqp::write_problem(inst->inst.to_file(), path);
    });
}

// ---------------------------------------------------------------------------
// Benchmarks

void sscqp_bench_config_default(sscqp_bench_config* cfg) {
    if (!cfg) return;
    const sscqp::BenchConfig d;
    *cfg = sscqp_bench_config{};
    cfg->suite = SSCQP_SUITE_TABLE1;
    cfg->count = d.count;
    cfg->seed = d.seed;
    cfg->repeats = d.repeats;
    cfg->starts = d.starts;
    cfg->regime_lb = d.regime1.lb;
    cfg->regime_ub = d.regime1.ub;
    cfg->max_iter = d.max_iter;
    cfg->value_scale = d.value_scale;
    cfg->threads = d.threads;
}

sscqp_status sscqp_bench_run(const sscqp_bench_config* cfg, sscqp_bench** out) {
    return guarded([&] {
        require(cfg && out, "null argument");
        *out = nullptr;
        require(cfg->suite >= SSCQP_SUITE_TABLE1 && cfg->suite <= SSCQP_SUITE_TABLE3, "unknown suite");
        sscqp::BenchConfig bc;
        bc.suite = static_cast<sscqp::Suite>(cfg->suite);
        if (cfg->dims) bc.dims.assign(cfg->dims, cfg->dims + cfg->n_dims);
        if (cfg->tols) bc.tols.assign(cfg->tols, cfg->tols + cfg->n_tols);
        bc.count = cfg->count;
        bc.seed = cfg->seed;
        bc.repeats = cfg->repeats;
        bc.starts = cfg->starts;
        for (std::size_t i = 0; cfg->beta_ranges && i < cfg->n_beta_ranges; ++i) {
            bc.beta_ranges.push_back({cfg->beta_ranges[2 * i], cfg->beta_ranges[2 * i + 1]});
        }
        bc.regime1 = {cfg->regime_lb, cfg->regime_ub};
        bc.max_iter = cfg->max_iter;
        bc.value_scale = cfg->value_scale;
        bc.threads = cfg->threads;
        auto b = std::make_unique<sscqp_bench>();
        b->result = sscqp::run_bench(bc);
        b->csv = b->result.csv();
        b->table = b->result.table();
        *out = b.release();
    });
}

void sscqp_bench_destroy(sscqp_bench* b) { delete b; }
const char* sscqp_bench_csv(const sscqp_bench* b) { return b->csv.c_str(); }
const char* sscqp_bench_table(const sscqp_bench* b) { return b->table.c_str(); }
size_t sscqp_bench_record_count(const sscqp_bench* b) { return b->result.records.size(); }

sscqp_status sscqp_bench_record_at(const sscqp_bench* b, size_t i, sscqp_bench_record* out) {
    return guarded([&] {
        require(b && out, "null argument");
        require(i < b->result.records.size(), "record index out of range");
        const auto& r = b->result.records[i];
        *out = {r.group.c_str(), r.instance_id, r.start_id, r.seed, r.n, r.beta, r.tol_x, r.iterations,
                to_c(r.status), r.solved ? 1 : 0, r.runtime_seconds, r.final_residual, r.rate_bound,
                r.max_observed_contraction, r.error.c_str()};
    });
}

size_t sscqp_bench_summary_count(const sscqp_bench* b) { return b->result.summaries.size(); }

sscqp_status sscqp_bench_summary_at(const sscqp_bench* b, size_t i, sscqp_bench_summary* out) {
    return guarded([&] {
        require(b && out, "null argument");
        require(i < b->result.summaries.size(), "summary index out of range");
        const auto& s = b->result.summaries[i];
        *out = {s.group.c_str(), s.tol_x, s.group_size, s.solved_count, s.total_iterations, s.total_time,
                s.mean_iterations, s.std_iterations, s.mean_of_problem_std, s.mean_of_problem_mean};
    });
}

// ---------------------------------------------------------------------------
// Property verification

void sscqp_verify_config_default(sscqp_verify_config* cfg) {
    if (!cfg) return;
    const sscqp::VerifyConfig d;
    *cfg = {d.seed, d.sweep, d.instances, d.n, d.oracle_n, d.oracle_count, nullptr, 0};
}

sscqp_status sscqp_verify_run(const sscqp_verify_config* cfg, sscqp_verify** out) {
    return guarded([&] {
        require(cfg && out, "null argument");
        *out = nullptr;
        sscqp::VerifyConfig vc;
        vc.seed = cfg->seed;
        vc.sweep = cfg->sweep;
        vc.instances = cfg->instances;
        vc.n = cfg->n;
        vc.oracle_n = cfg->oracle_n;
        vc.oracle_count = cfg->oracle_count;
        for (std::size_t i = 0; cfg->only && i < cfg->n_only; ++i) vc.only.emplace_back(cfg->only[i]);
        auto v = std::make_unique<sscqp_verify>();
        v->report = sscqp::run_verify(vc);
        v->text = v->report.text();
        *out = v.release();
    });
}

void sscqp_verify_destroy(sscqp_verify* v) { delete v; }
int sscqp_verify_passed(const sscqp_verify* v) { return v->report.passed() ? 1 : 0; }
const char* sscqp_verify_text(const sscqp_verify* v) { return v->text.c_str(); }
size_t sscqp_verify_property_count(const sscqp_verify* v) { return v->report.properties.size(); }

sscqp_status sscqp_verify_property_at(const sscqp_verify* v, size_t i, const char** name, int* checks, int* passed) {
    return guarded([&] {
        require(v != nullptr, "null argument");
        require(i < v->report.properties.size(), "property index out of range");
        const auto& p = v->report.properties[i];
        if (name) *name = p.name.c_str();
        if (checks) *checks = p.checks;
        if (passed) *passed = p.passed;
    });
}

}  // extern "C"
