#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bench.hpp"
#include "error.hpp"
#include "generator.hpp"
#include "oracle.hpp"
#include "qp_model.hpp"
#include "solver.hpp"

namespace sscqp {

namespace {

// A check returns an empty string on success and a short reason otherwise.
using CheckFn = std::function<std::string(const VerifyConfig&, std::uint64_t seed, int i)>;

struct Property {
    const char* name;
    std::function<int(const VerifyConfig&)> count;
    CheckFn check;
};

std::string fmt(double v) { return format_real(v); }

GeneratedInstance instance(std::size_t n, double lb, double ub, std::uint64_t seed, double scale = 1e6) {
    return generate(InstanceSpec{n, lb, ub, seed, scale});
}

// Oracle-sized dimension for case i: cycles through 2..oracle_n.
std::size_t oracle_dim(const VerifyConfig& cfg, int i) {
    return 2 + static_cast<std::size_t>(i) % (cfg.oracle_n - 1);
}

DenseMatrix random_nonsingular(Rng& rng, std::size_t n) {
    for (;;) {
        DenseMatrix a = rng.uniform_matrix(n, n, 1.0);
        try {
            const auto lu = LuFactorization::factor(a);
            if (lu.smallest_pivot() > 1e-3) return a;
        } catch (const Error&) {
        }
    }
}

// ---------------------------------------------------------------------------
// dense-linalg

std::string plus_part_decomposition(const VerifyConfig&, std::uint64_t seed, int i) {
    Rng rng(seed);
    const Vector x = rng.uniform_vector(1 + i % 50, 10.0);
    const Vector p = plus_part(x);
    const Vector m = plus_part(-x);
    if (!(p - m == x)) return "x+ - (-x)+ != x";
    if (min_entry(p) < 0.0 || min_entry(m) < 0.0) return "negative plus part";
    if (dot(p, m) != 0.0) return "<x+, x-> = " + fmt(dot(p, m));
    return {};
}

std::string plus_part_nonexpansive(const VerifyConfig&, std::uint64_t seed, int) {
    Rng rng(seed);
    const Vector z = rng.uniform_vector(10, 1.0);
    const Vector w = rng.uniform_vector(10, 1.0);
    const double lhs = norm2(plus_part(z) - plus_part(w));
    const double rhs = norm2(z - w);
    if (lhs > rhs + 1e-12) return fmt(lhs) + " > " + fmt(rhs);
    return {};
}

std::string pattern_identity(const VerifyConfig&, std::uint64_t seed, int i) {
    Rng rng(seed);
    const Vector x = rng.uniform_vector(1 + i % 40, 1.0);
    if (!(apply_pattern(sign_pattern(x), x) == plus_part(x))) return "diag(sgn(x+))x != x+";
    return {};
}

constexpr std::size_t kFactorSizes[] = {5, 20, 50, 100, 200};

std::string lu_round_trip(const VerifyConfig&, std::uint64_t seed, int i) {
    Rng rng(seed);
    const std::size_t n = kFactorSizes[i % 5];
    DenseMatrix a = rng.uniform_matrix(n, n, 1.0);
    for (std::size_t k = 0; k < n; ++k) a(k, k) += static_cast<double>(n);
    const Vector b = rng.uniform_vector(n, 1.0);
    const Vector x = LuFactorization::factor(a).solve(b);
    const double rel = norm2(a * x - b) / norm2(b);
    if (rel > 1e-10) return "relative residual " + fmt(rel) + " at n=" + std::to_string(n);
    return {};
}

std::string cholesky_reconstruction(const VerifyConfig&, std::uint64_t seed, int i) {
    Rng rng(seed);
    const std::size_t n = kFactorSizes[i % 5];
    const DenseMatrix b = rng.uniform_matrix(n, n, 1.0);
    DenseMatrix q = transpose_times(b, b);
    for (std::size_t k = 0; k < n; ++k) q(k, k) += static_cast<double>(n) * 2.220446049250313e-16;
    const DenseMatrix l = CholeskyFactorization::factor(q).lower();
    const double err = (l * l.transpose() - q).frobenius_norm();
    if (err > 1e-10 * q.frobenius_norm()) return "||LL^T - Q||_F = " + fmt(err);
    return {};
}

std::string spectral_norm_diagonal(const VerifyConfig&, std::uint64_t seed, int i) {
    Rng rng(seed);
    const Vector d = rng.uniform_vector(1 + i % 30, 5.0);
    const double got = spectral_norm_symmetric(DenseMatrix::diagonal(d));
    const double want = norm_inf(d);
    if (std::abs(got - want) > 1e-9 * (1.0 + want)) return fmt(got) + " vs " + fmt(want);
    return {};
}

// ---------------------------------------------------------------------------
// qp-model

std::string serialization_round_trip(const VerifyConfig&, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(2 + i % 12, 0.0, 0.5, seed);
    const std::string text = format_problem(g.to_file());
    ProblemFile back = parse_problem(text);
    back.comments = g.to_file().comments;  // comments are not read back
    if (!(back.problem.Q() == g.problem.Q()) || !(back.problem.A() == g.problem.A()) ||
        !(back.problem.b() == g.problem.b()) || back.problem.c() != g.problem.c()) {
        return "problem data changed";
    }
    if (!back.u || !(*back.u == g.u) || !back.x0 || !(*back.x0 == g.x0)) return "u/x0 changed";
    if (format_problem(back) != text) return "second write differs";
    return {};
}

std::string jacobian_identity(const VerifyConfig&, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(2 + i % 10, 0.0, 10.0, seed, 1.0);
    const SemiSmoothSystem s = build_system(g.problem);
    const Vector x = Rng(mix_seed(seed, 1)).uniform_vector(s.dim(), 1.0);
    const Vector lhs = jacobian_S(s, sign_pattern(x)) * x;
    const Vector rhs = residual_F(s, x) - s.q();
    const double scale = 1.0 + norm2(s.q()) + norm2(s.M() * plus_part(x)) + norm2(x);
    const double diff = norm2(lhs - rhs);
    if (diff > 1e-13 * scale) return "||S(x)x - (F(x) - q)|| = " + fmt(diff);
    return {};
}

std::string reformulation_soundness(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i) % std::min<std::size_t>(cfg.n, 49);
    const GeneratedInstance g = instance(n, 0.0, 0.5, seed, 1.0);
    const SemiSmoothSystem s = build_system(g.problem);
    SolverConfig sc;
    const SolveReport r = solve(s, g.x0, sc);
    if (r.final_residual_norm > 1e-12 * (1.0 + norm2(s.q()))) return "residual " + fmt(r.final_residual_norm);
    const KktCertificate c = check_kkt(g.problem, recover_qp_solution(g.problem, r.final_x), 1e-8);
    if (!c.passed) {
        return "KKT failed: primal " + fmt(c.primal_feasibility) + " dual " + fmt(c.dual_feasibility) + " compl " +
               fmt(c.complementarity);
    }
    return {};
}

std::string lcp_equivalence(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(oracle_dim(cfg, i), 0.0, 1.0, seed, 1.0);
    const SemiSmoothSystem s = build_system(g.problem);
    const OracleResult o = enumerate_solve(s);
    const double tol = 1e-8 * (1.0 + norm2(s.q()));
    for (const auto& sol : o.solutions) {
        const Vector x = plus_part(sol.x);
        const Vector y = minus_part(sol.x);
        const double res = lcp_residual(g.problem, x, y);
        if (res > tol) return "lcp residual " + fmt(res) + " at an oracle solution";
        // Back from the complementary pair to a zero of F.
        const double f = norm2(residual_F(s, x - y));
        if (f > tol) return "||F(x - y)|| = " + fmt(f);
    }
    return {};
}

std::string dual_cone(const VerifyConfig&, std::uint64_t seed, int i) {
    Rng rng(seed);
    const std::size_t n = 2 + i % 9;
    const DenseMatrix a = random_nonsingular(rng, n);
    Vector w = rng.uniform_vector(n, 1.0);
    Vector v = rng.uniform_vector(n, 1.0);
    w = plus_part(w);
    v = plus_part(v);
    const Vector dual = LuFactorization::factor(a).solve_transposed(w);
    const double ip = dot(dual, a * v);
    if (ip < -1e-10) return "<A^-T w, Av> = " + fmt(ip);
    return {};
}

// ---------------------------------------------------------------------------
// ssnewton-solver

std::string nonsingularity(const VerifyConfig&, std::uint64_t seed, int i) {
    static constexpr double kUpper[] = {0.5, 1.0, 1e3, 1e6};
    const double ub = kUpper[i % 4];
    const GeneratedInstance g = instance(2 + i % 19, 0.0, ub, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    const Vector x = Rng(mix_seed(seed, 1)).uniform_vector(s.dim(), 1e6);
    const DenseMatrix j = jacobian_S(s, sign_pattern(x));
    const auto lu = LuFactorization::factor(j);
    if (lu.smallest_pivot() <= kSingularPivotRatio * j.max_abs_entry()) return "pivot at threshold";
    return {};
}

std::string inverse_norm_bound(const VerifyConfig&, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(2 + i % 19, 0.0, 0.99, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    const Vector x = Rng(mix_seed(seed, 1)).uniform_vector(s.dim(), 1.0);
    if (!inverse_norm_bound_check(s, x)) {
        return "||S^-1|| = " + fmt(inverse_jacobian_norm(s, x)) + " > " + fmt(1.0 / (1.0 - s.norm_M()));
    }
    return {};
}

std::string perturbation_bound(const VerifyConfig&, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(2 + i % 19, 0.0, 10.0, seed, 1.0);
    const SemiSmoothSystem s = build_system(g.problem);
    Rng rng(mix_seed(seed, 1));
    const Vector x = rng.uniform_vector(s.dim(), 1.0);
    const Vector y = rng.uniform_vector(s.dim(), 1.0);
    if (!perturbation_bound_check(s, x, y)) return "bound violated";
    return {};
}

std::string q_linear_rate(const VerifyConfig& cfg, std::uint64_t seed, int) {
    const GeneratedInstance g = instance(cfg.n, 0.0, 0.5, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    SolverConfig sc;
    sc.tol_x = 1e-10;
    const SolveReport r = solve(s, g.x0, sc, g.u);
    if (!verify_rate(r, s, g.u)) return "contraction above ||M||/(1-||M||) = " + fmt(*r.rate_bound);
    return {};
}

std::string planted_solution(const VerifyConfig& cfg, std::uint64_t seed, int) {
    const GeneratedInstance g = instance(cfg.n, 0.0, 0.5, seed);
    SolverConfig sc;
    sc.tol_x = 1e-10;
    const SolveReport r = solve(build_system(g.problem), g.x0, sc, g.u);
    if (r.status != SolveStatus::ConvergedKnownSolution) return std::string("status ") + to_string(r.status);
    return {};
}

std::string uniqueness_multistart(const VerifyConfig& cfg, std::uint64_t seed, int) {
    const GeneratedInstance g = instance(cfg.n, 0.0, 1.0, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    const double tol = 1e-8 * (1.0 + norm2(g.u));
    for (int j = 0; j < 50; ++j) {
        const Vector x0 = j == 0 ? g.x0 : Rng(mix_seed(seed, 100 + j)).uniform_vector(cfg.n, 1e6);
        const SolveReport r = solve(s, x0, SolverConfig{});
        const double err = norm2(r.final_x - g.u);
        if (err > tol) return "start " + std::to_string(j) + " ends " + fmt(err) + " from u";
    }
    return {};
}

std::string finite_termination(const VerifyConfig& cfg, std::uint64_t seed, int) {
    const GeneratedInstance g = instance(cfg.n, 0.0, 0.5, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    SolverConfig sc;
    sc.tol_res = 1e-300;  // only the pattern test can stop the run
    const SolveReport r = solve(s, g.x0, sc);
    if (r.status != SolveStatus::FiniteTermination) return std::string("status ") + to_string(r.status);
    const double bound = 1e-10 * (1.0 + norm2(s.q()));
    if (r.final_residual_norm > bound) return "residual " + fmt(r.final_residual_norm) + " > " + fmt(bound);
    return {};
}

std::string boundedness(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    static constexpr double kLower[] = {0.0, 0.5, 1e3, 1e6};
    const double lb = kLower[i % 4];
    const GeneratedInstance g = instance(cfg.n, lb, lb == 0.0 ? 0.5 : lb * 10.0, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    SolverConfig sc;
    sc.tol_x = 1e-15;
    sc.max_iter = 30;
    const SolveReport r = solve(s, g.x0, sc, g.u);
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
        const Vector& x = r.trace[k].x;
        if (!std::isfinite(norm2(x))) return "iterate " + std::to_string(k) + " not finite";
        // The iterate solves the Newton system of its predecessor's pattern.
        const DenseMatrix sj = jacobian_S(s, r.trace[k - 1].pattern);
        const double res = norm2(sj * x + s.q());
        const double scale = sj.frobenius_norm() * norm2(x) + norm2(s.q());
        if (res > 1e-9 * scale) return "Newton system residual " + fmt(res) + " at k=" + std::to_string(k);
    }
    return {};
}

std::string fixed_point_contraction(const VerifyConfig&, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(2 + i % 19, 0.0, 0.99, seed, 1.0);
    const SemiSmoothSystem s = build_system(g.problem);
    Rng rng(mix_seed(seed, 1));
    const Vector x = rng.uniform_vector(s.dim(), 1.0);
    const Vector y = rng.uniform_vector(s.dim(), 1.0);
    const Vector fx = fixed_point_step(s, x);
    const Vector fy = fixed_point_step(s, y);
    const double lhs = norm2(fx - fy);
    const double rhs = s.norm_M() * norm2(x - y) + 1e-12 * (1.0 + norm2(fx) + norm2(fy));
    if (lhs > rhs) return fmt(lhs) + " > " + fmt(rhs);
    return {};
}

// ---------------------------------------------------------------------------
// enum-oracle

std::string newton_fixed_point(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(oracle_dim(cfg, i), 0.0, 0.5, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    const OracleResult o = enumerate_solve(s);
    const SolveReport r = solve(s, o.solutions.front().x, SolverConfig{});
    if (r.iterations > 1) return std::to_string(r.iterations) + " iterations from the solution";
    return {};
}

std::string oracle_newton_agreement(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(oracle_dim(cfg, i), 0.0, 0.5, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    const OracleResult o = enumerate_solve(s);
    if (o.solutions.size() != 1) return std::to_string(o.solutions.size()) + " oracle solutions";
    const SolveReport r = solve(s, g.x0, SolverConfig{});
    const double err = norm2(r.final_x - o.solutions.front().x);
    if (err > 1e-8 * (1.0 + norm2(g.u))) return "Newton differs from oracle by " + fmt(err);
    return {};
}

std::string oracle_kkt(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(oracle_dim(cfg, i), 0.0, 1.0, seed, 1.0);
    const OracleResult o = enumerate_solve(build_system(g.problem));
    for (const auto& sol : o.solutions) {
        const KktCertificate c = check_kkt(g.problem, recover_qp_solution(g.problem, sol.x), 1e-8);
        if (!c.passed) {
            return "KKT failed: primal " + fmt(c.primal_feasibility) + " dual " + fmt(c.dual_feasibility) +
                   " compl " + fmt(c.complementarity);
        }
    }
    return {};
}

std::string oracle_uniqueness(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(oracle_dim(cfg, i), 0.0, 1.0, seed);
    const OracleResult o = enumerate_solve(build_system(g.problem));
    if (o.solutions.size() != 1 || !o.unique) return std::to_string(o.solutions.size()) + " solutions";
    return {};
}

std::string beyond_hypothesis_agreement(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(oracle_dim(cfg, i), 0.5, 100.0, seed);
    const SemiSmoothSystem s = build_system(g.problem);
    OracleResult o;
    try {
        o = enumerate_solve(s);
    } catch (const Error& e) {
        // Near-singular pattern systems are possible once ||M|| ≥ 1; nothing to compare.
        if (e.code() == ErrorCode::SingularMatrix) return {};
        throw;
    }
    if (o.solutions.size() != 1) return {};
    const SolveReport r = solve(s, g.x0, SolverConfig{});
    if (!r.converged()) return {};
    const double err = norm2(r.final_x - o.solutions.front().x);
    if (err > 1e-8 * (1.0 + norm2(o.solutions.front().x))) return "Newton differs from oracle by " + fmt(err);
    return {};
}

// ---------------------------------------------------------------------------
// instance-generator

std::string norm_planting(const VerifyConfig&, std::uint64_t seed, int i) {
    const bool regime1 = i % 2 == 0;
    const GeneratedInstance g = instance(20, regime1 ? 0.0 : 0.5, regime1 ? 0.5 : 1e6, seed);
    // Measured through the general (Gram) norm routine rather than the cached value.
    const double got = spectral_norm(build_system(g.problem).M());
    if (std::abs(got - g.beta) > 1e-6 * g.beta) return "||M|| = " + fmt(got) + " for beta " + fmt(g.beta);
    return {};
}

std::string instance_validity(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    const GeneratedInstance g = instance(cfg.n, 0.0, i % 2 == 0 ? 0.5 : 1e3, seed);
    const QpProblem again(g.problem.Q(), g.problem.b(), g.problem.c(), g.problem.A());
    (void)again;
    return {};
}

std::string determinism(const VerifyConfig& cfg, std::uint64_t seed, int) {
    const InstanceSpec spec{cfg.n, 0.0, 0.5, seed, 1e6};
    if (format_problem(generate(spec).to_file()) != format_problem(generate(spec).to_file())) {
        return "two generations differ";
    }
    return {};
}

// ---------------------------------------------------------------------------
// bench-cli

// Every record field except the timing column.
std::string without_runtime(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records) {
        out << r.group << '|' << r.instance_id << '|' << r.start_id << '|' << r.seed << '|' << r.n << '|'
            << fmt(r.beta) << '|' << fmt(r.tol_x) << '|' << r.iterations << '|' << to_string(r.status) << '|'
            << r.solved << '|' << fmt(r.final_residual) << '|' << fmt(r.rate_bound) << '|'
            << fmt(r.max_observed_contraction) << '|' << r.error << '\n';
    }
    return out.str();
}

std::string bench_aggregation(const VerifyConfig&, std::uint64_t seed, int i) {
    BenchConfig bc;
    bc.suite = static_cast<Suite>(i % 3);
    bc.dims = {10};
    bc.count = 4;
    bc.seed = seed;
    bc.repeats = 1;
    bc.starts = 3;
    bc.threads = 2;
    bc.beta_ranges = {{0.5, 1e3}, {1e6, 1e7}};
    const BenchResult a = run_bench(bc);
    const auto parsed = parse_bench_csv(a.csv());
    if (parsed.size() != a.records.size()) return "CSV row count differs";
    const auto again = summarize(bc.suite, parsed);
    if (again.size() != a.summaries.size()) return "summary group count differs";
    for (std::size_t k = 0; k < again.size(); ++k) {
        const auto& x = a.summaries[k];
        const auto& y = again[k];
        long sum = 0;
        for (const auto& r : a.records)
            if (r.group == x.group && r.tol_x == x.tol_x && r.solved) sum += r.iterations;
        if (x.total_iterations != sum || y.total_iterations != sum) return "total_iterations != record sum";
        auto same = [](double p, double q) { return (std::isnan(p) && std::isnan(q)) || std::abs(p - q) <= 1e-12 * (1 + std::abs(p)); };
        if (x.solved_count != y.solved_count || !same(x.mean_iterations, y.mean_iterations) ||
            !same(x.std_iterations, y.std_iterations) || !same(x.mean_of_problem_std, y.mean_of_problem_std)) {
            return "statistics not recomputable from CSV for " + x.group;
        }
    }
    if (without_runtime(parse_bench_csv(run_bench(bc).csv())) != without_runtime(parsed)) return "CSV not deterministic";
    return {};
}

// ---------------------------------------------------------------------------
// projection special case

std::string projection_identity(const VerifyConfig&, std::uint64_t seed, int i) {
    Rng rng(seed);
    const std::size_t n = 1 + i % 20;
    const Vector z = rng.uniform_vector(n, 1.0);
    const Vector y = project_onto_cone(DenseMatrix::identity(n), z);
    const double err = norm_inf(y - plus_part(z));
    if (err > 1e-12) return "|P(z) - z+| = " + fmt(err);
    return {};
}

std::string projection_oracle(const VerifyConfig& cfg, std::uint64_t seed, int i) {
    Rng rng(seed);
    const std::size_t n = oracle_dim(cfg, i);
    const DenseMatrix a = random_nonsingular(rng, n);
    const Vector z = rng.uniform_vector(n, 1.0);
    const QpProblem p = projection_problem(a, z);
    const OracleResult o = enumerate_solve(build_system(p));
    if (o.solutions.size() != 1) return std::to_string(o.solutions.size()) + " oracle solutions";
    const Vector want = a * plus_part(o.solutions.front().x);
    const Vector got = project_onto_cone(a, z);
    const double err = norm2(got - want);
    if (err > 1e-8 * (1.0 + norm2(z))) return "projection differs from oracle by " + fmt(err);
    // Certificate in the original coordinates: min ½‖y − z‖² over y ∈ A·ℝⁿ₊.
    const QpProblem direct(DenseMatrix::identity(n), -z, 0.5 * dot(z, z), a);
    const KktCertificate c = check_kkt(direct, got, 1e-8);
    if (!c.passed) {
        return "KKT failed: primal " + fmt(c.primal_feasibility) + " dual " + fmt(c.dual_feasibility) + " compl " +
               fmt(c.complementarity);
    }
    return {};
}

const std::vector<Property>& registry() {
    static const std::vector<Property> props = {
        {"plus_part_decomposition", [](const VerifyConfig& c) { return c.sweep; }, plus_part_decomposition},
        {"plus_part_nonexpansive", [](const VerifyConfig& c) { return 10 * c.sweep; }, plus_part_nonexpansive},
        {"pattern_identity", [](const VerifyConfig& c) { return c.sweep; }, pattern_identity},
        {"lu_round_trip", [](const VerifyConfig&) { return 20; }, lu_round_trip},
        {"cholesky_reconstruction", [](const VerifyConfig&) { return 20; }, cholesky_reconstruction},
        {"spectral_norm_diagonal", [](const VerifyConfig&) { return 100; }, spectral_norm_diagonal},
        {"serialization_round_trip", [](const VerifyConfig&) { return 24; }, serialization_round_trip},
        {"jacobian_identity", [](const VerifyConfig& c) { return c.sweep; }, jacobian_identity},
        {"reformulation_soundness", [](const VerifyConfig& c) { return c.instances; }, reformulation_soundness},
        {"lcp_equivalence", [](const VerifyConfig& c) { return c.oracle_count; }, lcp_equivalence},
        {"dual_cone", [](const VerifyConfig& c) { return c.sweep; }, dual_cone},
        {"jacobian_nonsingular", [](const VerifyConfig& c) { return c.sweep; }, nonsingularity},
        {"inverse_norm_bound", [](const VerifyConfig& c) { return c.sweep; }, inverse_norm_bound},
        {"perturbation_bound", [](const VerifyConfig& c) { return c.sweep; }, perturbation_bound},
        {"q_linear_rate", [](const VerifyConfig& c) { return c.instances; }, q_linear_rate},
        {"planted_solution", [](const VerifyConfig& c) { return c.instances; }, planted_solution},
        {"uniqueness_multistart", [](const VerifyConfig& c) { return std::max(1, c.instances / 4); },
         uniqueness_multistart},
        {"finite_termination", [](const VerifyConfig& c) { return c.instances; }, finite_termination},
        {"boundedness", [](const VerifyConfig& c) { return c.instances; }, boundedness},
        {"fixed_point_contraction", [](const VerifyConfig& c) { return c.sweep; }, fixed_point_contraction},
        {"newton_fixed_point", [](const VerifyConfig& c) { return c.oracle_count; }, newton_fixed_point},
        {"oracle_newton_agreement", [](const VerifyConfig& c) { return c.oracle_count; }, oracle_newton_agreement},
        {"oracle_kkt", [](const VerifyConfig& c) { return c.oracle_count; }, oracle_kkt},
        {"oracle_uniqueness", [](const VerifyConfig& c) { return c.oracle_count; }, oracle_uniqueness},
        {"beyond_hypothesis_agreement", [](const VerifyConfig& c) { return c.oracle_count; },
         beyond_hypothesis_agreement},
        {"norm_planting", [](const VerifyConfig& c) { return 2 * c.instances; }, norm_planting},
        {"instance_validity", [](const VerifyConfig& c) { return c.instances; }, instance_validity},
        {"generator_determinism", [](const VerifyConfig& c) { return std::max(1, c.instances / 4); }, determinism},
        {"bench_aggregation", [](const VerifyConfig&) { return 3; }, bench_aggregation},
        {"projection_identity", [](const VerifyConfig& c) { return c.sweep; }, projection_identity},
        {"projection_oracle", [](const VerifyConfig& c) { return c.oracle_count; }, projection_oracle},
    };
    return props;
}

}  // namespace

const std::vector<std::string>& property_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& p : registry()) v.emplace_back(p.name);
        return v;
    }();
    return names;
}

void VerifyConfig::validate() const {
    if (sweep < 1 || instances < 1 || oracle_count < 1 || n < 2) {
        throw Error(ErrorCode::InvalidArgument, "verify sizes must be positive (n >= 2)");
    }
    if (oracle_n < 2 || oracle_n > kOracleMaxDim) {
        throw Error(ErrorCode::InvalidArgument,
                    "oracle dimension must be in [2, " + std::to_string(kOracleMaxDim) + "], got " + std::to_string(oracle_n));
    }
    const auto& names = property_names();
    for (const auto& name : only) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw Error(ErrorCode::InvalidArgument, "unknown property '" + name + "'");
        }
    }
}

bool VerifyReport::passed() const noexcept {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.ok(); });
}

std::string VerifyReport::text() const {
    std::ostringstream out;
    int failed = 0;
    for (const auto& p : properties) {
        out << (p.ok() ? "PASS " : "FAIL ") << p.name << ' ' << p.passed << '/' << p.checks;
        if (!p.ok()) {
            ++failed;
            out << "  case seed " << *p.failing_seed << ": " << p.detail << "  (reproduce: verify --seed " << seed
                << " --only " << p.name << ')';
        }
        out << '\n';
    }
    out << properties.size() - static_cast<std::size_t>(failed) << '/' << properties.size() << " properties passed\n";
    return out.str();
}

VerifyReport run_verify(const VerifyConfig& cfg) {
    cfg.validate();
    VerifyReport report{cfg.seed, {}};
    const auto& props = registry();
    for (std::size_t k = 0; k < props.size(); ++k) {
        const Property& prop = props[k];
        if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), prop.name) == cfg.only.end()) continue;
        PropertyResult res;
        res.name = prop.name;
        const std::uint64_t base = mix_seed(cfg.seed, k);
        const int count = prop.count(cfg);
        for (int i = 0; i < count; ++i) {
            const std::uint64_t case_seed = mix_seed(base, static_cast<std::uint64_t>(i));
            std::string why;
            try {
                why = prop.check(cfg, case_seed, i);
            } catch (const std::exception& e) {
                why = e.what();
            }
            ++res.checks;
            if (why.empty()) {
                ++res.passed;
            } else if (!res.failing_seed) {
                res.failing_seed = case_seed;
                res.detail = why;
            }
        }
        report.properties.push_back(std::move(res));
    }
    return report;
}

}  // namespace sscqp
