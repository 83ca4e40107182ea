// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Thresholds are fixed here; sizes are the full ones, not the quick verify defaults.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bench.hpp"
#include "error.hpp"
#include "generator.hpp"
#include "oracle.hpp"
#include "solver.hpp"

using namespace sscqp;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s C%d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const BenchSummary* find(const BenchResult& r, const std::string& group, double tol) {
    for (const auto& s : r.summaries)
        if (s.group == group && s.tol_x == tol) return &s;
    return nullptr;
}

// Shared regime-1 batch: n = 100, β ~ U(0, 1/2).
const std::vector<GeneratedInstance>& regime1() {
    static const std::vector<GeneratedInstance> batch = generate_batch(InstanceSpec{100, 0.0, 0.5, kSeed, 1e6}, 100);
    return batch;
}

Outcome c1_convergence() {
    SolverConfig cfg;
    cfg.tol_x = 1e-10;
    cfg.max_iter = 100;
    int ok = 0;
    for (const auto& g : regime1()) {
        if (solve(build_system(g.problem), g.x0, cfg, g.u).status == SolveStatus::ConvergedKnownSolution) ++ok;
    }
    return {ok == 100, fmt("%.0f/100 converged at tol_x 1e-10", ok)};
}

Outcome c2_iterations() {
    BenchConfig cfg;
    cfg.suite = Suite::Table1;
    cfg.dims = {100};
    cfg.count = 100;
    cfg.repeats = 1;
    cfg.seed = kSeed;
    const BenchResult r = run_bench(cfg);
    bool pass = true;
    std::string detail;
    for (double tol : cfg.tols) {
        const BenchSummary* s = find(r, "n=100", tol);
        if (s == nullptr || s->solved_count == 0) return {false, "missing summary"};
        const double mean = static_cast<double>(s->total_iterations) / s->solved_count;
        pass = pass && mean >= 2.0 && mean <= 4.0;
        detail += fmt("tol %g mean %.3f (total %.0f) ", tol, mean, static_cast<double>(s->total_iterations));
    }
    return {pass, detail + "band [2,4]"};
}

Outcome c3_starts() {
    BenchConfig cfg;
    cfg.suite = Suite::Table2;
    cfg.dims = {100};
    cfg.count = 50;
    cfg.starts = 50;
    cfg.tols = {1e-6};
    cfg.repeats = 1;
    cfg.seed = kSeed;
    const BenchResult r = run_bench(cfg);
    const BenchSummary* s = find(r, "n=100", 1e-6);
    if (s == nullptr) return {false, "missing summary"};
    const bool pass = s->mean_of_problem_std <= 0.6 && s->solved_count == s->group_size && s->group_size == 2500;
    return {pass, fmt("MEAN(std) %.3f (<= 0.6), MEAN(mean) %.3f, solved %.0f/2500", s->mean_of_problem_std,
                      s->mean_of_problem_mean, s->solved_count)};
}

Outcome c4_rate() {
    SolverConfig cfg;
    cfg.tol_x = 1e-10;
    long steps = 0, violations = 0;
    for (std::size_t i = 0; i < regime1().size(); ++i) {
        const GeneratedInstance& g = regime1()[i];
        const SemiSmoothSystem s = build_system(g.problem);
        Rng rng(mix_seed(kSeed + 4, i));
        const double tol = 1e-10 * (1 + norm2(g.u));
        for (int start = 0; start < 40; ++start) {
            const Vector x0 = start == 0 ? g.x0 : rng.uniform_vector(s.dim(), 1e6);
            const SolveReport r = solve(s, x0, cfg, g.u);
            if (!r.rate_bound) return {false, "no rate bound for a regime-1 instance"};
            for (std::size_t k = 0; k + 1 < r.trace.size(); ++k) {
                ++steps;
                if (norm2(g.u - r.trace[k + 1].x) > *r.rate_bound * norm2(g.u - r.trace[k].x) + tol) ++violations;
            }
        }
    }
    return {violations == 0 && steps >= 10000,
            fmt("%.0f violations over %.0f steps (need 0 over >= 10000)", violations, steps)};
}

Outcome c5_oracle() {
    int agree = 0, unique = 0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 2 + i % 7;
        const GeneratedInstance g = generate(InstanceSpec{n, 0.0, 0.5, mix_seed(kSeed + 5, i), 1e6});
        const SemiSmoothSystem s = build_system(g.problem);
        const OracleResult o = enumerate_solve(s);
        if (o.solutions.size() != 1) continue;
        ++unique;
        const Vector& u = o.solutions.front().x;
        const SolveReport r = solve(s, g.x0, SolverConfig{});
        if (r.converged() && norm2(r.final_x - u) <= 1e-8 * (1 + norm2(u))) ++agree;
    }
    return {agree == 500 && unique == 500, fmt("%.0f/500 unique oracle solutions, %.0f/500 agree", unique, agree)};
}

Outcome c6_nonsingular() {
    static const BetaRange ranges[] = {{0.0, 0.5}, {0.5, 1e1}, {1e1, 1e3}, {1e3, 1e5}, {1e5, 1e6}};
    int pairs = 0, singular = 0;
    for (int i = 0; i < 500; ++i) {
        const BetaRange& br = ranges[i % 5];
        const std::size_t n = 2 + i % 29;
        const GeneratedInstance g = generate(InstanceSpec{n, br.lb, br.ub, mix_seed(kSeed + 6, i), 1e6});
        const SemiSmoothSystem s = build_system(g.problem);
        Rng rng(mix_seed(kSeed + 60, i));
        for (int j = 0; j < 20; ++j) {
            ++pairs;
            try {
                (void)LuFactorization::factor(jacobian_S(s, sign_pattern(rng.uniform_vector(n, 1.0))));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::SingularMatrix) throw;
                ++singular;
            }
        }
    }
    return {singular == 0 && pairs == 10000, fmt("%.0f singular over %.0f pairs, beta up to 1e6", singular, pairs)};
}

Outcome c7_bounds() {
    int inv_ok = 0, pert_ok = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 2 + i % 19;
        const GeneratedInstance g = generate(InstanceSpec{n, 0.0, 0.5, mix_seed(kSeed + 7, i), 1e6});
        const SemiSmoothSystem s = build_system(g.problem);
        Rng rng(mix_seed(kSeed + 70, i));
        if (inverse_norm_bound_check(s, rng.uniform_vector(n, 1.0))) ++inv_ok;
        const Vector x = rng.uniform_vector(n, 1e6);
        if (perturbation_bound_check(s, x, rng.uniform_vector(n, 1e6))) ++pert_ok;
    }
    return {inv_ok == 1000 && pert_ok == 1000, fmt("inverse %.0f/1000, perturbation %.0f/1000", inv_ok, pert_ok)};
}

Outcome c8_finite_termination() {
    SolverConfig cfg;
    cfg.tol_res = 1e-300;  // only the repeated pattern can stop the run
    int runs = 0, ok = 0;
    for (const auto& g : regime1()) {
        const SemiSmoothSystem s = build_system(g.problem);
        const SolveReport r = solve(s, g.x0, cfg);
        if (!r.converged()) continue;
        ++runs;
        if (r.status == SolveStatus::FiniteTermination && r.final_residual_norm <= 1e-10 * (1 + norm2(s.q()))) ++ok;
    }
    return {runs == 100 && ok == runs, fmt("%.0f/%.0f converged runs end on a repeated pattern with residual <= 1e-10(1+|q|)",
                                           ok, runs)};
}

Outcome c9_beyond() {
    BenchConfig cfg;
    cfg.suite = Suite::Table3;
    cfg.dims = {50};
    cfg.count = 200;
    cfg.repeats = 1;
    cfg.seed = kSeed;
    cfg.tols = {1e-6, 1e-10};
    cfg.beta_ranges = {{0.5, 1e3}, {1e6, 1e7}};
    const BenchResult r = run_bench(cfg);
    const BenchSummary* low = find(r, "[0.5,1000)", 1e-6);
    const BenchSummary* high = find(r, "[1e+06,1e+07)", 1e-10);
    if (low == nullptr || high == nullptr) return {false, "missing summary"};
    const double low_frac = static_cast<double>(low->solved_count) / low->group_size;
    const double high_frac = static_cast<double>(high->solved_count) / high->group_size;
    const bool pass = low_frac >= 0.95 && low->mean_iterations <= 10.0 && high_frac <= 0.10;
    return {pass, fmt("[0.5,1e3) solved %.3f mean %.3f; ", low_frac, low->mean_iterations) +
                      fmt("[1e6,1e7) at 1e-10 solved %.3f (need >= 0.95, <= 10, <= 0.10)", high_frac)};
}

Outcome c10_projection() {
    Rng rng(kSeed + 10);
    int identity_ok = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vector z = rng.uniform_vector(1 + i % 50, 1.0);
        if (norm_inf(project_onto_cone(DenseMatrix::identity(z.size()), z) - plus_part(z)) <= 1e-12) ++identity_ok;
    }
    int general = 0, general_ok = 0, pivoted_count = 0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 2 + i % 7;
        DenseMatrix a = rng.uniform_matrix(n, n, 1.0);
        try {
            if (LuFactorization::factor(a).smallest_pivot() < 1e-3) continue;
        } catch (const Error&) {
            continue;
        }
        ++general;
        const Vector z = rng.uniform_vector(n, 1.0);
        const OracleResult o = enumerate_solve(build_system(projection_problem(a, z)));
        if (o.solutions.size() != 1) continue;
        const Vector want = a * plus_part(o.solutions.front().x);
        bool pivoted = false;
        const Vector got = project_onto_cone(a, z, SolverConfig{}, &pivoted);
        if (pivoted) ++pivoted_count;
        const QpProblem direct(DenseMatrix::identity(n), -z, 0.5 * dot(z, z), a);
        if (norm2(got - want) <= 1e-8 * (1 + norm2(z)) && check_kkt(direct, got, 1e-8).passed) ++general_ok;
    }
    return {identity_ok == 1000 && general_ok == general && general > 0,
            fmt("A=I %.0f/1000 within 1e-12; random A %.0f/%.0f match oracle and pass KKT", identity_ok, general_ok,
                general) +
                fmt(" (%.0f finished by pivoting after a Newton cycle)", pivoted_count)};
}

}  // namespace

int main() {
    report(1, "regime1_convergence", c1_convergence);
    report(2, "iteration_counts", c2_iterations);
    report(3, "start_robustness", c3_starts);
    report(4, "q_linear_rate", c4_rate);
    report(5, "oracle_equivalence", c5_oracle);
    report(6, "nonsingularity_sweep", c6_nonsingular);
    report(7, "bound_sweeps", c7_bounds);
    report(8, "finite_termination", c8_finite_termination);
    report(9, "beyond_hypothesis", c9_beyond);
    report(10, "projection", c10_projection);
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
