#include <gtest/gtest.h>

#include <cmath>

#include "error.hpp"
#include "generator.hpp"
#include "oracle.hpp"
#include "solver.hpp"

using namespace sscqp;

namespace {

SemiSmoothSystem zero_m() { return SemiSmoothSystem(DenseMatrix(2, 2), Vector{1, -2}); }
SemiSmoothSystem diag04() { return SemiSmoothSystem(DenseMatrix::diagonal(Vector{0.4, 0.4}), Vector{1, -1}); }

}  // namespace

TEST(NewtonStep, ZeroMSolvesInOneStep) {
    for (const Vector& x : {Vector{5, 5}, Vector{-1, 3}, Vector(2)}) {
        EXPECT_EQ(newton_step(zero_m(), x), (Vector{-1, 2}));
    }
}

TEST(NewtonStep, DiagonalSystem) {
    const Vector x = newton_step(diag04(), Vector{1, 1});
    EXPECT_NEAR(x[0], -5.0 / 7.0, 1e-15);
    EXPECT_NEAR(x[1], 5.0 / 7.0, 1e-15);
}

TEST(NewtonStep, OracleSolutionIsFixed) {
    const GeneratedInstance g = generate(InstanceSpec{6, 0.0, 0.5, 40, 1.0});
    const SemiSmoothSystem s = build_system(g.problem);
    const Vector u = enumerate_solve(s).solutions.at(0).x;
    EXPECT_LE(norm2(newton_step(s, u) - u), 1e-12 * (1 + norm2(u)));
}

TEST(FixedPointStep, TrivialCases) {
    EXPECT_EQ(fixed_point_step(zero_m(), Vector{7, -7}), (Vector{-1, 2}));
    const Vector u{-1, 5.0 / 7.0};
    EXPECT_LE(norm2(fixed_point_step(diag04(), u) - u), 1e-15);
}

TEST(FixedPointStep, ContractsTowardOracleSolution) {
    const SemiSmoothSystem s = diag04();
    const Vector u = enumerate_solve(s).solutions.at(0).x;
    const Vector x1 = fixed_point_step(s, Vector(2));
    const Vector x2 = fixed_point_step(s, x1);
    EXPECT_EQ(x1, (Vector{-1, 1}));
    EXPECT_NEAR(x2[0], -1.0, 1e-15);
    EXPECT_NEAR(x2[1], 0.6, 1e-15);
    EXPECT_LE(norm2(x2 - u), 0.4 * norm2(x1 - u) + 1e-15);
}

TEST(Solve, ZeroMTerminatesAfterOneStep) {
    const SolveReport r = solve(zero_m(), Vector{3, 3}, SolverConfig{});
    EXPECT_EQ(r.iterations, 1);
    EXPECT_TRUE(r.status == SolveStatus::ConvergedResidual || r.status == SolveStatus::FiniteTermination);
    EXPECT_EQ(r.final_x, (Vector{-1, 2}));
    ASSERT_TRUE(r.rate_bound.has_value());
    EXPECT_EQ(*r.rate_bound, 0.0);
}

TEST(Solve, TraceRecordsStartAndPivots) {
    const SolveReport r = solve(diag04(), Vector{1, 1}, SolverConfig{});
    ASSERT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations) + 1);
    EXPECT_EQ(r.trace[0].k, 0);
    EXPECT_TRUE(std::isnan(r.trace[0].smallest_pivot));
    EXPECT_GT(r.trace[1].smallest_pivot, 0.0);
    EXPECT_NEAR(r.final_x[1], 5.0 / 7.0, 1e-15);
}

TEST(Solve, GeneratedInstanceIterationCount) {
    // ‖M‖ < 1/2 at n = 100 typically needs two or three steps.
    const GeneratedInstance g = generate(InstanceSpec{100, 0.0, 0.5, 41, 1e6});
    SolverConfig cfg;
    cfg.tol_x = 1e-6;
    const SolveReport r = solve(build_system(g.problem), g.x0, cfg, g.u);
    EXPECT_EQ(r.status, SolveStatus::ConvergedKnownSolution);
    EXPECT_LE(r.iterations, 4);
}

TEST(Solve, FixedPointMethodContracts) {
    const GeneratedInstance g = generate(InstanceSpec{6, 0.4, 0.4 + 1e-12, 42, 1.0});
    const SemiSmoothSystem s = build_system(g.problem);
    const Vector u = enumerate_solve(s).solutions.at(0).x;
    SolverConfig cfg;
    cfg.method = Method::FixedPoint;
    cfg.max_iter = 200;
    const SolveReport r = solve(s, g.x0, cfg, u);
    EXPECT_TRUE(r.converged());
    for (std::size_t k = 0; k + 1 < r.trace.size(); ++k) {
        EXPECT_LE(norm2(r.trace[k + 1].x - u), 0.4 * norm2(r.trace[k].x - u) + 1e-12 * (1 + norm2(u)));
    }
}

TEST(Solve, FiniteTerminationIsExact) {
    const GeneratedInstance g = generate(InstanceSpec{30, 0.0, 0.5, 43, 1e6});
    const SemiSmoothSystem s = build_system(g.problem);
    SolverConfig cfg;
    cfg.tol_res = 1e-300;
    const SolveReport r = solve(s, g.x0, cfg);
    EXPECT_EQ(r.status, SolveStatus::FiniteTermination);
    const std::size_t last = r.trace.size() - 1;
    EXPECT_EQ(r.trace[last].pattern, r.trace[last - 1].pattern);
    EXPECT_LE(r.final_residual_norm, 1e-10 * (1 + norm2(s.q())));
}

TEST(Solve, StartingAtSolutionTakesAtMostOneStep) {
    const GeneratedInstance g = generate(InstanceSpec{7, 0.0, 0.5, 44, 1e6});
    const SemiSmoothSystem s = build_system(g.problem);
    const Vector u = enumerate_solve(s).solutions.at(0).x;
    EXPECT_LE(solve(s, u, SolverConfig{}).iterations, 1);
}

TEST(Solve, MaxIterationsReported) {
    const GeneratedInstance g = generate(InstanceSpec{30, 0.0, 0.5, 45, 1e6});
    SolverConfig cfg;
    cfg.max_iter = 1;
    cfg.tol_x = 1e-300;
    cfg.tol_res = 1e-300;
    const SolveReport r = solve(build_system(g.problem), g.x0, cfg, g.u);
    EXPECT_EQ(r.status, SolveStatus::MaxIterations);
    EXPECT_FALSE(r.converged());
}

TEST(Solve, RejectsBadConfig) {
    SolverConfig cfg;
    cfg.max_iter = 0;
    EXPECT_THROW(solve(zero_m(), Vector(2), cfg), Error);
    EXPECT_THROW(solve(zero_m(), Vector(3), SolverConfig{}), Error);
}

TEST(VerifyRate, TrivialAndNegativeControl) {
    const SolveReport r = solve(zero_m(), Vector{4, 4}, SolverConfig{});
    EXPECT_TRUE(verify_rate(r, zero_m(), Vector{-1, 2}));

    SolveReport fake = r;
    fake.trace = {{0, Vector{-1, 2.5}, 0.0, SignPattern({0, 1}), NAN}, {1, Vector{-1, 4}, 0.0, SignPattern({0, 1}), 1.0}};
    EXPECT_FALSE(verify_rate(fake, zero_m(), Vector{-1, 2}));

    const SemiSmoothSystem big(DenseMatrix::diagonal(Vector{0.6, 0.0}), Vector{1, 1});
    EXPECT_THROW(verify_rate(r, big, Vector{-1, 2}), Error);
}

TEST(VerifyRate, GeneratedInstanceBeta03) {
    const GeneratedInstance g = generate(InstanceSpec{50, 0.3, 0.3 + 1e-12, 46, 1e6});
    const SemiSmoothSystem s = build_system(g.problem);
    SolverConfig cfg;
    cfg.tol_x = 1e-10;
    const SolveReport r = solve(s, g.x0, cfg, g.u);
    ASSERT_TRUE(r.rate_bound.has_value());
    EXPECT_NEAR(*r.rate_bound, 3.0 / 7.0, 1e-8);
    EXPECT_TRUE(verify_rate(r, s, g.u));
}

TEST(InverseBound, TrivialCases) {
    EXPECT_TRUE(inverse_norm_bound_check(zero_m(), Vector{1, 1}));
    EXPECT_NEAR(inverse_jacobian_norm(zero_m(), Vector{1, 1}), 1.0, 1e-12);
    const SemiSmoothSystem d(DenseMatrix::diagonal(Vector{0.4, -0.4}), Vector{0, 0});
    EXPECT_NEAR(inverse_jacobian_norm(d, Vector{1, 1}), 1.0 / 0.6, 1e-12);
    EXPECT_TRUE(inverse_norm_bound_check(d, Vector{1, 1}));
}

TEST(InverseBound, RandomSweep) {
    Rng rng(47);
    for (int t = 0; t < 200; ++t) {
        const GeneratedInstance g = generate(InstanceSpec{2 + static_cast<std::size_t>(t % 11), 0.0, 0.5,
                                                          mix_seed(47, t), 1e6});
        const SemiSmoothSystem s = build_system(g.problem);
        EXPECT_TRUE(inverse_norm_bound_check(s, rng.uniform_vector(s.dim(), 1.0))) << "case " << t;
    }
}

TEST(PerturbationBound, TrivialCases) {
    EXPECT_TRUE(perturbation_bound_check(diag04(), Vector{1, -1}, Vector{1, -1}));
    EXPECT_TRUE(perturbation_bound_check(zero_m(), Vector{1, -1}, Vector{-3, 2}));
}

TEST(PerturbationBound, RandomSweep) {
    Rng rng(48);
    for (int t = 0; t < 200; ++t) {
        const GeneratedInstance g =
            generate(InstanceSpec{2 + static_cast<std::size_t>(t % 11), 0.0, 5.0, mix_seed(48, t), 1.0});
        const SemiSmoothSystem s = build_system(g.problem);
        EXPECT_TRUE(perturbation_bound_check(s, rng.uniform_vector(s.dim(), 1.0), rng.uniform_vector(s.dim(), 1.0)));
    }
}

TEST(ProjectOntoCone, IdentityGivesPlusPart) {
    Rng rng(49);
    for (int t = 0; t < 100; ++t) {
        const Vector z = rng.uniform_vector(1 + t % 9, 10.0);
        EXPECT_LE(norm_inf(project_onto_cone(DenseMatrix::identity(z.size()), z) - plus_part(z)), 1e-12);
    }
}

TEST(PrincipalPivot, MatchesOracleFromAnyStart) {
    Rng rng(50);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + t % 7;
        const GeneratedInstance g = generate(InstanceSpec{n, 0.5, 20.0, mix_seed(50, t), 1.0});
        const SemiSmoothSystem s = build_system(g.problem);
        const Vector u = enumerate_solve(s).solutions.at(0).x;
        const Vector x = principal_pivot_solve(s, sign_pattern(rng.uniform_vector(n, 1.0)));
        EXPECT_LE(norm2(x - u), 1e-8 * (1 + norm2(u))) << "case " << t;
    }
}

TEST(PrincipalPivot, RejectsBadInput) {
    EXPECT_THROW(principal_pivot_solve(zero_m(), SignPattern({1})), Error);
    EXPECT_THROW(principal_pivot_solve(zero_m(), SignPattern({1, 1}), -1), Error);
    EXPECT_EQ(principal_pivot_solve(zero_m(), SignPattern({1, 0})), (Vector{-1, 2}));
}

TEST(ProjectOntoCone, NewtonCycleFinishedByPivoting) {
    // Random A with ‖AᵀA − I‖ well above 1/2; some of these make plain Newton cycle.
    Rng rng(51);
    int pivoted_total = 0;
    for (int t = 0; t < 3000; ++t) {
        const std::size_t n = 2 + t % 7;
        const DenseMatrix a = rng.uniform_matrix(n, n, 1.0);
        const Vector z = rng.uniform_vector(n, 1.0);
        try {
            if (LuFactorization::factor(a).smallest_pivot() < 1e-3) continue;
        } catch (const Error&) {
            continue;
        }
        bool pivoted = false;
        const Vector got = project_onto_cone(a, z, SolverConfig{}, &pivoted);
        if (!pivoted) continue;
        ++pivoted_total;
        const Vector want = a * plus_part(enumerate_solve(build_system(projection_problem(a, z))).solutions.at(0).x);
        EXPECT_LE(norm2(got - want), 1e-8 * (1 + norm2(z))) << "case " << t;
    }
    EXPECT_GT(pivoted_total, 0);
}
