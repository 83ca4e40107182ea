#pragma once

// Semi-smooth Newton iteration x_{k+1} = −S(x_k)⁻¹·q and the fixed-point
// iteration x_{k+1} = −M·x_k⁺ − q for F(x) = M·x⁺ + x + q = 0.

#include <optional>
#include <vector>

#include "linalg.hpp"
#include "qp_model.hpp"

namespace sscqp {

enum class Method { Newton, FixedPoint };

enum class SolveStatus { ConvergedResidual, ConvergedKnownSolution, FiniteTermination, MaxIterations };

const char* to_string(Method m) noexcept;
const char* to_string(SolveStatus s) noexcept;

struct SolverConfig {
    double tol_x = 1e-6;     ///< ‖u − x_k‖ < tol_x·(1 + ‖u‖) when u is known
    double tol_res = 1e-12;  ///< ‖F(x_k)‖ ≤ tol_res·(1 + ‖q‖)
    int max_iter = 100;
    Method method = Method::Newton;
    bool track_rate = true;

    /// Throws InvalidArgument unless tol_x, tol_res > 0 and max_iter ≥ 1.
    void validate() const;
};

struct IterationRecord {
    int k;
    Vector x;
    double residual_norm;
    SignPattern pattern;
    /// Smallest LU pivot of the Jacobian that produced x; NaN for x_0 and
    /// for fixed-point iterates.
    double smallest_pivot;
};

struct SolveReport {
    SolveStatus status;
    int iterations;
    Vector final_x;
    double final_residual_norm;
    std::vector<IterationRecord> trace;
    std::optional<double> rate_bound;          ///< ‖M‖/(1 − ‖M‖) when ‖M‖ < 1
    std::vector<double> contraction_observed;  ///< ‖u − x_{k+1}‖/‖u − x_k‖
    bool cycle_detected = false;

    [[nodiscard]] bool converged() const noexcept { return status != SolveStatus::MaxIterations; }
};

/// Solves S(x_k)·x_{k+1} = −q. Throws SingularMatrix if the factorization fails.
Vector newton_step(const SemiSmoothSystem& s, const Vector& x_k, double* smallest_pivot = nullptr);

/// −M·x_k⁺ − q
Vector fixed_point_step(const SemiSmoothSystem& s, const Vector& x_k);

/// Runs the configured iteration from x0. Each iterate is tested, in order, for
/// (a) the known-solution criterion, (b) the residual criterion, (c) a sign
/// pattern equal to its predecessor's (Newton only; the iterate is then exact)
/// and (d) the iteration cap. A pattern that reappears after two or more
/// steps means the Newton sequence is periodic; that stops the run with
/// MaxIterations and `cycle_detected`.
SolveReport solve(const SemiSmoothSystem& s, const Vector& x0, const SolverConfig& cfg,
                  const std::optional<Vector>& known_solution = std::nullopt);

/// Every recorded step satisfies ‖u − x_{k+1}‖ ≤ ρ‖u − x_k‖ + 1e-10(1 + ‖u‖)
/// with ρ = ‖M‖/(1 − ‖M‖). Throws PreconditionViolated when ‖M‖ ≥ 1/2.
bool verify_rate(const SolveReport& report, const SemiSmoothSystem& s, const Vector& u);

/// ‖S(x)⁻¹‖ ≤ 1/(1 − ‖M‖) + 1e-8. Throws PreconditionViolated when ‖M‖ ≥ 1.
bool inverse_norm_bound_check(const SemiSmoothSystem& s, const Vector& x);

/// Spectral norm of S(x)⁻¹, i.e. 1/σ_min(S(x)).
double inverse_jacobian_norm(const SemiSmoothSystem& s, const Vector& x);

/// ‖S(x) − S(y)‖ ≤ ‖M‖ + 1e-10 and
/// ‖F(x) − F(y) − S(y)(x − y)‖ ≤ ‖M‖‖x − y‖ + 1e-10(1 + ‖x − y‖).
bool perturbation_bound_check(const SemiSmoothSystem& s, const Vector& x, const Vector& y);

/// Least-index principal pivoting over sign patterns: solve S_P·x = −q, flip
/// the first index whose sign disagrees with P, repeat. Finite whenever M + I
/// is a P-matrix, which holds for every build_system output (M + I = AᵀQA).
/// Throws NoConvergence after max_pivots flips.
Vector principal_pivot_solve(const SemiSmoothSystem& s, SignPattern start, int max_pivots = 100000);

/// Projection of z onto A·ℝⁿ₊ by Newton on the orthant form, starting at 0.
/// If Newton cycles (possible once ‖AᵀA − I‖ ≥ 1/2) the run is finished by
/// principal_pivot_solve from the last pattern; *pivoted reports that.
Vector project_onto_cone(const DenseMatrix& a, const Vector& z, const SolverConfig& cfg = {},
                         bool* pivoted = nullptr);

}  // namespace sscqp
