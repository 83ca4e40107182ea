#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "error.hpp"

namespace sscqp {

const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::Newton: return "newton";
        case Method::FixedPoint: return "fixed_point";
    }
    return "unknown";
}

const char* to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::ConvergedResidual: return "ConvergedResidual";
        case SolveStatus::ConvergedKnownSolution: return "ConvergedKnownSolution";
        case SolveStatus::FiniteTermination: return "FiniteTermination";
        case SolveStatus::MaxIterations: return "MaxIterations";
    }
    return "Unknown";
}

void SolverConfig::validate() const {
    if (!(tol_x > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_x must be positive");
    if (!(tol_res > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_res must be positive");
    if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");
}

Vector newton_step(const SemiSmoothSystem& s, const Vector& x_k, double* smallest_pivot) {
    if (x_k.size() != s.dim()) throw Error(ErrorCode::InvalidArgument, "iterate dimension mismatch");
    const auto lu = LuFactorization::factor(jacobian_S(s, sign_pattern(x_k)));
    if (smallest_pivot) *smallest_pivot = lu.smallest_pivot();
    return lu.solve(-s.q());
}

Vector fixed_point_step(const SemiSmoothSystem& s, const Vector& x_k) {
    if (x_k.size() != s.dim()) throw Error(ErrorCode::InvalidArgument, "iterate dimension mismatch");
    Vector next = -(s.M() * plus_part(x_k));
    next -= s.q();
    return next;
}

SolveReport solve(const SemiSmoothSystem& s, const Vector& x0, const SolverConfig& cfg,
                  const std::optional<Vector>& known_solution) {
    cfg.validate();
    if (x0.size() != s.dim()) throw Error(ErrorCode::InvalidArgument, "starting point dimension mismatch");
    if (known_solution && known_solution->size() != s.dim()) {
        throw Error(ErrorCode::InvalidArgument, "known solution dimension mismatch");
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double res_bound = cfg.tol_res * (1.0 + norm2(s.q()));
    const double known_bound = known_solution ? cfg.tol_x * (1.0 + norm2(*known_solution)) : 0.0;

    std::vector<IterationRecord> trace;
    std::vector<double> contraction;
    std::unordered_map<std::uint64_t, std::vector<int>> seen;  // pattern hash -> iteration indices
    std::optional<SolveStatus> status;
    bool cycle = false;
    double prev_err = nan;

    Vector x = x0;
    double pivot = nan;
    for (int k = 0;; ++k) {
        SignPattern pattern = sign_pattern(x);
        const double rn = norm2(residual_F(s, x));
        trace.push_back({k, x, rn, pattern, pivot});

        if (known_solution) {
            const double err = norm2(*known_solution - x);
            if (cfg.track_rate && k > 0 && prev_err > 0.0) contraction.push_back(err / prev_err);
            prev_err = err;
            if (err < known_bound) {
                status = SolveStatus::ConvergedKnownSolution;
                break;
            }
        }
        if (rn <= res_bound) {
            status = SolveStatus::ConvergedResidual;
            break;
        }
        if (cfg.method == Method::Newton && k > 0) {
            if (pattern == trace[static_cast<std::size_t>(k - 1)].pattern) {
                status = SolveStatus::FiniteTermination;
                break;
            }
            // x_{k+1} depends only on the pattern of x_k, so an older match repeats forever.
            if (auto it = seen.find(pattern.hash()); it != seen.end()) {
                for (int j : it->second) {
                    if (trace[static_cast<std::size_t>(j)].pattern == pattern) cycle = true;
                }
                if (cycle) {
                    status = SolveStatus::MaxIterations;
                    break;
                }
            }
        }
        if (k == cfg.max_iter) {
            status = SolveStatus::MaxIterations;
            break;
        }
        seen[pattern.hash()].push_back(k);

        if (cfg.method == Method::Newton) {
            try {
                x = newton_step(s, x, &pivot);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::SingularMatrix) throw;
                throw Error(ErrorCode::SingularMatrix, "iteration " + std::to_string(k) + ": " + e.what());
            }
        } else {
            x = fixed_point_step(s, x);
        }
    }

    const IterationRecord& last = trace.back();
    SolveReport report{*status, last.k, last.x, last.residual_norm, std::move(trace), std::nullopt,
                       std::move(contraction), cycle};
    if (s.norm_M() < 1.0) report.rate_bound = s.norm_M() / (1.0 - s.norm_M());
    return report;
}

bool verify_rate(const SolveReport& report, const SemiSmoothSystem& s, const Vector& u) {
    if (s.norm_M() >= 0.5) {
        throw Error(ErrorCode::PreconditionViolated, "rate bound requires ||M|| < 1/2 (got " +
                                                         std::to_string(s.norm_M()) + ")");
    }
    const double rho = s.norm_M() / (1.0 - s.norm_M());
    const double slack = 1e-10 * (1.0 + norm2(u));
    for (std::size_t k = 0; k + 1 < report.trace.size(); ++k) {
        const double before = norm2(u - report.trace[k].x);
        const double after = norm2(u - report.trace[k + 1].x);
        if (after > rho * before + slack) return false;
    }
    return true;
}

double inverse_jacobian_norm(const SemiSmoothSystem& s, const Vector& x) {
    // Exact 1/σ_min; power iteration on S⁻ᵀS⁻¹ stalls when the two smallest
    // singular values nearly coincide.
    const SvdResult svd = jacobi_svd(jacobian_S(s, sign_pattern(x)));
    return 1.0 / *std::min_element(svd.sigma.span().begin(), svd.sigma.span().end());
}

bool inverse_norm_bound_check(const SemiSmoothSystem& s, const Vector& x) {
    if (s.norm_M() >= 1.0) {
        throw Error(ErrorCode::PreconditionViolated, "inverse bound requires ||M|| < 1 (got " +
                                                         std::to_string(s.norm_M()) + ")");
    }
    return inverse_jacobian_norm(s, x) <= 1.0 / (1.0 - s.norm_M()) + 1e-8;
}

bool perturbation_bound_check(const SemiSmoothSystem& s, const Vector& x, const Vector& y) {
    const SignPattern py = sign_pattern(y);
    const DenseMatrix sy = jacobian_S(s, py);
    const double jump = spectral_norm(jacobian_S(s, sign_pattern(x)) - sy);
    if (jump > s.norm_M() + 1e-10) return false;

    const Vector d = x - y;
    Vector lin = residual_F(s, x);
    lin -= residual_F(s, y);
    lin -= sy * d;
    const double nd = norm2(d);
    return norm2(lin) <= s.norm_M() * nd + 1e-10 * (1.0 + nd);
}

Vector principal_pivot_solve(const SemiSmoothSystem& s, SignPattern start, int max_pivots) {
    const std::size_t n = s.dim();
    if (start.size() != n) throw Error(ErrorCode::InvalidArgument, "pattern dimension mismatch");
    if (max_pivots < 0) throw Error(ErrorCode::InvalidArgument, "max_pivots must be nonnegative");
    const Vector neg_q = -s.q();
    std::vector<std::uint8_t> bits = start.bits();
    for (int pivot = 0; pivot <= max_pivots; ++pivot) {
        const SignPattern p(bits);
        const Vector x = LuFactorization::factor(jacobian_S(s, p)).solve(neg_q);
        // Components within rounding of 0 are consistent with either side.
        const double eps = 1e-14 * (1.0 + norm_inf(x));
        std::size_t bad = n;
        for (std::size_t i = 0; i < n && bad == n; ++i) {
            if (p[i] ? x[i] < -eps : x[i] > eps) bad = i;
        }
        if (bad == n) return x;
        bits[bad] ^= 1U;
    }
    throw Error(ErrorCode::NoConvergence, "principal pivoting exceeded " + std::to_string(max_pivots) + " pivots");
}

Vector project_onto_cone(const DenseMatrix& a, const Vector& z, const SolverConfig& cfg, bool* pivoted) {
    const QpProblem p = projection_problem(a, z);
    const SemiSmoothSystem s = build_system(p);
    const SolveReport report = solve(s, Vector(z.size()), cfg);
    if (pivoted != nullptr) *pivoted = report.status == SolveStatus::MaxIterations;
    if (report.status != SolveStatus::MaxIterations) return a * plus_part(report.final_x);
    return a * plus_part(principal_pivot_solve(s, sign_pattern(report.final_x)));
}

}  // namespace sscqp
