#pragma once

// Cone-constrained QP
//
//     minimize ½ xᵀQx + bᵀx + c   subject to x ∈ A·ℝⁿ₊
//
// and its equivalent nonsmooth equation F(x) = M·x⁺ + x + q = 0 with
// M = AᵀQA − I and q = Aᵀb. A zero u of F maps to the QP solution A·u⁺.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace sscqp {

class QpProblem {
public:
    /// Validates the invariants and throws InvalidProblem naming the first
    /// violated one ("Q not symmetric", "Q not positive definite", "A singular", ...).
    QpProblem(DenseMatrix q, Vector b, double c, DenseMatrix a);

    [[nodiscard]] std::size_t dim() const noexcept { return b_.size(); }
    [[nodiscard]] const DenseMatrix& Q() const noexcept { return q_; }
    [[nodiscard]] const Vector& b() const noexcept { return b_; }
    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] const DenseMatrix& A() const noexcept { return a_; }

    [[nodiscard]] const CholeskyFactorization& q_factor() const noexcept { return *q_chol_; }
    [[nodiscard]] const LuFactorization& a_factor() const noexcept { return *a_lu_; }

    /// ½ yᵀQy + bᵀy + c
    [[nodiscard]] double objective(const Vector& y) const;

private:
    DenseMatrix q_;
    Vector b_;
    double c_;
    DenseMatrix a_;
    std::shared_ptr<const CholeskyFactorization> q_chol_;
    std::shared_ptr<const LuFactorization> a_lu_;
};

class SemiSmoothSystem {
public:
    /// Direct construction from M (symmetric) and q; `source()` is empty.
    SemiSmoothSystem(DenseMatrix m, Vector q);

    [[nodiscard]] std::size_t dim() const noexcept { return q_.size(); }
    [[nodiscard]] const DenseMatrix& M() const noexcept { return m_; }
    [[nodiscard]] const Vector& q() const noexcept { return q_; }
    [[nodiscard]] double norm_M() const noexcept { return norm_m_; }
    [[nodiscard]] const std::shared_ptr<const QpProblem>& source() const noexcept { return source_; }

private:
    friend SemiSmoothSystem build_system(const QpProblem& p);
    SemiSmoothSystem(DenseMatrix m, Vector q, std::shared_ptr<const QpProblem> source);

    DenseMatrix m_;
    Vector q_;
    double norm_m_;
    std::shared_ptr<const QpProblem> source_;
};

struct KktCertificate {
    double primal_feasibility;  ///< min_i (A⁻¹y)_i
    double dual_feasibility;    ///< min_i (Aᵀ∇φ(y))_i
    double complementarity;     ///< |⟨∇φ(y), y⟩|
    bool passed;
};

SemiSmoothSystem build_system(const QpProblem& p);

/// M·x⁺ + x + q
Vector residual_F(const SemiSmoothSystem& s, const Vector& x);

/// M·diag(pattern) + I, the generalized Jacobian element used by Newton.
DenseMatrix jacobian_S(const SemiSmoothSystem& s, const SignPattern& pattern);

/// Projection of z onto A·ℝⁿ₊ in orthant form: Q = AᵀA, b = −Aᵀz, c = zᵀz/2
/// over ℝⁿ₊ (identity generator). If v solves it, A·v is the projection.
/// Throws SingularMatrix if A is singular.
QpProblem projection_problem(const DenseMatrix& a, const Vector& z);

/// A·u⁺
Vector recover_qp_solution(const QpProblem& p, const Vector& u);

KktCertificate check_kkt(const QpProblem& p, const Vector& y, double tol);

/// LCP residual for the orthant form (Q̃ = AᵀQA, b̃ = Aᵀb):
/// max(‖y − Q̃x − b̃‖∞, ‖min(x,0)‖∞, ‖min(y,0)‖∞, |⟨x,y⟩|).
double lcp_residual(const QpProblem& p, const Vector& x, const Vector& y);

// ---------------------------------------------------------------------------
// Problem files

struct ProblemFile {
    QpProblem problem;
    std::optional<Vector> x0;
    std::optional<Vector> u;
    /// Written as `# ...` lines after the header; ignored on read.
    std::vector<std::string> comments;
};

ProblemFile parse_problem(const std::string& text);
std::string format_problem(const ProblemFile& file);

ProblemFile read_problem(const std::string& path);
void write_problem(const ProblemFile& file, const std::string& path);

/// 17 significant digits, shortest exponent form.
std::string format_real(double v);

}  // namespace sscqp
