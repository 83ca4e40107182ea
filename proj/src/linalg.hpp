#pragma once

// Dense real linear algebra used throughout the solver: vectors, column-major
// matrices, LU with partial pivoting, Cholesky, and power-iteration norms.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace sscqp {

class Vector {
public:
    explicit Vector(std::size_t n, double fill = 0.0);
    Vector(std::initializer_list<double> values);
    explicit Vector(std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    [[nodiscard]] std::span<double> span() noexcept { return data_; }
    [[nodiscard]] std::span<const double> span() const noexcept { return data_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

    Vector& operator+=(const Vector& rhs);
    Vector& operator-=(const Vector& rhs);
    Vector& operator*=(double s);

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> data_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator-(Vector v);
Vector operator*(double s, Vector v);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double norm_inf(const Vector& v);
double min_entry(const Vector& v);

/// Column-major dense matrix; element (i, j) lives at data[i + j * rows].
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);
    /// Row-wise literal, e.g. {{1, 2}, {3, 4}}.
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(const Vector& d);
    static DenseMatrix from_row_major(std::size_t rows, std::size_t cols, std::span<const double> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

    [[nodiscard]] std::span<const double> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }
    [[nodiscard]] std::span<double> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

    [[nodiscard]] DenseMatrix transpose() const;
    [[nodiscard]] double max_abs_entry() const noexcept;
    [[nodiscard]] double frobenius_norm() const noexcept;
    [[nodiscard]] bool is_symmetric(double rel_tol) const noexcept;

    DenseMatrix& operator+=(const DenseMatrix& rhs);
    DenseMatrix& operator-=(const DenseMatrix& rhs);
    DenseMatrix& operator*=(double s);

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& m, const Vector& x);
/// aᵀ·b without forming the transpose.
DenseMatrix transpose_times(const DenseMatrix& a, const DenseMatrix& b);
Vector transpose_times(const DenseMatrix& m, const Vector& x);

/// 0/1 mask of strictly positive components; the diagonal of diag(sgn(x⁺)).
class SignPattern {
public:
    explicit SignPattern(std::vector<std::uint8_t> bits);

    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    [[nodiscard]] const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] std::uint64_t hash() const noexcept;

    friend bool operator==(const SignPattern&, const SignPattern&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

Vector plus_part(const Vector& x);
Vector minus_part(const Vector& x);
SignPattern sign_pattern(const Vector& x);
/// diag(pattern)·x
Vector apply_pattern(const SignPattern& pattern, const Vector& x);

class LuFactorization {
public:
    /// Partial pivoting. Throws SingularMatrix when a pivot falls to
    /// 1e-13·max_abs_entry(m) or below.
    static LuFactorization factor(const DenseMatrix& m);

    [[nodiscard]] Vector solve(const Vector& rhs) const;
    /// Solves mᵀ·x = rhs with the same factors.
    [[nodiscard]] Vector solve_transposed(const Vector& rhs) const;

    [[nodiscard]] std::size_t size() const noexcept { return lu_.rows(); }
    [[nodiscard]] double smallest_pivot() const noexcept { return smallest_pivot_; }
    /// perm[i] is the row of the input placed at row i of the factors.
    [[nodiscard]] const std::vector<std::size_t>& permutation() const noexcept { return perm_; }
    [[nodiscard]] DenseMatrix lower() const;
    [[nodiscard]] DenseMatrix upper() const;

private:
    LuFactorization(DenseMatrix lu, std::vector<std::size_t> perm, double smallest_pivot)
        : lu_(std::move(lu)), perm_(std::move(perm)), smallest_pivot_(smallest_pivot) {}

    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
    double smallest_pivot_;
};

inline constexpr double kSingularPivotRatio = 1e-13;

class CholeskyFactorization {
public:
    /// Throws InvalidArgument for non-square or non-symmetric input and
    /// NotPositiveDefinite when a diagonal pivot is not positive.
    static CholeskyFactorization factor(const DenseMatrix& q);

    [[nodiscard]] const DenseMatrix& lower() const noexcept { return l_; }

private:
    explicit CholeskyFactorization(DenseMatrix l) : l_(std::move(l)) {}
    DenseMatrix l_;
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr int kNormMaxIterations = 10000;

/// Largest eigenvalue of a symmetric positive semidefinite operator given
/// only through its action, by power iteration from a deterministic start
/// (all ones, normalized). Stops once the Rayleigh quotient changes by at
/// most tol relative; throws NoConvergence after max_iter steps.
double power_iteration_psd(const std::function<Vector(const Vector&)>& apply, std::size_t n,
                           double tol = kNormTolerance, int max_iter = kNormMaxIterations);

/// max |eigenvalue| of a symmetric matrix, via power iteration on m².
double spectral_norm_symmetric(const DenseMatrix& m, double tol = kNormTolerance,
                               int max_iter = kNormMaxIterations);

/// Largest singular value of an arbitrary matrix, via its Gram matrix mᵀm.
double spectral_norm(const DenseMatrix& m, double tol = kNormTolerance);

/// ‖LM‖ ≤ ‖L‖·‖M‖ + 1e-10.
bool operator_norm_bound_check(const DenseMatrix& l, const DenseMatrix& m);

/// Thin SVD of a square matrix by one-sided (Hestenes) Jacobi: m = U·diag(sigma)·Vᵀ.
struct SvdResult {
    DenseMatrix u;
    Vector sigma;
    DenseMatrix v;
};
SvdResult jacobi_svd(const DenseMatrix& m);

}  // namespace sscqp
