#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "error.hpp"

namespace sscqp {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, std::string(what) + " contains a non-finite entry");
        }
    }
}

void require_same_size(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::InvalidArgument, "vector dimensions differ: " + std::to_string(a.size()) +
                                                    " vs " + std::to_string(b.size()));
    }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::InvalidArgument, "matrix shapes differ");
    }
}

double dot_span(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vector

Vector::Vector(std::size_t n, double fill) : data_(n, fill) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "vector length must be positive");
    if (!std::isfinite(fill)) throw Error(ErrorCode::InvalidArgument, "vector fill value is not finite");
}

Vector::Vector(std::initializer_list<double> values) : Vector(std::vector<double>(values)) {}

Vector::Vector(std::vector<double> values) : data_(std::move(values)) {
    if (data_.empty()) throw Error(ErrorCode::InvalidArgument, "vector length must be positive");
    require_finite(data_, "vector");
}

Vector& Vector::operator+=(const Vector& rhs) {
    require_same_size(*this, rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
    require_same_size(*this, rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator-(Vector v) { return v *= -1.0; }
Vector operator*(double s, Vector v) { return v *= s; }

double dot(const Vector& a, const Vector& b) {
    require_same_size(a, b);
    return dot_span(a.span(), b.span());
}

double norm2(const Vector& v) {
    // Scaled accumulation; generated data reaches 1e6 per entry and products
    // of such vectors must not overflow.
    double scale = 0.0;
    double ssq = 1.0;
    for (double x : v.span()) {
        if (x == 0.0) continue;
        const double a = std::abs(x);
        if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

double norm_inf(const Vector& v) {
    double m = 0.0;
    for (double x : v.span()) m = std::max(m, std::abs(x));
    return m;
}

double min_entry(const Vector& v) { return *std::min_element(v.span().begin(), v.span().end()); }

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
    if (!std::isfinite(fill)) throw Error(ErrorCode::InvalidArgument, "matrix fill value is not finite");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
    if (data_.size() != rows * cols) throw Error(ErrorCode::InvalidArgument, "matrix data length mismatch");
    require_finite(data_, "matrix");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    if (rows_ == 0 || cols_ == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
    data_.assign(rows_ * cols_, 0.0);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix literal");
        std::size_t j = 0;
        for (double v : row) (*this)(i, j++) = v;
        ++i;
    }
    require_finite(data_, "matrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(const Vector& d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

DenseMatrix DenseMatrix::from_row_major(std::size_t rows, std::size_t cols, std::span<const double> values) {
    if (values.size() != rows * cols) throw Error(ErrorCode::InvalidArgument, "matrix data length mismatch");
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = values[i * cols + j];
    require_finite(m.data_, "matrix");
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
    return t;
}

double DenseMatrix::max_abs_entry() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double DenseMatrix::frobenius_norm() const noexcept {
    const double scale = max_abs_entry();
    if (scale == 0.0) return 0.0;
    double ssq = 0.0;
    for (double v : data_) ssq += (v / scale) * (v / scale);
    return scale * std::sqrt(ssq);
}

bool DenseMatrix::is_symmetric(double rel_tol) const noexcept {
    if (!is_square()) return false;
    const double bound = rel_tol * max_abs_entry();
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = j + 1; i < rows_; ++i)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > bound) return false;
    return true;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs += rhs; }
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs -= rhs; }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidArgument, "matrix product shape mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto cj = c.column(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            if (bkj == 0.0) continue;
            auto ak = a.column(k);
            for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
        }
    }
    return c;
}

Vector operator*(const DenseMatrix& m, const Vector& x) {
    if (m.cols() != x.size()) throw Error(ErrorCode::InvalidArgument, "matrix-vector shape mismatch");
    Vector y(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        auto col = m.column(j);
        for (std::size_t i = 0; i < m.rows(); ++i) y[i] += col[i] * xj;
    }
    return y;
}

DenseMatrix transpose_times(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw Error(ErrorCode::InvalidArgument, "transpose product shape mismatch");
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot_span(a.column(i), b.column(j));
    return c;
}

Vector transpose_times(const DenseMatrix& m, const Vector& x) {
    if (m.rows() != x.size()) throw Error(ErrorCode::InvalidArgument, "transpose-vector shape mismatch");
    Vector y(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) y[j] = dot_span(m.column(j), x.span());
    return y;
}

// ---------------------------------------------------------------------------
// Plus part and sign patterns

SignPattern::SignPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw Error(ErrorCode::InvalidArgument, "sign pattern must be non-empty");
    for (auto b : bits_)
        if (b > 1) throw Error(ErrorCode::InvalidArgument, "sign pattern entries must be 0 or 1");
}

std::size_t SignPattern::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::uint64_t SignPattern::hash() const noexcept {
    std::uint64_t h = 14695981039346656037ULL;  // FNV-1a
    for (auto b : bits_) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

Vector plus_part(const Vector& x) {
    Vector r = x;
    for (double& v : r.span()) v = v > 0.0 ? v : 0.0;
    return r;
}

Vector minus_part(const Vector& x) {
    Vector r = x;
    for (double& v : r.span()) v = v < 0.0 ? -v : 0.0;
    return r;
}

SignPattern sign_pattern(const Vector& x) {
    std::vector<std::uint8_t> bits(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) bits[i] = x[i] > 0.0 ? 1 : 0;
    return SignPattern(std::move(bits));
}

Vector apply_pattern(const SignPattern& pattern, const Vector& x) {
    if (pattern.size() != x.size()) throw Error(ErrorCode::InvalidArgument, "pattern/vector size mismatch");
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = pattern[i] ? x[i] : 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// LU

LuFactorization LuFactorization::factor(const DenseMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::InvalidArgument, "LU requires a square matrix");
    const std::size_t n = m.rows();
    const double threshold = kSingularPivotRatio * m.max_abs_entry();
    DenseMatrix a = m;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double smallest = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                p = i;
            }
        }
        if (best <= threshold || best == 0.0) {
            throw Error(ErrorCode::SingularMatrix,
                        "matrix is numerically singular (pivot " + std::to_string(k) + " is " + std::to_string(best) + ")");
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(perm[k], perm[p]);
        }
        smallest = std::min(smallest, best);
        const double pivot = a(k, k);
        auto colk = a.column(k);
        for (std::size_t i = k + 1; i < n; ++i) colk[i] /= pivot;
        for (std::size_t j = k + 1; j < n; ++j) {
            const double akj = a(k, j);
            if (akj == 0.0) continue;
            auto colj = a.column(j);
            for (std::size_t i = k + 1; i < n; ++i) colj[i] -= colk[i] * akj;
        }
    }
    return LuFactorization(std::move(a), std::move(perm), smallest);
}

Vector LuFactorization::solve(const Vector& rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw Error(ErrorCode::InvalidArgument, "LU solve dimension mismatch");
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        auto col = lu_.column(j);
        for (std::size_t i = j + 1; i < n; ++i) x[i] -= col[i] * xj;
    }
    for (std::size_t j = n; j-- > 0;) {
        x[j] /= lu_(j, j);
        const double xj = x[j];
        if (xj == 0.0) continue;
        auto col = lu_.column(j);
        for (std::size_t i = 0; i < j; ++i) x[i] -= col[i] * xj;
    }
    return x;
}

Vector LuFactorization::solve_transposed(const Vector& rhs) const {
    // P·m = L·U, so mᵀ = Uᵀ·Lᵀ·P.
    const std::size_t n = size();
    if (rhs.size() != n) throw Error(ErrorCode::InvalidArgument, "LU solve dimension mismatch");
    Vector z = rhs;
    for (std::size_t j = 0; j < n; ++j) {
        z[j] = (z[j] - dot_span(lu_.column(j).first(j), z.span().first(j))) / lu_(j, j);
    }
    for (std::size_t j = n; j-- > 0;) {
        auto col = lu_.column(j);
        double s = z[j];
        for (std::size_t i = j + 1; i < n; ++i) s -= col[i] * z[i];
        z[j] = s;
    }
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = z[i];
    return x;
}

DenseMatrix LuFactorization::lower() const {
    const std::size_t n = size();
    DenseMatrix l = DenseMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) l(i, j) = lu_(i, j);
    return l;
}

DenseMatrix LuFactorization::upper() const {
    const std::size_t n = size();
    DenseMatrix u(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) u(i, j) = lu_(i, j);
    return u;
}

// ---------------------------------------------------------------------------
// Cholesky

CholeskyFactorization CholeskyFactorization::factor(const DenseMatrix& q) {
    if (!q.is_square()) throw Error(ErrorCode::InvalidArgument, "Cholesky requires a square matrix");
    if (!q.is_symmetric(kSymmetryTolerance)) throw Error(ErrorCode::InvalidArgument, "Cholesky requires a symmetric matrix");
    const std::size_t n = q.rows();
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = q(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) {
            throw Error(ErrorCode::NotPositiveDefinite,
                        "matrix is not positive definite (pivot " + std::to_string(j) + ")");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = q(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return CholeskyFactorization(std::move(l));
}

// ---------------------------------------------------------------------------
// Norms

double power_iteration_psd(const std::function<Vector(const Vector&)>& apply, std::size_t n, double tol,
                           int max_iter) {
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Vector w = apply(v);
    // All-ones can lie in the null space of a nonzero operator; fall back to
    // the unit vectors, and if every one of them is annihilated the operator is zero.
    for (std::size_t j = 0; norm2(w) == 0.0; ++j) {
        if (j == n) return 0.0;
        v = Vector(n);
        v[j] = 1.0;
        w = apply(v);
    }

    double estimate = dot(v, w);
    for (int it = 0; it < max_iter; ++it) {
        const double nw = norm2(w);
        v = (1.0 / nw) * std::move(w);
        w = apply(v);
        const double next = dot(v, w);
        if (std::abs(next - estimate) <= tol * std::abs(next)) return next;
        estimate = next;
    }
    throw Error(ErrorCode::NoConvergence,
                "power iteration did not converge in " + std::to_string(max_iter) + " iterations");
}

double spectral_norm_symmetric(const DenseMatrix& m, double tol, int max_iter) {
    if (!m.is_square()) throw Error(ErrorCode::InvalidArgument, "spectral norm requires a square matrix");
    if (!m.is_symmetric(kSymmetryTolerance)) {
        throw Error(ErrorCode::InvalidArgument, "spectral_norm_symmetric requires a symmetric matrix");
    }
    if (m.max_abs_entry() == 0.0) return 0.0;
    const double lambda = power_iteration_psd([&m](const Vector& x) { return m * (m * x); }, m.rows(), tol, max_iter);
    return std::sqrt(lambda);
}

double spectral_norm(const DenseMatrix& m, double tol) {
    if (m.max_abs_entry() == 0.0) return 0.0;
    const double lambda =
        power_iteration_psd([&m](const Vector& x) { return transpose_times(m, m * x); }, m.cols(), tol);
    return std::sqrt(lambda);
}

bool operator_norm_bound_check(const DenseMatrix& l, const DenseMatrix& m) {
    return spectral_norm(l * m) <= spectral_norm(l) * spectral_norm(m) + 1e-10;
}

namespace {
constexpr int kMaxJacobiSweeps = 80;
}  // namespace

SvdResult jacobi_svd(const DenseMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::InvalidArgument, "jacobi_svd expects a square matrix");
    const std::size_t n = m.rows();
    DenseMatrix w = m;
    DenseMatrix v = DenseMatrix::identity(n);
    constexpr double eps = 2.220446049250313e-16;

    bool rotated = true;
    for (int sweep = 0; sweep < kMaxJacobiSweeps && rotated; ++sweep) {
        rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                auto wp = w.column(p);
                auto wq = w.column(q);
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    alpha += wp[i] * wp[i];
                    beta += wq[i] * wq[i];
                    gamma += wp[i] * wq[i];
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double a = wp[i], b = wq[i];
                    wp[i] = c * a - s * b;
                    wq[i] = s * a + c * b;
                }
                auto vp = v.column(p);
                auto vq = v.column(q);
                for (std::size_t i = 0; i < n; ++i) {
                    const double a = vp[i], b = vq[i];
                    vp[i] = c * a - s * b;
                    vq[i] = s * a + c * b;
                }
            }
        }
    }
    if (rotated) throw Error(ErrorCode::NoConvergence, "one-sided Jacobi did not converge");

    Vector sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector col(std::vector<double>(w.column(j).begin(), w.column(j).end()));
        sigma[j] = norm2(col);
        if (sigma[j] == 0.0) throw Error(ErrorCode::SingularMatrix, "matrix has a zero singular value");
        for (double& x : w.column(j)) x /= sigma[j];
    }
    return SvdResult{std::move(w), std::move(sigma), std::move(v)};
}

}  // namespace sscqp
