#include "oracle.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace sscqp {

namespace {

constexpr double kSignSlack = 1e-12;
constexpr double kResidualRatio = 1e-9;
constexpr double kDedupRatio = 1e-10;

}  // namespace

OracleResult enumerate_solve(const SemiSmoothSystem& s) {
    const std::size_t n = s.dim();
    if (n > kOracleMaxDim) {
        throw Error(ErrorCode::DimensionTooLarge,
                    "enumeration supports n <= " + std::to_string(kOracleMaxDim) + ", got " + std::to_string(n));
    }
    const DenseMatrix& m = s.M();
    const Vector neg_q = -s.q();
    const double res_bound = kResidualRatio * (1.0 + norm2(s.q()));

    OracleResult result;
    const std::uint64_t patterns = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        std::vector<std::uint8_t> bits(n);
        for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((mask >> i) & 1U);

        DenseMatrix system = DenseMatrix::identity(n);
        for (std::size_t j = 0; j < n; ++j)
            if (bits[j])
                for (std::size_t i = 0; i < n; ++i) system(i, j) += m(i, j);

        Vector x(n);
        try {
            x = LuFactorization::factor(system).solve(neg_q);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularMatrix) throw;
            throw Error(ErrorCode::SingularMatrix, "pattern system " + std::to_string(mask) + " is singular");
        }

        bool consistent = true;
        for (std::size_t i = 0; i < n && consistent; ++i) {
            consistent = bits[i] ? x[i] >= -kSignSlack : x[i] <= kSignSlack;
        }
        if (!consistent) continue;

        Vector xp(n);
        for (std::size_t i = 0; i < n; ++i) xp[i] = std::max(x[i], 0.0);
        Vector f = m * xp;
        f += x;
        f += s.q();
        if (norm2(f) > res_bound) continue;

        bool duplicate = false;
        for (const auto& sol : result.solutions) {
            if (norm2(sol.x - x) <= kDedupRatio * (1.0 + norm2(x))) duplicate = true;
        }
        if (!duplicate) result.solutions.push_back({SignPattern(std::move(bits)), std::move(x)});
    }
    result.unique = result.solutions.size() == 1;
    if (s.norm_M() < 1.0 && !result.unique) {
        throw Error(ErrorCode::InternalConsistency,
                    "||M|| = " + std::to_string(s.norm_M()) + " < 1 but enumeration found " +
                        std::to_string(result.solutions.size()) + " solutions");
    }
    return result;
}

Vector projected_gradient_oracle(const QpProblem& p, int iters) {
    const std::size_t n = p.dim();
    DenseMatrix qa = p.Q() * p.A();
    DenseMatrix h = transpose_times(p.A(), qa);
    DenseMatrix ht = h.transpose();
    h += ht;
    h *= 0.5;
    const Vector g0 = transpose_times(p.A(), p.b());
    const double lipschitz = spectral_norm_symmetric(h);

    Vector v(n);
    for (int it = 0; it < iters; ++it) {
        Vector grad = h * v;
        grad += g0;
        for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i] - grad[i] / lipschitz, 0.0);
    }
    return v;
}

}  // namespace sscqp
