#include "generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace sscqp {

namespace {

constexpr int kMaxRounds = 10;
constexpr double kPlantedNormRatio = 1e-6;
constexpr std::uint64_t kRoundStream = 0x5eed0000ULL;

}  // namespace

void InstanceSpec::validate() const {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    if (!(beta_lb >= 0.0) || !(beta_ub > beta_lb) || !std::isfinite(beta_ub)) {
        throw Error(ErrorCode::InvalidArgument, "beta range must satisfy 0 <= lb < ub");
    }
    if (!(value_scale > 0.0) || !std::isfinite(value_scale)) {
        throw Error(ErrorCode::InvalidArgument, "value_scale must be positive");
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform(double lo, double hi) {
    // 53 random mantissa bits; the standard distributions are not specified
    // bit-for-bit across library implementations.
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

Vector Rng::uniform_vector(std::size_t n, double scale) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = uniform(-scale, scale);
    return v;
}

DenseMatrix Rng::uniform_matrix(std::size_t rows, std::size_t cols, double scale) {
    DenseMatrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = uniform(-scale, scale);
    return m;
}

namespace {

GeneratedInstance generate_round(const InstanceSpec& spec, std::uint64_t round_seed, std::uint64_t reported_seed) {
    const std::size_t n = spec.n;
    const double scale = spec.value_scale;
    Rng rng(round_seed);

    double beta = rng.uniform(spec.beta_lb, spec.beta_ub);
    while (beta == 0.0) beta = rng.uniform(spec.beta_lb, spec.beta_ub);

    DenseMatrix b_mat = rng.uniform_matrix(n, n, scale);
    const auto b_lu = LuFactorization::factor(b_mat);
    DenseMatrix q = transpose_times(b_mat, b_mat);
    {
        DenseMatrix qt = q.transpose();
        q += qt;
        q *= 0.5;
    }

    const SvdResult svd = jacobi_svd(rng.uniform_matrix(n, n, scale));
    const double sigma_max = *std::max_element(svd.sigma.span().begin(), svd.sigma.span().end());
    // R = U₁·diag(sqrt(1 + (β/σ)Σ))·Vᵀ
    DenseMatrix scaled_u = svd.u;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::sqrt(1.0 + (beta / sigma_max) * svd.sigma[j]);
        for (double& x : scaled_u.column(j)) x *= d;
    }
    const DenseMatrix r = scaled_u * svd.v.transpose();
    DenseMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector rj(std::vector<double>(r.column(j).begin(), r.column(j).end()));
        const Vector aj = b_lu.solve(rj);
        std::copy(aj.span().begin(), aj.span().end(), a.column(j).begin());
    }

    Vector u = rng.uniform_vector(n, scale);
    Vector x0 = rng.uniform_vector(n, scale);

    // The system matrix does not depend on b; build it once with b = 0.
    const SemiSmoothSystem s0 = build_system(QpProblem(q, Vector(n), 0.0, a));
    if (std::abs(s0.norm_M() - beta) > kPlantedNormRatio * beta) {
        throw Error(ErrorCode::GenerationFailed, "planted norm " + std::to_string(s0.norm_M()) +
                                                     " misses beta " + std::to_string(beta));
    }
    Vector rhs = -(s0.M() * plus_part(u));
    rhs -= u;
    const Vector b = s0.source()->a_factor().solve_transposed(rhs);

    QpProblem problem(std::move(q), b, 0.0, std::move(a));
    Vector f = s0.M() * plus_part(u);
    f += u;
    const Vector atb = transpose_times(problem.A(), problem.b());
    f += atb;
    if (norm2(f) > 1e-8 * (1.0 + norm2(atb))) {
        throw Error(ErrorCode::GenerationFailed, "planted solution residual too large");
    }
    return GeneratedInstance{std::move(problem), std::move(u), std::move(x0), beta, reported_seed, s0.norm_M()};
}

}  // namespace

ProblemFile GeneratedInstance::to_file() const {
    ProblemFile file{problem, x0, u, {}};
    file.comments.push_back("beta=" + format_real(beta) + " seed=" + std::to_string(seed) +
                            " norm_M=" + format_real(norm_M));
    return file;
}

GeneratedInstance generate(const InstanceSpec& spec) {
    spec.validate();
    std::string last_failure;
    for (int round = 0; round < kMaxRounds; ++round) {
        try {
            return generate_round(spec, mix_seed(spec.seed, kRoundStream + static_cast<std::uint64_t>(round)),
                                  spec.seed);
        } catch (const Error& e) {
            switch (e.code()) {
                case ErrorCode::SingularMatrix:
                case ErrorCode::NotPositiveDefinite:
                case ErrorCode::InvalidProblem:
                case ErrorCode::NoConvergence:
                case ErrorCode::GenerationFailed:
                    last_failure = e.what();
                    break;
                default:
                    throw;
            }
        }
    }
    throw Error(ErrorCode::GenerationFailed,
                "no valid instance after " + std::to_string(kMaxRounds) + " rounds: " + last_failure);
}

std::vector<GeneratedInstance> generate_batch(const InstanceSpec& spec, int count) {
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be at least 1");
    std::vector<GeneratedInstance> batch;
    batch.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        InstanceSpec item = spec;
        item.seed = mix_seed(spec.seed, static_cast<std::uint64_t>(i));
        try {
            batch.push_back(generate(item));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::GenerationFailed) throw;
            throw Error(ErrorCode::GenerationFailed, "instance " + std::to_string(i) + ": " + e.what());
        }
    }
    return batch;
}

}  // namespace sscqp
