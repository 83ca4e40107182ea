#pragma once

// Seeded random instances with a planted solution u and a prescribed
// ‖AᵀQA − I‖ = β.
//
// Procedure for one instance:
//   1. β ~ U[lb, ub) (redrawn if exactly 0).
//   2. B with entries U[−s, s]; Q = BᵀB.
//   3. C with entries U[−s, s]; C = U₁ΣVᵀ by one-sided Jacobi (the Jacobi
//      eigendecomposition of CᵀC applied to C's columns); σ = max Σ;
//      A solves B·A = U₁·sqrt(I + (β/σ)Σ)·Vᵀ, so AᵀQA − I = (β/σ)VΣVᵀ.
//   4. u with entries U[−s, s]; b solves Aᵀb = −(AᵀQA − I)u⁺ − u.
//   5. x₀ with entries U[−s, s].
// A failed factorization or a planted norm off by more than 1e-6·β discards
// the draw and restarts from a fresh derived seed, at most 10 rounds.
//
// Random numbers come from std::mt19937_64; seeds are derived with the
// SplitMix64 finalizer (see mix_seed). Output is bitwise reproducible for a
// given build, not across standard libraries or compilers.

#include <cstdint>
#include <random>
#include <vector>

#include "linalg.hpp"
#include "qp_model.hpp"

namespace sscqp {

struct InstanceSpec {
    std::size_t n = 100;
    double beta_lb = 0.0;
    double beta_ub = 0.5;
    std::uint64_t seed = 1;
    double value_scale = 1e6;

    /// Throws InvalidArgument unless n ≥ 1, 0 ≤ lb < ub and value_scale > 0.
    void validate() const;
    [[nodiscard]] bool hypothesis_satisfying() const noexcept { return beta_ub <= 0.5; }
};

struct GeneratedInstance {
    QpProblem problem;
    Vector u;
    Vector x0;
    double beta;
    std::uint64_t seed;
    double norm_M;  ///< measured ‖AᵀQA − I‖

    /// Problem file with `u`, `x0` sections and a `beta=... seed=... norm_M=...` comment.
    [[nodiscard]] ProblemFile to_file() const;
};

/// SplitMix64 finalizer applied to seed + (stream + 1)·0x9E3779B97F4A7C15.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Uniform doubles on [lo, hi) from a 64-bit Mersenne Twister.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    double uniform(double lo, double hi);
    Vector uniform_vector(std::size_t n, double scale);
    DenseMatrix uniform_matrix(std::size_t rows, std::size_t cols, double scale);

private:
    std::mt19937_64 engine_;
};


GeneratedInstance generate(const InstanceSpec& spec);

/// Instance i uses seed mix_seed(spec.seed, i).
std::vector<GeneratedInstance> generate_batch(const InstanceSpec& spec, int count);

}  // namespace sscqp
