#pragma once

// Ground truth for small systems. Both routes avoid the Newton code path:
// enumeration forms every 0/1-diagonal linear system itself, and the
// projected-gradient oracle works on the orthant-parameterized QP.

#include <cstddef>
#include <vector>

#include "linalg.hpp"
#include "qp_model.hpp"

namespace sscqp {

inline constexpr std::size_t kOracleMaxDim = 20;

struct OracleSolution {
    SignPattern pattern;
    Vector x;
};

struct OracleResult {
    std::vector<OracleSolution> solutions;
    bool unique = false;
};

/// Tries all 2ⁿ sign patterns D, solving (M·D + I)x = −q and keeping the
/// sign-consistent solutions with ‖F(x)‖ ≤ 1e-9(1 + ‖q‖), deduplicated.
/// Throws DimensionTooLarge for n > 20, SingularMatrix if a pattern system
/// cannot be factored, and InternalConsistency if ‖M‖ < 1 but the solution
/// is not unique.
OracleResult enumerate_solve(const SemiSmoothSystem& s);

/// Projected gradient with step 1/‖Q̃‖ on ½vᵀQ̃v + b̃ᵀv over v ≥ 0, where
/// Q̃ = AᵀQA and b̃ = Aᵀb; A·v approximates the QP solution.
Vector projected_gradient_oracle(const QpProblem& p, int iters);

}  // namespace sscqp
