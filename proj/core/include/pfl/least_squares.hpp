#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pfl::fit {

// Fills residuals (size m) and the row-major m x n Jacobian at the given parameters.
using ResidualFunction =
    std::function<void(std::span<const double> params, std::span<double> residuals, std::span<double> jacobian)>;

struct LeastSquaresOptions {
    int max_iterations = 200;
    // Stop once the step is this small relative to the (Jacobian-scaled) parameter vector.
    double relative_step_tolerance = 1e-10;
    double initial_damping = 1e-3;
    // Rank threshold on the singular values of the column-scaled Jacobian.
    double rank_tolerance = 1e-12;
    // Trial points failing this predicate are rejected as if the cost had increased.
    std::function<bool(std::span<const double>)> feasible;
    // Parameters held at their initial value.
    std::vector<bool> fixed;
};

struct LeastSquaresResult {
    std::vector<double> parameters;
    std::vector<double> residuals;
    // (J^T J)^-1 at the solution, row-major n x n; fixed parameters have zero rows/columns.
    std::vector<double> covariance;
    double cost = 0.0;  // 0.5 * |r|^2
    int iterations = 0;

    double residual_norm() const;
    double covariance_at(std::size_t i, std::size_t j) const { return covariance[i * parameters.size() + j]; }
};

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling).
/// Deterministic: at most options.max_iterations Jacobian evaluations.
/// Throws FitError on non-convergence and RankDeficiencyError when the Jacobian at the
/// solution is singular.
LeastSquaresResult levenberg_marquardt(const ResidualFunction& f, std::size_t residual_count,
                                       std::vector<double> initial, const LeastSquaresOptions& options = {});

}  // namespace pfl::fit
