#include "pfl/least_squares.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfl/errors.hpp"

namespace pfl::fit {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct Evaluation {
    Vector residuals;
    Matrix jacobian;
    double cost = 0.0;
};

}  // namespace

double LeastSquaresResult::residual_norm() const
{
    return std::sqrt(2.0 * cost);
}

LeastSquaresResult levenberg_marquardt(const ResidualFunction& f, std::size_t residual_count,
                                       std::vector<double> initial, const LeastSquaresOptions& options)
{
    const std::size_t n = initial.size();
    const std::size_t m = residual_count;
    if (n == 0 || m < n) {
        throw DomainError("least squares needs at least as many residuals as parameters");
    }
    std::vector<bool> fixed = options.fixed;
    fixed.resize(n, false);
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < n; ++j) {
        if (!fixed[j]) {
            free.push_back(j);
        }
    }
    const auto k = static_cast<Eigen::Index>(free.size());

    auto evaluate = [&](const std::vector<double>& p) {
        Evaluation e;
        e.residuals.resize(static_cast<Eigen::Index>(m));
        Matrix full(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
        f(p, std::span<double>(e.residuals.data(), m), std::span<double>(full.data(), m * n));
        e.jacobian.resize(static_cast<Eigen::Index>(m), k);
        for (Eigen::Index c = 0; c < k; ++c) {
            e.jacobian.col(c) = full.col(static_cast<Eigen::Index>(free[static_cast<std::size_t>(c)]));
        }
        e.cost = 0.5 * e.residuals.squaredNorm();
        return e;
    };

    std::vector<double> p = std::move(initial);
    Evaluation current = evaluate(p);
    if (!std::isfinite(current.cost)) {
        throw FitError("residuals are not finite at the initial point", current.cost);
    }

    double damping = options.initial_damping;
    bool converged = k == 0;
    int iteration = 0;
    for (; iteration < options.max_iterations && !converged; ++iteration) {
        const Matrix jtj = current.jacobian.transpose() * current.jacobian;
        const Vector gradient = current.jacobian.transpose() * current.residuals;
        Vector scale = jtj.diagonal().cwiseSqrt();
        for (Eigen::Index c = 0; c < k; ++c) {
            if (!(scale(c) > 0.0)) {
                scale(c) = 1.0;
            }
        }
        if (current.cost == 0.0 || gradient.cwiseQuotient(scale).lpNorm<Eigen::Infinity>() == 0.0) {
            converged = true;
            break;
        }

        bool accepted = false;
        while (!accepted) {
            Matrix lhs = jtj;
            lhs.diagonal() += damping * scale.cwiseProduct(scale);
            const Vector step = lhs.ldlt().solve(-gradient);

            std::vector<double> trial = p;
            for (Eigen::Index c = 0; c < k; ++c) {
                trial[free[static_cast<std::size_t>(c)]] += step(c);
            }
            Vector scaled_p(k);
            for (Eigen::Index c = 0; c < k; ++c) {
                scaled_p(c) = p[free[static_cast<std::size_t>(c)]] * scale(c);
            }
            const double step_norm = step.cwiseProduct(scale).norm();
            const double tol = options.relative_step_tolerance;
            const bool tiny_step = step_norm <= tol * (scaled_p.norm() + tol);

            if (!options.feasible || options.feasible(trial)) {
                Evaluation next = evaluate(trial);
                if (std::isfinite(next.cost) && next.cost <= current.cost) {
                    p = std::move(trial);
                    current = std::move(next);
                    damping = std::max(damping / 10.0, 1e-15);
                    accepted = true;
                    converged = tiny_step;
                    break;
                }
            }
            if (tiny_step || damping > 1e16) {
                // No decrease possible at machine precision: stationary point.
                converged = true;
                break;
            }
            damping *= 10.0;
        }
    }

    if (!converged) {
        throw FitError("least squares did not converge within " + std::to_string(options.max_iterations) +
                           " iterations",
                       std::sqrt(2.0 * current.cost));
    }

    LeastSquaresResult result;
    result.iterations = iteration;
    result.cost = current.cost;
    result.residuals.assign(current.residuals.data(), current.residuals.data() + m);
    result.covariance.assign(n * n, 0.0);

    if (k > 0) {
        Vector norms = current.jacobian.colwise().norm().transpose();
        for (Eigen::Index c = 0; c < k; ++c) {
            if (!(norms(c) > 0.0)) {
                throw RankDeficiencyError("parameter " + std::to_string(free[static_cast<std::size_t>(c)]) +
                                              " does not influence the residuals",
                                          result.residual_norm());
            }
        }
        const Matrix scaled = current.jacobian * norms.cwiseInverse().asDiagonal();
        Eigen::JacobiSVD<Matrix> svd(scaled, Eigen::ComputeThinV);
        const Vector sv = svd.singularValues();
        if (!(sv(k - 1) > options.rank_tolerance * sv(0))) {
            throw RankDeficiencyError("Jacobian is rank deficient at the solution", result.residual_norm());
        }
        const Matrix v = svd.matrixV();
        const Matrix inner = v * sv.cwiseProduct(sv).cwiseInverse().asDiagonal() * v.transpose();
        for (Eigen::Index a = 0; a < k; ++a) {
            for (Eigen::Index b = 0; b < k; ++b) {
                result.covariance[free[static_cast<std::size_t>(a)] * n + free[static_cast<std::size_t>(b)]] =
                    inner(a, b) / (norms(a) * norms(b));
            }
        }
    }
    result.parameters = std::move(p);
    return result;
}

}  // namespace pfl::fit
