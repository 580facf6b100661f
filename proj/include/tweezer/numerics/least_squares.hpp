#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tweezer {

struct DataPoint {
  double t;
  double y;
};

/// model(params, t) -> predicted y
using ScalarModel = std::function<double(std::span<const double>, double)>;

struct LeastSquaresOptions {
  std::size_t max_iterations = 1000;
  double ftol = 1e-15;           ///< relative cost reduction regarded as converged
  double xtol = 1e-13;           ///< relative step size regarded as converged
  double fd_relative_step = 1e-6;
  double initial_damping = 1e-3;
};

struct LeastSquaresResult {
  std::vector<double> params;
  double residual_norm = 0.0;  ///< sqrt(sum of squared residuals)
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  ///< residual norm after each accepted step
};

/// Levenberg-Marquardt with a forward-difference Jacobian.
/// Throws DivergenceError on non-finite residuals at the start point and
/// SingularJacobianError when no parameter influences the model or the
/// damped normal equations stay singular.
LeastSquaresResult fit_least_squares(const ScalarModel& model, std::span<const DataPoint> data,
                                     std::vector<double> init,
                                     const LeastSquaresOptions& opts = {});

/// Solves A x = b in place (row-major n x n) by Gaussian elimination with
/// partial pivoting; returns false if A is numerically singular.
bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n);

}  // namespace tweezer
