#include "tweezer/numerics/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "tweezer/errors.hpp"

namespace tweezer {

bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (std::abs(a[pivot * n + col]) <= 1e-300 + 1e-15 * scale) return false;
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t k = r + 1; k < n; ++k) acc -= a[r * n + k] * b[k];
    b[r] = acc / a[r * n + r];
  }
  return true;
}

namespace {

double residuals(const ScalarModel& model, std::span<const DataPoint> data,
                 std::span<const double> p, std::vector<double>& r) {
  double ss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    r[i] = model(p, data[i].t) - data[i].y;
    ss += r[i] * r[i];
  }
  return ss;
}

}  // namespace

LeastSquaresResult fit_least_squares(const ScalarModel& model, std::span<const DataPoint> data,
                                     std::vector<double> init, const LeastSquaresOptions& opts) {
  if (data.empty()) throw DivergenceError("fit_least_squares: empty data");
  const std::size_t m = data.size();
  const std::size_t n = init.size();
  LeastSquaresResult out;
  std::vector<double> p = std::move(init);
  std::vector<double> r(m), r_trial(m), jac(m * n);
  double cost = residuals(model, data, p, r);
  if (!std::isfinite(cost)) throw DivergenceError("fit_least_squares: non-finite initial residual");
  out.residual_history.push_back(std::sqrt(cost));

  double damping = opts.initial_damping;
  std::vector<double> trial(n);
  for (out.iterations = 0; out.iterations < opts.max_iterations; ++out.iterations) {
    if (cost == 0.0) {
      out.converged = true;
      break;
    }
    // forward-difference Jacobian, column by column
    for (std::size_t j = 0; j < n; ++j) {
      const double h = opts.fd_relative_step * std::max(std::abs(p[j]), 1e-3);
      trial = p;
      trial[j] += h;
      for (std::size_t i = 0; i < m; ++i)
        jac[i * n + j] = (model(trial, data[i].t) - data[i].y - r[i]) / h;
    }
    std::vector<double> jtj(n * n, 0.0), jtr(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t a = 0; a < n; ++a) {
        jtr[a] += jac[i * n + a] * r[i];
        for (std::size_t b = 0; b < n; ++b) jtj[a * n + b] += jac[i * n + a] * jac[i * n + b];
      }
    double diag_max = 0.0;
    for (std::size_t a = 0; a < n; ++a) diag_max = std::max(diag_max, jtj[a * n + a]);
    if (diag_max == 0.0)
      throw SingularJacobianError("fit_least_squares: no parameter affects the model");
    // Marquardt scaling, floored so momentarily inert parameters still get damped
    std::vector<double> scale(n);
    for (std::size_t a = 0; a < n; ++a) scale[a] = std::max(jtj[a * n + a], 1e-12 * diag_max);

    bool accepted = false;
    while (!accepted) {
      std::vector<double> lhs = jtj;
      std::vector<double> step(n);
      for (std::size_t a = 0; a < n; ++a) {
        lhs[a * n + a] += damping * scale[a];
        step[a] = -jtr[a];
      }
      if (!solve_dense(lhs, step, n)) {
        damping *= 10.0;
        if (damping > 1e20) throw SingularJacobianError("fit_least_squares: singular normal equations");
        continue;
      }
      for (std::size_t a = 0; a < n; ++a) trial[a] = p[a] + step[a];
      const double trial_cost = residuals(model, data, trial, r_trial);
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        double step_norm = 0.0, p_norm = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          step_norm += step[a] * step[a];
          p_norm += p[a] * p[a];
        }
        const double reduction = (cost - trial_cost) / cost;
        p = trial;
        r.swap(r_trial);
        cost = trial_cost;
        out.residual_history.push_back(std::sqrt(cost));
        damping = std::max(damping * 0.3, 1e-12);
        accepted = true;
        if (reduction < opts.ftol || std::sqrt(step_norm) < opts.xtol * (std::sqrt(p_norm) + opts.xtol))
          out.converged = true;
      } else {
        damping *= 10.0;
        if (damping > 1e16) {  // no descent direction left: at a minimum to working precision
          out.converged = true;
          break;
        }
      }
    }
    if (out.converged) break;
  }
  out.params = std::move(p);
  out.residual_norm = std::sqrt(cost);
  return out;
}

}  // namespace tweezer
