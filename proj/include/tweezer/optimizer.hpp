#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tweezer/fit.hpp"

namespace tweezer {

/// Optimal trap velocity p(t) = sum_i r_i e^{s_i t} on [0, horizon].
struct Trajectory {
  std::vector<Complex> poles;
  std::vector<Complex> residues;
  double lambda = 0.0;
  double p_dot0 = 0.0;
  double horizon = 0.0;

  bool empty() const noexcept { return poles.empty(); }
};

/// (e^{z t} - 1) / z, continuous through z = 0 where it equals t.
Complex expm1_ratio(Complex z, double t) noexcept;

/// Q(s) = s^2 den(s) - num(s) / lambda. Throws ZeroLambdaError for lambda = 0.
Polynomial characteristic_polynomial(const RationalLaplace& g, double lambda);

/// Poles are the roots of Q; residues r_i = p_dot0 den(s_i) / Q'(s_i).
/// Throws ZeroLambdaError, ZeroAccelerationError, DomainError (horizon <= 0)
/// and MultiplePoleError when two poles are closer than 1e-8 max|s|.
Trajectory solve_trajectory(const RationalLaplace& g, double lambda, double p_dot0, double horizon);
Trajectory solve_trajectory(const DampedOscFit& fit, double lambda, double p_dot0, double horizon);

/// Same poles and residues scaled by eps: p -> eps p.
Trajectory scaled(const Trajectory& traj, double eps);

/// Same expansion with another horizon.
Trajectory with_horizon(const Trajectory& traj, double horizon);

/// d^k p / dt^k as the real part of sum_i r_i s_i^k e^{s_i t}. Throws
/// RealificationError when the imaginary part exceeds 1e-9 of the largest term.
double velocity_derivative(const Trajectory& traj, double t, int order);
inline double velocity(const Trajectory& traj, double t) { return velocity_derivative(traj, t, 0); }
inline double acceleration(const Trajectory& traj, double t) { return velocity_derivative(traj, t, 1); }

/// x(t) = sum_i r_i (e^{s_i t} - 1) / s_i, with the limit r_i t at s_i = 0.
double position(const Trajectory& traj, double t);

/// E(T) = int_0^T (dp/dt)^2, closed form over pole pairs.
double fluence(const Trajectory& traj, double T);
inline double fluence(const Trajectory& traj) { return fluence(traj, traj.horizon); }

/// Horizon T in (0, t_max] with fluence(T) = target, by bisection on the
/// monotone E(T). Throws DomainError if E(t_max) < target.
double find_fluence_horizon(const Trajectory& traj, double target, double t_max);

struct PoleClassification {
  std::size_t real_positive = 0;
  std::size_t real_negative = 0;
  std::size_t real_zero = 0;
  std::size_t complex_rhp_pairs = 0;
  std::size_t complex_lhp_pairs = 0;
  std::size_t unpaired_complex = 0;  ///< complex poles without a conjugate partner
  std::string verdict;  ///< "stable", "divergent-exponential" or "growing-oscillatory"
};

PoleClassification classify_poles(const Trajectory& traj, double imag_tol = 1e-10);

/// max_t |lambda p''(t) - int_0^t p(tau) k(t - tau) dtau| / max_t |lambda p''(t)|;
/// zero for the empty trajectory.
double el_residual(const Trajectory& traj, const std::function<double(double)>& kernel,
                   std::span<const double> t_grid);

struct LagrangeCheck {
  double recovered = 0.0;      ///< |lambda| from the triple integral
  double ratio = 0.0;          ///< recovered / |lambda| with the increment fluence
  double literal_ratio = 0.0;  ///< same with the full fluence int (dp/dt)^2
};

/// Recovers |lambda| from
///   lambda^2 E = int_0^T [int_0^t1 int_0^t2 p(t3) g(t2 - t3)]^2 dt1
/// with the inner double integral in closed form for the fitted kernel.
/// `ratio` uses E = int (dp/dt - dp/dt(0))^2, which the identity holds for
/// exactly; `literal_ratio` uses the full fluence.
/// Throws DegenerateInputError for the empty trajectory.
LagrangeCheck lagrange_selfcheck(const Trajectory& traj, const DampedOscFit& fit);

/// n log-spaced multipliers from lo to hi (non-zero, same sign).
std::vector<double> lambda_grid(double lo, double hi, std::size_t n);

}  // namespace tweezer
