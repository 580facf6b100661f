#include "tweezer/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tweezer/errors.hpp"
#include "tweezer/numerics/quadrature.hpp"

namespace tweezer {

Complex expm1_ratio(Complex z, double t) noexcept {
  const Complex zt = z * t;
  if (std::abs(zt) < 1e-4) {
    // t (1 + zt/2 + (zt)^2/6 + (zt)^3/24)
    return t * (1.0 + zt * (0.5 + zt * (1.0 / 6.0 + zt / 24.0)));
  }
  const double x = zt.real();
  const double y = zt.imag();
  const double s = std::sin(0.5 * y);
  const Complex em1{std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
  return em1 / z;
}

Polynomial characteristic_polynomial(const RationalLaplace& g, double lambda) {
  if (lambda == 0.0) throw ZeroLambdaError("characteristic_polynomial: lambda must be non-zero");
  const Polynomial s2 = Polynomial::from_real({0.0, 0.0, 1.0});
  return s2 * g.denominator - Complex{1.0 / lambda} * g.numerator;
}

Trajectory solve_trajectory(const RationalLaplace& g, double lambda, double p_dot0, double horizon) {
  if (p_dot0 == 0.0)
    throw ZeroAccelerationError("solve_trajectory: transport needs a non-zero initial acceleration");
  if (!(horizon > 0.0)) throw DomainError("solve_trajectory: horizon must be positive");
  const Polynomial q = characteristic_polynomial(g, lambda);
  const RootSet rs = find_roots(q);
  double scale = 0.0;
  for (const auto& s : rs.roots) scale = std::max(scale, std::abs(s));
  for (std::size_t i = 0; i < rs.roots.size(); ++i)
    for (std::size_t j = i + 1; j < rs.roots.size(); ++j)
      if (std::abs(rs.roots[i] - rs.roots[j]) <= 1e-8 * scale)
        throw MultiplePoleError("solve_trajectory: poles " + std::to_string(i) + " and " +
                                std::to_string(j) + " coincide");
  const Polynomial dq = q.derivative();
  Trajectory traj;
  traj.lambda = lambda;
  traj.p_dot0 = p_dot0;
  traj.horizon = horizon;
  traj.poles = rs.roots;
  for (const auto& s : rs.roots) traj.residues.push_back(p_dot0 * g.denominator(s) / dq(s));
  return traj;
}

Trajectory solve_trajectory(const DampedOscFit& fit, double lambda, double p_dot0, double horizon) {
  return solve_trajectory(laplace_of_fit(fit), lambda, p_dot0, horizon);
}

Trajectory scaled(const Trajectory& traj, double eps) {
  Trajectory out = traj;
  for (auto& r : out.residues) r *= eps;
  out.p_dot0 *= eps;
  return out;
}

Trajectory with_horizon(const Trajectory& traj, double horizon) {
  Trajectory out = traj;
  out.horizon = horizon;
  return out;
}

namespace {

double realify(Complex value, double scale, const char* what, double t) {
  if (std::abs(value.imag()) > 1e-9 * scale)
    throw RealificationError(std::string(what) + ": imaginary residue " +
                             std::to_string(value.imag()) + " at t = " + std::to_string(t));
  return value.real();
}

}  // namespace

double velocity_derivative(const Trajectory& traj, double t, int order) {
  Complex acc{};
  double scale = 0.0;
  for (std::size_t i = 0; i < traj.poles.size(); ++i) {
    const Complex term = traj.residues[i] * std::pow(traj.poles[i], order) * std::exp(traj.poles[i] * t);
    acc += term;
    scale = std::max(scale, std::abs(term));
  }
  return realify(acc, scale, "velocity", t);
}

double position(const Trajectory& traj, double t) {
  Complex acc{};
  double scale = 0.0;
  for (std::size_t i = 0; i < traj.poles.size(); ++i) {
    const Complex term = traj.residues[i] * expm1_ratio(traj.poles[i], t);
    acc += term;
    scale = std::max(scale, std::abs(term));
  }
  return realify(acc, scale, "position", t);
}

double fluence(const Trajectory& traj, double T) {
  // dp/dt = sum_i c_i e^{s_i t} with c_i = r_i s_i; real, so (dp/dt)^2 = dp/dt dp/dt
  Complex acc{};
  const std::size_t n = traj.poles.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      acc += traj.residues[i] * traj.poles[i] * traj.residues[j] * traj.poles[j] *
             expm1_ratio(traj.poles[i] + traj.poles[j], T);
  return acc.real();
}

double find_fluence_horizon(const Trajectory& traj, double target, double t_max) {
  if (!(target > 0.0)) throw DomainError("find_fluence_horizon: target must be positive");
  if (fluence(traj, t_max) < target)
    throw DomainError("find_fluence_horizon: E(" + std::to_string(t_max) + ") = " +
                      std::to_string(fluence(traj, t_max)) + " stays below the target");
  double lo = 0.0;
  double hi = t_max;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fluence(traj, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PoleClassification classify_poles(const Trajectory& traj, double imag_tol) {
  PoleClassification c;
  const auto& p = traj.poles;
  std::vector<bool> used(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const double tol = imag_tol * std::max(1.0, std::abs(p[i]));
    if (std::abs(p[i].imag()) <= tol) {
      if (p[i].real() > tol)
        ++c.real_positive;
      else if (p[i].real() < -tol)
        ++c.real_negative;
      else
        ++c.real_zero;
      continue;
    }
    std::size_t partner = p.size();
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (!used[j] && std::abs(p[j] - std::conj(p[i])) <= tol) {
        partner = j;
        break;
      }
    if (partner == p.size()) {
      ++c.unpaired_complex;
      continue;
    }
    used[partner] = true;
    (p[i].real() > 0.0 ? c.complex_rhp_pairs : c.complex_lhp_pairs) += 1;
  }
  if (c.real_positive > 0)
    c.verdict = "divergent-exponential";
  else if (c.complex_rhp_pairs > 0 || c.unpaired_complex > 0)
    c.verdict = "growing-oscillatory";
  else
    c.verdict = "stable";
  return c;
}

double el_residual(const Trajectory& traj, const std::function<double(double)>& kernel,
                   std::span<const double> t_grid) {
  if (traj.empty()) return 0.0;
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-12;
  double worst = 0.0;
  double norm = 0.0;
  for (double t : t_grid) {
    const double lhs = traj.lambda * velocity_derivative(traj, t, 2);
    double conv = 0.0;
    if (t > 0.0)
      conv = integrate_adaptive([&](double tau) { return velocity(traj, tau) * kernel(t - tau); },
                                0.0, t, opts)
                 .value;
    worst = std::max(worst, std::abs(lhs - conv));
    norm = std::max(norm, std::abs(lhs));
  }
  return norm > 0.0 ? worst / norm : 0.0;
}

LagrangeCheck lagrange_selfcheck(const Trajectory& traj, const DampedOscFit& fit) {
  if (traj.empty()) throw DegenerateInputError("lagrange_selfcheck: empty trajectory");
  const ExponentialSum g = exponential_form(fit);
  // int_0^t1 (g * p)(t2) dt2 with (g * p)(t) = sum A r (e^{s t} - e^{mu t}) / (s - mu)
  auto inner = [&](double t1) {
    Complex acc{};
    for (std::size_t m = 0; m < g.rates.size(); ++m)
      for (std::size_t i = 0; i < traj.poles.size(); ++i) {
        const Complex s = traj.poles[i];
        const Complex mu = g.rates[m];
        acc += g.amplitudes[m] * traj.residues[i] *
               (expm1_ratio(s, t1) - expm1_ratio(mu, t1)) / (s - mu);
      }
    return acc.real();
  };
  QuadOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-11;
  const double T = traj.horizon;
  const double triple =
      integrate_adaptive([&](double t1) { const double v = inner(t1); return v * v; }, 0.0, T, opts)
          .value;
  const double a0 = traj.p_dot0;
  const double e_full = fluence(traj, T);
  const double e_inc = integrate_adaptive(
                           [&](double t) {
                             const double d = acceleration(traj, t) - a0;
                             return d * d;
                           },
                           0.0, T, opts)
                           .value;
  if (!(e_inc > 0.0) || !(e_full > 0.0))
    throw DegenerateInputError("lagrange_selfcheck: vanishing fluence");
  LagrangeCheck c;
  c.recovered = std::sqrt(triple / e_inc);
  c.ratio = c.recovered / std::abs(traj.lambda);
  c.literal_ratio = std::sqrt(triple / e_full) / std::abs(traj.lambda);
  return c;
}

std::vector<double> lambda_grid(double lo, double hi, std::size_t n) {
  if (n == 0 || lo == 0.0 || hi == 0.0 || (lo < 0.0) != (hi < 0.0))
    throw DomainError("lambda_grid: bounds must be non-zero with the same sign");
  std::vector<double> out(n);
  const double sign = lo < 0.0 ? -1.0 : 1.0;
  const double l0 = std::log(std::abs(lo));
  const double l1 = std::log(std::abs(hi));
  for (std::size_t i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = sign * std::exp(l0 + f * (l1 - l0));
  }
  return out;
}

}  // namespace tweezer
