#include "tweezer/morse.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tweezer/errors.hpp"
#include "tweezer/numerics/hypergeometric.hpp"
#include "tweezer/numerics/quadrature.hpp"

namespace tweezer {

namespace {

void require_kappa(double kappa, bool allow_zero) {
  if (!std::isfinite(kappa) || kappa < 0.0 || (!allow_zero && kappa == 0.0))
    throw DomainError("kappa must be " + std::string(allow_zero ? "non-negative" : "positive") +
                      ", got " + std::to_string(kappa));
}

// log(sinh x) for x > 0 without overflow
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2; }

double log_continuum_norm(const MorseModel& model, double kappa) {
  const double pi = std::numbers::pi;
  return 0.5 * std::log(model.a) + log_gamma(Complex{-model.N, -kappa}).real() +
         0.5 * (std::log(kappa) + log_sinh(2.0 * pi * kappa)) - std::log(pi);
}

}  // namespace

MorseModel build_model(double D, double a, double m) {
  if (!(D > 0.0) || !(a > 0.0) || !(m > 0.0) || !std::isfinite(D) || !std::isfinite(a) ||
      !std::isfinite(m))
    throw DomainError("Morse parameters must be positive and finite");
  MorseModel model;
  model.D = D;
  model.a = a;
  model.m = m;
  model.N = std::sqrt(2.0 * m * D) / a - 0.5;
  if (model.N >= 1.0)
    throw MultiBoundStateError("N = " + std::to_string(model.N) +
                               " >= 1: the trap holds more than one bound state");
  if (model.N <= 0.0)
    throw NoBoundStateError("N = " + std::to_string(model.N) + " <= 0: the trap holds no bound state");
  model.m_star = m / (a * a);
  model.omega0 = -(a * a / (2.0 * m)) * model.N * model.N;
  return model;
}

double bound_frequency_closed(const MorseModel& model) {
  const double ms = model.m_star;
  return -(model.D - std::sqrt(model.D / (2.0 * ms)) + 1.0 / (8.0 * ms));
}

double continuum_frequency(const MorseModel& model, double kappa) {
  require_kappa(kappa, true);
  return model.a * model.a * kappa * kappa / (2.0 * model.m);
}

double gap_frequency(const MorseModel& model, double kappa) {
  return continuum_frequency(model, kappa) - model.omega0;
}

double morse_z(const MorseModel& model, double x) noexcept {
  return (2.0 * model.N + 1.0) * std::exp(-model.a * x);
}

double bound_norm(const MorseModel& model) {
  return std::sqrt(model.a / std::tgamma(2.0 * model.N));
}

double continuum_norm(const MorseModel& model, double kappa) {
  require_kappa(kappa, true);
  if (kappa == 0.0) return 0.0;
  return std::exp(log_continuum_norm(model, kappa));
}

double bound_eigenfunction(const MorseModel& model, double x) {
  const double z = morse_z(model, x);
  if (z == 0.0 || std::isinf(z)) return 0.0;
  return bound_norm(model) * std::exp(model.N * std::log(z) - 0.5 * z);
}

double continuum_eigenfunction(const MorseModel& model, double kappa, double x) {
  require_kappa(kappa, false);
  const double z = morse_z(model, x);
  if (std::isinf(z) || z > 1400.0) return 0.0;  // e^{-z/2} underflows
  if (z == 0.0) throw DomainError("continuum_eigenfunction: z underflows at x = " + std::to_string(x));
  const double norm = continuum_norm(model, kappa);
  const Complex u = tricomi_u({-model.N, -kappa}, {1.0, -2.0 * kappa}, z);
  const Complex phase = std::polar(1.0, -kappa * std::log(z));
  const Complex value = norm * std::exp(-0.5 * z) * phase * u;
  const double envelope = norm * std::exp(-0.5 * z) * std::pow(std::max(1.0, z), model.N);
  if (std::abs(value.imag()) > 1e-8 * std::max(std::abs(value.real()), envelope))
    throw RealificationError("continuum_eigenfunction: imaginary residue " +
                             std::to_string(value.imag()) + " at kappa = " + std::to_string(kappa) +
                             ", x = " + std::to_string(x));
  return value.real();
}

Complex dipole_moment_closed(const MorseModel& model, double kappa) {
  require_kappa(kappa, true);
  if (kappa == 0.0) return 0.0;
  const double N = model.N;
  const double log_g = 2.0 * log_gamma(Complex{N + 1.0, kappa}).real();
  const double log_scale = std::log(2.0 * model.D) + std::log(bound_norm(model)) +
                           log_continuum_norm(model, kappa) - 2.0 * std::log(2.0 * N + 1.0);
  return std::exp(log_scale + log_g) * (N * N + kappa * kappa);
}

Complex dipole_moment_quadrature(const MorseModel& model, double kappa) {
  require_kappa(kappa, false);
  const double a = model.a;
  const double D = model.D;
  auto integrand = [&](double q) {
    const double force = 2.0 * a * D * (std::exp(-2.0 * a * q) - std::exp(-a * q));
    return bound_eigenfunction(model, q) * force * continuum_eigenfunction(model, kappa, q);
  };
  // z from 80 (Gaussian-like cutoff) down to 1e-30 (z^N tail below 1e-15)
  const double two_n1 = 2.0 * model.N + 1.0;
  const double q_lo = -std::log(80.0 / two_n1) / a;
  const double q_hi = std::log(two_n1 * 1e30) / a;
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-11;
  opts.max_intervals = 5000;
  // one panel per unit of phase kappa * a * q keeps the adaptive split balanced
  const double width = std::min(1.0, std::numbers::pi / std::max(kappa * a, 1e-3));
  double total = 0.0;
  for (double lo = q_lo; lo < q_hi; lo += width)
    total += integrate_adaptive(integrand, lo, std::min(lo + width, q_hi), opts).value;
  return total;
}

double a_coefficient(const MorseModel& model, double kappa) {
  const double mu = std::abs(dipole_moment_closed(model, kappa));
  const double w = gap_frequency(model, kappa);
  return mu * mu / (w * w);
}

MatrixElement matrix_element(const MorseModel& model, double kappa) {
  MatrixElement e;
  e.kappa = kappa;
  e.mu_tilde = dipole_moment_closed(model, kappa);
  e.omega_k0 = gap_frequency(model, kappa);
  e.a_kappa = std::norm(e.mu_tilde) / (e.omega_k0 * e.omega_k0);
  return e;
}

}  // namespace tweezer
