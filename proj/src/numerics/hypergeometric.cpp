#include "tweezer/numerics/hypergeometric.hpp"

#include <cmath>
#include <string>

#include "tweezer/errors.hpp"
#include "tweezer/numerics/quadrature.hpp"

namespace tweezer {
namespace {

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

Complex reciprocal_gamma(Complex z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

bool is_integer(Complex z) { return z.imag() == 0.0 && z.real() == std::round(z.real()); }

}  // namespace

Complex kummer_m(Complex a, Complex b, Complex z, const SeriesOptions& opts) {
  if (is_nonpositive_integer(b))
    throw DegenerateParameterError("kummer_m: b is a non-positive integer");
  Complex term = 1.0;
  Complex sum = 1.0;
  int small_run = 0;
  for (std::size_t n = 0; n < opts.max_terms; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a + dn) * z / ((b + dn) * (dn + 1.0));
    sum += term;
    if (!finite(sum)) throw ConvergenceError("kummer_m: series overflow");
    if (std::abs(term) <= opts.rel_tol * std::abs(sum)) {
      if (++small_run == 3) return sum;
    } else {
      small_run = 0;
    }
  }
  throw ConvergenceError("kummer_m: no convergence within " + std::to_string(opts.max_terms) +
                         " terms");
}

namespace hypergeometric_detail {

Complex tricomi_u_connection(Complex a, Complex b, double z) {
  if (is_integer(b - 1.0))
    throw DegenerateParameterError("tricomi_u: connection formula needs non-integer b - 1");
  const Complex first = std::exp(log_gamma(1.0 - b)) * reciprocal_gamma(a - b + 1.0);
  const Complex second = std::exp(log_gamma(b - 1.0)) * reciprocal_gamma(a);
  Complex value = 0.0;
  if (first != 0.0) {
    const Complex t = first * kummer_m(a, b, z);
    if (!finite(t)) throw ConvergenceError("tricomi_u: non-finite first connection term");
    value += t;
  }
  if (second != 0.0) {
    const Complex t =
        second * std::exp((1.0 - b) * std::log(z)) * kummer_m(a - b + 1.0, 2.0 - b, z);
    if (!finite(t)) throw ConvergenceError("tricomi_u: non-finite second connection term");
    value += t;
  }
  return value;
}

Complex tricomi_u_laplace(Complex a, Complex b, double z) {
  // U(a,b,z) = 1/G(a) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, with t = e^v
  const double re_a = a.real();
  const Complex c = b - a - 1.0;
  auto log_integrand = [&](double v) {
    const double t = std::exp(v);
    return -z * t + a * v + c * std::log1p(t);
  };
  // crude magnitude of the integral, to place the truncation points
  const double log_scale = std::lgamma(re_a) - re_a * std::log(z);
  const double v_lo = (log_scale + std::log(1e-18 * re_a)) / re_a;
  const double v_hi = std::log((60.0 + 2.0 * std::abs(c.real())) / z) + 1.0;
  const Complex shift = log_gamma(a);
  auto f = [&](double v) { return std::exp(log_integrand(v) - shift); };
  auto fabs_ = [&](double v) { return std::abs(f(v)); };
  QuadOptions coarse;
  coarse.rel_tol = 1e-4;
  coarse.abs_tol = 0.0;
  const double magnitude = integrate_adaptive<double>(fabs_, v_lo, v_hi, coarse).value;
  QuadOptions fine;
  fine.rel_tol = 1e-13;
  // |U| can sit e^{pi |Im a| / 2} below the magnitude integral; GK15 noise floors near 1e-16 of it
  fine.abs_tol = 1e-15 * magnitude;
  fine.max_intervals = 4000;
  return integrate_adaptive<Complex>(f, v_lo, v_hi, fine).value;
}

Complex tricomi_u_recurrence(Complex a, Complex b, double z) {
  const int shift = std::max(0, static_cast<int>(std::ceil(2.0 - a.real())));
  Complex upper = tricomi_u_laplace(a + static_cast<double>(shift + 1), b, z);
  Complex lower = tricomi_u_laplace(a + static_cast<double>(shift), b, z);
  // U(c) = -(b - 2c - 2 - z) U(c+1) - (c+1)(c - b + 2) U(c+2)
  for (int k = shift - 1; k >= 0; --k) {
    const Complex cc = a + static_cast<double>(k);
    const Complex next = -(b - 2.0 * cc - 2.0 - z) * lower - (cc + 1.0) * (cc - b + 2.0) * upper;
    upper = lower;
    lower = next;
  }
  return lower;
}

std::optional<Complex> tricomi_u_asymptotic(Complex a, Complex b, double z) {
  // U ~ z^{-a} sum_n (a)_n (a - b + 1)_n / n! (-1/z)^n; stop at 1e-17 of the
  // sum, give up once the terms start growing before that
  const Complex a2 = a - b + 1.0;
  Complex term = 1.0, sum = 1.0;
  double previous = 1.0;
  for (int n = 0; n < 500; ++n) {
    term *= -(a + static_cast<double>(n)) * (a2 + static_cast<double>(n)) / (static_cast<double>(n + 1) * z);
    const double size = std::abs(term);
    if (size > previous) return std::nullopt;
    sum += term;
    if (size <= 1e-17 * std::abs(sum)) return std::exp(-a * std::log(z)) * sum;
    previous = size;
  }
  return std::nullopt;
}

}  // namespace hypergeometric_detail

Complex tricomi_u(Complex a, Complex b, double z) {
  using namespace hypergeometric_detail;
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("tricomi_u: requires real z > 0");
  if (is_integer(b - 1.0)) {
    if (a.real() > 0.0) return tricomi_u_laplace(a, b, z);
    throw DegenerateParameterError("tricomi_u: integer b - 1 with Re a <= 0");
  }
  if (z <= kConnectionLimit) return tricomi_u_connection(a, b, z);
  if (auto u = tricomi_u_asymptotic(a, b, z)) return *u;
  return tricomi_u_recurrence(a, b, z);
}

}  // namespace tweezer
