#include "tweezer/numerics/complex_gamma.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tweezer/errors.hpp"

namespace tweezer {
namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[] = {0.99999999999980993,     676.5203681218851,
                               -1259.1392167224028,     771.32342877765313,
                               -176.61502916214059,     12.507343278686905,
                               -0.13857109526572012,    9.9843695780195716e-6,
                               1.5056327351493116e-7};

// sin(pi x), cos(pi x) with exact reduction of x modulo 2
void sincos_pi(double x, double* s, double* c) {
  const double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  // fold to [-1/2, 1/2] to keep the argument small
  const double h = std::round(r);
  const double f = r - h;  // in [-1/2, 1/2]
  double sf = std::sin(std::numbers::pi * f);
  double cf = std::cos(std::numbers::pi * f);
  if (h != 0.0) {  // shift by +-pi
    sf = -sf;
    cf = -cf;
  }
  *s = sf;
  *c = cf;
}

Complex log_gamma_right(Complex z) {
  // Re z >= 1/2
  z -= 1.0;
  Complex series = kLanczos[0];
  for (int k = 1; k < 9; ++k) series += kLanczos[k] / (z + static_cast<double>(k));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

bool is_nonpositive_integer(Complex z) noexcept {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

Complex log_sin_pi(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  if (std::abs(y) > 5.0) {
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}) for y > 0
    const Complex w = y > 0.0 ? z : std::conj(z);
    const Complex i(0.0, 1.0);
    double s = 0.0, c = 0.0;
    sincos_pi(2.0 * w.real(), &s, &c);
    const Complex e2 = std::exp(-2.0 * std::numbers::pi * w.imag()) * Complex(c, s);
    const Complex val = -i * std::numbers::pi * w + std::log(1.0 - e2) + std::log(0.5 * i);
    return y > 0.0 ? val : std::conj(val);
  }
  double s = 0.0, c = 0.0;
  sincos_pi(x, &s, &c);
  const double py = std::numbers::pi * y;
  return std::log(Complex(s * std::cosh(py), c * std::sinh(py)));
}

Complex log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("log_gamma: non-finite argument");
  if (is_nonpositive_integer(z))
    throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
  if (z.real() < 0.5) {
    return std::log(std::numbers::pi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
  }
  return log_gamma_right(z);
}

}  // namespace tweezer
