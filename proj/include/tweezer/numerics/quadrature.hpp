#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "tweezer/errors.hpp"

namespace tweezer {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 2000;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <class T, class F>
QuadResult<T> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  QuadResult<T> r;
  r.value = kronrod * half;
  r.error = magnitude((kronrod - gauss) * half);
  r.evaluations = 15;
  return r;
}

}  // namespace detail

namespace detail {

template <class T, class F>
QuadResult<T> integrate_finite(F& f, double a, double b, const QuadOptions& opts) {
  struct Segment {
    double a, b;
    QuadResult<T> r;
  };
  std::vector<Segment> segs;
  segs.push_back({a, b, detail::gk15<T>(f, a, b)});
  std::size_t evaluations = 15;
  for (;;) {
    T total{};
    double err = 0.0;
    for (const auto& s : segs) {
      total += s.r.value;
      err += s.r.error;
    }
    const double target = std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(total));
    if (err <= target) return {total, err, evaluations};
    if (!std::isfinite(err))
      throw ToleranceError("integrate_adaptive: non-finite integrand on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "]");
    if (segs.size() >= opts.max_intervals)
      throw ToleranceError("integrate_adaptive: interval budget exhausted (error " +
                           std::to_string(err) + " > " + std::to_string(target) + ")");
    auto worst = std::max_element(segs.begin(), segs.end(), [](const auto& x, const auto& y) {
      return x.r.error < y.r.error;
    });
    const double lo = worst->a;
    const double hi = worst->b;
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) {
      throw ToleranceError("integrate_adaptive: interval collapsed at x = " + std::to_string(mid));
    }
    *worst = {lo, mid, detail::gk15<T>(f, lo, mid)};
    segs.push_back({mid, hi, detail::gk15<T>(f, mid, hi)});
    evaluations += 30;
  }
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// b may be +infinity, handled by x = a + tan(theta). Throws ToleranceError
/// when the interval budget is exhausted before the tolerance is met.
template <class T = double, class F>
QuadResult<T> integrate_adaptive(F&& f, double a, double b, const QuadOptions& opts = {}) {
  if (std::isinf(b)) {
    auto mapped = [&f, a](double theta) -> T {
      const double c = std::cos(theta);
      const double x = a + std::tan(theta);
      return f(x) * (1.0 / (c * c));
    };
    return detail::integrate_finite<T>(mapped, 0.0, 0.5 * std::numbers::pi, opts);
  }
  return detail::integrate_finite<T>(f, a, b, opts);
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(std::size_t n);

/// A flat list of nodes/weights: a composite rule on some domain.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Appends a Gauss-Legendre panel mapped to [a, b].
  void add_panel(const GaussLegendre& gl, double a, double b);
};

}  // namespace tweezer
