#include "tweezer/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tweezer/errors.hpp"
#include "tweezer/simd.hpp"

namespace tweezer {

double memory_kernel(const MorseModel& model, double t, const KernelOptions& opts) {
  if (!std::isfinite(t)) throw DomainError("memory_kernel: non-finite t");
  t = std::abs(t);
  auto f = [&](double kappa) {
    const MatrixElement e = matrix_element(model, kappa);
    return 2.0 * e.a_kappa * std::cos(e.omega_k0 * t);
  };
  QuadOptions q;
  q.abs_tol = opts.quad_tol;
  q.rel_tol = 0.0;
  q.max_intervals = 200;

  // panel edges: kappa_j with omega_kappa0(kappa_j) t = (j + 1/2) pi, and no
  // panel wider than kMaxWidth
  constexpr double kMaxWidth = 1.0;
  std::vector<double> edges{0.0};
  const double gap = -model.omega0;
  const double scale = 2.0 * model.m / (model.a * model.a);
  for (double j = 0.0; t > 0.0; j += 1.0) {
    const double w = (j + 0.5) * std::numbers::pi / t;
    if (w <= gap) continue;
    const double k = std::sqrt(scale * (w - gap));
    if (k >= opts.kappa_max) break;
    while (k - edges.back() > kMaxWidth)
      edges.push_back(edges.back() + kMaxWidth);
    edges.push_back(k);
  }
  while (opts.kappa_max - edges.back() > kMaxWidth)
    edges.push_back(edges.back() + kMaxWidth);
  edges.push_back(opts.kappa_max);

  // split the absolute tolerance evenly across panels
  q.abs_tol = opts.quad_tol / static_cast<double>(edges.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += integrate_adaptive(f, edges[i], edges[i + 1], q).value;
  return total;
}

KernelEvaluator::KernelEvaluator(const MorseModel& model, double t_max, const KernelOptions& opts)
    : t_max_(std::abs(t_max)) {
  const GaussLegendre gl = gauss_legendre(opts.nodes_per_panel);
  QuadratureRule rule;
  // phase kappa t / m* changes by at most pi across a panel
  const double phase_rate = t_max_ / model.m_star;
  double lo = 0.0;
  while (lo < opts.kappa_max) {
    double width = opts.max_panel_width;
    const double hi_guess = std::min(lo + width, opts.kappa_max);
    if (phase_rate > 0.0) width = std::min(width, std::numbers::pi / (phase_rate * hi_guess));
    const double hi = std::min(lo + width, opts.kappa_max);
    rule.add_panel(gl, lo, hi);
    lo = hi;
  }
  kappa_ = rule.nodes;
  weights_.resize(rule.size());
  freqs_.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const MatrixElement e = matrix_element(model, kappa_[i]);
    weights_[i] = 2.0 * e.a_kappa * rule.weights[i];
    freqs_[i] = e.omega_k0;
  }
}

double KernelEvaluator::operator()(double t) const noexcept {
  return simd::cosine_sum(weights_, freqs_, t);
}

KernelSamples sample_kernel(const MorseModel& model, double t_max, std::size_t n,
                            const KernelOptions& opts) {
  if (n < 16) throw DomainError("sample_kernel: need n >= 16, got " + std::to_string(n));
  if (!(t_max > 0.0)) throw DomainError("sample_kernel: t_max must be positive");
  const KernelEvaluator k(model, t_max, opts);
  KernelSamples s;
  s.quadrature_tol = opts.quad_tol;
  s.times.resize(n);
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.times[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    s.values[i] = k(s.times[i]);
  }
  return s;
}

double LeakageSpectrum::prefactor() const noexcept {
  return 2.0 * std::numbers::pi * std::sqrt(model_.m_star / 2.0);
}

double LeakageSpectrum::operator()(double omega) const {
  const double excess = std::abs(omega) - gap_;
  if (!(excess > 0.0)) return 0.0;
  const double kappa = std::sqrt(2.0 * model_.m_star * excess);
  return prefactor() * a_coefficient(model_, kappa) / std::sqrt(excess);
}

double windowed_fourier(const KernelSamples& samples, double omega) {
  const auto& t = samples.times;
  const auto& k = samples.values;
  if (t.size() < 2) throw DomainError("windowed_fourier: need at least two samples");
  const double T = t.back();
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double taper = std::cos(std::numbers::pi * t[i] / (2.0 * T));
    const double term = k[i] * taper * taper * std::cos(omega * t[i]);
    acc += (i == 0 || i + 1 == t.size()) ? 0.5 * term : term;
  }
  return 2.0 * h * acc;
}

}  // namespace tweezer
