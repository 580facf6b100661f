#include "tweezer/survival.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "tweezer/errors.hpp"
#include "tweezer/numerics/quadrature.hpp"
#include "tweezer/simd.hpp"

namespace tweezer {

void validate_mode(const PhononMode& mode) {
  if (!(mode.Omega > 0.0) || !std::isfinite(mode.Omega))
    throw DomainError("phonon mode: Omega must be positive, got " + std::to_string(mode.Omega));
  if (mode.k == 0.0 || !std::isfinite(mode.k))
    throw DomainError("phonon mode: k must be non-zero and finite");
}

void check_regime(double probability, const std::string& what) {
  if (!(probability >= -0.05 && probability <= 1.05))
    throw RegimeBreakdownError(what + ": probability " + std::to_string(probability) +
                               " outside [-0.05, 1.05]; the second-order expansion has broken down");
}

Complex velocity_spectrum(const Trajectory& traj, double t, double omega) {
  Complex acc{};
  for (std::size_t i = 0; i < traj.poles.size(); ++i)
    acc += traj.residues[i] * expm1_ratio(traj.poles[i] - Complex{0.0, omega}, t);
  return acc;
}

double survival_free_spectral(const Trajectory& traj, const LeakageSpectrum& spec, double t,
                              const SurvivalOptions& opts) {
  if (traj.empty() || t <= 0.0) return 1.0;
  const MorseModel& model = spec.model();
  auto lobes = [&](double kappa) {
    const MatrixElement e = matrix_element(model, kappa);
    const double plus = std::norm(velocity_spectrum(traj, t, e.omega_k0));
    const double minus = std::norm(velocity_spectrum(traj, t, -e.omega_k0));
    return 0.5 * e.a_kappa * (plus + minus);
  };
  QuadOptions q;
  q.abs_tol = 1e-16;
  q.rel_tol = opts.omega_quad_tol;
  q.max_intervals = 4000;
  return 1.0 - integrate_adaptive(lobes, 0.0, opts.kappa_max, q).value;
}

KernelCache::KernelCache(const KernelEvaluator& kernel, double t_max, double step) : step_(step) {
  const auto n = static_cast<std::size_t>(std::ceil(std::abs(t_max) / step)) + 3;
  values_.resize(n);
  for (std::size_t i = 0; i < n; ++i) values_[i] = kernel(static_cast<double>(i) * step);
}

double KernelCache::operator()(double lag) const noexcept {
  const double x = std::abs(lag) / step_;
  auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  i = std::min<std::ptrdiff_t>(i, static_cast<std::ptrdiff_t>(values_.size()) - 3);
  const double u = x - static_cast<double>(i);
  // K(-h) = K(h) supplies the left neighbour at the origin
  auto at = [&](std::ptrdiff_t j) { return values_[static_cast<std::size_t>(j < 0 ? -j : j)]; };
  const double f0 = at(i - 1), f1 = at(i), f2 = at(i + 1), f3 = at(i + 2);
  // cubic Lagrange through nodes -1, 0, 1, 2
  return -u * (u - 1.0) * (u - 2.0) / 6.0 * f0 + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * f1 -
         (u + 1.0) * u * (u - 2.0) / 2.0 * f2 + (u + 1.0) * u * (u - 1.0) / 6.0 * f3;
}

namespace {

QuadratureRule time_rule(const GaussLegendre& gl, double t, double panel) {
  QuadratureRule rule;
  const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t / panel)));
  const double h = t / static_cast<double>(panels);
  for (std::size_t j = 0; j < panels; ++j)
    rule.add_panel(gl, h * static_cast<double>(j), h * static_cast<double>(j + 1));
  return rule;
}

}  // namespace

double survival_free_time(const VelocityFn& velocity, const KernelCache& kernel, double t,
                          const SurvivalOptions& opts) {
  if (t <= 0.0) return 1.0;
  const GaussLegendre gl = gauss_legendre(opts.time_nodes);
  const QuadratureRule outer = time_rule(gl, t, opts.time_panel);
  double leak = 0.0;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const double t1 = outer.nodes[i];
    const double p1 = velocity(t1);
    if (p1 == 0.0) continue;
    const QuadratureRule inner = time_rule(gl, t1, opts.time_panel);
    double acc = 0.0;
    for (std::size_t j = 0; j < inner.size(); ++j)
      acc += inner.weights[j] * velocity(inner.nodes[j]) * kernel(t1 - inner.nodes[j]);
    leak += outer.weights[i] * p1 * acc;
  }
  return 1.0 - leak;
}

double survival_free_time(const Trajectory& traj, const MorseModel& model, double t,
                          const SurvivalOptions& opts) {
  if (traj.empty() || t <= 0.0) return 1.0;
  KernelOptions ko;
  ko.kappa_max = opts.kappa_max;
  const KernelEvaluator k(model, t, ko);
  const KernelCache cache(k, t);
  return survival_free_time([&](double s) { return velocity(traj, s); }, cache, t, opts);
}

namespace {

struct QRange {
  double lo, hi;
};

// phi_0 phi_kappa is negligible outside: z = 80 on the left, z^N < 1e-13 on the right
QRange overlap_range(const MorseModel& model) {
  const double two_n1 = 2.0 * model.N + 1.0;
  return {-std::log(80.0 / two_n1) / model.a,
          std::log(two_n1) / model.a + 13.0 * std::numbers::ln10 / (model.N * model.a)};
}

}  // namespace

Complex phonon_coupling(const MorseModel& model, const PhononMode& mode, double kappa) {
  validate_mode(mode);
  if (mode.V == Complex{}) return 0.0;
  auto f = [&](double q) {
    return bound_eigenfunction(model, q) * continuum_eigenfunction(model, kappa, q) *
           std::polar(1.0, mode.k * q);
  };
  const QRange r = overlap_range(model);
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-11;
  opts.max_intervals = 5000;
  const double width = std::min(1.0, std::numbers::pi / (kappa * model.a + std::abs(mode.k)));
  Complex total{};
  for (double lo = r.lo; lo < r.hi; lo += width)
    total += integrate_adaptive<Complex>(f, lo, std::min(lo + width, r.hi), opts).value;
  return mode.V * total;
}

ContinuumOverlaps::ContinuumOverlaps(const MorseModel& model, double kappa_max, double kappa_panel,
                                     std::size_t kappa_nodes) {
  QuadratureRule krule;
  const GaussLegendre kgl = gauss_legendre(kappa_nodes);
  for (double lo = 0.0; lo < kappa_max; lo += kappa_panel)
    krule.add_panel(kgl, lo, std::min(lo + kappa_panel, kappa_max));
  kappa_ = krule.nodes;
  kappa_w_ = krule.weights;

  QuadratureRule qrule;
  const GaussLegendre qgl = gauss_legendre(10);
  const QRange r = overlap_range(model);
  constexpr double kQPanel = 0.25;
  for (double lo = r.lo; lo < r.hi; lo += kQPanel) qrule.add_panel(qgl, lo, std::min(lo + kQPanel, r.hi));
  q_ = qrule.nodes;

  std::vector<double> bound(q_.size());
  for (std::size_t i = 0; i < q_.size(); ++i) bound[i] = qrule.weights[i] * bound_eigenfunction(model, q_[i]);
  rows_.resize(kappa_.size());
  for (std::size_t j = 0; j < kappa_.size(); ++j) {
    const MatrixElement e = matrix_element(model, kappa_[j]);
    omega_.push_back(e.omega_k0);
    mu_.push_back(e.mu());
    auto& row = rows_[j];
    row.resize(q_.size());
    for (std::size_t i = 0; i < q_.size(); ++i)
      row[i] = bound[i] == 0.0 ? 0.0 : bound[i] * continuum_eigenfunction(model, kappa_[j], q_[i]);
  }
}

std::vector<Complex> ContinuumOverlaps::couplings(const PhononMode& mode) const {
  validate_mode(mode);
  std::vector<Complex> d(kappa_.size());
  for (std::size_t j = 0; j < kappa_.size(); ++j) d[j] = mode.V * simd::phase_sum(rows_[j], q_, mode.k);
  return d;
}

double phonon_leakage(const ContinuumOverlaps& table, const std::vector<Complex>& d,
                      const PhononMode& mode, double t) {
  double acc = 0.0;
  for (std::size_t j = 0; j < table.size(); ++j) {
    const double delta = table.omega_k0()[j] - mode.Omega;
    acc += table.kappa_weights()[j] * std::norm(d[j]) * std::norm(expm1_ratio({0.0, -delta}, t));
  }
  return acc;
}

namespace {

// int_0^t e^{b t1} (e^{a t1} - 1) / a dt1
Complex nested_exponential(Complex a, Complex b, double t) {
  if (std::abs(a) * t > 1e-8) return (expm1_ratio(a + b, t) - expm1_ratio(b, t)) / a;
  // (e^{a t1} - 1)/a -> t1
  if (std::abs(b) * t < 1e-8) return 0.5 * t * t;
  return (t * std::exp(b * t) - expm1_ratio(b, t)) / b;
}

}  // namespace

Complex cross_amplitude(const Trajectory& traj, const ContinuumOverlaps& table,
                        const std::vector<Complex>& d, const PhononMode& mode, double t) {
  if (traj.empty() || t <= 0.0) return 0.0;
  Complex acc{};
  for (std::size_t j = 0; j < table.size(); ++j) {
    const double w = table.omega_k0()[j];
    const Complex b{0.0, -(w - mode.Omega)};
    Complex inner{};
    for (std::size_t i = 0; i < traj.poles.size(); ++i)
      inner += traj.residues[i] * nested_exponential(traj.poles[i] + Complex{0.0, w}, b, t);
    acc += table.kappa_weights()[j] * d[j] * table.mu()[j] * inner;
  }
  return acc;
}

double cross_term(const Trajectory& traj, const ContinuumOverlaps& table, const PhononMode& mode,
                  double t) {
  return std::norm(cross_amplitude(traj, table, table.couplings(mode), mode, t));
}

SurvivalBreakdown survival_one_phonon(const Trajectory& traj, const MorseModel& model,
                                      const ContinuumOverlaps& table, const PhononMode& mode,
                                      double t, const SurvivalOptions& opts) {
  SurvivalBreakdown b;
  b.nonadiabatic = 1.0 - survival_free_time(traj, model, t, opts);
  b.phonon = phonon_leakage(table, table.couplings(mode), mode, t);
  b.probability = 1.0 - b.nonadiabatic - b.phonon;
  check_regime(b.probability, "survival_one_phonon");
  return b;
}

SurvivalBreakdown survival_superposition(const Trajectory& traj, const MorseModel& model,
                                         const ContinuumOverlaps& table, const PhononMode& mode,
                                         double t, const SurvivalOptions& opts) {
  const std::vector<Complex> d = table.couplings(mode);
  SurvivalBreakdown b;
  b.nonadiabatic = 1.0 - survival_free_time(traj, model, t, opts);
  b.phonon = phonon_leakage(table, d, mode, t);
  const Complex y = cross_amplitude(traj, table, d, mode, t);
  b.cross = -2.0 * (Complex{0.0, 1.0} * y).real();
  b.probability = 1.0 - b.nonadiabatic - 0.5 * b.phonon + b.cross;
  check_regime(b.probability, "survival_superposition");
  return b;
}

SurvivalSeries survival_series(const Trajectory& traj, const MorseModel& model,
                               std::span<const double> times, std::span<const PhononMode> modes,
                               const SurvivalOptions& opts, bool strict,
                               const ContinuumOverlaps* overlaps) {
  SurvivalSeries s;
  s.times.assign(times.begin(), times.end());
  double t_max = 0.0;
  for (double t : times) t_max = std::max(t_max, t);
  KernelOptions ko;
  ko.kappa_max = opts.kappa_max;
  const KernelEvaluator k(model, std::max(t_max, 1e-3), ko);
  const KernelCache cache(k, std::max(t_max, 1e-3));
  const LeakageSpectrum spec(model);
  std::vector<std::vector<Complex>> d;
  std::optional<ContinuumOverlaps> owned;
  if (!modes.empty() && overlaps == nullptr) overlaps = &owned.emplace(model);
  for (const auto& m : modes) d.push_back(overlaps->couplings(m));
  auto v = [&](double t) { return traj.empty() ? 0.0 : velocity(traj, t); };
  for (double t : times) {
    const double pf = survival_free_time(v, cache, t, opts);
    double cross = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m)
      cross += std::norm(cross_amplitude(traj, *overlaps, d[m], modes[m], t));
    s.p_free.push_back(pf);
    s.p_free_spectral.push_back(survival_free_spectral(traj, spec, t, opts));
    s.cross.push_back(cross);
    s.p_total.push_back(pf + cross);
    for (double p : {pf, s.p_free_spectral.back(), pf + cross}) {
      if (p >= -0.05 && p <= 1.05) continue;
      if (strict) check_regime(p, "survival_series at t = " + std::to_string(t));
      s.breakdown = true;
    }
  }
  return s;
}

AdiabaticityReport adiabaticity_report(const VelocityFn& velocity, const MorseModel& model,
                                       std::span<const double> kappa_grid,
                                       std::span<const double> tau_grid, double margin) {
  AdiabaticityReport r;
  r.taus.assign(tau_grid.begin(), tau_grid.end());
  r.kappas.assign(kappa_grid.begin(), kappa_grid.end());
  r.margin = margin;
  std::vector<double> mu;
  for (double kappa : kappa_grid) {
    const MatrixElement e = matrix_element(model, kappa);
    mu.push_back(std::abs(e.mu()));
    r.rhs.push_back(e.omega_k0);
  }
  for (double tau : tau_grid) {
    const double p = std::abs(velocity(tau));
    for (std::size_t j = 0; j < kappa_grid.size(); ++j) {
      const double lhs = p * mu[j];
      const bool bad = lhs >= margin * r.rhs[j];
      r.lhs.push_back(lhs);
      r.violated.push_back(bad);
      if (!bad) continue;
      if (r.violations == 0 || kappa_grid[j] < r.band_lo) r.band_lo = kappa_grid[j];
      if (r.violations == 0 || kappa_grid[j] > r.band_hi) r.band_hi = kappa_grid[j];
      ++r.violations;
    }
  }
  return r;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr std::array<double, 7> kB5 = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                       -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr std::array<double, 7> kB4 = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                       -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

// State layout: [Re alpha, Im alpha, Re beta_0.., Im beta_0..]
class FreeDynamics {
 public:
  FreeDynamics(const MorseModel& model, VelocityFn velocity, double dk, double kappa_max)
      : velocity_(std::move(velocity)) {
    for (double kappa = 0.5 * dk; kappa < kappa_max; kappa += dk) {
      const MatrixElement e = matrix_element(model, kappa);
      omega_.push_back(e.omega_k0);
      coupling_.push_back(e.mu() * std::sqrt(dk));
    }
    const std::size_t n = omega_.size();
    c_.resize(n);
    s_.resize(n);
    gr_.resize(n);
    gi_.resize(n);
  }

  std::size_t modes() const noexcept { return omega_.size(); }

  void operator()(double t, std::span<const double> y, std::span<double> dy) {
    const std::size_t n = modes();
    const double p = velocity_(t);
    simd::sincos_table(omega_, t, c_, s_);
    // gamma_j = p mu_j sqrt(dk) e^{-i omega_j t}
    for (std::size_t j = 0; j < n; ++j) {
      gr_[j] = p * coupling_[j] * c_[j];
      gi_[j] = -p * coupling_[j] * s_[j];
    }
    const auto br = y.subspan(2, n);
    const auto bi = y.subspan(2 + n, n);
    const std::complex<double> sum = simd::complex_dot(gr_, gi_, br, bi);
    dy[0] = -sum.real();
    dy[1] = -sum.imag();
    const double ar = y[0], ai = y[1];
    for (std::size_t j = 0; j < n; ++j) {
      dy[2 + j] = gr_[j] * ar + gi_[j] * ai;
      dy[2 + n + j] = gr_[j] * ai - gi_[j] * ar;
    }
  }

 private:
  VelocityFn velocity_;
  std::vector<double> omega_, coupling_;
  std::vector<double> c_, s_, gr_, gi_;
};

}  // namespace

SimulationResult simulate_discretized_free(const MorseModel& model, const VelocityFn& velocity,
                                           double delta_kappa, double kappa_max, double t,
                                           const SimulationOptions& opts) {
  if (!(delta_kappa > 0.0) || !(kappa_max > delta_kappa))
    throw DomainError("simulate_discretized_free: need 0 < delta_kappa < kappa_max");
  FreeDynamics f(model, velocity, delta_kappa, kappa_max);
  const std::size_t dim = 2 + 2 * f.modes();
  std::vector<double> y(dim, 0.0), y5(dim), err(dim), tmp(dim);
  y[0] = 1.0;
  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.resize(dim);

  SimulationResult res;
  res.modes = f.modes();
  double now = 0.0;
  double h = std::min(opts.initial_step, t);
  f(now, y, k[0]);
  while (now < t) {
    if (res.steps >= opts.max_steps)
      throw StepSizeError("simulate_discretized_free: step budget exhausted at t = " + std::to_string(now));
    h = std::min(h, t - now);
    for (int stage = 1; stage < 7; ++stage) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = y[i];
        for (int j = 0; j < stage; ++j) acc += h * kA[stage][j] * k[j][i];
        tmp[i] = acc;
      }
      f(now + kC[stage] * h, tmp, k[stage]);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double hi5 = 0.0, hi4 = 0.0;
      for (int j = 0; j < 7; ++j) {
        hi5 += kB5[j] * k[j][i];
        hi4 += kB4[j] * k[j][i];
      }
      y5[i] = y[i] + h * hi5;
      const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      norm = std::max(norm, std::abs(h * (hi5 - hi4)) / sc);
    }
    if (norm <= 1.0) {
      now += h;
      y.swap(y5);
      k[0].swap(k[6]);  // first-same-as-last
      ++res.steps;
    }
    const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < opts.min_step && now < t)
      throw StepSizeError("simulate_discretized_free: step size underflow at t = " + std::to_string(now));
  }
  res.survival = y[0] * y[0] + y[1] * y[1];
  res.norm = 0.0;
  for (double v : y) res.norm += v * v;
  return res;
}

}  // namespace tweezer
