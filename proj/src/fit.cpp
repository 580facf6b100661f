#include "tweezer/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tweezer/errors.hpp"
#include "tweezer/numerics/least_squares.hpp"

namespace tweezer {

double evaluate_term(const DampedOscTerm& p, double t) noexcept {
  return p.a1 * std::exp(-p.b1 * t) * std::cos(p.w1 * t) +
         p.c1 * std::exp(-p.d1 * t) * std::sin(p.w2 * t);
}

double DampedOscFit::operator()(double t) const noexcept {
  if (t < 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& term : terms) acc += evaluate_term(term, t);
  return acc;
}

DampedOscTerm reference_fit_term() noexcept {
  return {0.5383, 0.5831, -0.1054, 0.0576, -0.3782, 0.14};
}

DampedOscTerm initial_guess(const KernelSamples& samples) {
  const auto& t = samples.times;
  const auto& k = samples.values;
  if (t.size() < 3) throw DegenerateInputError("initial_guess: need at least three samples");
  DampedOscTerm g;
  g.a1 = k.front();

  // envelope: first local maximum of |K| that falls below |K(0)| / e
  const double threshold = std::abs(k.front()) / std::numbers::e;
  double t_e = t.back();
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double v = std::abs(k[i]);
    const bool peak = v >= std::abs(k[i - 1]) && v >= std::abs(k[i + 1]);
    const bool monotone_head = std::abs(k[i]) <= std::abs(k[i - 1]);
    if ((peak || monotone_head) && v < threshold) {
      t_e = t[i];
      break;
    }
  }
  g.b1 = 1.0 / std::max(t_e - t.front(), 1e-12);

  std::vector<double> crossings;
  for (std::size_t i = 1; i < t.size() && crossings.size() < 2; ++i)
    if ((k[i - 1] < 0.0) != (k[i] < 0.0)) {
      const double f = k[i - 1] / (k[i - 1] - k[i]);
      crossings.push_back(t[i - 1] + f * (t[i] - t[i - 1]));
    }
  if (crossings.size() == 2)
    g.w1 = std::numbers::pi / (crossings[1] - crossings[0]);
  else if (crossings.size() == 1)
    g.w1 = std::numbers::pi / (2.0 * (crossings[0] - t.front()));
  else
    g.w1 = 0.0;
  g.c1 = 0.0;
  g.d1 = g.b1 / 10.0;
  g.w2 = g.w1 / 2.0;
  return g;
}

namespace {

std::vector<DataPoint> window(const KernelSamples& samples, const FitOptions& opts) {
  std::vector<DataPoint> data;
  for (std::size_t i = 0; i < samples.times.size(); ++i)
    if (samples.times[i] >= opts.t_min && samples.times[i] <= opts.t_max)
      data.push_back({samples.times[i], samples.values[i]});
  return data;
}

std::vector<double> pack(std::span<const DampedOscTerm> terms) {
  std::vector<double> p;
  for (const auto& t : terms) p.insert(p.end(), {t.a1, t.b1, t.c1, t.d1, t.w1, t.w2});
  return p;
}

std::vector<DampedOscTerm> unpack(std::span<const double> p) {
  std::vector<DampedOscTerm> terms;
  for (std::size_t j = 0; j + 6 <= p.size(); j += 6)
    terms.push_back({p[j], p[j + 1], p[j + 2], p[j + 3], p[j + 4], p[j + 5]});
  return terms;
}

double model(std::span<const double> p, double t) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 6 <= p.size(); j += 6)
    acc += p[j] * std::exp(-p[j + 1] * t) * std::cos(p[j + 4] * t) +
           p[j + 2] * std::exp(-p[j + 3] * t) * std::sin(p[j + 5] * t);
  return acc;
}

}  // namespace

double fit_residual(const KernelSamples& samples, std::span<const DampedOscTerm> terms,
                    const FitOptions& opts) {
  const auto p = pack(terms);
  double ss = 0.0;
  for (const auto& d : window(samples, opts)) {
    const double r = model(p, d.t) - d.y;
    ss += r * r;
  }
  return std::sqrt(ss);
}

DampedOscFit fit_kernel(const KernelSamples& samples, std::span<const DampedOscTerm> init,
                        const FitOptions& opts) {
  if (init.empty()) throw DegenerateInputError("fit_kernel: no initial terms");
  const auto data = window(samples, opts);
  if (data.size() < opts.min_samples)
    throw DegenerateInputError("fit_kernel: " + std::to_string(data.size()) +
                               " samples in the fit window, need " +
                               std::to_string(opts.min_samples));
  DampedOscFit fit;
  fit.t_min = opts.t_min;
  fit.t_max = opts.t_max;

  const bool all_zero = std::all_of(data.begin(), data.end(), [](const DataPoint& d) { return d.y == 0.0; });
  if (all_zero) {
    fit.terms.assign(init.begin(), init.end());
    for (auto& t : fit.terms) {
      t.a1 = 0.0;
      t.c1 = 0.0;
    }
    return fit;
  }

  LeastSquaresResult r;
  try {
    r = fit_least_squares(model, data, pack(init));
  } catch (const DivergenceError& e) {
    throw FitDivergenceError(std::string("fit_kernel: ") + e.what());
  }
  if (!std::isfinite(r.residual_norm))
    throw FitDivergenceError("fit_kernel: non-finite residual");
  fit.terms = unpack(r.params);
  fit.residual_norm = r.residual_norm;
  fit.iterations = r.iterations;
  for (const auto& t : fit.terms)
    if (!(t.b1 > 0.0) || !(t.d1 > 0.0))
      throw AcausalFitError("fit_kernel: decay rates b1 = " + std::to_string(t.b1) +
                            ", d1 = " + std::to_string(t.d1) + " must be positive");
  return fit;
}

RationalLaplace laplace_of_fit(const DampedOscFit& fit) {
  Polynomial num = Polynomial::from_real({0.0});
  Polynomial den = Polynomial::from_real({1.0});
  for (const auto& t : fit.terms) {
    // (s + b)^2 + w^2 = s^2 + 2 b s + b^2 + w^2
    const Polynomial q1 = Polynomial::from_real({t.b1 * t.b1 + t.w1 * t.w1, 2.0 * t.b1, 1.0});
    const Polynomial q2 = Polynomial::from_real({t.d1 * t.d1 + t.w2 * t.w2, 2.0 * t.d1, 1.0});
    const Polynomial n1 = Polynomial::from_real({t.a1 * t.b1, t.a1});
    const Polynomial n2 = Polynomial::from_real({t.c1 * t.w2});
    const Polynomial term_num = n1 * q2 + n2 * q1;
    const Polynomial term_den = q1 * q2;
    num = num * term_den + term_num * den;
    den = den * term_den;
  }
  return {num, den};
}

ExponentialSum exponential_form(const DampedOscFit& fit) {
  ExponentialSum e;
  const Complex i{0.0, 1.0};
  for (const auto& t : fit.terms) {
    e.amplitudes.insert(e.amplitudes.end(), {0.5 * t.a1, 0.5 * t.a1, t.c1 / (2.0 * i), -t.c1 / (2.0 * i)});
    e.rates.insert(e.rates.end(), {Complex{-t.b1, t.w1}, Complex{-t.b1, -t.w1},
                                   Complex{-t.d1, t.w2}, Complex{-t.d1, -t.w2}});
  }
  return e;
}

}  // namespace tweezer
