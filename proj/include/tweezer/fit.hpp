#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tweezer/kernel.hpp"
#include "tweezer/numerics/polynomial.hpp"

namespace tweezer {

/// One term a1 e^{-b1 t} cos(w1 t) + c1 e^{-d1 t} sin(w2 t).
struct DampedOscTerm {
  double a1 = 0.0, b1 = 1.0, c1 = 0.0, d1 = 0.1, w1 = 0.0, w2 = 0.0;
};

/// g(t) = u(t) sum_j term_j(t); u is the unit step.
struct DampedOscFit {
  std::vector<DampedOscTerm> terms;
  double residual_norm = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t iterations = 0;

  double operator()(double t) const noexcept;
};

double evaluate_term(const DampedOscTerm& term, double t) noexcept;

/// Published reference parameters for the shipped trap.
DampedOscTerm reference_fit_term() noexcept;

/// Heuristic start: a1 = K(0), b1 from the 1/e point of the envelope of
/// local maxima of |K|, w1 = pi / (first zero-crossing spacing), c1 = 0,
/// d1 = b1 / 10, w2 = w1 / 2.
DampedOscTerm initial_guess(const KernelSamples& samples);

struct FitOptions {
  double t_min = 0.0;
  double t_max = 80.0;
  std::size_t min_samples = 50;
};

/// Least-squares fit of g(t) to the samples inside [t_min, t_max].
/// Throws DegenerateInputError (too few samples), FitDivergenceError and
/// AcausalFitError (b1 <= 0 or d1 <= 0 after fitting).
DampedOscFit fit_kernel(const KernelSamples& samples, std::span<const DampedOscTerm> init,
                        const FitOptions& opts = {});

/// Root-sum-square misfit of a fixed parameter set on the same window.
double fit_residual(const KernelSamples& samples, std::span<const DampedOscTerm> terms,
                    const FitOptions& opts = {});

/// G(s) = numerator(s) / denominator(s), real coefficients.
struct RationalLaplace {
  Polynomial numerator;
  Polynomial denominator;

  Complex operator()(Complex s) const { return numerator(s) / denominator(s); }
};

/// Exact Laplace transform of the fit over a common denominator:
/// a1 (s + b1) / ((s + b1)^2 + w1^2) + c1 w2 / ((s + d1)^2 + w2^2) per term.
RationalLaplace laplace_of_fit(const DampedOscFit& fit);

/// g(t) as sum_m A_m e^{mu_m t} (two exponentials per oscillator).
struct ExponentialSum {
  std::vector<Complex> amplitudes;
  std::vector<Complex> rates;
};
ExponentialSum exponential_form(const DampedOscFit& fit);

}  // namespace tweezer
