#pragma once

#include <complex>

#include "tweezer/fit.hpp"
#include "tweezer/optimizer.hpp"

namespace tweezer::testing {

inline const MorseModel& trap() {
  static const MorseModel m = build_model(0.5, 1.0, 1.0);
  return m;
}

/// Heuristic-start fit of the default kernel record (1600 samples on [0, 80]).
inline const DampedOscFit& fitted_kernel() {
  static const DampedOscFit fit = [] {
    const KernelSamples s = sample_kernel(trap(), 80.0, 1600);
    const DampedOscTerm guess = initial_guess(s);
    return fit_kernel(s, std::span(&guess, 1));
  }();
  return fit;
}

/// p(t) = amp e^{sigma t} sin(omega t) as a two-pole expansion.
inline Trajectory damped_sine(double amp, double sigma, double omega, double horizon) {
  Trajectory t;
  t.poles = {{sigma, omega}, {sigma, -omega}};
  t.residues = {{0.0, -0.5 * amp}, {0.0, 0.5 * amp}};
  t.p_dot0 = amp * omega;
  t.horizon = horizon;
  t.lambda = -1.0;
  return t;
}

}  // namespace tweezer::testing
