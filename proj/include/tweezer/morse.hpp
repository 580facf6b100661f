#pragma once

#include "tweezer/numerics/complex_gamma.hpp"

namespace tweezer {

/// Morse trap V(q) = D (e^{-2aq} - 2 e^{-aq}) for an impurity of mass m,
/// restricted to the single-bound-state window 0 < N < 1.
struct MorseModel {
  double D = 0.5;
  double a = 1.0;
  double m = 1.0;
  double N = 0.5;        ///< (N + 1/2)^2 = 2 m D / a^2
  double m_star = 1.0;   ///< m / a^2
  double omega0 = -0.125;  ///< bound-state frequency, -(a^2 / 2m) N^2
};

/// Throws DomainError for non-positive parameters, MultiBoundStateError for
/// N >= 1 and NoBoundStateError for N <= 0.
MorseModel build_model(double D, double a, double m);

/// -[D - sqrt(D / 2m*) + 1/(8 m*)], algebraically equal to omega0.
double bound_frequency_closed(const MorseModel& model);

/// omega_kappa = a^2 kappa^2 / (2m). Throws DomainError for kappa < 0.
double continuum_frequency(const MorseModel& model, double kappa);

/// omega_kappa0 = omega_kappa - omega0 >= |omega0|.
double gap_frequency(const MorseModel& model, double kappa);

/// z = (2N + 1) e^{-a x}
double morse_z(const MorseModel& model, double x) noexcept;

/// Normalization of phi_0 in x: sqrt(a / Gamma(2N)).
double bound_norm(const MorseModel& model);

/// delta(kappa - kappa')-normalization of phi_kappa in x:
/// sqrt(a) |Gamma(-N - i kappa)| sqrt(kappa sinh(2 pi kappa)) / pi, via logs.
double continuum_norm(const MorseModel& model, double kappa);

/// phi_0(x) = N_0 z^N e^{-z/2}
double bound_eigenfunction(const MorseModel& model, double x);

/// phi_kappa(x) = N(kappa) z^{-i kappa} e^{-z/2} U(-N - i kappa, 1 - 2 i kappa, z).
/// The product is real; throws RealificationError when the imaginary part
/// exceeds 1e-8 of the local envelope N(kappa) e^{-z/2} max(1, z)^N. The
/// integral route for U loses about e^{pi kappa / 2} relative accuracy, so
/// this guard trips for kappa beyond about 10 near the wall.
double continuum_eigenfunction(const MorseModel& model, double kappa, double x);

/// Bound-continuum moment mu~_{0 kappa} in closed form:
/// 2 D N_0 N(kappa) (N^2 + kappa^2) |Gamma(N + 1 + i kappa)|^2 / (2N + 1)^2.
/// The Gamma products are real, so the imaginary part is zero.
Complex dipole_moment_closed(const MorseModel& model, double kappa);

/// Same moment by quadrature of phi_0 (2 a D (e^{-2aq} - e^{-aq})) phi_kappa over q.
Complex dipole_moment_quadrature(const MorseModel& model, double kappa);

/// a_kappa = |mu~|^2 / omega_kappa0^2 >= 0; zero at kappa = 0.
double a_coefficient(const MorseModel& model, double kappa);

struct MatrixElement {
  double kappa = 0.0;
  Complex mu_tilde;
  double omega_k0 = 0.0;
  double a_kappa = 0.0;

  /// mu_{0 kappa} = mu~ / omega_kappa0
  double mu() const noexcept { return mu_tilde.real() / omega_k0; }
};

MatrixElement matrix_element(const MorseModel& model, double kappa);

}  // namespace tweezer
