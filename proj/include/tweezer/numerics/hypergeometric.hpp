#pragma once

#include <cstddef>
#include <optional>

#include "tweezer/numerics/complex_gamma.hpp"

namespace tweezer {

struct SeriesOptions {
  /// Stop once three consecutive terms fall below rel_tol * |partial sum|.
  double rel_tol = 1e-16;
  std::size_t max_terms = 10000;
};

/// Kummer's confluent hypergeometric function M(a, b, z) by its power
/// series. Throws DegenerateParameterError when b is a non-positive
/// integer and ConvergenceError when the term budget runs out.
Complex kummer_m(Complex a, Complex b, Complex z, const SeriesOptions& opts = {});

/// Tricomi's U(a, b, z) for real z > 0.
///
/// Small z uses the connection formula
///   U = G(1-b)/G(a-b+1) M(a,b,z) + G(b-1)/G(a) z^{1-b} M(a-b+1,2-b,z).
/// Above kConnectionLimit the two M terms cancel catastrophically (both grow
/// like e^z), so U is taken from its Laplace integral at a+n, a+n+1 with
/// Re >= 2 and recurred back down in a, which is the stable direction for U.
/// When z is large against |a| |a - b + 1| the asymptotic series is summed
/// instead; there U can fall below the noise floor of the integral.
Complex tricomi_u(Complex a, Complex b, double z);

namespace hypergeometric_detail {
inline constexpr double kConnectionLimit = 6.0;
Complex tricomi_u_connection(Complex a, Complex b, double z);
/// Requires Re a > 0.
Complex tricomi_u_laplace(Complex a, Complex b, double z);
Complex tricomi_u_recurrence(Complex a, Complex b, double z);
/// Large-z asymptotic series; empty when it cannot reach full precision.
std::optional<Complex> tricomi_u_asymptotic(Complex a, Complex b, double z);
}  // namespace hypergeometric_detail

}  // namespace tweezer
