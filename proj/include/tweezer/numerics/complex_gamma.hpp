#pragma once

#include <complex>

namespace tweezer {

using Complex = std::complex<double>;

/// log Gamma(z) by Lanczos (g = 7, 9 terms) with reflection for Re z < 1/2.
/// Only exp() of the result is pinned down; the imaginary part is not
/// reduced to a particular 2*pi branch. Throws PoleError at z = 0, -1, -2, ...
Complex log_gamma(Complex z);

inline Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

/// log sin(pi z), stable for large |Im z|.
Complex log_sin_pi(Complex z);

/// true when z is (numerically exactly) a real integer <= 0
bool is_nonpositive_integer(Complex z) noexcept;

}  // namespace tweezer
