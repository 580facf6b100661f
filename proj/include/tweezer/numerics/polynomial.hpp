#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "tweezer/numerics/complex_gamma.hpp"

namespace tweezer {

/// Dense polynomial with complex coefficients in ascending degree.
/// Trailing zero coefficients are trimmed, so the leading coefficient is
/// nonzero unless the polynomial is identically zero (degree 0, c = {0}).
class Polynomial {
 public:
  Polynomial() : c_{0.0} {}
  explicit Polynomial(std::vector<Complex> ascending);
  Polynomial(std::initializer_list<Complex> ascending)
      : Polynomial(std::vector<Complex>(ascending)) {}
  static Polynomial from_real(const std::vector<double>& ascending);

  std::size_t degree() const noexcept { return c_.size() - 1; }
  const std::vector<Complex>& coefficients() const noexcept { return c_; }
  Complex operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Complex{}; }
  Complex leading() const noexcept { return c_.back(); }
  bool is_zero() const noexcept { return c_.size() == 1 && c_[0] == Complex{}; }
  bool has_real_coefficients() const noexcept;

  Complex operator()(Complex s) const noexcept;
  Polynomial derivative() const;

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(Complex k, const Polynomial& p);

 private:
  void trim();
  std::vector<Complex> c_;
};

struct RootOptions {
  std::size_t max_iterations = 500;
  /// Roots closer than this (relative to max(1, |root|)) are reported as a cluster.
  double multiplicity_tol = 1e-6;
};

struct RootSet {
  std::vector<Complex> roots;  ///< sorted by (real, imag)
  bool has_multiple = false;
};

/// All complex roots by Aberth-Ehrlich simultaneous iteration followed by
/// Newton polishing. Real-coefficient inputs return exactly conjugate-paired
/// complex roots and exactly real real roots.
/// Throws NonConvergenceError when the iteration budget is exhausted.
RootSet find_roots(const Polynomial& p, const RootOptions& opts = {});

}  // namespace tweezer
