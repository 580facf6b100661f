#include "tweezer/numerics/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tweezer/errors.hpp"

namespace tweezer {

Polynomial::Polynomial(std::vector<Complex> ascending) : c_(std::move(ascending)) {
  if (c_.empty()) c_.push_back(0.0);
  trim();
}

Polynomial Polynomial::from_real(const std::vector<double>& ascending) {
  return Polynomial(std::vector<Complex>(ascending.begin(), ascending.end()));
}

void Polynomial::trim() {
  while (c_.size() > 1 && c_.back() == Complex{}) c_.pop_back();
}

bool Polynomial::has_real_coefficients() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](Complex v) { return v.imag() == 0.0; });
}

Complex Polynomial::operator()(Complex s) const noexcept {
  Complex acc = c_.back();
  for (std::size_t k = c_.size() - 1; k-- > 0;) acc = acc * s + c_[k];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() == 1) return Polynomial{};
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  std::vector<Complex> r(std::max(p.c_.size(), q.c_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = p[k] + q[k];
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& p, const Polynomial& q) {
  std::vector<Complex> r(std::max(p.c_.size(), q.c_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = p[k] - q[k];
  return Polynomial(std::move(r));
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  std::vector<Complex> r(p.c_.size() + q.c_.size() - 1);
  for (std::size_t i = 0; i < p.c_.size(); ++i)
    for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
  return Polynomial(std::move(r));
}

Polynomial operator*(Complex k, const Polynomial& p) {
  std::vector<Complex> r = p.c_;
  for (auto& v : r) v *= k;
  return Polynomial(std::move(r));
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// |p|(|s|): the scale against which a residual is judged
double abs_poly(const std::vector<Complex>& c, double r) {
  double acc = std::abs(c.back());
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * r + std::abs(c[k]);
  return acc;
}

void eval_with_derivative(const std::vector<Complex>& c, Complex s, Complex* p, Complex* dp) {
  Complex v = c.back();
  Complex d = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    d = d * s + v;
    v = v * s + c[k];
  }
  *p = v;
  *dp = d;
}

void newton_polish(const std::vector<Complex>& c, Complex& z) {
  Complex p, dp;
  eval_with_derivative(c, z, &p, &dp);
  for (int it = 0; it < 4 && dp != Complex{}; ++it) {
    const Complex trial = z - p / dp;
    Complex pt, dpt;
    eval_with_derivative(c, trial, &pt, &dpt);
    if (!(std::abs(pt) < std::abs(p))) break;
    z = trial;
    p = pt;
    dp = dpt;
  }
}

// Pair up conjugates and snap lone near-real roots for real polynomials.
void enforce_conjugate_symmetry(const std::vector<Complex>& c, std::vector<Complex>& roots) {
  const std::size_t n = roots.size();
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    const double scale = std::max(1.0, std::abs(roots[i]));
    std::size_t best = n;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || done[j]) continue;
      const double d = std::abs(roots[j] - std::conj(roots[i]));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    const bool near_real = std::abs(roots[i].imag()) <= 1e-9 * scale;
    if (best < n && !near_real && best_dist <= 1e-6 * scale) {
      const Complex avg = 0.5 * (roots[i] + std::conj(roots[best]));
      roots[i] = avg;
      roots[best] = std::conj(avg);
      done[i] = done[best] = true;
    } else if (near_real) {
      Complex z(roots[i].real(), 0.0);
      newton_polish(c, z);
      roots[i] = Complex(z.real(), 0.0);
      done[i] = true;
    }
  }
}

}  // namespace

RootSet find_roots(const Polynomial& poly, const RootOptions& opts) {
  if (poly.degree() < 1) throw DegenerateParameterError("find_roots: degree must be >= 1");
  const auto& all = poly.coefficients();
  RootSet out;

  // exact zero roots first
  std::size_t zeros = 0;
  while (all[zeros] == Complex{}) ++zeros;
  out.roots.assign(zeros, Complex{});
  std::vector<Complex> c(all.begin() + static_cast<std::ptrdiff_t>(zeros), all.end());
  const std::size_t n = c.size() - 1;

  if (n == 1) {
    out.roots.push_back(-c[0] / c[1]);
  } else if (n > 1) {
    const Complex lead = c.back();
    for (auto& v : c) v /= lead;
    // initial guesses on a circle of radius |c0|^{1/n}, rotated off the axes
    const double radius = std::max(std::pow(std::abs(c[0]), 1.0 / static_cast<double>(n)), 1e-3);
    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / n + 0.4;
      z[k] = std::polar(radius, angle);
    }
    std::vector<bool> converged(n, false);
    std::size_t it = 0;
    for (; it < opts.max_iterations; ++it) {
      bool all_done = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (converged[i]) continue;
        Complex p, dp;
        eval_with_derivative(c, z[i], &p, &dp);
        if (std::abs(p) <= 4.0 * static_cast<double>(n) * kEps * abs_poly(c, std::abs(z[i]))) {
          converged[i] = true;
          continue;
        }
        all_done = false;
        const Complex ratio = p / dp;
        Complex repulsion = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) repulsion += 1.0 / (z[i] - z[j]);
        const Complex step = ratio / (1.0 - ratio * repulsion);
        z[i] -= step;
        if (std::abs(step) <= kEps * std::abs(z[i])) converged[i] = true;
      }
      if (all_done) break;
    }
    if (it == opts.max_iterations)
      throw NonConvergenceError("find_roots: Aberth iteration did not converge");
    for (auto& root : z) newton_polish(c, root);
    if (poly.has_real_coefficients()) enforce_conjugate_symmetry(c, z);
    out.roots.insert(out.roots.end(), z.begin(), z.end());
  }

  std::sort(out.roots.begin(), out.roots.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  for (std::size_t i = 0; i < out.roots.size() && !out.has_multiple; ++i)
    for (std::size_t j = i + 1; j < out.roots.size(); ++j)
      if (std::abs(out.roots[i] - out.roots[j]) <=
          opts.multiplicity_tol * std::max(1.0, std::abs(out.roots[i]))) {
        out.has_multiple = true;
        break;
      }
  return out;
}

}  // namespace tweezer
