#include "numerics.hpp"

#include <algorithm>
#include <cmath>

namespace virtimu {

CubicSpline::CubicSpline(double x0, double dx, std::span<const double> values)
    : x0_(x0), dx_(dx) {
  std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("CubicSpline: needs at least 2 knots");
  if (dx <= 0.0) throw std::invalid_argument("CubicSpline: knot spacing must be positive");

  a_.assign(values.begin(), values.end());
  b_.assign(n, 0.0);
  c_.assign(n, 0.0);
  d_.assign(n, 0.0);

  if (n > 2) {
    // Second-derivative system for the natural spline: tridiagonal with
    // diagonal 4, off-diagonal 1 (uniform spacing), c_0 = c_{n-1} = 0.
    std::size_t m = n - 2;
    std::vector<double> rhs(m), diag(m, 4.0);
    for (std::size_t i = 0; i < m; ++i)
      rhs[i] = 3.0 * (a_[i + 2] - 2.0 * a_[i + 1] + a_[i]) / (dx * dx);
    for (std::size_t i = 1; i < m; ++i) {
      double w = 1.0 / diag[i - 1];
      diag[i] -= w;
      rhs[i] -= w * rhs[i - 1];
    }
    c_[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i >= 1; --i) c_[i] = (rhs[i - 1] - c_[i + 1]) / diag[i - 1];
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    b_[i] = (a_[i + 1] - a_[i]) / dx - dx * (2.0 * c_[i] + c_[i + 1]) / 3.0;
    d_[i] = (c_[i + 1] - c_[i]) / (3.0 * dx);
  }
}

double CubicSpline::eval(double x) const {
  double s = (x - x0_) / dx_;
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(std::floor(s));
  std::ptrdiff_t last = static_cast<std::ptrdiff_t>(a_.size()) - 2;
  if (i < 0) i = 0;
  if (i > last) i = last;
  double t = x - (x0_ + static_cast<double>(i) * dx_);
  return a_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
}

double interp_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("interp_quantile: empty sample");
  if (sorted.size() == 1) return sorted[0];
  p = std::clamp(p, 0.0, 1.0);
  double h = static_cast<double>(sorted.size() - 1) * p;
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo >= sorted.size() - 1) return sorted.back();
  double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace virtimu
