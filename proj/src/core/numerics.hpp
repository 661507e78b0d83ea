#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace virtimu {

/// Natural cubic spline over uniformly spaced knots x_i = x0 + i*dx.
/// Interpolates exactly at knots; constant and linear data reproduce
/// themselves up to rounding.
class CubicSpline {
 public:
  CubicSpline(double x0, double dx, std::span<const double> values);

  double eval(double x) const;

  std::size_t knot_count() const { return a_.size(); }

 private:
  double x0_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> a_, b_, c_, d_;  // per-interval cubic coefficients
};

/// Empirical quantile of sorted samples at level p in [0,1]: linear
/// interpolation between order statistics, q(p) = s[h] + frac(h) * (s[h+1]
/// - s[h]) with h = (n-1) * p. Shared by the ECDF features and the rank map.
double interp_quantile(std::span<const double> sorted, double p);

}  // namespace virtimu
