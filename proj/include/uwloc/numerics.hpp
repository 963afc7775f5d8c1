#ifndef UWLOC_NUMERICS_HPP
#define UWLOC_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace uwloc {

// Default node count for densities over distance- and time-like supports.
inline constexpr std::size_t kDefaultGridSize = 1 << 14;

// One-dimensional probability density sampled on a uniform grid.
// mass[i] is the density value at abscissa origin + i*step; integrals are
// trapezoidal. Densities are kept non-negative and normalized to unit mass.
class GriddedPdf {
 public:
  GriddedPdf(double origin, double step, std::vector<double> mass);

  // Samples f on n nodes spanning [lo, hi] and normalizes. Negative values
  // of f are clamped to zero.
  static GriddedPdf from_function(double lo, double hi, std::size_t n,
                                  const std::function<double(double)>& f);

  // Unit mass concentrated in the single grid cell containing x.
  static GriddedPdf delta_at(double x, double step);

  double origin() const { return origin_; }
  double step() const { return step_; }
  std::size_t size() const { return mass_.size(); }
  const std::vector<double>& mass() const { return mass_; }
  double abscissa(std::size_t i) const { return origin_ + step_ * static_cast<double>(i); }

  double total_mass() const;
  void normalize();

  double mean() const;
  double variance() const;

  // Density at x by linear interpolation; zero outside the grid.
  double value_at(double x) const;

  // Trapezoidal CDF at the grid nodes, scaled so the last entry is 1.
  std::vector<double> cumulative() const;

  // First/last abscissa carrying positive density.
  double support_min() const;
  double support_max() const;

  GriddedPdf shifted(double dx) const;

  // Zeroes all density below x and renormalizes.
  GriddedPdf truncated_below(double x) const;

 private:
  double origin_;
  double step_;
  std::vector<double> mass_;
};

// Density of the sum of two independent variables. Inputs must share the
// same step; the result is renormalized. Uses direct convolution for small
// grids and an FFT for large ones.
GriddedPdf convolve(const GriddedPdf& a, const GriddedPdf& b);

// Weighted mixture resampled onto one common grid (shared step required).
// Components whose origins differ by a fractional number of steps are
// deposited with two-point splitting, which preserves mass and mean.
GriddedPdf mix(std::span<const GriddedPdf> components, std::span<const double> weights);

// Smallest grid abscissa whose CDF reaches p. p = 0 returns the left edge
// of the support. Throws DomainError for p outside [0, 1].
double invert_cdf(const GriddedPdf& f, double p);

struct ScalarMax {
  double argmax = 0.0;
  double max = 0.0;
};

// Bracketed golden-section maximization: a coarse scan locates the bracket,
// golden-section refines it to absolute tolerance tol on the argument.
// Throws NumericError if f evaluates to a non-finite value.
ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double tol);

// P[X >= k_min] for X ~ Binomial(n, p).
double binomial_tail(int n, int k_min, double p);

// Root of f(x) = target for non-decreasing f, by bisection.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target, double tol);

}  // namespace uwloc

#endif
