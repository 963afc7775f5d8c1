#include "uwloc/numerics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "uwloc/errors.hpp"

namespace uwloc {

namespace {

// Below this work estimate direct convolution beats FFT setup cost.
constexpr std::size_t kDirectConvLimit = 1 << 20;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// FFTW planning is not thread safe; execution of a created plan is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  const std::size_t nc = n / 2 + 1;

  double* in = fftw_alloc_real(n);
  fftw_complex* fa = fftw_alloc_complex(nc);
  fftw_complex* fb = fftw_alloc_complex(nc);

  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, fa, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, in, FFTW_ESTIMATE);
  }

  std::fill(in, in + n, 0.0);
  std::copy(a.begin(), a.end(), in);
  fftw_execute_dft_r2c(fwd, in, fa);

  std::fill(in, in + n, 0.0);
  std::copy(b.begin(), b.end(), in);
  fftw_execute_dft_r2c(fwd, in, fb);

  for (std::size_t i = 0; i < nc; ++i) {
    const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
    const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
    fa[i][0] = re;
    fa[i][1] = im;
  }

  fftw_execute_dft_c2r(bwd, fa, in);

  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = in[i] * scale;

  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(in);
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

std::vector<double> direct_convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return out;
}

}  // namespace

GriddedPdf::GriddedPdf(double origin, double step, std::vector<double> mass)
    : origin_(origin), step_(step), mass_(std::move(mass)) {
  if (!(step_ > 0.0)) throw ConfigError("GriddedPdf: step must be positive");
  if (mass_.size() < 2) throw ConfigError("GriddedPdf: need at least two grid nodes");
  for (double& v : mass_) {
    if (!std::isfinite(v)) throw NumericError("GriddedPdf: non-finite density value");
    if (v < 0.0) v = 0.0;
  }
}

GriddedPdf GriddedPdf::from_function(double lo, double hi, std::size_t n,
                                     const std::function<double(double)>& f) {
  if (!(hi > lo)) throw ConfigError("GriddedPdf::from_function: empty range");
  if (n < 2) throw ConfigError("GriddedPdf::from_function: need at least two nodes");
  const double step = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] = std::max(0.0, f(lo + step * static_cast<double>(i)));
  }
  GriddedPdf pdf(lo, step, std::move(mass));
  pdf.normalize();
  return pdf;
}

GriddedPdf GriddedPdf::delta_at(double x, double step) {
  // Three nodes centered one cell around x; all mass on the middle node.
  std::vector<double> mass = {0.0, 1.0 / step, 0.0};
  return GriddedPdf(x - step, step, std::move(mass));
}

double GriddedPdf::total_mass() const {
  double sum = 0.5 * (mass_.front() + mass_.back());
  for (std::size_t i = 1; i + 1 < mass_.size(); ++i) sum += mass_[i];
  return sum * step_;
}

void GriddedPdf::normalize() {
  const double total = total_mass();
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("GriddedPdf::normalize: zero or non-finite total mass");
  for (double& v : mass_) v /= total;
}

double GriddedPdf::mean() const {
  double sum = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i + 1 < mass_.size(); ++i) {
    const double x0 = abscissa(i), x1 = abscissa(i + 1);
    const double f0 = mass_[i], f1 = mass_[i + 1];
    sum += 0.5 * step_ * (x0 * f0 + x1 * f1);
    norm += 0.5 * step_ * (f0 + f1);
  }
  return sum / norm;
}

double GriddedPdf::variance() const {
  const double mu = mean();
  double sum = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i + 1 < mass_.size(); ++i) {
    const double d0 = abscissa(i) - mu, d1 = abscissa(i + 1) - mu;
    sum += 0.5 * step_ * (d0 * d0 * mass_[i] + d1 * d1 * mass_[i + 1]);
    norm += 0.5 * step_ * (mass_[i] + mass_[i + 1]);
  }
  return sum / norm;
}

double GriddedPdf::value_at(double x) const {
  const double t = (x - origin_) / step_;
  if (t < 0.0 || t > static_cast<double>(mass_.size() - 1)) return 0.0;
  const std::size_t i = std::min(static_cast<std::size_t>(t), mass_.size() - 2);
  const double frac = t - static_cast<double>(i);
  return mass_[i] * (1.0 - frac) + mass_[i + 1] * frac;
}

std::vector<double> GriddedPdf::cumulative() const {
  std::vector<double> cdf(mass_.size());
  cdf[0] = 0.0;
  for (std::size_t i = 1; i < mass_.size(); ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * step_ * (mass_[i - 1] + mass_[i]);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw NumericError("GriddedPdf::cumulative: zero total mass");
  for (double& v : cdf) v /= total;
  return cdf;
}

double GriddedPdf::support_min() const {
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (mass_[i] > 0.0) return abscissa(i);
  }
  throw NumericError("GriddedPdf::support_min: empty density");
}

double GriddedPdf::support_max() const {
  for (std::size_t i = mass_.size(); i-- > 0;) {
    if (mass_[i] > 0.0) return abscissa(i);
  }
  throw NumericError("GriddedPdf::support_max: empty density");
}

GriddedPdf GriddedPdf::shifted(double dx) const { return GriddedPdf(origin_ + dx, step_, mass_); }

GriddedPdf GriddedPdf::truncated_below(double x) const {
  std::vector<double> mass = mass_;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (abscissa(i) < x) mass[i] = 0.0;
  }
  GriddedPdf out(origin_, step_, std::move(mass));
  out.normalize();
  return out;
}

GriddedPdf convolve(const GriddedPdf& a, const GriddedPdf& b) {
  const double rel_step_diff = std::abs(a.step() - b.step()) / a.step();
  if (rel_step_diff > 1e-9) throw ConfigError("convolve: grids must share the same step");

  std::vector<double> raw;
  if (a.size() * b.size() <= kDirectConvLimit) {
    raw = direct_convolve(a.mass(), b.mass());
  } else {
    raw = fft_convolve(a.mass(), b.mass());  // round-off ringing clamped by the ctor
  }
  for (double& v : raw) v *= a.step();

  GriddedPdf out(a.origin() + b.origin(), a.step(), std::move(raw));
  out.normalize();
  return out;
}

GriddedPdf mix(std::span<const GriddedPdf> components, std::span<const double> weights) {
  if (components.empty() || components.size() != weights.size())
    throw ConfigError("mix: need matching non-empty component and weight lists");
  const double step = components[0].step();
  double lo = components[0].origin();
  double hi = components[0].abscissa(components[0].size() - 1);
  for (const GriddedPdf& c : components) {
    if (std::abs(c.step() - step) / step > 1e-9)
      throw ConfigError("mix: components must share the same step");
    lo = std::min(lo, c.origin());
    hi = std::max(hi, c.abscissa(c.size() - 1));
  }

  const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 2;
  std::vector<double> mass(n, 0.0);
  for (std::size_t k = 0; k < components.size(); ++k) {
    const GriddedPdf& c = components[k];
    const double w = weights[k];
    if (w == 0.0) continue;
    const double offset = (c.origin() - lo) / step;
    const std::size_t base = static_cast<std::size_t>(offset);
    const double frac = offset - static_cast<double>(base);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double m = w * c.mass()[i];
      mass[base + i] += m * (1.0 - frac);
      mass[base + i + 1] += m * frac;
    }
  }

  GriddedPdf out(lo, step, std::move(mass));
  out.normalize();
  return out;
}

double invert_cdf(const GriddedPdf& f, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("invert_cdf: p must lie in [0, 1]");
  if (p == 0.0) return f.support_min();
  const std::vector<double> cdf = f.cumulative();
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (cdf[i] >= p) return f.abscissa(i);
  }
  return f.abscissa(f.size() - 1);
}

ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  if (!(lo < hi)) throw DomainError("maximize_scalar: need lo < hi");
  if (!(tol > 0.0)) throw DomainError("maximize_scalar: tolerance must be positive");

  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw NumericError("maximize_scalar: non-finite objective value");
    return v;
  };

  // Coarse scan to bracket the global maximum before golden-section.
  constexpr int kScanPoints = 129;
  double best_x = lo, best_v = eval(lo);
  const double span = hi - lo;
  for (int i = 1; i < kScanPoints; ++i) {
    const double x = lo + span * static_cast<double>(i) / (kScanPoints - 1);
    const double v = eval(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const double h = span / (kScanPoints - 1);
  double a = std::max(lo, best_x - h);
  double b = std::min(hi, best_x + h);

  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, eval(xm)};
}

double binomial_tail(int n, int k_min, double p) {
  if (n < 0 || k_min < 0) throw DomainError("binomial_tail: negative arguments");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_tail: p must lie in [0, 1]");
  if (k_min > n) return 0.0;
  if (k_min == 0) return 1.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double tail = 0.0;
  for (int k = k_min; k <= n; ++k) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(n - k + 1.0) + k * std::log(p) +
                            (n - k) * std::log1p(-p);
    tail += std::exp(log_term);
  }
  return std::min(tail, 1.0);
}

double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target, double tol) {
  if (!(lo < hi)) throw DomainError("bisect_increasing: need lo < hi");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > target || fhi < target)
    throw DomainError("bisect_increasing: target not bracketed by [f(lo), f(hi)]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace uwloc
