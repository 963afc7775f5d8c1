#include "uwloc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "uwloc/errors.hpp"

namespace uwloc {

namespace {

// Linear interpolation into a node-sampled CDF.
double interp_cdf(const std::vector<double>& cdf, double origin, double step, double x) {
  const double t = (x - origin) / step;
  if (t <= 0.0) return 0.0;
  if (t >= static_cast<double>(cdf.size() - 1)) return 1.0;
  const std::size_t i = static_cast<std::size_t>(t);
  const double frac = t - static_cast<double>(i);
  return cdf[i] * (1.0 - frac) + cdf[i + 1] * frac;
}

double poisson_pmf(int q, double mean) {
  if (mean <= 0.0) return q == 0 ? 1.0 : 0.0;
  return std::exp(q * std::log(mean) - mean - std::lgamma(q + 1.0));
}

// integral f_I(v) * S(gamma_0 (N_0B + v)) dv over the interference grid,
// by iterated trapezoid; one 2x refinement guards the step size.
double collision_survival_integral(const PhyConfig& phy, const GriddedPdf& fi,
                                   const std::function<double(double)>& survivor) {
  const double g = phy.snr_threshold;
  const double noise = phy.noise_power_w;

  auto integrate = [&](bool with_midpoints) {
    double sum = 0.0;
    const double h = fi.step();
    for (std::size_t i = 0; i + 1 < fi.size(); ++i) {
      const double v0 = fi.abscissa(i), v1 = fi.abscissa(i + 1);
      const double f0 = fi.mass()[i] * survivor(g * (noise + v0));
      const double f1 = fi.mass()[i + 1] * survivor(g * (noise + v1));
      if (with_midpoints) {
        const double vm = 0.5 * (v0 + v1);
        const double fm = fi.value_at(vm) * survivor(g * (noise + vm));
        sum += h / 4.0 * (f0 + 2.0 * fm + f1);
      } else {
        sum += 0.5 * h * (f0 + f1);
      }
    }
    return sum;
  };

  const double coarse = integrate(false);
  const double refined = integrate(true);
  if (std::abs(refined - coarse) > 1e-4)
    throw NumericError("collision survival quadrature moved by more than 1e-4 on refinement");
  return std::clamp(refined, 0.0, 1.0);
}

}  // namespace

void PhyConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("PhyConfig: ") + name + " must be positive");
  };
  positive(bandwidth_hz, "B");
  positive(bits_per_symbol, "b_s");
  if (!(bits_per_packet >= 0.0)) throw ConfigError("PhyConfig: b_p must be non-negative");
  if (!(guard_time_s >= 0.0)) throw ConfigError("PhyConfig: T_g must be non-negative");
  positive(tx_power_w, "P_0");
  if (!(listen_power_w >= 0.0)) throw ConfigError("PhyConfig: P_L must be non-negative");
  positive(ref_gain, "alpha_0");
  positive(ref_distance_m, "d_0");
  positive(path_loss_exp, "n_0");
  positive(snr_threshold, "gamma_0");
  positive(noise_power_w, "N_0B");
  if (!(tof_noise_coeff >= 0.0)) throw ConfigError("PhyConfig: k_E must be non-negative");
}

double packet_duration(const PhyConfig& phy) {
  return phy.guard_time_s + (phy.bits_per_packet / phy.bits_per_symbol) / phy.bandwidth_hz;
}

double received_power(const PhyConfig& phy, double distance_m) {
  return phy.ref_gain * phy.tx_power_w *
         std::pow(phy.ref_distance_m / distance_m, phy.path_loss_exp);
}

GriddedPdf received_power_pdf(const PhyConfig& phy, const GriddedPdf& dist_pdf,
                              std::size_t grid_size) {
  const double d_lo = dist_pdf.support_min();
  const double d_hi = dist_pdf.support_max();
  if (!(d_lo > 0.0))
    throw DomainError("received_power_pdf: distance density must be bounded away from 0");

  const double x_lo = received_power(phy, d_hi);
  const double x_hi = received_power(phy, d_lo);
  const double step = (x_hi - x_lo) / static_cast<double>(grid_size - 1);

  const std::vector<double> dist_cdf = dist_pdf.cumulative();
  // P[X <= x] = P[D >= d(x)] with d(x) the inverse power law.
  auto power_cdf = [&](double x) {
    if (x <= x_lo) return 0.0;
    if (x >= x_hi) return 1.0;
    const double d = phy.ref_distance_m *
                     std::pow(phy.ref_gain * phy.tx_power_w / x, 1.0 / phy.path_loss_exp);
    return 1.0 - interp_cdf(dist_cdf, dist_pdf.origin(), dist_pdf.step(), d);
  };

  // Cell-mass assignment: node i owns [x_i - step/2, x_i + step/2].
  std::vector<double> mass(grid_size);
  double prev_edge_cdf = power_cdf(x_lo);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double right_edge = x_lo + step * (static_cast<double>(i) + 0.5);
    const double edge_cdf = power_cdf(right_edge);
    mass[i] = std::max(0.0, edge_cdf - prev_edge_cdf) / step;
    prev_edge_cdf = edge_cdf;
  }

  GriddedPdf out(x_lo, step, std::move(mass));
  out.normalize();
  return out;
}

GriddedPdf interference_pdf(const GriddedPdf& x0, int q) {
  if (q < 1) throw DomainError("interference_pdf: need at least one interferer");
  GriddedPdf acc = x0;
  for (int i = 1; i < q; ++i) acc = convolve(acc, x0);
  return acc;
}

double survival_given_q(const PhyConfig& phy, const GriddedPdf& x0, int q) {
  if (q < 0) throw DomainError("survival_given_q: q must be non-negative");
  phy.validate();

  const std::vector<double> x0_cdf = x0.cumulative();
  auto survivor = [&](double x) {
    return 1.0 - interp_cdf(x0_cdf, x0.origin(), x0.step(), x);
  };

  if (q == 0) return survivor(phy.snr_threshold * phy.noise_power_w);

  // The inner integral over the SINR variable reduces to the survivor
  // function of the desired power at gamma_0 * w, leaving one quadrature
  // over the interference grid.
  const GriddedPdf fi = interference_pdf(x0, q);
  return collision_survival_integral(phy, fi, survivor);
}

SurvivalProfile make_survival_profile(const PhyConfig& phy, const GriddedPdf& x0, int max_q) {
  if (max_q < 0) throw DomainError("make_survival_profile: max_q must be non-negative");
  SurvivalProfile profile;
  profile.ps_given_q.reserve(static_cast<std::size_t>(max_q) + 1);

  const std::vector<double> x0_cdf = x0.cumulative();
  profile.ps_given_q.push_back(survival_given_q(phy, x0, 0));

  // Grow the interference density one convolution at a time so the whole
  // profile costs max_q convolutions instead of O(max_q^2).
  auto survivor = [&](double x) {
    return 1.0 - interp_cdf(x0_cdf, x0.origin(), x0.step(), x);
  };
  GriddedPdf fi = x0;
  for (int q = 1; q <= max_q; ++q) {
    if (q > 1) fi = convolve(fi, x0);
    profile.ps_given_q.push_back(collision_survival_integral(phy, fi, survivor));
  }
  return profile;
}

double packet_success_prob(const SurvivalProfile& profile, int n_anchors, double lambda,
                           double packet_len_s, double loss_prob, QSumLimit limit) {
  if (lambda < 0.0) throw DomainError("packet_success_prob: lambda must be non-negative");
  if (!(loss_prob >= 0.0 && loss_prob <= 1.0))
    throw DomainError("packet_success_prob: loss probability must lie in [0, 1]");

  const int q_max = limit == QSumLimit::kNMinus1 ? n_anchors - 1 : n_anchors;
  if (static_cast<int>(profile.ps_given_q.size()) <= q_max)
    throw ConfigError("packet_success_prob: survival profile too short for this anchor count");

  const double load = 2.0 * n_anchors * lambda * packet_len_s;
  double ps = 0.0;
  for (int q = 0; q <= q_max; ++q) {
    ps += poisson_pmf(q, load) * profile.ps_given_q[static_cast<std::size_t>(q)];
  }
  return (1.0 - loss_prob) * ps;
}

double packet_success_prob(const PhyConfig& phy, const GriddedPdf& x0, int n_anchors,
                           double lambda, double loss_prob, QSumLimit limit) {
  const int q_max = limit == QSumLimit::kNMinus1 ? n_anchors - 1 : n_anchors;
  const SurvivalProfile profile = make_survival_profile(phy, x0, q_max);
  return packet_success_prob(profile, n_anchors, lambda, packet_duration(phy), loss_prob,
                             limit);
}

double cfs_link_prob(const PhyConfig& phy, const GriddedPdf& x0, double loss_prob) {
  if (!(loss_prob >= 0.0 && loss_prob <= 1.0))
    throw DomainError("cfs_link_prob: loss probability must lie in [0, 1]");
  const std::vector<double> cdf = x0.cumulative();
  const double threshold = phy.snr_threshold * phy.noise_power_w;
  const double clear = 1.0 - interp_cdf(cdf, x0.origin(), x0.step(), threshold);
  return (1.0 - loss_prob) * clear;
}

}  // namespace uwloc
