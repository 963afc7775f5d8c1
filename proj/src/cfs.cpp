#include "uwloc/cfs.hpp"

#include <cmath>

#include "uwloc/errors.hpp"

namespace uwloc::cfs {

namespace {

double binomial_pmf(int n, int k, double p) {
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(n - k + 1.0) + k * std::log(p) +
                          (n - k) * std::log1p(-p);
  return std::exp(log_term);
}

// Distance density rescaled to a one-hop propagation-time density.
GriddedPdf to_time_density(const GriddedPdf& dist, double sound_speed) {
  std::vector<double> mass = dist.mass();
  for (double& v : mass) v *= sound_speed;
  return GriddedPdf(dist.origin() / sound_speed, dist.step() / sound_speed, std::move(mass));
}

}  // namespace

int Realization::lost_count() const {
  int n = 0;
  for (bool u : link_lost) n += u ? 1 : 0;
  return n;
}

double time_of_realization(const Realization& r, const NetworkConfig& net,
                           double packet_len_s) {
  net.validate();
  const std::size_t hops = static_cast<std::size_t>(net.num_anchors - 1);
  if (r.link_lost.size() != hops || r.hop_distance.size() != hops)
    throw ConfigError("time_of_realization: realization length must be N-1");

  const double c = net.sound_speed;
  double t = net.num_anchors * packet_len_s + r.request_distance / c +
             r.final_margin_distance / c;
  for (std::size_t j = 0; j < hops; ++j) {
    t += (r.link_lost[j] ? net.anchor_diameter() : r.hop_distance[j]) / c;
  }
  return t;
}

GriddedPdf time_pdf(const NetworkConfig& net, double packet_len_s, double loss_prob,
                    LocalizationMode mode, const DistanceModel* distances) {
  net.validate();
  if (!(loss_prob >= 0.0 && loss_prob <= 1.0))
    throw DomainError("time_pdf: loss probability must lie in [0, 1]");

  DistanceModel local = distances ? *distances : DistanceModel::for_region(net.region);
  const double c = net.sound_speed;
  const GriddedPdf hop_time = to_time_density(local.anchor_anchor, c);
  const GriddedPdf request_time = to_time_density(local.sensor_anchor, c);

  const int n_links = net.num_anchors - 1;
  std::vector<GriddedPdf> components;
  std::vector<double> weights;
  for (int lost = 0; lost <= n_links; ++lost) {
    const double w = binomial_pmf(n_links, lost, loss_prob);
    if (w < 1e-15) continue;
    const double shift = net.num_anchors * packet_len_s +
                         lost * net.anchor_diameter() / c +
                         net.sensor_anchor_diameter() / c;

    const int surviving = n_links - lost;
    GriddedPdf comp = GriddedPdf::delta_at(shift, hop_time.step());
    bool have_factor = false;
    for (int k = 0; k < surviving; ++k) {
      comp = have_factor ? convolve(comp, hop_time) : hop_time;
      have_factor = true;
    }
    if (mode == LocalizationMode::kOnDemand) {
      comp = have_factor ? convolve(comp, request_time) : request_time;
      have_factor = true;
    }
    if (have_factor) comp = comp.shifted(shift);
    components.push_back(std::move(comp));
    weights.push_back(w);
  }
  return mix(components, weights);
}

double min_time(const NetworkConfig& net, double packet_len_s, double loss_prob,
                double target_prob, const DistanceModel* distances) {
  if (!(target_prob > 0.0 && target_prob < 1.0))
    throw DomainError("min_time: target probability must lie in (0, 1)");
  return invert_cdf(time_pdf(net, packet_len_s, loss_prob, net.mode, distances), target_prob);
}

TimeStats time_stats(const NetworkConfig& net, double packet_len_s, double loss_prob,
                     double target_prob, const DistanceModel* distances) {
  net.validate();
  DistanceModel local = distances ? *distances : DistanceModel::for_region(net.region);
  const double c = net.sound_speed;
  const int n = net.num_anchors;
  const double hop_avg = local.anchor_anchor.mean();
  const double request_avg =
      net.mode == LocalizationMode::kOnDemand ? local.sensor_anchor.mean() : 0.0;

  TimeStats stats;
  stats.avg = n * packet_len_s + (n - 1) * (1.0 - loss_prob) * hop_avg / c +
              (n - 1) * loss_prob * net.anchor_diameter() / c +
              net.sensor_anchor_diameter() / c + request_avg / c;

  stats.low = invert_cdf(time_pdf(net, packet_len_s, 0.0, net.mode, &local), target_prob);

  stats.upp = n * packet_len_s + (n - 1) * net.anchor_diameter() / c +
              2.0 * net.sensor_anchor_diameter() / c;
  return stats;
}

int required_anchor_count(int k_required, double link_prob, double target_prob, int n_max) {
  if (k_required < 1) throw DomainError("required_anchor_count: K must be at least 1");
  if (!(link_prob > 0.0 && link_prob <= 1.0))
    throw DomainError("required_anchor_count: link probability must lie in (0, 1]");
  for (int n = k_required; n <= n_max; ++n) {
    if (binomial_tail(n, k_required, link_prob) >= target_prob) return n;
  }
  throw ModelViolation("required_anchor_count: target probability unreachable within n_max");
}

}  // namespace uwloc::cfs
