#include "uwloc/energy.hpp"

#include "uwloc/errors.hpp"

namespace uwloc::energy {

EnergyReport avg_energy_cfs(const NetworkConfig& net, const PhyConfig& phy,
                            double mean_hop_distance_m, double loss_prob) {
  net.validate();
  phy.validate();
  if (!(loss_prob >= 0.0 && loss_prob <= 1.0))
    throw DomainError("avg_energy_cfs: loss probability must lie in [0, 1]");

  const int n = net.num_anchors;
  const double packet_len = packet_duration(phy);
  const double mean_gap_s = ((1.0 - loss_prob) * mean_hop_distance_m +
                             loss_prob * net.anchor_diameter()) /
                            net.sound_speed;

  EnergyReport report;
  report.transmit_j = n * packet_len * phy.tx_power_w;
  report.listen_j = phy.listen_power_w * mean_gap_s * n * (n - 1) / 2.0;
  report.total_j = report.transmit_j + report.listen_j;
  return report;
}

EnergyReport avg_energy_cts(const NetworkConfig& net, const PhyConfig& phy, double lambda,
                            double window_s) {
  net.validate();
  phy.validate();
  if (lambda < 0.0 || window_s < 0.0)
    throw DomainError("avg_energy_cts: rate and window must be non-negative");

  EnergyReport report;
  report.transmit_j =
      lambda * window_s * net.num_anchors * packet_duration(phy) * phy.tx_power_w;
  report.listen_j = 0.0;
  report.total_j = report.transmit_j;
  return report;
}

}  // namespace uwloc::energy
