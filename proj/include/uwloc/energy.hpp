#ifndef UWLOC_ENERGY_HPP
#define UWLOC_ENERGY_HPP

#include "uwloc/channel.hpp"
#include "uwloc/config.hpp"

namespace uwloc::energy {

struct EnergyReport {
  double transmit_j = 0.0;
  double listen_j = 0.0;
  double total_j = 0.0;
};

// Average energy per localization round in the sequential scheme: every
// anchor transmits once; anchor j listens through the j-1 propagation gaps
// ahead of it (the worst-case bound when the preceding packet is lost).
EnergyReport avg_energy_cfs(const NetworkConfig& net, const PhyConfig& phy,
                            double mean_hop_distance_m, double loss_prob);

// Average energy in the random-access scheme: transmissions only.
EnergyReport avg_energy_cts(const NetworkConfig& net, const PhyConfig& phy, double lambda,
                            double window_s);

}  // namespace uwloc::energy

#endif
