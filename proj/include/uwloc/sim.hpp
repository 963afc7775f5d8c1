#ifndef UWLOC_SIM_HPP
#define UWLOC_SIM_HPP

#include <cstdint>
#include <vector>

#include "uwloc/config.hpp"
#include "uwloc/localization.hpp"
#include "uwloc/rng.hpp"

namespace uwloc::sim {

enum class Scheme { kCfs, kCts };

// Outcome of one simulated localization round for a single sensor.
struct TrialRecord {
  Scheme scheme = Scheme::kCfs;
  double localization_time_s = 0.0;
  bool success = false;   // heard at least K distinct anchors
  double error_m = 0.0;   // position error; valid only when success
  std::vector<int> delivered_counts;  // per anchor
  std::vector<int> sent_counts;       // per anchor (1 each in the sequential scheme)
  double transmit_energy_j = 0.0;
  double listen_energy_j = 0.0;
  double energy_j = 0.0;
  int packets_thinned = 0;  // own-transmission overlaps dropped (if enabled)

  std::vector<Position> anchors;
  Position sensor;

  // Sequential-scheme instrumentation: when each anchor started transmitting.
  std::vector<double> anchor_fire_times;
};

// One round of the sequential scheme: anchors fire in ID order, a lost
// inter-anchor packet advances the chain by the worst-case propagation
// bound, the sensor collects whatever reaches it and solves for itself.
TrialRecord run_cfs_trial(const NetworkConfig& net, const PhyConfig& phy,
                          LocalizationMode mode, RngStream& rng);

struct CtsTrialOptions {
  double lambda = 1.0;    // packets/s per anchor
  double window_s = 1.0;  // transmission window T_T
  // Enforce half-duplex at the transmitting anchor by dropping transmissions
  // that would overlap the anchor's own previous packet. Off by default:
  // the analytic collision model assumes a plain Poisson process.
  bool half_duplex_thinning = false;
};

// One round of the random-access scheme: Poisson transmissions over the
// window, per-packet fading loss and SINR test with all time-overlapping
// packets at full power.
TrialRecord run_cts_trial(const NetworkConfig& net, const PhyConfig& phy,
                          const CtsTrialOptions& opts, RngStream& rng);

// Per-packet outcomes of the random-access scheme, for rate-level checks.
// Only packets whose whole vulnerability window lies inside the
// transmission window are scored, so edge packets do not bias the estimate.
struct PacketStats {
  std::size_t scored = 0;
  std::size_t delivered = 0;
};

PacketStats run_cts_packet_probe(const NetworkConfig& net, const PhyConfig& phy,
                                 const CtsTrialOptions& opts, RngStream& rng);

struct CampaignConfig {
  Scheme scheme = Scheme::kCfs;
  NetworkConfig net;
  PhyConfig phy;
  CtsTrialOptions cts;
  // Per-trial bound computation at the trial geometry; needs the analytic
  // per-packet success probability in the collision-tolerant case.
  bool compute_crb = false;
  double packet_success = 0.0;
};

struct CampaignStats {
  std::size_t trials = 0;
  double success_rate = 0.0;
  double success_stderr = 0.0;
  double mean_time_s = 0.0;
  double time_p10_s = 0.0;
  double time_p50_s = 0.0;
  double time_p90_s = 0.0;
  double rmse_m = 0.0;  // over successful trials
  double mean_transmit_energy_j = 0.0;
  double mean_listen_energy_j = 0.0;
  double mean_energy_j = 0.0;
  double mean_crb_total_m2 = 0.0;  // 0 unless computed
  double thinning_rate = 0.0;
  std::vector<double> times_s;   // per trial
  std::vector<double> errors_m;  // per successful trial
};

// Independent trials with per-trial substreams derived from the master
// seed; deterministic for a fixed seed and trial count.
CampaignStats run_campaign(const CampaignConfig& cfg, std::size_t trials,
                           std::uint64_t master_seed);

}  // namespace uwloc::sim

#endif
