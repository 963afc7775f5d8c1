#ifndef UWLOC_CHANNEL_HPP
#define UWLOC_CHANNEL_HPP

#include <vector>

#include "uwloc/numerics.hpp"

namespace uwloc {

// Node count for received-power densities. The power law spans five decades
// between the farthest and nearest link, so these grids are much finer than
// the distance/time grids.
inline constexpr std::size_t kPowerGridSize = 1 << 20;

// Physical-layer and packet parameters.
struct PhyConfig {
  double bandwidth_hz = 2000.0;     // B
  double bits_per_symbol = 2.0;     // b_s
  double bits_per_packet = 200.0;   // b_p
  double guard_time_s = 0.05;       // T_g
  double tx_power_w = 15.0;         // P_0
  double listen_power_w = 1.24;     // P_L (inferred from the modem figures)
  double ref_gain = 1.0;            // alpha_0
  double ref_distance_m = 1.0;      // d_0
  double path_loss_exp = 1.4;       // n_0
  double snr_threshold = 3.9810717055349722;  // gamma_0, linear (6 dB)
  double noise_power_w = 1.7782794100389227e-5;  // N_0 B (-47.5 dB)
  double tof_noise_coeff = 1e-8;    // k_E, variance = k_E * d^n_0

  void validate() const;
};

// T_p = T_g + (b_p / b_s) / B
double packet_duration(const PhyConfig& phy);

// Received power at distance d under the power-law attenuation model.
double received_power(const PhyConfig& phy, double distance_m);

// Density of the received signal power for a link whose distance follows
// dist_pdf. The distance density must be bounded away from zero; masses are
// assigned per power-grid cell through the exact CDF mapping of the
// change of variables, which keeps the steep small-power end accurate.
GriddedPdf received_power_pdf(const PhyConfig& phy, const GriddedPdf& dist_pdf,
                              std::size_t grid_size = kPowerGridSize);

// q-fold self-convolution of the single-interferer power density.
GriddedPdf interference_pdf(const GriddedPdf& x0, int q);

// Probability that the desired packet clears the SINR threshold against q
// interferers, each with power drawn independently from x0.
double survival_given_q(const PhyConfig& phy, const GriddedPdf& x0, int q);

// Which upper limit the interferer sum uses; the two printed variants of
// the success formula disagree, and the difference is far below test
// tolerances at realistic loads.
enum class QSumLimit { kNMinus1, kN };

// Precomputed survival probabilities p_{s|q}; these do not depend on the
// transmission rate, so rate sweeps reuse one profile.
struct SurvivalProfile {
  std::vector<double> ps_given_q;  // index q = 0 .. max_q
};

SurvivalProfile make_survival_profile(const PhyConfig& phy, const GriddedPdf& x0, int max_q);

// Per-packet success probability under loss and Poisson collisions at rate
// lambda (packets/s per anchor) among n_anchors anchors.
double packet_success_prob(const SurvivalProfile& profile, int n_anchors, double lambda,
                           double packet_len_s, double loss_prob,
                           QSumLimit limit = QSumLimit::kNMinus1);

// Convenience overload that builds the profile internally.
double packet_success_prob(const PhyConfig& phy, const GriddedPdf& x0, int n_anchors,
                           double lambda, double loss_prob,
                           QSumLimit limit = QSumLimit::kNMinus1);

// Probability a scheduled (collision-free) packet reaches a sensor:
// (1 - p_l) * P[X_0 >= gamma_0 * N_0 B].
double cfs_link_prob(const PhyConfig& phy, const GriddedPdf& x0, double loss_prob);

}  // namespace uwloc

#endif
