#ifndef UWLOC_CTS_HPP
#define UWLOC_CTS_HPP

#include "uwloc/channel.hpp"
#include "uwloc/config.hpp"

namespace uwloc::cts {

// Probability of at least one useful packet from one anchor within a
// transmission window of length window_s.
double useful_packet_prob(double packet_success, double lambda, double window_s);

// Probability that a sensor hears at least k_required distinct anchors.
double self_loc_prob(double p_ct, int n_anchors, int k_required);

// Which algebraic form of the localization-probability derivative to
// evaluate; the two are equal and both are kept as a cross-check.
enum class DerivForm { kTailSum, kHeadSum };

// d P_loc / d p_ct. Valid for p_ct in (0, 1).
double loc_prob_derivative(double p_ct, int n_anchors, int k_required,
                           DerivForm form = DerivForm::kTailSum);

struct OptimalRate {
  double lambda_opt = 0.0;
  double lambda_low_bound = 0.0;  // 1 / (2 N T_p)
  double lambda_upp_bound = 0.0;  // (N+1) / (2 N T_p)
};

// Rate maximizing the useful-packet throughput p_s(lambda) * lambda. The
// maximizer must land inside the analytic bounds; anything else is a
// model violation.
OptimalRate optimal_rate(const SurvivalProfile& profile, const NetworkConfig& net,
                         double packet_len_s, double argmax_tol = 2e-3);
OptimalRate optimal_rate(const PhyConfig& phy, const GriddedPdf& x0, const NetworkConfig& net);

struct MinLocalizationTime {
  double window_s = 0.0;      // minimum transmission window T_T
  double total_s = 0.0;       // window plus request and propagation margins
  double lambda_used = 0.0;
};

// Smallest window achieving the target self-localization probability at the
// optimal rate, plus the scheme-level margins.
MinLocalizationTime min_localization_time(const SurvivalProfile& profile,
                                          const NetworkConfig& net, double packet_len_s,
                                          double target_prob, LocalizationMode mode,
                                          const DistanceModel* distances = nullptr);
MinLocalizationTime min_localization_time(const PhyConfig& phy, const GriddedPdf& x0,
                                          const NetworkConfig& net, double target_prob,
                                          LocalizationMode mode,
                                          const DistanceModel* distances = nullptr);

struct RateWindow {
  double lambda_low = 0.0;
  double lambda_upp = 0.0;
};

// For a window longer than the minimum, the two rates that exactly meet the
// target probability; the smaller one minimizes transmission energy.
RateWindow rates_for_window(const SurvivalProfile& profile, const NetworkConfig& net,
                            double packet_len_s, double window_s, double target_prob);

}  // namespace uwloc::cts

#endif
