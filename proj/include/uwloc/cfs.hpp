#ifndef UWLOC_CFS_HPP
#define UWLOC_CFS_HPP

#include <vector>

#include "uwloc/config.hpp"
#include "uwloc/geometry.hpp"
#include "uwloc/numerics.hpp"

namespace uwloc::cfs {

// One realization of the sequential schedule: which inter-anchor links lost
// their packet and the realized hop distances.
struct Realization {
  std::vector<bool> link_lost;      // length N-1
  std::vector<double> hop_distance; // length N-1, meters
  double request_distance = 0.0;    // sensor -> first anchor, 0 when periodic
  double final_margin_distance = 0.0;  // last anchor -> farthest sensor

  int lost_count() const;
};

// Completion time of the schedule for one realization. Lost links advance
// the chain by the worst-case propagation bound instead of the hop delay.
double time_of_realization(const Realization& r, const NetworkConfig& net, double packet_len_s);

// Density of the completion time: binomial mixture over the number of lost
// links; each surviving hop contributes one anchor-anchor distance factor,
// and on-demand operation adds the request hop.
GriddedPdf time_pdf(const NetworkConfig& net, double packet_len_s, double loss_prob,
                    LocalizationMode mode, const DistanceModel* distances = nullptr);

// Smallest time by which the schedule completes with probability target_prob.
double min_time(const NetworkConfig& net, double packet_len_s, double loss_prob,
                double target_prob, const DistanceModel* distances = nullptr);

struct TimeStats {
  double avg = 0.0;
  double low = 0.0;  // no-loss quantile at the target probability
  double upp = 0.0;  // all-links-lost worst case
};

TimeStats time_stats(const NetworkConfig& net, double packet_len_s, double loss_prob,
                     double target_prob, const DistanceModel* distances = nullptr);

// Smallest anchor count N >= k_required whose delivery tail probability
// reaches target_prob. Throws ModelViolation if none up to n_max works.
int required_anchor_count(int k_required, double link_prob, double target_prob, int n_max);

}  // namespace uwloc::cfs

#endif
