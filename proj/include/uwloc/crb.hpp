#ifndef UWLOC_CRB_HPP
#define UWLOC_CRB_HPP

#include <Eigen/Dense>

#include <vector>

#include "uwloc/channel.hpp"
#include "uwloc/geometry.hpp"

namespace uwloc::crb {

// Whether the distance-dependent-variance term carries the 1/2 from the
// Gaussian Fisher-information trace. The full form is correct for Gaussian
// timing noise (verified against a quadrature oracle); the shorthand
// variant is kept for comparison.
enum class VarianceTerm { kHalf, kFull };

// Fisher contribution of a single measurement from one anchor.
Eigen::MatrixXd per_anchor_term(const Position& x, const Position& anchor,
                                const PhyConfig& phy, double sound_speed, int dimensions = 2,
                                VarianceTerm variance_term = VarianceTerm::kHalf);

struct FimResult {
  Eigen::MatrixXd fim;
  Eigen::VectorXd crb_per_axis;  // diagonal of the inverse; NaN if singular
  double crb_total = 0.0;
  double p_loc = 0.0;
  double g_ct = 0.0;  // expected packets per heard anchor (collision-tolerant only)
  std::vector<Eigen::MatrixXd> anchor_terms;
  bool singular = false;
};

// Collision-free bound: expectation of the conditional information over all
// delivery subsets that allow a fix, normalized by the localization
// probability.
FimResult fim_cfs(const Position& x, const std::vector<Position>& anchors,
                  const PhyConfig& phy, double sound_speed, double link_prob, int k_required,
                  int dimensions = 2, VarianceTerm variance_term = VarianceTerm::kHalf);

// Collision-tolerant bound via the heard/not-heard reduction: per-anchor
// Poisson counts collapse to a two-state mixture with the conditional mean
// count g_ct scaling each heard anchor's term.
FimResult fim_cts(const Position& x, const std::vector<Position>& anchors,
                  const PhyConfig& phy, double sound_speed, double packet_success,
                  double lambda, double window_s, int k_required, int dimensions = 2,
                  VarianceTerm variance_term = VarianceTerm::kHalf);

struct CrbSummary {
  Eigen::VectorXd per_axis;
  double total = 0.0;
};

// Diagonal of the FIM inverse. Throws NumericError on singular information
// (collinear geometry).
CrbSummary crb_from_fim(const FimResult& fr);

}  // namespace uwloc::crb

#endif
