#include "uwloc/crb.hpp"

#include <cmath>
#include <limits>

#include "uwloc/errors.hpp"
#include "uwloc/numerics.hpp"

namespace uwloc::crb {

namespace {

// Fills crb_per_axis/crb_total from the accumulated information matrix.
void finish(FimResult& fr) {
  const Eigen::Index dim = fr.fim.rows();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(fr.fim);
  if (!lu.isInvertible()) {
    fr.singular = true;
    fr.crb_per_axis = Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::quiet_NaN());
    fr.crb_total = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const Eigen::MatrixXd inv = lu.inverse();
  fr.crb_per_axis = inv.diagonal();
  fr.crb_total = fr.crb_per_axis.sum();
}

}  // namespace

Eigen::MatrixXd per_anchor_term(const Position& x, const Position& anchor,
                                const PhyConfig& phy, double sound_speed, int dimensions,
                                VarianceTerm variance_term) {
  if (dimensions != 2 && dimensions != 3)
    throw ConfigError("per_anchor_term: dimensions must be 2 or 3");
  Eigen::Vector3d diff(x.x - anchor.x, x.y - anchor.y, x.z - anchor.z);
  if (dimensions == 2) diff.z() = 0.0;
  const double d = diff.norm();
  if (!(d > 0.0)) throw DomainError("per_anchor_term: sensor coincides with anchor");

  const double n0 = phy.path_loss_exp;
  const double variance = phy.tof_noise_coeff * std::pow(d, n0);
  if (!(variance > 0.0))
    throw DomainError("per_anchor_term: zero noise variance gives unbounded information");

  // f = d/c; grad f = (x - a) / (c d). sigma^2 = k_E d^n0;
  // grad sigma^2 = n0 k_E d^(n0-2) (x - a).
  Eigen::VectorXd grad_f(dimensions), grad_var(dimensions);
  for (int i = 0; i < dimensions; ++i) {
    grad_f(i) = diff(i) / (sound_speed * d);
    grad_var(i) = n0 * phy.tof_noise_coeff * std::pow(d, n0 - 2.0) * diff(i);
  }

  const double var_coeff = variance_term == VarianceTerm::kHalf ? 0.5 : 1.0;
  return grad_f * grad_f.transpose() / variance +
         var_coeff * grad_var * grad_var.transpose() / (variance * variance);
}

FimResult fim_cfs(const Position& x, const std::vector<Position>& anchors,
                  const PhyConfig& phy, double sound_speed, double link_prob, int k_required,
                  int dimensions, VarianceTerm variance_term) {
  const int n = static_cast<int>(anchors.size());
  if (k_required < 1 || k_required > n) throw DomainError("fim_cfs: need 1 <= K <= N");
  if (!(link_prob >= 0.0 && link_prob <= 1.0))
    throw DomainError("fim_cfs: link probability must lie in [0, 1]");

  FimResult fr;
  fr.p_loc = binomial_tail(n, k_required, link_prob);
  if (!(fr.p_loc > 0.0)) throw DomainError("fim_cfs: localization probability is zero");

  fr.anchor_terms.reserve(anchors.size());
  for (const Position& a : anchors) {
    fr.anchor_terms.push_back(
        per_anchor_term(x, a, phy, sound_speed, dimensions, variance_term));
  }

  fr.fim = Eigen::MatrixXd::Zero(dimensions, dimensions);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const int heard = __builtin_popcount(mask);
    if (heard < k_required) continue;
    const double weight =
        std::pow(link_prob, heard) * std::pow(1.0 - link_prob, n - heard);
    if (weight == 0.0) continue;
    Eigen::MatrixXd state = Eigen::MatrixXd::Zero(dimensions, dimensions);
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) state += fr.anchor_terms[static_cast<std::size_t>(j)];
    }
    fr.fim += weight * state;
  }
  fr.fim /= fr.p_loc;
  finish(fr);
  return fr;
}

FimResult fim_cts(const Position& x, const std::vector<Position>& anchors,
                  const PhyConfig& phy, double sound_speed, double packet_success,
                  double lambda, double window_s, int k_required, int dimensions,
                  VarianceTerm variance_term) {
  const int n = static_cast<int>(anchors.size());
  if (k_required < 1 || k_required > n) throw DomainError("fim_cts: need 1 <= K <= N");
  const double mean_count = packet_success * lambda * window_s;
  if (!(mean_count > 0.0))
    throw DomainError("fim_cts: expected packet count must be positive");

  const double p_silent = std::exp(-mean_count);       // per-anchor P[no packet]
  const double p_heard = -std::expm1(-mean_count);

  FimResult fr;
  fr.g_ct = mean_count / p_heard;
  fr.p_loc = binomial_tail(n, k_required, p_heard);
  if (!(fr.p_loc > 0.0)) throw DomainError("fim_cts: localization probability is zero");

  fr.anchor_terms.reserve(anchors.size());
  for (const Position& a : anchors) {
    fr.anchor_terms.push_back(
        per_anchor_term(x, a, phy, sound_speed, dimensions, variance_term));
  }

  fr.fim = Eigen::MatrixXd::Zero(dimensions, dimensions);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const int heard = __builtin_popcount(mask);
    if (heard < k_required) continue;
    const double weight = std::pow(p_heard, heard) * std::pow(p_silent, n - heard);
    if (weight == 0.0) continue;
    Eigen::MatrixXd state = Eigen::MatrixXd::Zero(dimensions, dimensions);
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) state += fr.anchor_terms[static_cast<std::size_t>(j)];
    }
    fr.fim += weight * fr.g_ct * state;
  }
  fr.fim /= fr.p_loc;
  finish(fr);
  return fr;
}

CrbSummary crb_from_fim(const FimResult& fr) {
  if (fr.singular || !fr.fim.allFinite())
    throw NumericError("crb_from_fim: singular information matrix (collinear geometry?)");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(fr.fim);
  if (!lu.isInvertible())
    throw NumericError("crb_from_fim: singular information matrix (collinear geometry?)");
  CrbSummary out;
  out.per_axis = lu.inverse().diagonal();
  out.total = out.per_axis.sum();
  return out;
}

}  // namespace uwloc::crb
