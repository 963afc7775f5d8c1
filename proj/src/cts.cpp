#include "uwloc/cts.hpp"

#include <cmath>

#include "uwloc/errors.hpp"

namespace uwloc::cts {

namespace {

constexpr double kProbTol = 1e-12;

double binom(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

double useful_packet_prob(double packet_success, double lambda, double window_s) {
  if (packet_success < 0.0 || lambda < 0.0 || window_s < 0.0)
    throw DomainError("useful_packet_prob: inputs must be non-negative");
  return -std::expm1(-packet_success * lambda * window_s);
}

double self_loc_prob(double p_ct, int n_anchors, int k_required) {
  if (!(p_ct >= 0.0 && p_ct <= 1.0))
    throw DomainError("self_loc_prob: p_ct must lie in [0, 1]");
  if (k_required < 1 || k_required > n_anchors)
    throw DomainError("self_loc_prob: need 1 <= K <= N");
  return binomial_tail(n_anchors, k_required, p_ct);
}

double loc_prob_derivative(double p_ct, int n_anchors, int k_required, DerivForm form) {
  if (!(p_ct > 0.0 && p_ct < 1.0))
    throw DomainError("loc_prob_derivative: p_ct must lie in (0, 1)");
  const int n = n_anchors;
  double sum = 0.0;
  if (form == DerivForm::kTailSum) {
    for (int k = k_required; k <= n; ++k) {
      sum += binom(n, k) * (k - n * p_ct) * std::pow(p_ct, k - 1) *
             std::pow(1.0 - p_ct, n - k - 1);
    }
  } else {
    for (int k = 0; k < k_required; ++k) {
      sum += binom(n, k) * (n * p_ct - k) * std::pow(p_ct, k - 1) *
             std::pow(1.0 - p_ct, n - k - 1);
    }
  }
  return sum;
}

OptimalRate optimal_rate(const SurvivalProfile& profile, const NetworkConfig& net,
                         double packet_len_s, double argmax_tol) {
  net.validate();
  const int n = net.num_anchors;
  OptimalRate result;
  result.lambda_low_bound = 1.0 / (2.0 * n * packet_len_s);
  result.lambda_upp_bound = (n + 1.0) / (2.0 * n * packet_len_s);

  auto throughput = [&](double lambda) {
    return packet_success_prob(profile, n, lambda, packet_len_s, net.loss_prob) * lambda;
  };
  const ScalarMax peak = maximize_scalar(throughput, result.lambda_low_bound / 4.0,
                                         4.0 * result.lambda_upp_bound, argmax_tol);
  result.lambda_opt = peak.argmax;

  if (result.lambda_opt < result.lambda_low_bound - argmax_tol ||
      result.lambda_opt > result.lambda_upp_bound + argmax_tol)
    throw ModelViolation("optimal_rate: maximizer escaped the analytic bounds");
  return result;
}

OptimalRate optimal_rate(const PhyConfig& phy, const GriddedPdf& x0, const NetworkConfig& net) {
  const SurvivalProfile profile = make_survival_profile(phy, x0, net.num_anchors - 1);
  return optimal_rate(profile, net, packet_duration(phy));
}

MinLocalizationTime min_localization_time(const SurvivalProfile& profile,
                                          const NetworkConfig& net, double packet_len_s,
                                          double target_prob, LocalizationMode mode,
                                          const DistanceModel* distances) {
  if (!(target_prob > 0.0 && target_prob < 1.0))
    throw DomainError("min_localization_time: target probability must lie in (0, 1)");
  net.validate();

  const double p_ct_needed = bisect_increasing(
      [&](double p) { return binomial_tail(net.num_anchors, net.required_anchors, p); }, 0.0,
      1.0, target_prob, kProbTol);

  const OptimalRate rate = optimal_rate(profile, net, packet_len_s);
  const double throughput =
      packet_success_prob(profile, net.num_anchors, rate.lambda_opt, packet_len_s,
                          net.loss_prob) *
      rate.lambda_opt;

  MinLocalizationTime out;
  out.window_s = -std::log1p(-p_ct_needed) / throughput;
  out.lambda_used = rate.lambda_opt;

  double request_delay = 0.0;
  if (mode == LocalizationMode::kOnDemand) {
    DistanceModel local = distances ? *distances : DistanceModel::for_region(net.region);
    request_delay = local.sensor_anchor.mean() / net.sound_speed;
  }
  out.total_s =
      out.window_s + request_delay + net.sensor_anchor_diameter() / net.sound_speed;
  return out;
}

MinLocalizationTime min_localization_time(const PhyConfig& phy, const GriddedPdf& x0,
                                          const NetworkConfig& net, double target_prob,
                                          LocalizationMode mode,
                                          const DistanceModel* distances) {
  const SurvivalProfile profile = make_survival_profile(phy, x0, net.num_anchors - 1);
  return min_localization_time(profile, net, packet_duration(phy), target_prob, mode,
                               distances);
}

RateWindow rates_for_window(const SurvivalProfile& profile, const NetworkConfig& net,
                            double packet_len_s, double window_s, double target_prob) {
  net.validate();
  if (!(window_s > 0.0)) throw DomainError("rates_for_window: window must be positive");
  if (!(target_prob > 0.0 && target_prob < 1.0))
    throw DomainError("rates_for_window: target probability must lie in (0, 1)");

  auto loc_prob = [&](double lambda) {
    const double ps =
        packet_success_prob(profile, net.num_anchors, lambda, packet_len_s, net.loss_prob);
    return self_loc_prob(useful_packet_prob(ps, lambda, window_s), net.num_anchors,
                         net.required_anchors);
  };

  const OptimalRate rate = optimal_rate(profile, net, packet_len_s);
  if (loc_prob(rate.lambda_opt) < target_prob)
    throw ModelViolation("rates_for_window: window is below the achievable minimum");

  RateWindow out;
  out.lambda_low = bisect_increasing(loc_prob, 1e-9, rate.lambda_opt, target_prob, 1e-9);

  // Right of the optimum the localization probability decreases; bisect the
  // mirrored function.
  double hi = rate.lambda_opt;
  double step = std::max(1.0, rate.lambda_opt);
  while (loc_prob(hi) >= target_prob) {
    hi += step;
    step *= 2.0;
    if (hi > 1e6) throw NumericError("rates_for_window: no upper rate found below 1e6");
  }
  out.lambda_upp = bisect_increasing([&](double lambda) { return -loc_prob(lambda); },
                                     rate.lambda_opt, hi, -target_prob, 1e-9);
  return out;
}

}  // namespace uwloc::cts
