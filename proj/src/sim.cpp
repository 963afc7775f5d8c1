#include "uwloc/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "uwloc/crb.hpp"
#include "uwloc/errors.hpp"

namespace uwloc::sim {

namespace {

RangingMode ranging_mode_for(LocalizationMode mode) {
  return mode == LocalizationMode::kPeriodic ? RangingMode::kTimeOfFlight
                                             : RangingMode::kRoundTrip;
}

// Power-law receive power with the co-location cutoff at the reference
// distance, matching the analytic density construction.
double link_power(const PhyConfig& phy, double d) {
  return received_power(phy, std::max(d, phy.ref_distance_m));
}

struct AirPacket {
  int anchor = 0;
  double rx_start = 0.0;  // arrival time at the sensor
  double power = 0.0;
  bool faded = false;     // lost to fading/shadowing regardless of collisions
};

// Localizes the sensor from the delivered packets and fills the trial
// outcome fields shared by both schemes.
void solve_and_score(const NetworkConfig& net, const PhyConfig& phy,
                     const std::vector<Position>& anchors, const Position& sensor,
                     LocalizationMode mode, TrialRecord& trial, RngStream& rng) {
  int distinct = 0;
  for (int q : trial.delivered_counts) distinct += q > 0 ? 1 : 0;
  trial.success = distinct >= net.required_anchors;
  if (!trial.success) return;

  const MeasurementSet ms =
      generate_measurements(sensor, anchors, trial.delivered_counts, phy, net.sound_speed,
                            ranging_mode_for(mode), rng);
  GaussNewtonSettings settings;
  settings.required_anchors = net.required_anchors;
  const GaussNewtonResult fix = gauss_newton(ms, net.sound_speed, settings);
  trial.success = fix.localizable;
  if (fix.localizable) trial.error_m = distance(fix.estimate, sensor);
}

}  // namespace

TrialRecord run_cfs_trial(const NetworkConfig& net, const PhyConfig& phy,
                          LocalizationMode mode, RngStream& rng) {
  net.validate();
  const int n = net.num_anchors;
  const double c = net.sound_speed;
  const double packet_len = packet_duration(phy);

  TrialRecord trial;
  trial.scheme = Scheme::kCfs;
  trial.anchors = sample_positions(net.region, n, rng);
  trial.sensor = sample_positions(net.region, 1, rng)[0];
  trial.delivered_counts.assign(n, 0);
  trial.sent_counts.assign(n, 1);
  trial.anchor_fire_times.resize(n);
  const std::vector<Position>& anchors = trial.anchors;
  const Position& sensor = trial.sensor;

  const double request_delay =
      mode == LocalizationMode::kOnDemand ? distance(sensor, anchors[0]) / c : 0.0;

  // Chain of fire times: each anchor transmits on hearing its predecessor,
  // or at the worst-case propagation bound when that packet is lost.
  double listen_energy = 0.0;
  trial.anchor_fire_times[0] = request_delay;
  for (int j = 1; j < n; ++j) {
    const bool lost = rng.uniform01() < net.loss_prob;
    const double hop =
        lost ? net.anchor_diameter() : distance(anchors[j - 1], anchors[j]);
    trial.anchor_fire_times[j] = trial.anchor_fire_times[j - 1] + packet_len + hop / c;
    // Listening clock counts the propagation gaps accumulated ahead of this
    // anchor's own transmission, not packet reception time.
    const double listen_s = trial.anchor_fire_times[j] - request_delay - j * packet_len;
    listen_energy += listen_s * phy.listen_power_w;
  }
  trial.localization_time_s =
      trial.anchor_fire_times[n - 1] + packet_len + net.sensor_anchor_diameter() / c;

  // Delivery to the sensor: fading loss plus the (collision-free) SNR test.
  const double snr_floor = phy.snr_threshold * phy.noise_power_w;
  for (int j = 0; j < n; ++j) {
    const bool faded = rng.uniform01() < net.loss_prob;
    const double power = link_power(phy, distance(sensor, anchors[j]));
    if (!faded && power >= snr_floor) trial.delivered_counts[j] = 1;
  }

  trial.transmit_energy_j = n * packet_len * phy.tx_power_w;
  trial.listen_energy_j = listen_energy;
  trial.energy_j = trial.transmit_energy_j + trial.listen_energy_j;

  solve_and_score(net, phy, anchors, sensor, mode, trial, rng);
  return trial;
}

namespace {

struct CtsRound {
  std::vector<Position> anchors;
  Position sensor;
  std::vector<AirPacket> packets;  // sorted by arrival time
  int thinned = 0;
  std::vector<int> sent_counts;
};

CtsRound make_cts_round(const NetworkConfig& net, const PhyConfig& phy,
                        const CtsTrialOptions& opts, RngStream& rng) {
  net.validate();
  if (!(opts.lambda > 0.0)) throw DomainError("run_cts_trial: lambda must be positive");
  if (!(opts.window_s > 0.0)) throw DomainError("run_cts_trial: window must be positive");

  CtsRound round;
  round.anchors = sample_positions(net.region, net.num_anchors, rng);
  round.sensor = sample_positions(net.region, 1, rng)[0];
  round.sent_counts.assign(net.num_anchors, 0);

  const double packet_len = packet_duration(phy);
  const double c = net.sound_speed;
  for (int j = 0; j < net.num_anchors; ++j) {
    const double delay = distance(round.sensor, round.anchors[j]) / c;
    const double power = link_power(phy, distance(round.sensor, round.anchors[j]));
    double t = rng.exponential(opts.lambda);
    double prev_start = -1e300;
    while (t < opts.window_s) {
      if (opts.half_duplex_thinning && t - prev_start < packet_len) {
        ++round.thinned;
      } else {
        AirPacket p;
        p.anchor = j;
        p.rx_start = t + delay;
        p.power = power;
        p.faded = rng.uniform01() < net.loss_prob;
        round.packets.push_back(p);
        ++round.sent_counts[j];
        prev_start = t;
      }
      t += rng.exponential(opts.lambda);
    }
  }
  std::sort(round.packets.begin(), round.packets.end(),
            [](const AirPacket& a, const AirPacket& b) { return a.rx_start < b.rx_start; });
  return round;
}

// SINR test against every packet whose reception interval overlaps.
bool packet_survives(const std::vector<AirPacket>& packets, std::size_t idx,
                     const PhyConfig& phy, double packet_len) {
  const AirPacket& p = packets[idx];
  if (p.faded) return false;
  double interference = 0.0;
  for (std::size_t k = idx; k-- > 0;) {
    if (packets[k].rx_start <= p.rx_start - packet_len) break;
    interference += packets[k].power;
  }
  for (std::size_t k = idx + 1; k < packets.size(); ++k) {
    if (packets[k].rx_start >= p.rx_start + packet_len) break;
    interference += packets[k].power;
  }
  const double sinr = p.power / (interference + phy.noise_power_w);
  assert(std::isfinite(sinr) && interference >= 0.0);
  return sinr >= phy.snr_threshold;
}

}  // namespace

TrialRecord run_cts_trial(const NetworkConfig& net, const PhyConfig& phy,
                          const CtsTrialOptions& opts, RngStream& rng) {
  const double packet_len = packet_duration(phy);
  CtsRound round = make_cts_round(net, phy, opts, rng);

  TrialRecord trial;
  trial.scheme = Scheme::kCts;
  trial.anchors = round.anchors;
  trial.sensor = round.sensor;
  trial.delivered_counts.assign(net.num_anchors, 0);
  trial.sent_counts = round.sent_counts;
  trial.packets_thinned = round.thinned;

  for (std::size_t i = 0; i < round.packets.size(); ++i) {
    if (packet_survives(round.packets, i, phy, packet_len)) {
      ++trial.delivered_counts[round.packets[i].anchor];
    }
  }

  const double request_delay =
      net.mode == LocalizationMode::kOnDemand
          ? distance(round.sensor, round.anchors[0]) / net.sound_speed
          : 0.0;
  trial.localization_time_s =
      opts.window_s + request_delay + net.sensor_anchor_diameter() / net.sound_speed;

  int sent_total = 0;
  for (int s : round.sent_counts) sent_total += s;
  trial.transmit_energy_j = sent_total * packet_len * phy.tx_power_w;
  trial.listen_energy_j = 0.0;  // anchors never listen in this scheme
  trial.energy_j = trial.transmit_energy_j;

  solve_and_score(net, phy, round.anchors, round.sensor, net.mode, trial, rng);
  return trial;
}

PacketStats run_cts_packet_probe(const NetworkConfig& net, const PhyConfig& phy,
                                 const CtsTrialOptions& opts, RngStream& rng) {
  const double packet_len = packet_duration(phy);
  CtsRound round = make_cts_round(net, phy, opts, rng);

  PacketStats stats;
  const double c = net.sound_speed;
  for (std::size_t i = 0; i < round.packets.size(); ++i) {
    const AirPacket& p = round.packets[i];
    const double tx_start =
        p.rx_start - distance(round.sensor, round.anchors[p.anchor]) / c;
    if (tx_start < packet_len || tx_start > opts.window_s - packet_len) continue;
    ++stats.scored;
    if (packet_survives(round.packets, i, phy, packet_len)) ++stats.delivered;
  }
  return stats;
}

CampaignStats run_campaign(const CampaignConfig& cfg, std::size_t trials,
                           std::uint64_t master_seed) {
  if (trials < 1) throw DomainError("run_campaign: need at least one trial");
  if (cfg.compute_crb && cfg.scheme == Scheme::kCts && !(cfg.packet_success > 0.0))
    throw ConfigError("run_campaign: bound computation needs the packet success probability");

  CampaignStats stats;
  stats.trials = trials;
  stats.times_s.reserve(trials);

  double sum_tx = 0.0, sum_listen = 0.0, sum_err2 = 0.0;
  double sum_crb = 0.0;
  std::size_t crb_count = 0;
  std::size_t successes = 0;
  std::size_t sent_total = 0, thinned_total = 0;

  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng = RngStream::derive(master_seed, t);
    const TrialRecord trial = cfg.scheme == Scheme::kCfs
                                  ? run_cfs_trial(cfg.net, cfg.phy, cfg.net.mode, rng)
                                  : run_cts_trial(cfg.net, cfg.phy, cfg.cts, rng);
    stats.times_s.push_back(trial.localization_time_s);
    sum_tx += trial.transmit_energy_j;
    sum_listen += trial.listen_energy_j;
    for (int s : trial.sent_counts) sent_total += static_cast<std::size_t>(s);
    thinned_total += static_cast<std::size_t>(trial.packets_thinned);
    if (trial.success) {
      ++successes;
      stats.errors_m.push_back(trial.error_m);
      sum_err2 += trial.error_m * trial.error_m;
    }

    if (cfg.compute_crb) {
      // Bound at this trial's geometry; rare collinear layouts are skipped.
      try {
        const crb::FimResult fr =
            cfg.scheme == Scheme::kCfs
                ? crb::fim_cfs(trial.sensor, trial.anchors, cfg.phy, cfg.net.sound_speed,
                               1.0 - cfg.net.loss_prob, cfg.net.required_anchors)
                : crb::fim_cts(trial.sensor, trial.anchors, cfg.phy, cfg.net.sound_speed,
                               cfg.packet_success, cfg.cts.lambda, cfg.cts.window_s,
                               cfg.net.required_anchors);
        if (!fr.singular) {
          sum_crb += fr.crb_total;
          ++crb_count;
        }
      } catch (const NumericError&) {
      } catch (const DomainError&) {
      }
    }
  }

  const double n = static_cast<double>(trials);
  stats.success_rate = static_cast<double>(successes) / n;
  stats.success_stderr = std::sqrt(stats.success_rate * (1.0 - stats.success_rate) / n);
  stats.mean_transmit_energy_j = sum_tx / n;
  stats.mean_listen_energy_j = sum_listen / n;
  stats.mean_energy_j = (sum_tx + sum_listen) / n;
  stats.rmse_m = successes > 0 ? std::sqrt(sum_err2 / static_cast<double>(successes)) : 0.0;
  stats.mean_crb_total_m2 = crb_count > 0 ? sum_crb / static_cast<double>(crb_count) : 0.0;
  stats.thinning_rate =
      sent_total + thinned_total > 0
          ? static_cast<double>(thinned_total) / static_cast<double>(sent_total + thinned_total)
          : 0.0;

  double sum_time = 0.0;
  for (double v : stats.times_s) sum_time += v;
  stats.mean_time_s = sum_time / n;
  std::vector<double> sorted = stats.times_s;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double p) {
    const double idx = p * (n - 1.0);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = idx - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  stats.time_p10_s = quantile(0.10);
  stats.time_p50_s = quantile(0.50);
  stats.time_p90_s = quantile(0.90);
  return stats;
}

}  // namespace uwloc::sim
