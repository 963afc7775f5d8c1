#include "uwloc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "uwloc/cfs.hpp"
#include "uwloc/cts.hpp"
#include "uwloc/energy.hpp"
#include "uwloc/errors.hpp"
#include "uwloc/sim.hpp"

namespace uwloc {

namespace {

const char* const kKnownExperiments[] = {"fig3", "fig4", "fig5", "fig6",
                                         "fig7", "fig8", "fig9"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header) : out_(path) {
    if (!out_) throw ConfigError("run_experiment: cannot write '" + path + "'");
    out_ << header << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

double poisson_pmf(int q, double mean) {
  if (mean <= 0.0) return q == 0 ? 1.0 : 0.0;
  return std::exp(q * std::log(mean) - mean - std::lgamma(q + 1.0));
}

// Shared analytic context derived from one configuration.
struct AnalyticContext {
  DistanceModel distances;
  GriddedPdf power_pdf;
  SurvivalProfile profile;
  double packet_len = 0.0;

  AnalyticContext(const Config& cfg, int max_q)
      : distances(DistanceModel::for_region(cfg.net.region)),
        power_pdf(received_power_pdf(
            cfg.phy, distances.sensor_anchor.truncated_below(cfg.phy.ref_distance_m))),
        profile(make_survival_profile(cfg.phy, power_pdf, max_q)),
        packet_len(packet_duration(cfg.phy)) {}
};

void write_fig3(const ExperimentSpec& spec, CsvWriter& csv) {
  const Config& cfg = spec.cfg;
  AnalyticContext ctx(cfg, cfg.net.num_anchors - 1);

  const cts::MinLocalizationTime mlt = cts::min_localization_time(
      ctx.profile, cfg.net, ctx.packet_len, cfg.net.target_loc_prob, cfg.net.mode,
      &ctx.distances);
  const cts::OptimalRate rate = cts::optimal_rate(ctx.profile, cfg.net, ctx.packet_len);

  const double window_scales[] = {0.5, 0.75, 1.0, 1.5, 2.0};
  const int lambda_points = 80;
  const double lambda_max = 4.0 * rate.lambda_upp_bound;
  for (double scale : window_scales) {
    const double window = scale * mlt.window_s;
    for (int i = 1; i <= lambda_points; ++i) {
      const double lambda = lambda_max * static_cast<double>(i) / lambda_points;
      const double ps = packet_success_prob(ctx.profile, cfg.net.num_anchors, lambda,
                                            ctx.packet_len, cfg.net.loss_prob);
      const double p_loc =
          cts::self_loc_prob(cts::useful_packet_prob(ps, lambda, window),
                             cfg.net.num_anchors, cfg.net.required_anchors);
      csv.row({fmt(lambda), fmt(window), fmt(p_loc)});
    }
  }
}

void write_fig4(const ExperimentSpec& spec, CsvWriter& csv) {
  const Config& cfg = spec.cfg;
  const int n = cfg.net.num_anchors;
  AnalyticContext ctx(cfg, n - 1);

  const cts::MinLocalizationTime mlt = cts::min_localization_time(
      ctx.profile, cfg.net, ctx.packet_len, cfg.net.target_loc_prob, cfg.net.mode,
      &ctx.distances);
  const cts::OptimalRate rate = cts::optimal_rate(ctx.profile, cfg.net, ctx.packet_len);
  const cts::RateWindow window_rates = cts::rates_for_window(
      ctx.profile, cfg.net, ctx.packet_len, 1.5 * mlt.window_s, cfg.net.target_loc_prob);

  const double lambdas[] = {window_rates.lambda_low, rate.lambda_opt,
                            window_rates.lambda_upp};
  for (double lambda : lambdas) {
    const double load = 2.0 * n * lambda * ctx.packet_len;
    for (int q = 0; q <= n - 1; ++q) {
      csv.row({std::to_string(q), fmt(ctx.profile.ps_given_q[static_cast<std::size_t>(q)]),
               fmt(lambda), fmt(poisson_pmf(q, load))});
    }
  }
}

void write_fig5(const ExperimentSpec& spec, CsvWriter& csv) {
  const Config& cfg = spec.cfg;
  constexpr int kMaxAnchors = 32;

  std::vector<double> loss_grid;
  for (int i = 0; i <= 9; ++i) loss_grid.push_back(0.05 * i);

  // The anchor count rises with the loss rate; size the survival profile
  // for the worst case up front.
  std::vector<int> anchor_counts;
  int n_max = cfg.net.required_anchors;
  AnalyticContext probe(cfg, 0);
  const double clear_prob = cfs_link_prob(cfg.phy, probe.power_pdf, 0.0);
  for (double p_l : loss_grid) {
    const int n = cfs::required_anchor_count(
        cfg.net.required_anchors, (1.0 - p_l) * clear_prob, cfg.net.target_loc_prob,
        kMaxAnchors);
    anchor_counts.push_back(n);
    n_max = std::max(n_max, n);
  }
  const SurvivalProfile profile =
      make_survival_profile(cfg.phy, probe.power_pdf, n_max - 1);

  for (std::size_t i = 0; i < loss_grid.size(); ++i) {
    const double p_l = loss_grid[i];
    Config point = cfg;
    point.net.loss_prob = p_l;
    point.net.num_anchors = anchor_counts[i];

    const cfs::TimeStats stats =
        cfs::time_stats(point.net, probe.packet_len, p_l, point.net.target_schedule_prob,
                        &probe.distances);
    const double t_cf_min = cfs::min_time(point.net, probe.packet_len, p_l,
                                          point.net.target_schedule_prob, &probe.distances);
    const cts::MinLocalizationTime mlt = cts::min_localization_time(
        profile, point.net, probe.packet_len, point.net.target_loc_prob, point.net.mode,
        &probe.distances);

    csv.row({fmt(p_l), std::to_string(anchor_counts[i]), fmt(t_cf_min), fmt(stats.low),
             fmt(stats.upp), fmt(mlt.total_s)});
  }
}

void write_fig6(const ExperimentSpec& spec, CsvWriter& csv) {
  const Config& cfg = spec.cfg;
  AnalyticContext ctx(cfg, cfg.net.num_anchors - 1);

  for (int i = 1; i <= 20; ++i) {
    const double packet_len = 0.05 * i;
    const double t_cf_min = cfs::min_time(cfg.net, packet_len, cfg.net.loss_prob,
                                          cfg.net.target_schedule_prob, &ctx.distances);
    const cts::MinLocalizationTime mlt =
        cts::min_localization_time(ctx.profile, cfg.net, packet_len,
                                   cfg.net.target_loc_prob, cfg.net.mode, &ctx.distances);
    csv.row({fmt(packet_len), fmt(t_cf_min), fmt(mlt.total_s)});
  }
}

void write_fig7(const ExperimentSpec& spec, CsvWriter& csv) {
  const Config& cfg = spec.cfg;
  const double c = cfg.net.sound_speed;
  const double side_scales[] = {0.2, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0};
  for (double s : side_scales) {
    Config point = cfg;
    point.net.region = {s * c, s * c};
    point.net.max_anchor_distance = 0.0;  // re-derive from the new diagonal
    point.net.max_sensor_anchor_distance = 0.0;

    AnalyticContext ctx(point, point.net.num_anchors - 1);
    const double t_cf_min = cfs::min_time(point.net, ctx.packet_len, point.net.loss_prob,
                                          point.net.target_schedule_prob, &ctx.distances);
    const cts::MinLocalizationTime mlt = cts::min_localization_time(
        ctx.profile, point.net, ctx.packet_len, point.net.target_loc_prob, point.net.mode,
        &ctx.distances);
    csv.row({fmt(s * c), fmt(t_cf_min), fmt(mlt.total_s)});
  }
}

// Matched-time accuracy comparison: the random-access scheme gets a window
// equal to the sequential scheme's average round, minus the shared margin.
void write_fig8(const ExperimentSpec& spec, CsvWriter& csv) {
  const Config& cfg = spec.cfg;
  AnalyticContext ctx(cfg, cfg.net.num_anchors - 1);

  const cfs::TimeStats stats = cfs::time_stats(
      cfg.net, ctx.packet_len, cfg.net.loss_prob, cfg.net.target_schedule_prob,
      &ctx.distances);
  const cts::OptimalRate rate = cts::optimal_rate(ctx.profile, cfg.net, ctx.packet_len);
  const double window =
      stats.avg - cfg.net.sensor_anchor_diameter() / cfg.net.sound_speed;

  sim::CampaignConfig cfs_cfg;
  cfs_cfg.scheme = sim::Scheme::kCfs;
  cfs_cfg.net = cfg.net;
  cfs_cfg.phy = cfg.phy;
  cfs_cfg.compute_crb = true;

  sim::CampaignConfig cts_cfg = cfs_cfg;
  cts_cfg.scheme = sim::Scheme::kCts;
  cts_cfg.cts.lambda = rate.lambda_opt;
  cts_cfg.cts.window_s = window;
  cts_cfg.packet_success = packet_success_prob(ctx.profile, cfg.net.num_anchors,
                                               rate.lambda_opt, ctx.packet_len,
                                               cfg.net.loss_prob);

  const sim::CampaignStats cfs_stats = sim::run_campaign(cfs_cfg, spec.trials, spec.seed);
  const sim::CampaignStats cts_stats =
      sim::run_campaign(cts_cfg, spec.trials, spec.seed + 1);

  double max_err = 0.0;
  for (double e : cfs_stats.errors_m) max_err = std::max(max_err, e);
  for (double e : cts_stats.errors_m) max_err = std::max(max_err, e);
  constexpr int kBins = 25;
  const double bin_width = max_err > 0.0 ? max_err / kBins : 1.0;

  auto emit = [&](const char* scheme, const sim::CampaignStats& s) {
    std::vector<int> counts(kBins, 0);
    for (double e : s.errors_m) {
      const int b = std::min(kBins - 1, static_cast<int>(e / bin_width));
      ++counts[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < kBins; ++b) {
      csv.row({scheme, fmt((b + 0.5) * bin_width), std::to_string(counts[b]),
               fmt(s.rmse_m), fmt(std::sqrt(s.mean_crb_total_m2))});
    }
  };
  emit("cfs", cfs_stats);
  emit("cts", cts_stats);
}

void write_fig9(const ExperimentSpec& spec, CsvWriter& csv) {
  const Config& cfg = spec.cfg;
  AnalyticContext ctx(cfg, cfg.net.num_anchors - 1);

  const cts::MinLocalizationTime mlt = cts::min_localization_time(
      ctx.profile, cfg.net, ctx.packet_len, cfg.net.target_loc_prob, cfg.net.mode,
      &ctx.distances);
  const double d_avg = ctx.distances.sensor_anchor.mean();

  const double noise_scales[] = {1.0, 10.0, 100.0, 1000.0, 10000.0};
  std::uint64_t seed = spec.seed;
  for (double scale : noise_scales) {
    Config point = cfg;
    point.phy.tof_noise_coeff = cfg.phy.tof_noise_coeff * scale;
    const double sigma_avg_d =
        point.net.sound_speed *
        std::sqrt(point.phy.tof_noise_coeff * std::pow(d_avg, point.phy.path_loss_exp));

    sim::CampaignConfig cfs_cfg;
    cfs_cfg.scheme = sim::Scheme::kCfs;
    cfs_cfg.net = point.net;
    cfs_cfg.phy = point.phy;
    cfs_cfg.compute_crb = true;

    sim::CampaignConfig cts_cfg = cfs_cfg;
    cts_cfg.scheme = sim::Scheme::kCts;
    cts_cfg.cts.lambda = mlt.lambda_used;
    cts_cfg.cts.window_s = mlt.window_s;
    cts_cfg.packet_success = packet_success_prob(ctx.profile, point.net.num_anchors,
                                                 mlt.lambda_used, ctx.packet_len,
                                                 point.net.loss_prob);

    const sim::CampaignStats cfs_stats = sim::run_campaign(cfs_cfg, spec.trials, seed++);
    const sim::CampaignStats cts_stats = sim::run_campaign(cts_cfg, spec.trials, seed++);
    csv.row({fmt(sigma_avg_d), "cfs", fmt(cfs_stats.rmse_m),
             fmt(std::sqrt(cfs_stats.mean_crb_total_m2))});
    csv.row({fmt(sigma_avg_d), "cts", fmt(cts_stats.rmse_m),
             fmt(std::sqrt(cts_stats.mean_crb_total_m2))});
  }
}

const char* header_for(const std::string& name) {
  if (name == "fig3") return "lambda,T_T,p_loc";
  if (name == "fig4") return "q,p_survive,lambda,p_collide";
  if (name == "fig5") return "p_l,N,T_cf_min,T_cf_low,T_cf_upp,T_ct_min";
  if (name == "fig6") return "T_p,T_cf_min,T_ct_min";
  if (name == "fig7") return "D,T_cf_min,T_ct_min";
  if (name == "fig8") return "scheme,error_bin,count,rmse,root_crb";
  return "sigma_avg_d,scheme,rmse,root_crb";
}

}  // namespace

void ExperimentSpec::validate() const {
  bool known = false;
  for (const char* n : kKnownExperiments) {
    if (name == n) known = true;
  }
  if (!known) throw ConfigError("experiment: unknown name '" + name + "'");
  if (trials < 1) throw ConfigError("experiment: trials must be at least 1");
  cfg.net.validate();
  cfg.phy.validate();
}

std::vector<std::string> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  const std::string csv_path = spec.out_dir + "/" + spec.name + ".csv";
  const std::string manifest_path = spec.out_dir + "/" + spec.name + "_manifest.json";

  CsvWriter csv(csv_path, header_for(spec.name));
  if (spec.name == "fig3") write_fig3(spec, csv);
  if (spec.name == "fig4") write_fig4(spec, csv);
  if (spec.name == "fig5") write_fig5(spec, csv);
  if (spec.name == "fig6") write_fig6(spec, csv);
  if (spec.name == "fig7") write_fig7(spec, csv);
  if (spec.name == "fig8") write_fig8(spec, csv);
  if (spec.name == "fig9") write_fig9(spec, csv);

  nlohmann::json manifest;
  manifest["experiment"] = spec.name;
  manifest["seed"] = spec.seed;
  manifest["trials"] = spec.trials;
  manifest["config"] = nlohmann::json::parse(config_to_json_text(spec.cfg));
  manifest["outputs"] = {csv_path};
  std::ofstream mf(manifest_path);
  if (!mf) throw ConfigError("run_experiment: cannot write '" + manifest_path + "'");
  mf << manifest.dump(2) << "\n";

  return {csv_path, manifest_path};
}

}  // namespace uwloc
