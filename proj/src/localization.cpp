#include "uwloc/localization.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

#include "uwloc/errors.hpp"

namespace uwloc {

int MeasurementSet::distinct_anchors() const {
  std::set<int> ids;
  for (const Measurement& m : entries) ids.insert(m.anchor_id);
  return static_cast<int>(ids.size());
}

MeasurementSet generate_measurements(const Position& truth,
                                     const std::vector<Position>& anchors,
                                     const std::vector<int>& arrivals, const PhyConfig& phy,
                                     double sound_speed, RangingMode mode, RngStream& rng) {
  if (arrivals.size() != anchors.size())
    throw ConfigError("generate_measurements: arrivals and anchors must align");

  MeasurementSet ms;
  ms.mode = mode;
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    if (arrivals[j] < 0) throw DomainError("generate_measurements: negative arrival count");
    const double d = distance(truth, anchors[j]);
    const double base_var = phy.tof_noise_coeff * std::pow(d, phy.path_loss_exp);
    const double var = mode == RangingMode::kRoundTrip ? 2.0 * base_var : base_var;
    const double mean = mode == RangingMode::kRoundTrip ? 2.0 * d / sound_speed
                                                        : d / sound_speed;
    for (int k = 0; k < arrivals[j]; ++k) {
      Measurement m;
      m.anchor_id = static_cast<int>(j);
      m.anchor = anchors[j];
      m.variance_s2 = var;
      m.value_s = mean + rng.normal(0.0, std::sqrt(var));
      ms.entries.push_back(m);
    }
  }
  return ms;
}

Position initial_guess(const MeasurementSet& ms) {
  if (ms.entries.empty()) throw DomainError("initial_guess: no measurements");
  std::set<int> seen;
  Position centroid{0.0, 0.0, 0.0};
  for (const Measurement& m : ms.entries) {
    if (seen.insert(m.anchor_id).second) {
      centroid.x += m.anchor.x;
      centroid.y += m.anchor.y;
      centroid.z += m.anchor.z;
    }
  }
  const double n = static_cast<double>(seen.size());
  return {centroid.x / n, centroid.y / n, centroid.z / n};
}

GaussNewtonResult gauss_newton(const MeasurementSet& ms, double sound_speed,
                               const GaussNewtonSettings& settings) {
  if (ms.entries.empty()) throw DomainError("gauss_newton: no measurements");
  if (settings.dimensions != 2 && settings.dimensions != 3)
    throw ConfigError("gauss_newton: dimensions must be 2 or 3");
  const int dim = settings.dimensions;
  const std::size_t q = ms.entries.size();
  const bool rtt = ms.mode == RangingMode::kRoundTrip;

  GaussNewtonResult result;
  result.localizable = ms.distinct_anchors() >= settings.required_anchors;

  Eigen::VectorXd target(q);
  for (std::size_t l = 0; l < q; ++l) {
    target(l) = rtt ? 0.5 * ms.entries[l].value_s : ms.entries[l].value_s;
  }

  Position guess = initial_guess(ms);
  Eigen::Vector3d x(guess.x, guess.y, guess.z);

  Eigen::MatrixXd jacobian(q, dim);
  Eigen::VectorXd residual(q);
  double last_step = 0.0;
  int iter = 0;
  for (; iter < settings.max_iterations; ++iter) {
    for (std::size_t l = 0; l < q; ++l) {
      const Measurement& m = ms.entries[l];
      Eigen::Vector3d diff = x - Eigen::Vector3d(m.anchor.x, m.anchor.y, m.anchor.z);
      if (dim == 2) diff.z() = 0.0;
      const double d = std::max(diff.norm(), 1e-9);
      residual(l) = d / sound_speed - target(l);
      for (int a = 0; a < dim; ++a) jacobian(l, a) = diff(a) / (sound_speed * d);
    }

    Eigen::MatrixXd normal = jacobian.transpose() * jacobian;
    Eigen::VectorXd rhs = jacobian.transpose() * residual;

    Eigen::LDLT<Eigen::MatrixXd> solver(normal);
    Eigen::VectorXd delta;
    bool solved = false;
    if (solver.info() == Eigen::Success) {
      delta = solver.solve(rhs);
      solved = delta.allFinite() && (normal * delta - rhs).norm() <= 1e-6 * rhs.norm() + 1e-30;
    }
    if (!solved) {
      // One regularized retry for collinear-anchor geometries.
      normal.diagonal().array() += 1e-12 * normal.trace() + 1e-300;
      Eigen::LDLT<Eigen::MatrixXd> retry(normal);
      delta = retry.solve(rhs);
      if (retry.info() != Eigen::Success || !delta.allFinite()) {
        result.localizable = false;
        break;
      }
    }

    for (int a = 0; a < dim; ++a) x(a) -= settings.step_scale * delta(a);
    last_step = settings.step_scale * delta.norm();
    if (last_step < settings.stop_threshold_m) {
      ++iter;
      break;
    }
  }

  result.estimate = {x.x(), x.y(), dim == 3 ? x.z() : 0.0};
  result.iterations = iter;
  result.final_step_m = last_step;
  return result;
}

}  // namespace uwloc
