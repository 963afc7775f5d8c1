#ifndef UWLOC_LOCALIZATION_HPP
#define UWLOC_LOCALIZATION_HPP

#include <vector>

#include "uwloc/channel.hpp"
#include "uwloc/geometry.hpp"
#include "uwloc/rng.hpp"

namespace uwloc {

enum class RangingMode { kTimeOfFlight, kRoundTrip };

struct Measurement {
  int anchor_id = 0;
  Position anchor;
  double value_s = 0.0;     // ToF, or full round-trip time in RTT mode
  double variance_s2 = 0.0; // noise power at the true generation distance
};

struct MeasurementSet {
  RangingMode mode = RangingMode::kTimeOfFlight;
  std::vector<Measurement> entries;

  std::size_t total_count() const { return entries.size(); }
  int distinct_anchors() const;
};

// Draws noisy ranging measurements: arrivals[j] packets from anchors[j],
// each with Gaussian timing noise whose variance follows the
// distance-dependent law (doubled in RTT mode, where two timing errors add).
MeasurementSet generate_measurements(const Position& truth,
                                     const std::vector<Position>& anchors,
                                     const std::vector<int>& arrivals, const PhyConfig& phy,
                                     double sound_speed, RangingMode mode, RngStream& rng);

// Centroid of the distinct anchors contributing measurements.
Position initial_guess(const MeasurementSet& ms);

struct GaussNewtonSettings {
  double step_scale = 0.2;     // damping factor on the update
  int max_iterations = 50;
  double stop_threshold_m = 1e-4;  // stop when the position change drops below this
  int dimensions = 2;              // 2 for planar, 3 for full
  int required_anchors = 3;        // distinct anchors needed to call the fix valid
};

struct GaussNewtonResult {
  Position estimate;
  int iterations = 0;
  double final_step_m = 0.0;
  bool localizable = false;  // enough distinct anchors and a solvable system
};

// Damped Gauss-Newton least squares on the stacked ToF residuals. RTT
// entries are mapped to one-way equivalents before solving. A nearly
// singular normal matrix gets one regularized retry; persistent
// singularity clears the localizable flag.
GaussNewtonResult gauss_newton(const MeasurementSet& ms, double sound_speed,
                               const GaussNewtonSettings& settings);

}  // namespace uwloc

#endif
