#ifndef UWLOC_GEOMETRY_HPP
#define UWLOC_GEOMETRY_HPP

#include <vector>

#include "uwloc/numerics.hpp"
#include "uwloc/rng.hpp"

namespace uwloc {

// Rectangular operating area, lengths in meters.
struct Region {
  double width = 0.0;   // x extent
  double height = 0.0;  // y extent

  double diagonal() const;
  void validate() const;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;  // kept for the 3-D solver/bound paths; 0 in the planar default
};

double distance(const Position& a, const Position& b);

// Density of the distance between two independent uniform points in the
// region. Exact closed form; zero outside [0, diagonal].
GriddedPdf distance_pdf(const Region& region, std::size_t grid_size = kDefaultGridSize);

// Expected distance between two independent uniform points.
double mean_distance(const Region& region);

std::vector<Position> sample_positions(const Region& region, std::size_t count,
                                       RngStream& rng);

// Anchor-anchor and sensor-anchor distance densities used by the analytic
// modules. Both default to the region's uniform-placement law, but either
// can be replaced with an empirical density.
struct DistanceModel {
  GriddedPdf anchor_anchor;
  GriddedPdf sensor_anchor;

  static DistanceModel for_region(const Region& region,
                                  std::size_t grid_size = kDefaultGridSize);
};

}  // namespace uwloc

#endif
