#include "uwloc/geometry.hpp"

#include <cmath>

#include "uwloc/errors.hpp"

namespace uwloc {

namespace {

// Angular limits of the polar integral for a given distance, with dy <= dx.
struct AngleBranch {
  double theta_s;
  double theta_e;
};

AngleBranch angle_branch(double d, double dx, double dy) {
  if (d <= dy) return {0.0, 1.5707963267948966};
  if (d <= dx) return {0.0, std::asin(dy / d)};
  return {std::acos(dx / d), std::asin(dy / d)};
}

// Distance density between two uniform points in a dx-by-dy rectangle,
// dy <= dx required by the branch table above.
double rect_distance_density(double d, double dx, double dy) {
  if (d <= 0.0) return 0.0;
  const double diag = std::sqrt(dx * dx + dy * dy);
  if (d >= diag) return 0.0;
  const auto [ts, te] = angle_branch(d, dx, dy);
  const double sin_e = std::sin(te), sin_s = std::sin(ts);
  const double cos_e = std::cos(te), cos_s = std::cos(ts);
  const double bracket = d * d * (sin_e * sin_e - sin_s * sin_s) + 2.0 * dx * dy * (te - ts) +
                         2.0 * dx * d * (cos_e - cos_s) - 2.0 * dy * d * (sin_e - sin_s);
  return 2.0 * d / (dx * dx * dy * dy) * bracket;
}

}  // namespace

double Region::diagonal() const { return std::sqrt(width * width + height * height); }

void Region::validate() const {
  if (!(width > 0.0)) throw ConfigError("Region: width must be positive");
  if (!(height >= 0.0)) throw ConfigError("Region: height must be non-negative");
}

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

GriddedPdf distance_pdf(const Region& region, std::size_t grid_size) {
  region.validate();
  const double dx = std::max(region.width, region.height);
  const double dy = std::min(region.width, region.height);
  const double diag = region.diagonal();
  const double hi = diag * 1.05;  // 5% head-room past the support

  if (dy == 0.0) {
    // Degenerate line segment: |U1 - U2| over a length-dx segment.
    return GriddedPdf::from_function(0.0, hi, grid_size, [dx](double d) {
      return d >= dx ? 0.0 : 2.0 * (dx - d) / (dx * dx);
    });
  }

  return GriddedPdf::from_function(
      0.0, hi, grid_size, [dx, dy](double d) { return rect_distance_density(d, dx, dy); });
}

double mean_distance(const Region& region) { return distance_pdf(region).mean(); }

std::vector<Position> sample_positions(const Region& region, std::size_t count,
                                       RngStream& rng) {
  region.validate();
  std::vector<Position> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({rng.uniform(0.0, region.width), rng.uniform(0.0, region.height), 0.0});
  }
  return out;
}

DistanceModel DistanceModel::for_region(const Region& region, std::size_t grid_size) {
  GriddedPdf pdf = distance_pdf(region, grid_size);
  return {pdf, pdf};
}

}  // namespace uwloc
