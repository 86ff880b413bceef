#pragma once

#include <cstddef>
#include <vector>

#include "lipcore/tolerance.hpp"

namespace lipcore {

// Point of the first Heisenberg group in exponential coordinates. The group
// law twists z by half the planar cross product, so the lift of a closed
// planar loop gains exactly its signed area in z.
struct HPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const HPoint&, const HPoint&) = default;
};

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

HPoint group_mul(const HPoint& p, const HPoint& q);
HPoint group_inv(const HPoint& p);
// Anisotropic dilation (x, y, z) -> (l x, l y, l^2 z); a group automorphism.
HPoint dilate(const HPoint& p, double lambda);

// z increment picked up by the horizontal lift of the segment a -> b.
double lift_increment(const PlanarPoint& a, const PlanarPoint& b);

// z coordinate of p^-1 q. Zero exactly when q lies on the lifted straight
// chord from p.
double horizontal_gap(const HPoint& p, const HPoint& q);

/// Horizontal lift of a planar polyline.
///
/// The z coordinates are derived from the planar vertices and the base height;
/// they are never supplied independently. Its CC length is the length of the
/// planar projection.
class HorizontalPath {
 public:
  static HorizontalPath lift(std::vector<PlanarPoint> planar, double base_z);

  const std::vector<PlanarPoint>& planar_vertices() const noexcept { return planar_; }
  double base_z() const noexcept { return base_z_; }
  const std::vector<double>& z_values() const noexcept { return z_; }
  std::size_t size() const noexcept { return planar_.size(); }
  HPoint vertex(std::size_t k) const { return {planar_[k].x, planar_[k].y, z_[k]}; }
  std::vector<HPoint> points() const;
  double final_z() const { return z_.back(); }

 private:
  HorizontalPath(std::vector<PlanarPoint> planar, double base_z, std::vector<double> z)
      : planar_(std::move(planar)), base_z_(base_z), z_(std::move(z)) {}

  std::vector<PlanarPoint> planar_;
  double base_z_;
  std::vector<double> z_;
};

double cc_length(const HorizontalPath& path);

// Carnot-Caratheodory distance. Minimizers project to circular arcs from the
// origin to the planar displacement of p^-1 q; the arc's central angle is
// found by bisection so that its swept area closes the z gap. Throws
// NumericError if the cap is reached before the length bracket is below tol.
double cc_distance(const HPoint& p, const HPoint& q, double tol = kCcTol,
                   int iteration_cap = kCcIterationCap);

// Point at fraction lambda of the way along a minimizing geodesic p -> q.
HPoint cc_geodesic_point(const HPoint& p, const HPoint& q, double lambda, double tol = kCcTol);

}  // namespace lipcore
