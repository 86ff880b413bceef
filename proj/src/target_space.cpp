#include "lipcore/target_space.hpp"

#include <algorithm>
#include <cmath>

namespace lipcore {

TreePoint TreeSpace::interpolate(const TreePoint& p, const TreePoint& q, double lambda) const {
  return tree_->eval(tree_->geodesic(p, q), std::clamp(lambda, 0.0, 1.0));
}

SegmentHit TreeSpace::segment_residual(const TreePoint& a, const TreePoint& b,
                                       const TreePoint& p) const {
  const double ab = tree_->distance(a, b);
  const double ap = tree_->distance(a, p);
  const double pb = tree_->distance(p, b);
  return {std::max(0.0, ap + pb - ab), ab > 0.0 ? std::clamp(ap / ab, 0.0, 1.0) : 0.0};
}

double HeisenbergSpace::segment_length(const HPoint& p, const HPoint& q) const {
  const double r = std::hypot(q.x - p.x, q.y - p.y);
  if (std::abs(horizontal_gap(p, q)) <= 1e-14 * std::max(1.0, r * r)) return r;
  return distance(p, q);
}

HPoint HeisenbergSpace::interpolate(const HPoint& p, const HPoint& q, double lambda) const {
  return cc_geodesic_point(p, q, std::clamp(lambda, 0.0, 1.0), tol_);
}

bool HeisenbergSpace::same(const HPoint& p, const HPoint& q) const {
  return std::abs(p.x - q.x) <= 1e-12 && std::abs(p.y - q.y) <= 1e-12 &&
         std::abs(p.z - q.z) <= 1e-12;
}

SegmentHit HeisenbergSpace::segment_residual(const HPoint& a, const HPoint& b,
                                             const HPoint& p) const {
  const double ux = b.x - a.x;
  const double uy = b.y - a.y;
  const double len2 = ux * ux + uy * uy;
  double lambda = 0.0;
  if (len2 > 0.0) lambda = std::clamp(((p.x - a.x) * ux + (p.y - a.y) * uy) / len2, 0.0, 1.0);
  const HPoint c = interpolate(a, b, lambda);
  const double residual =
      std::sqrt((p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y) + (p.z - c.z) * (p.z - c.z));
  return {residual, lambda};
}

}  // namespace lipcore
