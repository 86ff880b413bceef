#include "lipcore/heisenberg.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lipcore/errors.hpp"

namespace lipcore {
namespace {

// theta - sin(theta), accurate for small arguments.
double excess_angle(double theta) {
  if (theta < 1e-3) {
    const double t2 = theta * theta;
    return theta * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0));
  }
  return theta - std::sin(theta);
}

// Area between a circular arc of central angle theta and its chord of length r.
double arc_area(double r, double theta) {
  const double s = std::sin(0.5 * theta);
  return r * r * excess_angle(theta) / (8.0 * s * s);
}

double arc_length(double r, double theta) {
  if (theta < 1e-8) return r * (1.0 + theta * theta / 24.0);
  return r * theta / (2.0 * std::sin(0.5 * theta));
}

bool is_horizontal(double r, double gap) {
  return std::abs(gap) <= 1e-14 * std::max(1.0, r * r);
}

struct ArcSolution {
  double theta;
  double length;
};

// Central angle of the arc with chord r enclosing `area` (> 0).
ArcSolution solve_arc(double r, double area, double tol, int cap) {
  double lo = 0.0;
  double hi = 2.0 * std::numbers::pi;
  for (int it = 0; it < cap; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (arc_area(r, mid) < area) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi < 2.0 * std::numbers::pi && arc_length(r, hi) - arc_length(r, lo) <= tol) {
      const double theta = 0.5 * (lo + hi);
      return {theta, 0.5 * (arc_length(r, lo) + arc_length(r, hi))};
    }
  }
  throw NumericError("cc_distance did not converge; central angle bracket [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]",
                     lo, hi);
}

}  // namespace

HPoint group_mul(const HPoint& p, const HPoint& q) {
  return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * (p.x * q.y - p.y * q.x)};
}

HPoint group_inv(const HPoint& p) { return {-p.x, -p.y, -p.z}; }

HPoint dilate(const HPoint& p, double lambda) {
  return {lambda * p.x, lambda * p.y, lambda * lambda * p.z};
}

double lift_increment(const PlanarPoint& a, const PlanarPoint& b) {
  return 0.5 * (a.x * b.y - a.y * b.x);
}

double horizontal_gap(const HPoint& p, const HPoint& q) {
  return q.z - p.z - 0.5 * (p.x * q.y - p.y * q.x);
}

HorizontalPath HorizontalPath::lift(std::vector<PlanarPoint> planar, double base_z) {
  if (planar.empty()) throw InputError("cannot lift an empty vertex list");
  std::vector<double> z(planar.size());
  z[0] = base_z;
  for (std::size_t k = 0; k < planar.size(); ++k) {
    if (!std::isfinite(planar[k].x) || !std::isfinite(planar[k].y)) {
      throw InputError("planar vertex " + std::to_string(k) + " is not finite");
    }
    if (k > 0) z[k] = z[k - 1] + lift_increment(planar[k - 1], planar[k]);
  }
  return HorizontalPath(std::move(planar), base_z, std::move(z));
}

std::vector<HPoint> HorizontalPath::points() const {
  std::vector<HPoint> out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) out.push_back(vertex(k));
  return out;
}

double cc_length(const HorizontalPath& path) {
  double total = 0.0;
  const auto& v = path.planar_vertices();
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    total += std::hypot(v[k + 1].x - v[k].x, v[k + 1].y - v[k].y);
  }
  return total;
}

double cc_distance(const HPoint& p, const HPoint& q, double tol, int iteration_cap) {
  if (!(tol > 0.0)) throw InputError("cc_distance tolerance must be positive");
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double gap = horizontal_gap(p, q);
  const double r = std::hypot(dx, dy);
  if (is_horizontal(r, gap)) return r;
  if (r == 0.0) return std::sqrt(4.0 * std::numbers::pi * std::abs(gap));
  return solve_arc(r, std::abs(gap), tol, iteration_cap).length;
}

HPoint cc_geodesic_point(const HPoint& p, const HPoint& q, double lambda, double tol) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InputError("geodesic fraction " + std::to_string(lambda) + " outside [0,1]");
  }
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double gap = horizontal_gap(p, q);
  const double r = std::hypot(dx, dy);
  if (is_horizontal(r, gap)) {
    const HPoint step{lambda * dx, lambda * dy, 0.0};
    return group_mul(p, step);
  }
  const double sigma = gap > 0.0 ? 1.0 : -1.0;
  double theta = 2.0 * std::numbers::pi;
  double rho = std::sqrt(std::abs(gap) / std::numbers::pi);
  double chord_angle = 0.0;
  if (r > 0.0) {
    theta = solve_arc(r, std::abs(gap), tol, kCcIterationCap).theta;
    rho = r / (2.0 * std::sin(0.5 * theta));
    chord_angle = std::atan2(dy, dx);
  }
  const double start = chord_angle - sigma * 0.5 * theta;
  const double phi = lambda * theta;
  const HPoint step{sigma * rho * (std::sin(start + sigma * phi) - std::sin(start)),
                    -sigma * rho * (std::cos(start + sigma * phi) - std::cos(start)),
                    sigma * 0.5 * rho * rho * excess_angle(phi)};
  if (lambda == 1.0) return q;
  return group_mul(p, step);
}

}  // namespace lipcore
