#pragma once

#include <algorithm>
#include <concepts>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "lipcore/heisenberg.hpp"
#include "lipcore/metric_tree.hpp"

namespace lipcore {

// Where a point sits relative to a segment: `residual` is zero when it lies on
// the canonical segment, at `fraction` of the way from its start.
struct SegmentHit {
  double residual = 0.0;
  double fraction = 0.0;
};

// A metric target space M. `segment` is the canonical short path between two
// points; its length is never below their distance.
template <class S>
concept TargetSpace = requires(const S& s, const typename S::Point& p, double lambda) {
  typename S::Point;
  { S::kTag } -> std::convertible_to<std::string_view>;
  { s.distance(p, p) } -> std::convertible_to<double>;
  { s.segment_length(p, p) } -> std::convertible_to<double>;
  { s.interpolate(p, p, lambda) } -> std::same_as<typename S::Point>;
  { s.same(p, p) } -> std::convertible_to<bool>;
  { s.segment_residual(p, p, p) } -> std::same_as<SegmentHit>;
};

class TreeSpace {
 public:
  using Point = TreePoint;
  static constexpr std::string_view kTag = "tree";

  explicit TreeSpace(std::shared_ptr<const MetricTree> tree) : tree_(std::move(tree)) {}

  const MetricTree& tree() const noexcept { return *tree_; }
  const std::shared_ptr<const MetricTree>& tree_ptr() const noexcept { return tree_; }

  double distance(const Point& p, const Point& q) const { return tree_->distance(p, q); }
  double segment_length(const Point& p, const Point& q) const { return tree_->distance(p, q); }
  Point interpolate(const Point& p, const Point& q, double lambda) const;
  bool same(const Point& p, const Point& q) const { return tree_->same_point(p, q); }
  SegmentHit segment_residual(const Point& a, const Point& b, const Point& p) const;

 private:
  std::shared_ptr<const MetricTree> tree_;
};

// The segment between horizontally aligned points is the lifted planar chord;
// otherwise it is a CC geodesic.
class HeisenbergSpace {
 public:
  using Point = HPoint;
  static constexpr std::string_view kTag = "h1";

  explicit HeisenbergSpace(double tol = 1e-12) : tol_(tol) {}

  double tolerance() const noexcept { return tol_; }
  double distance(const Point& p, const Point& q) const { return cc_distance(p, q, tol_); }
  double segment_length(const Point& p, const Point& q) const;
  Point interpolate(const Point& p, const Point& q, double lambda) const;
  bool same(const Point& p, const Point& q) const;
  SegmentHit segment_residual(const Point& a, const Point& b, const Point& p) const;

 private:
  double tol_;
};

static_assert(TargetSpace<TreeSpace>);
static_assert(TargetSpace<HeisenbergSpace>);

// Vertex sequence with uniform parameter spacing over [0,1]; consecutive
// vertices are joined by canonical segments.
template <class P>
struct TargetPath {
  std::vector<P> vertices;

  std::size_t size() const noexcept { return vertices.size(); }
  const P& front() const { return vertices.front(); }
  const P& back() const { return vertices.back(); }
};

template <TargetSpace S>
double path_length(const S& space, std::span<const typename S::Point> vertices) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    total += space.segment_length(vertices[k], vertices[k + 1]);
  }
  return total;
}

template <TargetSpace S>
double path_length(const S& space, const TargetPath<typename S::Point>& path) {
  return path_length(space, std::span<const typename S::Point>(path.vertices));
}

// Max over consecutive samples of distance / spacing.
template <TargetSpace S>
double discrete_lipschitz(const S& space, std::span<const typename S::Point> samples,
                          double spacing) {
  double lip = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    lip = std::max(lip, space.distance(samples[k], samples[k + 1]) / spacing);
  }
  return lip;
}

}  // namespace lipcore
