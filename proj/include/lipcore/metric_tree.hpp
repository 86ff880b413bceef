#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lipcore/tolerance.hpp"

namespace lipcore {

inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

struct TreeEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double length = 0.0;
};

// A point of a metric tree: an offset along an edge measured from edge.u.
// Node points are stored canonically as the lowest-numbered incident edge with
// offset 0 or the full length; a single-node tree uses kNoEdge.
struct TreePoint {
  std::size_t edge = kNoEdge;
  double offset = 0.0;

  friend bool operator==(const TreePoint&, const TreePoint&) = default;
};

// Arc from source to target. `node_sequence` lists the tree nodes the arc
// passes through in order, including source/target when they are nodes.
struct TreeGeodesic {
  struct Leg {
    std::size_t edge;
    double from;
    double to;
  };

  TreePoint source;
  TreePoint target;
  std::vector<std::size_t> node_sequence;
  double total_length = 0.0;
  std::vector<Leg> legs;
};

/// Finite tree with strictly positive edge lengths. Immutable after
/// construction; distance queries run through an LCA table.
class MetricTree {
 public:
  struct Incidence {
    std::size_t node;
    std::size_t edge;
  };

  // Single-node tree.
  MetricTree();
  MetricTree(std::size_t node_count, std::vector<TreeEdge> edges);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const TreeEdge& edge(std::size_t e) const;
  std::span<const TreeEdge> edges() const noexcept { return edges_; }
  std::span<const Incidence> neighbors(std::size_t node) const;

  TreePoint node_point(std::size_t node) const;
  // Validates and canonicalizes (offsets within kNumericTol of an end snap to
  // the node).
  TreePoint point_on_edge(std::size_t edge, double offset) const;
  TreePoint canonical(const TreePoint& p) const;
  std::optional<std::size_t> node_of(const TreePoint& p) const;
  bool same_point(const TreePoint& p, const TreePoint& q) const;

  double node_distance(std::size_t a, std::size_t b) const;
  double distance(const TreePoint& p, const TreePoint& q) const;
  // Nodes on the arc a -> b, both ends included.
  std::vector<std::size_t> node_path(std::size_t a, std::size_t b) const;
  std::optional<std::size_t> edge_between(std::size_t a, std::size_t b) const;

  TreeGeodesic geodesic(const TreePoint& p, const TreePoint& q) const;
  // Point at arc length s * total_length from the source; s must lie in [0,1].
  TreePoint eval(const TreeGeodesic& g, double s) const;

  std::vector<double> distances_from(std::size_t node) const;
  // Double sweep; the farthest pair of a finite tree is a pair of nodes.
  double diameter() const;

 private:
  struct Anchor {
    std::size_t node;
    double offset;  // distance from the point to the node
  };

  void check_node(std::size_t node) const;
  void build_index();
  std::size_t lca(std::size_t a, std::size_t b) const;
  // Ends of the edge a point sits on, or the node itself.
  std::vector<Anchor> anchors(const TreePoint& p) const;
  std::size_t lowest_incident_edge(std::size_t node) const;

  std::vector<TreeEdge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> parent_edge_;
  std::vector<std::size_t> level_;
  std::vector<double> depth_;
  std::vector<std::vector<std::size_t>> jump_;
};

// Symmetric table of pairwise distances, stored row-major.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(std::size_t size) : size_(size), data_(size * size, 0.0) {}

  std::size_t size() const noexcept { return size_; }
  double& at(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * size_, size_);
  }

 private:
  std::size_t size_ = 0;
  std::vector<double> data_;
};

DistanceTable node_distance_table(const MetricTree& tree);

struct FourPointReport {
  bool is_tree_metric = true;
  double worst_violation = 0.0;
  std::array<std::size_t, 4> witness{0, 0, 0, 0};
};

// Excess of the largest of the three pair sums over the second largest for
// (a,b,c,e). Repeated indices turn it into a triangle-inequality excess.
double four_point_excess(const DistanceTable& d, std::size_t a, std::size_t b, std::size_t c,
                         std::size_t e);

// Throws InputError for asymmetric, negative or nonzero-diagonal tables.
void check_distance_table(const DistanceTable& d, double tol = kNumericTol);

FourPointReport four_point_check(const DistanceTable& d, double tol = kNumericTol);

// How a reconstructed node came to exist: either it carries a label, or it is
// a branch point created by splitting the arc u -> v at `fraction`.
struct NodeOrigin {
  enum class Kind { kLabel, kSplit };
  Kind kind = Kind::kLabel;
  std::size_t label = 0;
  std::size_t u = 0;
  std::size_t v = 0;
  double fraction = 0.0;
};

struct TreeReconstruction {
  MetricTree tree;
  std::vector<std::size_t> label_nodes;
  std::vector<TreePoint> label_points;
  // Indexed by node; split origins only reference lower-numbered nodes.
  std::vector<NodeOrigin> origins;
};

// Leaf insertion by Gromov products. Labels at distance <= kNumericTol share a
// node. Throws ReconstructionError with a witness quadruple when the table is
// not a tree metric within `tol`.
TreeReconstruction tree_from_metric(const DistanceTable& d, double tol = kTreeTol);

}  // namespace lipcore
