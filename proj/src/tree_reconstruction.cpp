#include <algorithm>
#include <cmath>
#include <string>

#include "lipcore/errors.hpp"
#include "lipcore/metric_tree.hpp"

namespace lipcore {
namespace {

// Mutable tree used only while labels are being inserted.
class TreeBuilder {
 public:
  struct Walk {
    std::vector<double> dist;
    std::vector<std::size_t> via;  // previous node on the path from the root
  };

  std::size_t add_node(NodeOrigin origin) {
    adjacency_.emplace_back();
    origins_.push_back(origin);
    return adjacency_.size() - 1;
  }

  void add_edge(std::size_t u, std::size_t v, double length) {
    const std::size_t e = edges_.size();
    edges_.push_back({u, v, length});
    adjacency_[u].push_back({v, e});
    adjacency_[v].push_back({u, e});
  }

  // Splits the edge between adjacent nodes a and b at distance t from a.
  std::size_t split(std::size_t a, std::size_t b, double t) {
    std::size_t e = kNoEdge;
    for (const auto& inc : adjacency_[a]) {
      if (inc.node == b) e = inc.edge;
    }
    const double length = edges_[e].length;
    const std::size_t s =
        add_node({NodeOrigin::Kind::kSplit, 0, a, b, t / length});
    const std::size_t u = edges_[e].u;
    const std::size_t v = edges_[e].v;
    const double from_u = (u == a) ? t : length - t;
    edges_[e] = {u, s, from_u};
    for (auto& inc : adjacency_[u]) {
      if (inc.edge == e) inc.node = s;
    }
    for (auto& inc : adjacency_[v]) {
      if (inc.edge == e) inc = {s, edges_.size()};
    }
    adjacency_[s].push_back({u, e});
    const std::size_t tail = edges_.size();
    edges_.push_back({s, v, length - from_u});
    adjacency_[s].push_back({v, tail});
    return s;
  }

  Walk walk_from(std::size_t root) const {
    Walk w{std::vector<double>(adjacency_.size(), -1.0),
           std::vector<std::size_t>(adjacency_.size(), kNoEdge)};
    std::vector<std::size_t> stack{root};
    w.dist[root] = 0.0;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (const auto& inc : adjacency_[a]) {
        if (w.dist[inc.node] >= 0.0) continue;
        w.dist[inc.node] = w.dist[a] + edges_[inc.edge].length;
        w.via[inc.node] = a;
        stack.push_back(inc.node);
      }
    }
    return w;
  }

  NodeOrigin& origin(std::size_t node) { return origins_[node]; }
  std::size_t node_count() const { return adjacency_.size(); }

  TreeReconstruction finish(std::vector<std::size_t> label_nodes) && {
    TreeReconstruction out{MetricTree(adjacency_.size(), std::move(edges_)),
                           std::move(label_nodes), {}, std::move(origins_)};
    out.label_points.reserve(out.label_nodes.size());
    for (std::size_t node : out.label_nodes) out.label_points.push_back(out.tree.node_point(node));
    return out;
  }

 private:
  struct Incidence {
    std::size_t node;
    std::size_t edge;
  };
  std::vector<TreeEdge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<NodeOrigin> origins_;
};

[[noreturn]] void report_violation(const DistanceTable& d, std::size_t x, double tol,
                                   double mismatch) {
  std::array<std::size_t, 4> witness{x, 0, 0, 0};
  double worst = -1.0;
  auto consider = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
    const double v = four_point_excess(d, a, b, c, e);
    if (v > worst) {
      worst = v;
      witness = {a, b, c, e};
    }
  };
  for (std::size_t a = 0; a < x; ++a) {
    for (std::size_t b = 0; b < x; ++b) {
      if (a != b) consider(x, a, b, b);
      if (a < b) consider(x, 0, a, b);
    }
  }
  if (worst <= tol && x <= 256) {
    for (std::size_t a = 0; a < x; ++a)
      for (std::size_t b = a + 1; b < x; ++b)
        for (std::size_t c = b + 1; c < x; ++c) consider(x, a, b, c);
  }
  throw ReconstructionError("distance table is not a tree metric (label " + std::to_string(x) +
                                " misfits by " + std::to_string(mismatch) + ")",
                            witness, std::max(worst, 0.0));
}

}  // namespace

TreeReconstruction tree_from_metric(const DistanceTable& d, double tol) {
  check_distance_table(d, std::max(tol, kNumericTol));
  const std::size_t k = d.size();
  if (k == 0) throw InputError("cannot reconstruct a tree from an empty table");

  TreeBuilder builder;
  std::vector<std::size_t> label_nodes(k, kNoEdge);
  label_nodes[0] = builder.add_node({NodeOrigin::Kind::kLabel, 0, 0, 0, 0.0});

  for (std::size_t x = 1; x < k; ++x) {
    const std::size_t w_node = label_nodes[0];
    const double dxw = d.at(x, 0);

    // Deepest branching point of x along the arcs leaving label 0.
    double best = 0.0;
    std::size_t best_label = 0;
    for (std::size_t y = 1; y < x; ++y) {
      const double g = 0.5 * (dxw + d.at(y, 0) - d.at(x, y));
      if (g > best) {
        best = g;
        best_label = y;
      }
    }

    const auto walk = builder.walk_from(w_node);
    std::size_t attach = w_node;
    double attach_depth = 0.0;
    if (best > kNumericTol && best_label != 0) {
      std::vector<std::size_t> path;
      for (std::size_t a = label_nodes[best_label]; a != kNoEdge; a = walk.via[a]) {
        path.push_back(a);
      }
      std::reverse(path.begin(), path.end());
      const double reach = walk.dist[path.back()];
      const double g = std::min(best, reach);
      attach = path.back();
      attach_depth = reach;
      for (std::size_t i = 0; i < path.size(); ++i) {
        const double at = walk.dist[path[i]];
        if (std::abs(at - g) <= kNumericTol) {
          attach = path[i];
          attach_depth = at;
          break;
        }
        if (at > g) {
          attach = builder.split(path[i - 1], path[i], g - walk.dist[path[i - 1]]);
          attach_depth = g;
          break;
        }
      }
    }

    const double leg = dxw - attach_depth;
    if (leg < -tol) report_violation(d, x, tol, -leg);
    if (leg <= kNumericTol) {
      label_nodes[x] = attach;
      NodeOrigin& o = builder.origin(attach);
      if (o.kind == NodeOrigin::Kind::kSplit) o = {NodeOrigin::Kind::kLabel, x, 0, 0, 0.0};
    } else {
      label_nodes[x] = builder.add_node({NodeOrigin::Kind::kLabel, x, 0, 0, 0.0});
      builder.add_edge(attach, label_nodes[x], leg);
    }

    const auto check = builder.walk_from(label_nodes[x]);
    double mismatch = 0.0;
    for (std::size_t z = 0; z < x; ++z) {
      mismatch = std::max(mismatch, std::abs(check.dist[label_nodes[z]] - d.at(x, z)));
    }
    if (mismatch > tol) report_violation(d, x, tol, mismatch);
  }

  return std::move(builder).finish(std::move(label_nodes));
}

}  // namespace lipcore
