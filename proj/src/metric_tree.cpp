#include "lipcore/metric_tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "lipcore/errors.hpp"

namespace lipcore {

MetricTree::MetricTree() : MetricTree(1, {}) {}

MetricTree::MetricTree(std::size_t node_count, std::vector<TreeEdge> edges)
    : edges_(std::move(edges)) {
  if (node_count == 0) throw InputError("metric tree needs at least one node");
  if (edges_.size() != node_count - 1) {
    throw InputError("metric tree with " + std::to_string(node_count) + " nodes needs " +
                     std::to_string(node_count - 1) + " edges, got " +
                     std::to_string(edges_.size()));
  }
  adjacency_.resize(node_count);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const TreeEdge& edge = edges_[e];
    if (edge.u >= node_count || edge.v >= node_count || edge.u == edge.v) {
      throw InputError("edge " + std::to_string(e) + " has invalid endpoints");
    }
    if (!std::isfinite(edge.length) || edge.length < kNumericTol) {
      throw InputError("edge " + std::to_string(e) + " is shorter than the numeric tolerance");
    }
    adjacency_[edge.u].push_back({edge.v, e});
    adjacency_[edge.v].push_back({edge.u, e});
  }
  build_index();
}

void MetricTree::build_index() {
  const std::size_t n = node_count();
  parent_.assign(n, kNoEdge);
  parent_edge_.assign(n, kNoEdge);
  level_.assign(n, 0);
  depth_.assign(n, 0.0);
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  parent_[0] = 0;
  std::size_t visited = 0;
  while (!frontier.empty()) {
    const std::size_t a = frontier.front();
    frontier.pop();
    ++visited;
    for (const Incidence& inc : adjacency_[a]) {
      if (seen[inc.node]) continue;
      seen[inc.node] = true;
      parent_[inc.node] = a;
      parent_edge_[inc.node] = inc.edge;
      level_[inc.node] = level_[a] + 1;
      depth_[inc.node] = depth_[a] + edges_[inc.edge].length;
      frontier.push(inc.node);
    }
  }
  if (visited != n) throw InputError("metric tree edges do not connect all nodes");

  std::size_t log = 1;
  while ((std::size_t{1} << log) < n) ++log;
  jump_.assign(log, std::vector<std::size_t>(n));
  jump_[0] = parent_;
  for (std::size_t k = 1; k < log; ++k) {
    for (std::size_t a = 0; a < n; ++a) jump_[k][a] = jump_[k - 1][jump_[k - 1][a]];
  }
}

const TreeEdge& MetricTree::edge(std::size_t e) const {
  if (e >= edges_.size()) throw InputError("unknown edge " + std::to_string(e));
  return edges_[e];
}

std::span<const MetricTree::Incidence> MetricTree::neighbors(std::size_t node) const {
  check_node(node);
  return adjacency_[node];
}

void MetricTree::check_node(std::size_t node) const {
  if (node >= node_count()) throw InputError("unknown node " + std::to_string(node));
}

std::size_t MetricTree::lowest_incident_edge(std::size_t node) const {
  std::size_t best = kNoEdge;
  for (const Incidence& inc : adjacency_[node]) best = std::min(best, inc.edge);
  return best;
}

TreePoint MetricTree::node_point(std::size_t node) const {
  check_node(node);
  if (edges_.empty()) return {};
  const std::size_t e = lowest_incident_edge(node);
  return {e, edges_[e].u == node ? 0.0 : edges_[e].length};
}

TreePoint MetricTree::point_on_edge(std::size_t e, double offset) const {
  const TreeEdge& ed = edge(e);
  if (!std::isfinite(offset) || offset < -kNumericTol || offset > ed.length + kNumericTol) {
    throw InputError("offset " + std::to_string(offset) + " outside edge " + std::to_string(e));
  }
  if (offset <= kNumericTol) return node_point(ed.u);
  if (offset >= ed.length - kNumericTol) return node_point(ed.v);
  return {e, offset};
}

TreePoint MetricTree::canonical(const TreePoint& p) const {
  if (p.edge == kNoEdge) {
    if (!edges_.empty() || p.offset != 0.0) throw InputError("invalid tree point");
    return p;
  }
  return point_on_edge(p.edge, p.offset);
}

std::optional<std::size_t> MetricTree::node_of(const TreePoint& p) const {
  const TreePoint c = canonical(p);
  if (c.edge == kNoEdge) return 0;
  const TreeEdge& ed = edges_[c.edge];
  if (c.offset == 0.0) return ed.u;
  if (c.offset == ed.length) return ed.v;
  return std::nullopt;
}

bool MetricTree::same_point(const TreePoint& p, const TreePoint& q) const {
  return canonical(p) == canonical(q);
}

std::size_t MetricTree::lca(std::size_t a, std::size_t b) const {
  if (level_[a] < level_[b]) std::swap(a, b);
  std::size_t lift = level_[a] - level_[b];
  for (std::size_t k = 0; lift != 0; ++k, lift >>= 1) {
    if (lift & 1) a = jump_[k][a];
  }
  if (a == b) return a;
  for (std::size_t k = jump_.size(); k-- > 0;) {
    if (jump_[k][a] != jump_[k][b]) {
      a = jump_[k][a];
      b = jump_[k][b];
    }
  }
  return parent_[a];
}

double MetricTree::node_distance(std::size_t a, std::size_t b) const {
  check_node(a);
  check_node(b);
  if (a == b) return 0.0;
  return depth_[a] + depth_[b] - 2.0 * depth_[lca(a, b)];
}

std::vector<MetricTree::Anchor> MetricTree::anchors(const TreePoint& p) const {
  if (auto node = node_of(p)) return {{*node, 0.0}};
  const TreePoint c = canonical(p);
  const TreeEdge& ed = edges_[c.edge];
  return {{ed.u, c.offset}, {ed.v, ed.length - c.offset}};
}

double MetricTree::distance(const TreePoint& p, const TreePoint& q) const {
  const TreePoint cp = canonical(p);
  const TreePoint cq = canonical(q);
  const auto ap = anchors(cp);
  const auto aq = anchors(cq);
  if (ap.size() == 2 && aq.size() == 2 && cp.edge == cq.edge) {
    return std::abs(cp.offset - cq.offset);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Anchor& x : ap) {
    for (const Anchor& y : aq) {
      best = std::min(best, x.offset + node_distance(x.node, y.node) + y.offset);
    }
  }
  return best;
}

std::vector<std::size_t> MetricTree::node_path(std::size_t a, std::size_t b) const {
  check_node(a);
  check_node(b);
  const std::size_t top = lca(a, b);
  std::vector<std::size_t> up;
  for (std::size_t x = a; x != top; x = parent_[x]) up.push_back(x);
  up.push_back(top);
  std::vector<std::size_t> down;
  for (std::size_t x = b; x != top; x = parent_[x]) down.push_back(x);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::optional<std::size_t> MetricTree::edge_between(std::size_t a, std::size_t b) const {
  check_node(a);
  check_node(b);
  if (a != 0 && parent_[a] == b) return parent_edge_[a];
  if (b != 0 && parent_[b] == a) return parent_edge_[b];
  return std::nullopt;
}

TreeGeodesic MetricTree::geodesic(const TreePoint& p, const TreePoint& q) const {
  TreeGeodesic g;
  g.source = canonical(p);
  g.target = canonical(q);
  const auto ap = anchors(g.source);
  const auto aq = anchors(g.target);
  if (ap.size() == 2 && aq.size() == 2 && g.source.edge == g.target.edge) {
    g.total_length = std::abs(g.source.offset - g.target.offset);
    if (g.total_length > 0.0) g.legs.push_back({g.source.edge, g.source.offset, g.target.offset});
    return g;
  }
  double best = std::numeric_limits<double>::infinity();
  Anchor from{}, to{};
  for (const Anchor& x : ap) {
    for (const Anchor& y : aq) {
      const double d = x.offset + node_distance(x.node, y.node) + y.offset;
      if (d < best) {
        best = d;
        from = x;
        to = y;
      }
    }
  }
  g.total_length = best;
  auto end_offset = [this](std::size_t e, std::size_t node) {
    return edges_[e].u == node ? 0.0 : edges_[e].length;
  };
  if (ap.size() == 2) {
    g.legs.push_back({g.source.edge, g.source.offset, end_offset(g.source.edge, from.node)});
  }
  g.node_sequence = node_path(from.node, to.node);
  for (std::size_t i = 0; i + 1 < g.node_sequence.size(); ++i) {
    const std::size_t a = g.node_sequence[i];
    const std::size_t b = g.node_sequence[i + 1];
    const std::size_t e = *edge_between(a, b);
    g.legs.push_back({e, end_offset(e, a), end_offset(e, b)});
  }
  if (aq.size() == 2) {
    g.legs.push_back({g.target.edge, end_offset(g.target.edge, to.node), g.target.offset});
  }
  return g;
}

TreePoint MetricTree::eval(const TreeGeodesic& g, double s) const {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw InputError("geodesic parameter " + std::to_string(s) + " outside [0,1]");
  }
  if (s == 0.0 || g.legs.empty()) return g.source;
  if (s == 1.0) return g.target;
  double remaining = s * g.total_length;
  for (const TreeGeodesic::Leg& leg : g.legs) {
    const double span = std::abs(leg.to - leg.from);
    if (remaining <= span) {
      const double dir = leg.to >= leg.from ? 1.0 : -1.0;
      return point_on_edge(leg.edge, leg.from + dir * remaining);
    }
    remaining -= span;
  }
  return g.target;
}

std::vector<double> MetricTree::distances_from(std::size_t node) const {
  check_node(node);
  std::vector<double> dist(node_count(), -1.0);
  std::vector<std::size_t> stack{node};
  dist[node] = 0.0;
  while (!stack.empty()) {
    const std::size_t a = stack.back();
    stack.pop_back();
    for (const Incidence& inc : adjacency_[a]) {
      if (dist[inc.node] >= 0.0) continue;
      dist[inc.node] = dist[a] + edges_[inc.edge].length;
      stack.push_back(inc.node);
    }
  }
  return dist;
}

double MetricTree::diameter() const {
  const auto first = distances_from(0);
  const std::size_t far =
      static_cast<std::size_t>(std::max_element(first.begin(), first.end()) - first.begin());
  const auto second = distances_from(far);
  return *std::max_element(second.begin(), second.end());
}

DistanceTable node_distance_table(const MetricTree& tree) {
  DistanceTable d(tree.node_count());
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    const auto row = tree.distances_from(i);
    for (std::size_t j = 0; j < row.size(); ++j) d.at(i, j) = row[j];
  }
  return d;
}

double four_point_excess(const DistanceTable& d, std::size_t a, std::size_t b, std::size_t c,
                         std::size_t e) {
  std::array<double, 3> sums{d.at(a, b) + d.at(c, e), d.at(a, c) + d.at(b, e),
                             d.at(a, e) + d.at(b, c)};
  std::sort(sums.begin(), sums.end());
  return sums[2] - sums[1];
}

void check_distance_table(const DistanceTable& d, double tol) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (std::abs(d.at(i, i)) > tol) {
      throw InputError("distance table has nonzero diagonal at " + std::to_string(i));
    }
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double v = d.at(i, j);
      if (!std::isfinite(v) || v < -tol) {
        throw InputError("distance table entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") is negative or not finite");
      }
      if (std::abs(v - d.at(j, i)) > tol) {
        throw InputError("distance table is not symmetric at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      }
    }
  }
}

FourPointReport four_point_check(const DistanceTable& d, double tol) {
  check_distance_table(d, tol);
  FourPointReport report;
  const std::size_t k = d.size();
  auto consider = [&](double excess, std::array<std::size_t, 4> quad) {
    if (excess > report.worst_violation) {
      report.worst_violation = excess;
      report.witness = quad;
    }
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t m = 0; m < k; ++m) {
        if (m == i || m == j) continue;
        consider(d.at(i, j) - d.at(i, m) - d.at(m, j), {i, j, m, m});
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    const auto ra = d.row(a);
    for (std::size_t b = a + 1; b < k; ++b) {
      const auto rb = d.row(b);
      for (std::size_t c = b + 1; c < k; ++c) {
        const auto rc = d.row(c);
        for (std::size_t e = c + 1; e < k; ++e) {
          const double s1 = ra[b] + rc[e];
          const double s2 = ra[c] + rb[e];
          const double s3 = ra[e] + rb[c];
          const double hi = std::max({s1, s2, s3});
          const double lo = std::min({s1, s2, s3});
          const double mid = s1 + s2 + s3 - hi - lo;
          consider(hi - mid, {a, b, c, e});
        }
      }
    }
  }
  report.is_tree_metric = report.worst_violation <= tol;
  return report;
}

}  // namespace lipcore
