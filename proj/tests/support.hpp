#pragma once

#include <memory>
#include <random>

#include "lipcore/metric_tree.hpp"
#include "lipcore/target_space.hpp"

namespace lipcore::testing {

// Centre o = 0 with leaves a = 1, b = 2, c = 3.
inline std::shared_ptr<const MetricTree> tripod(double la = 1.0, double lb = 1.0, double lc = 1.0) {
  return std::make_shared<const MetricTree>(
      4, std::vector<TreeEdge>{{0, 1, la}, {0, 2, lb}, {0, 3, lc}});
}

// Path graph 0 - 1 - ... - k with the given edge lengths.
inline std::shared_ptr<const MetricTree> path_tree(const std::vector<double>& lengths) {
  std::vector<TreeEdge> edges;
  for (std::size_t i = 0; i < lengths.size(); ++i) edges.push_back({i, i + 1, lengths[i]});
  return std::make_shared<const MetricTree>(lengths.size() + 1, std::move(edges));
}

inline TargetPath<TreePoint> node_path(const MetricTree& t, std::initializer_list<std::size_t> nodes) {
  TargetPath<TreePoint> p;
  for (auto n : nodes) p.vertices.push_back(t.node_point(n));
  return p;
}

// Floyd-Warshall over the node graph, as an oracle for tree distances.
inline DistanceTable brute_force_distances(const MetricTree& t) {
  const std::size_t k = t.node_count();
  DistanceTable d(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) d.at(i, j) = i == j ? 0.0 : 1e300;
  }
  for (const auto& e : t.edges()) d.at(e.u, e.v) = d.at(e.v, e.u) = e.length;
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) d.at(i, j) = std::min(d.at(i, j), d.at(i, m) + d.at(m, j));
    }
  }
  return d;
}

// Cycle graph metric on k nodes with unit edges.
inline DistanceTable cycle_metric(std::size_t k) {
  DistanceTable d(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t gap = i > j ? i - j : j - i;
      d.at(i, j) = double(std::min(gap, k - gap));
    }
  }
  return d;
}

}  // namespace lipcore::testing
