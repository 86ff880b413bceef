#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "lipcore/factorization.hpp"

namespace lipcore {

DistanceTable pseudo_metric(const WeightedGrid& grid) {
  const std::size_t count = grid.vertex_count();
  if (grid.horizontal.size() != grid.rows * (grid.cols - 1) ||
      grid.vertical.size() != (grid.rows - 1) * grid.cols) {
    throw InputError("weighted grid has inconsistent edge arrays");
  }
  DistanceTable d(count);
  std::vector<double> dist(count);
  using Item = std::pair<double, std::size_t>;
  const double inf = std::numeric_limits<double>::infinity();

  for (std::size_t source = 0; source < count; ++source) {
    std::fill(dist.begin(), dist.end(), inf);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
      const auto [du, u] = queue.top();
      queue.pop();
      if (du > dist[u]) continue;
      const std::size_t s = u / grid.cols;
      const std::size_t j = u % grid.cols;
      auto relax = [&](std::size_t v, double w) {
        if (du + w < dist[v]) {
          dist[v] = du + w;
          queue.push({dist[v], v});
        }
      };
      if (j + 1 < grid.cols) relax(u + 1, grid.horizontal[s * (grid.cols - 1) + j]);
      if (j > 0) relax(u - 1, grid.horizontal[s * (grid.cols - 1) + j - 1]);
      if (s + 1 < grid.rows) relax(u + grid.cols, grid.vertical[s * grid.cols + j]);
      if (s > 0) relax(u - grid.cols, grid.vertical[(s - 1) * grid.cols + j]);
    }
    for (std::size_t v = 0; v < count; ++v) d.at(source, v) = dist[v];
  }
  // Symmetrize against rounding in the summation order.
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      const double m = std::min(d.at(a, b), d.at(b, a));
      d.at(a, b) = m;
      d.at(b, a) = m;
    }
  }
  return d;
}

}  // namespace lipcore
