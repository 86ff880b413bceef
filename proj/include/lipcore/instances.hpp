#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>

#include "lipcore/grid_homotopy.hpp"
#include "lipcore/metric_tree.hpp"
#include "lipcore/moves.hpp"
#include "lipcore/target_space.hpp"

namespace lipcore {

// Largest composite homotopy a generator may emit: m rows of spacing, n columns of spacing.
struct GridBudget {
  std::size_t m = 16;
  std::size_t n = 64;
};

/// Random tree with node i attached to a uniformly chosen earlier node;
/// edge lengths are uniform in [min_length, max_length].
MetricTree random_tree(std::mt19937_64& rng, std::size_t node_count, double min_length = 0.5,
                       double max_length = 2.0);

// Node walk of `steps` edges from `start`. With probability `straight` each
// step avoids returning along the edge it just used, when it can.
TargetPath<TreePoint> random_walk(std::mt19937_64& rng, const MetricTree& tree, std::size_t start,
                                  std::size_t steps, double straight = 0.7);

// Spur of `depth` tree edges starting at p (a node or an edge point).
TargetPath<TreePoint> random_spur(std::mt19937_64& rng, const MetricTree& tree, const TreePoint& p,
                                  std::size_t depth);

/// Reductions that straighten `path`, one batch of slides, then up to two
/// spur insertions, all within `budget`. Returns nullopt when the reductions
/// alone exceed the row budget.
std::optional<MoveSequence<TreePoint>> random_moves(std::mt19937_64& rng, const TreeSpace& space,
                                     const TargetPath<TreePoint>& path, GridBudget budget);

struct Instance {
  std::uint64_t seed = 0;
  std::shared_ptr<const MetricTree> tree;
  TargetPath<TreePoint> gamma;
  TargetPath<TreePoint> beta;
  MoveSequence<TreePoint> moves;
  GridHomotopy<TreeSpace> homotopy;
  // Length of the unique arc between gamma's endpoints.
  double truth = 0.0;
};

Instance random_instance(std::uint64_t seed, std::size_t tree_size, GridBudget grid = {});

}  // namespace lipcore
