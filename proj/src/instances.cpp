#include "lipcore/instances.hpp"

#include <algorithm>
#include <string>

#include "lipcore/errors.hpp"

namespace lipcore {

MetricTree random_tree(std::mt19937_64& rng, std::size_t node_count, double min_length,
                       double max_length) {
  if (node_count == 0) throw InputError("a tree needs at least one node");
  std::uniform_real_distribution<double> length(min_length, max_length);
  std::vector<TreeEdge> edges;
  for (std::size_t i = 1; i < node_count; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    const std::size_t p = parent(rng);
    edges.push_back({p, i, length(rng)});
  }
  return MetricTree(node_count, std::move(edges));
}

TargetPath<TreePoint> random_walk(std::mt19937_64& rng, const MetricTree& tree, std::size_t start,
                                  std::size_t steps, double straight) {
  TargetPath<TreePoint> walk;
  walk.vertices.push_back(tree.node_point(start));
  std::bernoulli_distribution go_straight(straight);
  std::size_t node = start;
  std::size_t came_by = kNoEdge;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto nbrs = tree.neighbors(node);
    if (nbrs.empty()) break;
    std::vector<MetricTree::Incidence> choices(nbrs.begin(), nbrs.end());
    if (came_by != kNoEdge && choices.size() > 1 && go_straight(rng)) {
      std::erase_if(choices, [&](const auto& inc) { return inc.edge == came_by; });
    }
    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
    const auto next = choices[pick(rng)];
    node = next.node;
    came_by = next.edge;
    walk.vertices.push_back(tree.node_point(node));
  }
  return walk;
}

TargetPath<TreePoint> random_spur(std::mt19937_64& rng, const MetricTree& tree, const TreePoint& p,
                                  std::size_t depth) {
  if (depth == 0) return {{p}};
  if (auto node = tree.node_of(p)) return random_walk(rng, tree, *node, depth);
  const TreeEdge& e = tree.edge(p.edge);
  std::bernoulli_distribution toward_u(0.5);
  const std::size_t end = toward_u(rng) ? e.u : e.v;
  TargetPath<TreePoint> spur{{p}};
  const auto rest = random_walk(rng, tree, end, depth - 1);
  spur.vertices.insert(spur.vertices.end(), rest.vertices.begin(), rest.vertices.end());
  return spur;
}

std::optional<MoveSequence<TreePoint>> random_moves(std::mt19937_64& rng, const TreeSpace& space,
                                                    const TargetPath<TreePoint>& path,
                                                    GridBudget budget) {
  MoveSequence<TreePoint> seq;
  TargetPath<TreePoint> cur = path;
  std::size_t rows = 0;
  for (auto& move : reduction_moves(space, path)) {
    const auto r = apply_move(space, cur, move);
    rows += r.homotopy.m();
    cur = r.out;
    seq.moves.push_back(std::move(move));
  }
  if (rows > budget.m) return std::nullopt;

  if (rows < budget.m && cur.size() >= 3) {
    // A few short slides laid out left to right. Every interior vertex of a
    // reduced node walk lies on the geodesic between its neighbours.
    const std::size_t n = cur.size() - 1;
    const std::size_t longest = std::min<std::size_t>(3, budget.m - rows);
    std::uniform_int_distribution<std::size_t> length(1, longest);
    std::uniform_int_distribution<std::size_t> gap(0, 4);
    std::bernoulli_distribution forward(0.5);
    Move<TreePoint> m;
    m.kind = MoveKind::kSlide;
    std::size_t next = 1;
    while (m.windows.size() < 3) {
      const std::size_t lo = next + gap(rng);
      const std::size_t len = length(rng);
      if (lo + len > n) break;
      // A backward window may not start at the final column.
      const bool fwd = forward(rng) || lo + len == n;
      m.windows.push_back(fwd ? Window{lo, lo + len} : Window{lo + len, lo});
      next = lo + len + 2;
    }
    if (!m.windows.empty()) {
      const auto r = apply_move(space, cur, m);
      cur = r.out;
      rows += r.homotopy.m();
      seq.moves.push_back(std::move(m));
    }
  }

  std::uniform_int_distribution<std::size_t> depth(1, 2);
  std::bernoulli_distribution at_end(0.25);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::size_t k = depth(rng);
    if (cur.size() + 2 * k > budget.n + 1 || rows + k > budget.m) continue;
    Move<TreePoint> m;
    if (at_end(rng)) {
      m.kind = MoveKind::kConcatNullLoop;
      m.column = cur.size() - 1;
    } else {
      m.kind = MoveKind::kInsertBacktrack;
      m.column = std::uniform_int_distribution<std::size_t>(0, cur.size() - 1)(rng);
    }
    m.spur = random_spur(rng, space.tree(), cur.vertices[m.column], k);
    if (m.spur.size() < 2) continue;
    const auto r = apply_move(space, cur, m);
    rows += r.homotopy.m();
    cur = r.out;
    seq.moves.push_back(std::move(m));
  }
  return seq;
}

Instance random_instance(std::uint64_t seed, std::size_t tree_size, GridBudget grid) {
  if (tree_size < 2) throw InputError("random instances need at least two tree nodes");
  if (grid.n < 9 || grid.m < 2) throw InputError("grid budget too small for random instances");
  std::mt19937_64 rng(seed);
  auto tree = std::make_shared<const MetricTree>(random_tree(rng, tree_size));
  const TreeSpace space(tree);
  const std::size_t max_steps = std::min<std::size_t>(grid.n - 8, 32);
  for (std::size_t attempt = 0;; ++attempt) {
    const std::size_t cap = std::max<std::size_t>(1, max_steps >> std::min<std::size_t>(attempt / 4, 5));
    const std::size_t steps = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
    const std::size_t start = std::uniform_int_distribution<std::size_t>(0, tree_size - 1)(rng);
    TargetPath<TreePoint> gamma = random_walk(rng, *tree, start, steps);
    auto moves = random_moves(rng, space, gamma, grid);
    if (!moves) continue;
    moves->seed = seed;
    MoveChain<TreeSpace> chain = apply_moves(space, gamma, *moves);
    const double truth = tree->distance(gamma.front(), gamma.back());
    return Instance{seed,   tree,       gamma, std::move(chain.paths.back()), std::move(*moves),
                    std::move(chain.composite), truth};
  }
}

}  // namespace lipcore
