#include <gtest/gtest.h>

#include <random>

#include "lipcore/core.hpp"
#include "lipcore/instances.hpp"
#include "support.hpp"

using namespace lipcore;
using lipcore::testing::node_path;
using lipcore::testing::path_tree;
using lipcore::testing::tripod;

namespace {

MoveSequence<TreePoint> one_insert(std::size_t column, TargetPath<TreePoint> spur) {
  Move<TreePoint> m;
  m.kind = MoveKind::kInsertBacktrack;
  m.column = column;
  m.spur = std::move(spur);
  return {{m}, 0};
}

TargetPath<HPoint> lifted(const std::vector<PlanarPoint>& planar, double z = 0.0) {
  return {HorizontalPath::lift(planar, z).points()};
}

bool in_image(const TreeSpace& space, const TargetPath<TreePoint>& path, const TreePoint& p) {
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    if (space.segment_residual(path.vertices[j], path.vertices[j + 1], p).residual <= 1e-9) return true;
  }
  return path.size() == 1 && space.distance(path.front(), p) <= 1e-9;
}

}  // namespace

TEST(Shorten, ConstantHomotopyOfConstantPath) {
  const TreeSpace space(tripod());
  const auto h = GridHomotopy<TreeSpace>::constant(node_path(space.tree(), {2, 2, 2}), 1);
  const auto f = quotient_tree(space, h);
  const auto r = shorten(space, f, h);
  EXPECT_EQ(r.stats.length_beta_prime, 0.0);
  EXPECT_EQ(r.stats.lip_beta_prime, 0.0);
  EXPECT_EQ(r.stats.lip_h_prime, 0.0);
  EXPECT_EQ(r.stats.lip_g, 0.0);
  for (const auto& p : r.beta_prime.vertices) EXPECT_TRUE(space.same(p, space.tree().node_point(2)));
}

TEST(Shorten, TripodBacktrackShortensToEndpointPseudoDistance) {
  // gamma = a -> o -> b -> o, beta adds a backtrack into leg c. The homotopy
  // never retracts gamma's own visit to b, so the two visits to o stay apart
  // in the quotient and beta' is phi o eta with length d_f(endpoints) = 3.
  const TreeSpace space(tripod());
  const auto& t = space.tree();
  const auto gamma = node_path(t, {1, 0, 2, 0});
  const auto r = insert_backtrack(space, gamma, 3, node_path(t, {0, 3}));
  const auto f = quotient_tree(space, r.homotopy);
  const auto s = shorten(space, f, r.homotopy);
  EXPECT_NEAR(s.stats.length_beta_prime, f.pseudo.at(0, r.homotopy.n()), 1e-12);
  EXPECT_NEAR(s.stats.length_beta_prime, 3.0, 1e-12);
  EXPECT_LT(s.stats.length_beta_prime, s.stats.length_beta);
  EXPECT_TRUE(space.same(s.beta_prime.front(), t.node_point(1)));
  EXPECT_TRUE(space.same(s.beta_prime.back(), t.node_point(0)));
  EXPECT_LE(s.stats.lip_beta_prime, s.stats.lip_gamma + 1e-9);
  EXPECT_LE(s.stats.lip_h_prime, s.stats.lip_gamma + 1e-9);
  EXPECT_LE(s.stats.lip_g, s.stats.lip_gamma + 1e-9);
  EXPECT_LE(s.stats.image_residual, 1e-9);
  EXPECT_LE(s.stats.g_image_residual, 1e-9);
  ASSERT_EQ(s.image_witness.size(), s.beta_prime.size());
  for (const auto& w : s.image_witness) EXPECT_LE(w.residual, 1e-9);
  // H' runs from the widened gamma to beta'.
  const auto& hp = s.h_prime;
  for (std::size_t j = 0; j < hp.cols(); ++j) EXPECT_TRUE(space.same(hp.at(0, j), r.homotopy.at(0, j)));
  EXPECT_NO_THROW(check_boundary(space, hp));
}

TEST(Shorten, RetractingBothBacktracksReachesTheArc) {
  const TreeSpace space(tripod());
  const auto& t = space.tree();
  const auto gamma = node_path(t, {1, 0, 2, 0});
  MoveSequence<TreePoint> moves = one_insert(3, node_path(t, {0, 3}));
  const auto beta = insert_backtrack(space, gamma, 3, node_path(t, {0, 3})).out;
  for (auto& m : reduction_moves(space, beta)) moves.moves.push_back(m);
  const auto c = minimize(space, gamma, moves);
  EXPECT_NEAR(c.ell_min, 1.0, 1e-12);
}

TEST(Shorten, GeodesicPathKeepsLength) {
  const auto tree = path_tree({1.0, 1.0, 1.0, 1.0});
  const TreeSpace space(tree);
  const auto gamma = node_path(*tree, {0, 1, 2, 3, 4});
  const auto r = slide(space, gamma, {{3, 1}});
  const auto f = quotient_tree(space, r.homotopy);
  const auto s = shorten(space, f, r.homotopy);
  EXPECT_NEAR(s.stats.length_beta_prime, 4.0, 1e-9);
  const auto arc = arc_length_reparametrize(space, gamma, 8);
  const auto top = arc_length_reparametrize(space, s.h_prime.row(s.h_prime.m()), 8);
  EXPECT_TRUE(compare_cores(space, arc, top).equal_up_to_reparam);
}

TEST(Shorten, DegenerateClassGivesConstantCore) {
  const TreeSpace space(tripod());
  const auto& t = space.tree();
  const auto r = insert_backtrack(space, node_path(t, {0}), 0, node_path(t, {0, 1}));
  const auto f = quotient_tree(space, r.homotopy);
  const auto s = shorten(space, f, r.homotopy);
  EXPECT_EQ(s.stats.length_beta_prime, 0.0);
  EXPECT_EQ(s.stats.eta_length, 0.0);
}

TEST(Shorten, RejectsMismatchedFactorization) {
  const TreeSpace space(tripod());
  const auto h1 = GridHomotopy<TreeSpace>::constant(node_path(space.tree(), {1, 0}), 1);
  const auto h2 = GridHomotopy<TreeSpace>::constant(node_path(space.tree(), {1, 0, 2}), 1);
  const auto f = quotient_tree(space, h1);
  EXPECT_THROW(shorten(space, f, h2), InputError);
}

TEST(Minimize, ConstantPathWithoutMoves) {
  const TreeSpace space(tripod());
  const auto c = minimize(space, node_path(space.tree(), {3}), {});
  EXPECT_EQ(c.ell_min, 0.0);
  EXPECT_EQ(c.core.size(), 1u);
}

TEST(Minimize, InsertedBacktracksCollapseToArc) {
  const TreeSpace space(tripod(1, 2, 3));
  const auto& t = space.tree();
  MoveSequence<TreePoint> moves = one_insert(1, node_path(t, {0, 3}));
  Move<TreePoint> second;
  second.kind = MoveKind::kInsertBacktrack;
  second.column = 0;
  second.spur = node_path(t, {1, 0, 2});
  moves.moves.push_back(second);
  const auto c = minimize(space, node_path(t, {1, 0, 2}), moves);
  EXPECT_NEAR(c.ell_min, t.distance(t.node_point(1), t.node_point(2)), 1e-9);
  EXPECT_NEAR(c.ell_min, path_length(space, c.core), 1e-12);
  for (std::size_t i = 1; i < c.lengths.size(); ++i) EXPECT_LE(c.lengths[i], c.lengths[i - 1] + 1e-9);
}

TEST(Minimize, HeisenbergSpurIsRemoved) {
  const HeisenbergSpace space;
  const auto gamma = lifted({{0, 0}, {1, 0}, {1, 1}});
  Move<HPoint> insert;
  insert.kind = MoveKind::kInsertBacktrack;
  insert.column = 1;
  insert.spur = lifted({{1, 0}, {2, 0}}, gamma.vertices[1].z);
  Move<HPoint> remove;
  remove.kind = MoveKind::kRemoveBacktrack;
  remove.windows = {{1, 3}};
  const auto c = minimize(space, gamma, {{insert, remove}, 0});
  EXPECT_NEAR(c.ell_min, 2.0, 1e-9);
}

TEST(Minimize, CapIsNonConvergence) {
  const TreeSpace space(tripod());
  const auto& t = space.tree();
  MinimizeOptions opt;
  opt.cap = 1;
  try {
    minimize(space, node_path(t, {1, 0, 2}), one_insert(1, node_path(t, {0, 3})), opt);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_NEAR(e.previous_length(), 4.0, 1e-9);
    EXPECT_NEAR(e.last_length(), 2.0, 1e-9);
  }
  opt.cap = 0;
  EXPECT_THROW(minimize(space, node_path(t, {1}), {}, opt), InputError);
}

TEST(Minimize, NotTreeLikePropagates) {
  const HeisenbergSpace space;
  Move<HPoint> blend;
  blend.kind = MoveKind::kReparametrize;
  blend.profile = {0.0, 0.1, 0.6, 1.0};
  blend.rows = 3;
  const auto gamma = lifted({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 2}});
  EXPECT_THROW(minimize(space, gamma, {{blend}, 0}), NotTreeLike);
}

TEST(ArcLength, ConstantPathPassesThrough) {
  const TreeSpace space(tripod());
  const auto p = node_path(space.tree(), {2, 2});
  const auto r = arc_length_reparametrize(space, p, 5);
  EXPECT_EQ(r.vertices, p.vertices);
}

TEST(ArcLength, TripodSamples) {
  const TreeSpace space(tripod());
  const auto& t = space.tree();
  const auto r = arc_length_reparametrize(space, node_path(t, {1, 0, 2}), 4);
  ASSERT_EQ(r.size(), 5u);
  // a -> o -> b is itself a geodesic, so arc length from a is distance from a.
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(t.distance(t.node_point(1), r.vertices[k]), 0.5 * double(k), 1e-12);
  EXPECT_TRUE(space.same(r.vertices[2], t.node_point(0)));
  EXPECT_NEAR(t.distance(t.node_point(2), r.vertices[3]), 0.5, 1e-12);
  EXPECT_NEAR(path_length(space, r), 2.0, 1e-12);
  EXPECT_THROW(arc_length_reparametrize(space, node_path(t, {1, 0}), 0), InputError);
}

TEST(ArcLength, UniformPathIsFixed) {
  const auto tree = path_tree({1.0, 1.0, 1.0});
  const TreeSpace space(tree);
  const auto p = node_path(*tree, {0, 1, 2, 3});
  const auto r = arc_length_reparametrize(space, p, 3);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LE(space.distance(r.vertices[k], p.vertices[k]), 1e-9);
}

TEST(CompareCores, Identical) {
  const TreeSpace space(tripod());
  const auto p = node_path(space.tree(), {1, 0, 2});
  const auto c = compare_cores(space, p, p);
  EXPECT_TRUE(c.equal_up_to_reparam);
  EXPECT_EQ(c.hausdorff, 0.0);
}

TEST(CompareCores, DifferentResolutionsAgreeAfterResampling) {
  const auto tree = path_tree({1.5, 0.7, 2.0});
  const TreeSpace space(tree);
  const auto coarse = node_path(*tree, {0, 1, 2, 3});
  TargetPath<TreePoint> fine;
  const TreeGeodesic g = tree->geodesic(tree->node_point(0), tree->node_point(3));
  for (int k = 0; k <= 17; ++k) fine.vertices.push_back(tree->eval(g, k / 17.0));
  const auto c = compare_cores(space, arc_length_reparametrize(space, coarse, 40),
                               arc_length_reparametrize(space, fine, 40));
  EXPECT_TRUE(c.equal_up_to_reparam);
  EXPECT_LE(c.hausdorff, 1e-6);
}

TEST(CompareCores, DistinctLegs) {
  const TreeSpace space(tripod());
  const auto& t = space.tree();
  const auto c = compare_cores(space, node_path(t, {0, 1}), node_path(t, {0, 2}));
  EXPECT_FALSE(c.equal_up_to_reparam);
  EXPECT_NEAR(c.hausdorff, 1.0, 1e-12);
}

TEST(LoopTriviality, ConstantLoop) {
  const TreeSpace space(tripod());
  const TreePoint a = space.tree().node_point(1);
  const auto r = local_loop_triviality(space, a, 0.1, node_path(space.tree(), {1}), {});
  EXPECT_TRUE(r.trivial);
  EXPECT_EQ(r.core_length, 0.0);
}

TEST(LoopTriviality, TreeOutAndBack) {
  const TreeSpace space(tripod());
  const auto& t = space.tree();
  const auto loop = node_path(t, {1, 0, 1});
  MoveSequence<TreePoint> moves{reduction_moves(space, loop), 0};
  const auto r = local_loop_triviality(space, t.node_point(1), 1.5, loop, moves);
  EXPECT_TRUE(r.trivial);
  EXPECT_LE(r.core_length, 1e-9);
}

TEST(LoopTriviality, HeisenbergSpurAtOrigin) {
  const HeisenbergSpace space;
  const auto loop = lifted({{0, 0}, {0.05, 0}, {0, 0}});
  MoveSequence<HPoint> moves{reduction_moves(space, loop), 0};
  const auto r = local_loop_triviality(space, HPoint{0, 0, 0}, 0.1, loop, moves);
  EXPECT_TRUE(r.trivial);
  EXPECT_LE(r.core_length, 1e-9);
}

TEST(LoopTriviality, PreconditionsAreInputErrors) {
  const TreeSpace space(tripod());
  const auto& t = space.tree();
  EXPECT_THROW(local_loop_triviality(space, t.node_point(1), 0.5, node_path(t, {1, 0, 1}), {}), InputError);
  EXPECT_THROW(local_loop_triviality(space, t.node_point(1), 5.0, node_path(t, {1, 0}), {}), InputError);
}

TEST(CoreProperty, GeneratedInstances) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const Instance inst = random_instance(seed, 2 + seed % 20, {16, 64});
    const TreeSpace space(inst.tree);
    const auto c = minimize(space, inst.gamma, inst.moves);
    EXPECT_NEAR(c.ell_min, inst.truth, 1e-9) << "seed " << seed;
    // Monotone lengths.
    for (std::size_t i = 1; i < c.lengths.size(); ++i) EXPECT_LE(c.lengths[i], c.lengths[i - 1] + 1e-9);
    // Lipschitz chain.
    const double lip_core =
        discrete_lipschitz(space, std::span<const TreePoint>(c.core.vertices), 1.0 / double(std::max<std::size_t>(1, c.core.size() - 1)));
    EXPECT_LE(lip_core, c.lip_gamma + 1e-9);
    // Image containment: core inside gamma, vertex by vertex.
    for (const auto& p : c.core.vertices) EXPECT_TRUE(in_image(space, inst.gamma, p)) << "seed " << seed;
    // Idempotence.
    const auto h = GridHomotopy<TreeSpace>::constant(c.core, 1);
    const auto again = shorten(space, quotient_tree(space, h), h);
    EXPECT_NEAR(again.stats.length_beta_prime, c.ell_min, 1e-9);
    EXPECT_TRUE(compare_cores(space, arc_length_reparametrize(space, c.core, 32),
                              arc_length_reparametrize(space, again.h_prime.row(again.h_prime.m()), 32))
                    .equal_up_to_reparam);
  }
}
