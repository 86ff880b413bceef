#include <gtest/gtest.h>

#include <random>

#include "lipcore/errors.hpp"
#include "lipcore/instances.hpp"
#include "lipcore/metric_tree.hpp"
#include "support.hpp"

using namespace lipcore;
using lipcore::testing::brute_force_distances;
using lipcore::testing::cycle_metric;
using lipcore::testing::path_tree;
using lipcore::testing::tripod;

TEST(MetricTree, SingleEdgeDistance) {
  const MetricTree t(2, {{0, 1, 5.0}});
  EXPECT_DOUBLE_EQ(t.distance(t.node_point(0), t.node_point(1)), 5.0);
}

TEST(MetricTree, DistanceToSelfIsZero) {
  const auto t = tripod(1, 2, 3);
  const TreePoint p = t->point_on_edge(2, 1.25);
  EXPECT_EQ(t->distance(p, p), 0.0);
  EXPECT_EQ(t->distance(t->node_point(3), t->node_point(3)), 0.0);
}

TEST(MetricTree, TripodLeafDistanceMatchesBruteForce) {
  const auto t = tripod(1, 2, 3);
  EXPECT_DOUBLE_EQ(t->distance(t->node_point(1), t->node_point(3)), 4.0);
  const DistanceTable oracle = brute_force_distances(*t);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(t->node_distance(i, j), oracle.at(i, j), 1e-12);
  }
}

TEST(MetricTree, RejectsInvalidConstruction) {
  EXPECT_THROW(MetricTree(0, {}), InputError);
  EXPECT_THROW(MetricTree(3, {{0, 1, 1.0}}), InputError);
  EXPECT_THROW(MetricTree(2, {{0, 1, 0.0}}), InputError);
  EXPECT_THROW(MetricTree(2, {{0, 1, 1e-12}}), InputError);
  EXPECT_THROW(MetricTree(3, {{0, 1, 1.0}, {0, 1, 2.0}}), InputError);
  EXPECT_THROW(MetricTree(2, {{0, 0, 1.0}}), InputError);
}

TEST(MetricTree, UnknownEdgeIsInputError) {
  const auto t = tripod();
  EXPECT_THROW(t->point_on_edge(7, 0.1), InputError);
  EXPECT_THROW(t->point_on_edge(0, 1.5), InputError);
  EXPECT_THROW(t->distance(TreePoint{9, 0.0}, t->node_point(0)), InputError);
}

TEST(MetricTree, EndpointOffsetsCanonicalizeToNodes) {
  const auto t = path_tree({1.0, 2.0});
  // Node 1 sits at the end of edge 0 and the start of edge 1.
  const TreePoint a = t->point_on_edge(0, 1.0);
  const TreePoint b = t->point_on_edge(1, 0.0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, t->node_point(1));
  EXPECT_EQ(t->node_of(a), std::optional<std::size_t>(1));
  EXPECT_TRUE(t->same_point(t->point_on_edge(1, 1e-12), t->node_point(1)));
  EXPECT_FALSE(t->node_of(t->point_on_edge(1, 1.0)).has_value());
}

TEST(MetricTree, ConstantGeodesic) {
  const auto t = tripod();
  const TreePoint p = t->point_on_edge(1, 0.3);
  const TreeGeodesic g = t->geodesic(p, p);
  EXPECT_EQ(g.total_length, 0.0);
  for (double s : {0.0, 0.4, 1.0}) EXPECT_TRUE(t->same_point(t->eval(g, s), p));
}

TEST(MetricTree, TripodGeodesicNodeSequence) {
  const auto t = tripod(1, 2, 3);
  const TreeGeodesic g = t->geodesic(t->node_point(1), t->node_point(2));
  EXPECT_EQ(g.node_sequence, (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_DOUBLE_EQ(g.total_length, 3.0);
}

TEST(MetricTree, GeodesicFromEdgeInterior) {
  const auto t = path_tree({1.0, 1.0});
  const TreeGeodesic g = t->geodesic(t->point_on_edge(0, 0.5), t->node_point(2));
  EXPECT_DOUBLE_EQ(g.total_length, 1.5);
}

TEST(MetricTree, GeodesicEvaluation) {
  const auto t = tripod();
  const TreeGeodesic g = t->geodesic(t->node_point(1), t->node_point(2));
  EXPECT_EQ(t->eval(g, 0.0), g.source);
  EXPECT_EQ(t->eval(g, 1.0), g.target);
  EXPECT_EQ(t->eval(g, 0.5), t->node_point(0));
  EXPECT_THROW(t->eval(g, -0.1), InputError);
  EXPECT_THROW(t->eval(g, 1.1), InputError);
}

TEST(MetricTree, Diameter) {
  EXPECT_EQ(MetricTree().diameter(), 0.0);
  EXPECT_DOUBLE_EQ(tripod(1, 2, 3)->diameter(), 5.0);
  EXPECT_DOUBLE_EQ(path_tree({2.0, 3.0})->diameter(), 5.0);
}

TEST(MetricTree, DiameterMatchesAllPairs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const MetricTree t = random_tree(rng, 1 + trial * 2);
    const DistanceTable d = brute_force_distances(t);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < d.size(); ++j) worst = std::max(worst, d.at(i, j));
    }
    EXPECT_NEAR(t.diameter(), worst, 1e-12);
  }
}

TEST(FourPoint, TreeTablesPass) {
  const auto t = tripod(1, 2, 3);
  const FourPointReport r = four_point_check(node_distance_table(*t));
  EXPECT_TRUE(r.is_tree_metric);
  EXPECT_EQ(r.worst_violation, 0.0);
}

TEST(FourPoint, FourCycleFails) {
  const FourPointReport r = four_point_check(cycle_metric(4));
  EXPECT_FALSE(r.is_tree_metric);
  EXPECT_DOUBLE_EQ(r.worst_violation, 2.0);
  const auto& w = r.witness;
  EXPECT_DOUBLE_EQ(four_point_excess(cycle_metric(4), w[0], w[1], w[2], w[3]), 2.0);
}

TEST(FourPoint, SinglePoint) {
  const FourPointReport r = four_point_check(DistanceTable(1));
  EXPECT_TRUE(r.is_tree_metric);
  EXPECT_EQ(r.worst_violation, 0.0);
}

TEST(FourPoint, TriangleInequalityViolation) {
  DistanceTable d(3);
  d.at(0, 1) = d.at(1, 0) = 1.0;
  d.at(1, 2) = d.at(2, 1) = 1.0;
  d.at(0, 2) = d.at(2, 0) = 5.0;
  const FourPointReport r = four_point_check(d);
  EXPECT_FALSE(r.is_tree_metric);
  EXPECT_NEAR(r.worst_violation, 3.0, 1e-12);
}

TEST(FourPoint, RejectsMalformedTables) {
  DistanceTable asym(2);
  asym.at(0, 1) = 1.0;
  asym.at(1, 0) = 2.0;
  EXPECT_THROW(four_point_check(asym), InputError);
  DistanceTable negative(2);
  negative.at(0, 1) = negative.at(1, 0) = -1.0;
  EXPECT_THROW(four_point_check(negative), InputError);
  DistanceTable diagonal(2);
  diagonal.at(0, 0) = 1.0;
  EXPECT_THROW(four_point_check(diagonal), InputError);
}

TEST(FourPoint, RandomTreesPass) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const MetricTree t = random_tree(rng, 1 + (trial * 7) % 64);
    const FourPointReport r = four_point_check(node_distance_table(t));
    EXPECT_TRUE(r.is_tree_metric);
    EXPECT_LE(r.worst_violation, 1e-9);
  }
}

TEST(Reconstruction, TwoLabels) {
  DistanceTable d(2);
  d.at(0, 1) = d.at(1, 0) = 3.0;
  const TreeReconstruction rec = tree_from_metric(d);
  ASSERT_EQ(rec.tree.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(rec.tree.edge(0).length, 3.0);
}

TEST(Reconstruction, ThreeLabelsGromovTripod) {
  // d(0,1) = 2, d(0,2) = 3, d(1,2) = 3: legs 1, 1, 2.
  DistanceTable d(3);
  d.at(0, 1) = d.at(1, 0) = 2.0;
  d.at(0, 2) = d.at(2, 0) = 3.0;
  d.at(1, 2) = d.at(2, 1) = 3.0;
  const TreeReconstruction rec = tree_from_metric(d);
  ASSERT_EQ(rec.tree.node_count(), 4u);
  std::vector<double> legs;
  for (const auto& e : rec.tree.edges()) legs.push_back(e.length);
  std::sort(legs.begin(), legs.end());
  EXPECT_NEAR(legs[0], 1.0, 1e-12);
  EXPECT_NEAR(legs[1], 1.0, 1e-12);
  EXPECT_NEAR(legs[2], 2.0, 1e-12);
}

TEST(Reconstruction, RoundTripOnRandomTrees) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const MetricTree t = random_tree(rng, 2 + trial);
    const DistanceTable d = node_distance_table(t);
    const TreeReconstruction rec = tree_from_metric(d);
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < d.size(); ++j) {
        EXPECT_NEAR(rec.tree.distance(rec.label_points[i], rec.label_points[j]), d.at(i, j), 1e-9);
      }
    }
    // Only labelled nodes may have degree 2.
    std::vector<bool> labelled(rec.tree.node_count(), false);
    for (auto n : rec.label_nodes) labelled[n] = true;
    for (std::size_t v = 0; v < rec.tree.node_count(); ++v) {
      if (!labelled[v]) {
        EXPECT_GE(rec.tree.neighbors(v).size(), 3u);
      }
    }
  }
}

TEST(Reconstruction, NonTreeMetricCarriesWitness) {
  const DistanceTable d = cycle_metric(5);
  try {
    tree_from_metric(d);
    FAIL() << "expected ReconstructionError";
  } catch (const ReconstructionError& e) {
    const auto& w = e.witness();
    EXPECT_GT(four_point_excess(d, w[0], w[1], w[2], w[3]), 1e-7);
  }
}

TEST(MetricTreeProperty, TriangleEqualityExactlyOnArc) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const MetricTree t = random_tree(rng, 12);
    std::uniform_int_distribution<std::size_t> edge(0, t.edge_count() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_point = [&] {
      const std::size_t e = edge(rng);
      return t.point_on_edge(e, unit(rng) * t.edge(e).length);
    };
    const TreePoint p = random_point();
    const TreePoint r = random_point();
    const TreePoint q = random_point();
    EXPECT_GE(t.distance(p, q) + t.distance(q, r), t.distance(p, r) - 1e-12);
    const TreeGeodesic g = t.geodesic(p, r);
    const TreePoint on = t.eval(g, unit(rng));
    EXPECT_NEAR(t.distance(p, on) + t.distance(on, r), t.distance(p, r), 1e-9);
  }
}

TEST(MetricTreeProperty, GeodesicIsArcLengthParametrized) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const MetricTree t = random_tree(rng, 16);
    std::uniform_int_distribution<std::size_t> node(0, t.node_count() - 1);
    const TreeGeodesic g = t.geodesic(t.node_point(node(rng)), t.point_on_edge(0, 0.25 * t.edge(0).length));
    EXPECT_NEAR(g.total_length, t.distance(g.source, g.target), 1e-12);
    for (int k = 0; k < 10; ++k) {
      const double s = unit(rng);
      const double u = unit(rng);
      EXPECT_NEAR(t.distance(t.eval(g, s), t.eval(g, u)), g.total_length * std::abs(s - u), 1e-9);
    }
  }
}
