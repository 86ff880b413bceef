#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "lipcore/errors.hpp"
#include "lipcore/grid_homotopy.hpp"
#include "lipcore/metric_tree.hpp"
#include "lipcore/target_space.hpp"
#include "lipcore/tolerance.hpp"

namespace lipcore {

// 4-neighbour grid graph; weights are segment lengths in the target.
struct WeightedGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> horizontal;  // (s, j) -> (s, j+1), rows * (cols-1)
  std::vector<double> vertical;    // (s, j) -> (s+1, j), (rows-1) * cols

  std::size_t vertex_count() const noexcept { return rows * cols; }
};

template <TargetSpace S>
WeightedGrid edge_weights(const S& space, const GridHomotopy<S>& h) {
  WeightedGrid g;
  g.rows = h.rows();
  g.cols = h.cols();
  g.horizontal.reserve(g.rows * (g.cols - 1));
  for (std::size_t s = 0; s < g.rows; ++s) {
    for (std::size_t j = 0; j + 1 < g.cols; ++j) {
      g.horizontal.push_back(space.segment_length(h.at(s, j), h.at(s, j + 1)));
    }
  }
  g.vertical.reserve((g.rows - 1) * g.cols);
  for (std::size_t s = 0; s + 1 < g.rows; ++s) {
    for (std::size_t j = 0; j < g.cols; ++j) {
      g.vertical.push_back(space.segment_length(h.at(s, j), h.at(s + 1, j)));
    }
  }
  return g;
}

// All-pairs shortest paths on the weighted grid (Dijkstra from every vertex).
DistanceTable pseudo_metric(const WeightedGrid& grid);

struct FactorizationOptions {
  double collapse_tol = kCollapseTol;
  double tree_tol = kTreeTol;
  // Largest allowed target gap between a grid vertex and its class representative.
  double tol = kNumericTol;
};

/// H = phi o psi through the quotient tree T of the grid pseudo-metric.
///
/// psi is stored per grid vertex (row-major); phi is stored per node of T and
/// extended to edges by interpolation along target segments.
template <TargetSpace S>
struct Factorization {
  using Point = typename S::Point;

  MetricTree tree;
  std::vector<TreePoint> psi;
  std::vector<Point> phi;
  std::vector<std::size_t> class_of;
  std::vector<std::size_t> representatives;
  DistanceTable pseudo;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

namespace detail {

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace detail

// phi at an arbitrary point of the quotient tree.
template <TargetSpace S>
typename S::Point realize(const S& space, const Factorization<S>& f, const TreePoint& x) {
  if (auto node = f.tree.node_of(x)) return f.phi[*node];
  const TreeEdge& e = f.tree.edge(x.edge);
  return space.interpolate(f.phi[e.u], f.phi[e.v], x.offset / e.length);
}

template <TargetSpace S>
Factorization<S> quotient_tree(const S& space, const GridHomotopy<S>& h,
                               const FactorizationOptions& options = {}) {
  Factorization<S> f;
  f.rows = h.rows();
  f.cols = h.cols();
  f.pseudo = pseudo_metric(edge_weights(space, h));
  const std::size_t count = h.vertex_count();

  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t u = 0; u < count; ++u) {
    for (std::size_t v = u + 1; v < count; ++v) {
      if (f.pseudo.at(u, v) <= options.collapse_tol) {
        const std::size_t a = detail::find_root(parent, u);
        const std::size_t b = detail::find_root(parent, v);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  // Classes are numbered by their lowest vertex, which is also the representative.
  f.class_of.assign(count, 0);
  std::vector<std::size_t> class_of_root(count, count);
  for (std::size_t v = 0; v < count; ++v) {
    const std::size_t root = detail::find_root(parent, v);
    if (class_of_root[root] == count) {
      class_of_root[root] = f.representatives.size();
      f.representatives.push_back(v);
    }
    f.class_of[v] = class_of_root[root];
  }
  for (std::size_t v = 0; v < count; ++v) {
    const std::size_t rep = f.representatives[f.class_of[v]];
    if (rep == v || space.same(h.vertex(v), h.vertex(rep))) continue;
    const double gap = space.distance(h.vertex(v), h.vertex(rep));
    if (gap > options.tol) {
      throw QuotientInconsistent("grid vertex " + std::to_string(v) + " and representative " +
                                     std::to_string(rep) + " collapse but differ by " +
                                     std::to_string(gap) + " in the target",
                                 v, rep, gap);
    }
  }

  const std::size_t k = f.representatives.size();
  DistanceTable classes(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      classes.at(a, b) = a == b ? 0.0 : f.pseudo.at(f.representatives[a], f.representatives[b]);
    }
  }

  TreeReconstruction rec;
  try {
    rec = tree_from_metric(classes, options.tree_tol);
  } catch (const ReconstructionError& err) {
    std::array<std::size_t, 4> witness = err.witness();
    double violation = err.violation();
    if (k <= 64) {
      const FourPointReport report = four_point_check(classes, options.tree_tol);
      if (!report.is_tree_metric && report.worst_violation >= violation) {
        witness = report.witness;
        violation = report.worst_violation;
      }
    }
    for (auto& w : witness) w = f.representatives[w];
    throw NotTreeLike("grid pseudo-metric is not a tree metric: four-point excess " +
                          std::to_string(violation) + " at vertices " +
                          std::to_string(witness[0]) + " " + std::to_string(witness[1]) + " " +
                          std::to_string(witness[2]) + " " + std::to_string(witness[3]),
                      witness, violation);
  }

  f.tree = std::move(rec.tree);
  f.phi.resize(f.tree.node_count());
  for (std::size_t node = 0; node < rec.origins.size(); ++node) {
    const NodeOrigin& o = rec.origins[node];
    if (o.kind == NodeOrigin::Kind::kLabel) {
      f.phi[node] = h.vertex(f.representatives[o.label]);
    } else {
      f.phi[node] = space.interpolate(f.phi[o.u], f.phi[o.v], o.fraction);
    }
  }
  f.psi.resize(count);
  for (std::size_t v = 0; v < count; ++v) f.psi[v] = rec.label_points[f.class_of[v]];
  return f;
}

struct CertificateCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = true;
  // Violating (or extremal) pair; grid vertices or tree nodes depending on the check.
  std::size_t first = 0;
  std::size_t second = 0;

  double slack() const noexcept { return rhs - lhs; }
};

struct CertificateReport {
  double lip_gamma = 0.0;
  double lip_h = 0.0;
  double lip_psi_gamma = 0.0;
  double lip_psi = 0.0;
  double diam_subtree = 0.0;
  double phi_excess = 0.0;
  double quotient_residual = 0.0;
  double realization_residual = 0.0;
  std::vector<CertificateCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

namespace detail {

struct Extremum {
  double value = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;

  void offer(double v, std::size_t a, std::size_t b) {
    if (v > value) {
      value = v;
      first = a;
      second = b;
    }
  }
};

}  // namespace detail

/// Checks the Lipschitz inequalities of a factorization against H.
///
/// (a) psi restricted to row 0 is no more Lipschitz than gamma, (b) psi is no
/// more Lipschitz than H, (c) the subtree spanned by psi(row 0) has diameter
/// at most lip(gamma), (d) phi is 1-Lipschitz on tree nodes. It also checks
/// that d_T(psi u, psi v) reproduces the pseudo-metric within quotient_tol
/// and that phi o psi = H.
template <TargetSpace S>
CertificateReport validate_factorization(const S& space, const Factorization<S>& f,
                                         const GridHomotopy<S>& h, double tol = kNumericTol,
                                         double quotient_tol = kCollapseTol + kTreeTol) {
  if (h.rows() != f.rows || h.cols() != f.cols) {
    throw InputError("factorization was built for a different grid");
  }
  CertificateReport r;
  const double hs = h.horizontal_spacing();
  const double vs = h.vertical_spacing();
  const MetricTree& t = f.tree;

  detail::Extremum gamma_lip, psi_gamma, psi_lip, h_lip;
  for (std::size_t s = 0; s < h.rows(); ++s) {
    for (std::size_t j = 0; j + 1 < h.cols(); ++j) {
      const std::size_t a = h.index(s, j);
      const std::size_t b = h.index(s, j + 1);
      const double dt = t.distance(f.psi[a], f.psi[b]) / hs;
      const double dm = space.distance(h.vertex(a), h.vertex(b)) / hs;
      psi_lip.offer(dt, a, b);
      h_lip.offer(dm, a, b);
      if (s == 0) {
        psi_gamma.offer(dt, a, b);
        gamma_lip.offer(dm, a, b);
      }
    }
  }
  for (std::size_t s = 0; s + 1 < h.rows(); ++s) {
    for (std::size_t j = 0; j < h.cols(); ++j) {
      const std::size_t a = h.index(s, j);
      const std::size_t b = h.index(s + 1, j);
      psi_lip.offer(t.distance(f.psi[a], f.psi[b]) / vs, a, b);
      h_lip.offer(space.distance(h.vertex(a), h.vertex(b)) / vs, a, b);
    }
  }
  r.lip_gamma = gamma_lip.value;
  r.lip_h = h_lip.value;
  r.lip_psi_gamma = psi_gamma.value;
  r.lip_psi = psi_lip.value;

  detail::Extremum diam;
  for (std::size_t a = 0; a < h.cols(); ++a) {
    for (std::size_t b = a + 1; b < h.cols(); ++b) {
      diam.offer(t.distance(f.psi[a], f.psi[b]), a, b);
    }
  }
  r.diam_subtree = diam.value;

  detail::Extremum phi;
  for (std::size_t a = 0; a < t.node_count(); ++a) {
    for (std::size_t b = a + 1; b < t.node_count(); ++b) {
      phi.offer(space.distance(f.phi[a], f.phi[b]) - t.node_distance(a, b), a, b);
    }
  }
  r.phi_excess = phi.value;

  detail::Extremum quotient;
  for (std::size_t a = 0; a < h.vertex_count(); ++a) {
    for (std::size_t b = a + 1; b < h.vertex_count(); ++b) {
      quotient.offer(std::abs(t.distance(f.psi[a], f.psi[b]) - f.pseudo.at(a, b)), a, b);
    }
  }
  r.quotient_residual = quotient.value;

  detail::Extremum realization;
  for (std::size_t v = 0; v < h.vertex_count(); ++v) {
    const auto p = realize(space, f, f.psi[v]);
    if (!space.same(p, h.vertex(v))) realization.offer(space.distance(p, h.vertex(v)), v, v);
  }
  r.realization_residual = realization.value;

  auto add = [&](std::string name, double lhs, double rhs, const detail::Extremum& e) {
    r.checks.push_back({std::move(name), lhs, rhs, lhs <= rhs + tol, e.first, e.second});
  };
  add("lip_psi_gamma", r.lip_psi_gamma, r.lip_gamma, psi_gamma);
  add("lip_psi", r.lip_psi, r.lip_h, psi_lip);
  add("diam_subtree", r.diam_subtree, r.lip_gamma, diam);
  add("phi_excess", r.phi_excess, 0.0, phi);
  add("quotient_residual", r.quotient_residual, quotient_tol, quotient);
  add("realization_residual", r.realization_residual, 0.0, realization);
  return r;
}

// Throws CertificateFailure naming the first failed check.
inline void require(const CertificateReport& report) {
  for (const auto& c : report.checks) {
    if (!c.passed) {
      throw CertificateFailure("certificate " + c.name + " failed: " + std::to_string(c.lhs) +
                                   " > " + std::to_string(c.rhs) + " at pair (" +
                                   std::to_string(c.first) + ", " + std::to_string(c.second) + ")",
                               c.first, c.second);
    }
  }
}

}  // namespace lipcore
