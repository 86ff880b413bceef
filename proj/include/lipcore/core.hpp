#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lipcore/errors.hpp"
#include "lipcore/factorization.hpp"
#include "lipcore/grid_homotopy.hpp"
#include "lipcore/moves.hpp"
#include "lipcore/target_space.hpp"
#include "lipcore/tolerance.hpp"

namespace lipcore {

// Where a point of the shortened path sits on the initial path.
struct ImageWitness {
  std::size_t column = 0;  // start column of the row-0 segment
  double fraction = 0.0;   // position along that segment
  double residual = 0.0;
};

struct ShorteningStats {
  double lip_gamma = 0.0;
  double lip_beta_prime = 0.0;
  double lip_h_prime = 0.0;
  double lip_g = 0.0;
  double length_beta = 0.0;
  double length_beta_prime = 0.0;
  double eta_length = 0.0;
  double diam_subtree = 0.0;
  double image_residual = 0.0;    // worst over beta' vertices and top-row samples
  double g_image_residual = 0.0;  // worst fiber sample distance from the row-0 subtree
  double boundary_residual = 0.0;
};

/// beta' is phi o eta, stored as the polyline through the images of the tree
/// nodes eta crosses; h_prime's top row samples it uniformly in arc length.
template <TargetSpace S>
struct ShorteningResult {
  TargetPath<typename S::Point> beta_prime;
  GridHomotopy<S> h_prime;
  ShorteningStats stats;
  std::vector<ImageWitness> image_witness;  // one per beta' vertex
};

namespace detail {

template <TargetSpace S>
ImageWitness locate_on_row(const S& space, std::span<const typename S::Point> row,
                           const typename S::Point& p) {
  ImageWitness best;
  best.residual = std::numeric_limits<double>::infinity();
  if (row.size() == 1) {
    best.residual = space.same(row[0], p) ? 0.0 : space.distance(row[0], p);
    return best;
  }
  for (std::size_t j = 0; j + 1 < row.size(); ++j) {
    const SegmentHit hit = space.segment_residual(row[j], row[j + 1], p);
    if (hit.residual < best.residual) best = {j, hit.fraction, hit.residual};
    if (best.residual == 0.0) break;
  }
  return best;
}

}  // namespace detail

template <TargetSpace S>
ShorteningResult<S> shorten(const S& space, const Factorization<S>& f, const GridHomotopy<S>& h,
                            double tol = kNumericTol) {
  using Point = typename S::Point;
  if (h.rows() != f.rows || h.cols() != f.cols) {
    throw InputError("factorization was built for a different grid");
  }
  const MetricTree& t = f.tree;
  const std::size_t n = h.n();
  const std::size_t m = std::max<std::size_t>(h.m(), 1);
  const auto row0 = h.row_span(0);
  ShorteningStats st;
  st.lip_gamma = discrete_lipschitz(space, row0, h.horizontal_spacing());
  st.length_beta = path_length(space, h.row_span(h.m()));

  std::vector<TreePoint> a(h.cols());
  for (std::size_t j = 0; j <= n; ++j) a[j] = f.psi[h.index(0, j)];
  const TreeGeodesic eta = t.geodesic(a[0], a[n]);
  st.eta_length = eta.total_length;

  TargetPath<Point> beta_prime;
  auto push = [&](const Point& p) {
    if (beta_prime.vertices.empty() || !space.same(beta_prime.back(), p)) {
      beta_prime.vertices.push_back(p);
    }
  };
  push(realize(space, f, eta.source));
  for (std::size_t node : eta.node_sequence) push(f.phi[node]);
  push(realize(space, f, eta.target));

  // Fiber geodesics g_j from psi(j, 0) to eta(j / n), sampled at m rows.
  std::vector<TreePoint> g((m + 1) * h.cols());
  for (std::size_t j = 0; j <= n; ++j) {
    const TreePoint e = n == 0 ? eta.source : t.eval(eta, double(j) / double(n));
    const TreeGeodesic gj = t.geodesic(a[j], e);
    for (std::size_t s = 0; s <= m; ++s) {
      g[s * h.cols() + j] = s == 0 ? a[j] : s == m ? e : t.eval(gj, double(s) / double(m));
    }
  }
  std::vector<Point> pts;
  pts.reserve(g.size());
  for (std::size_t s = 0; s <= m; ++s) {
    for (std::size_t j = 0; j <= n; ++j) {
      if (s == 0) {
        pts.push_back(row0[j]);
      } else if (j == 0 || j == n) {
        pts.push_back(row0[j]);
      } else {
        pts.push_back(realize(space, f, g[s * h.cols() + j]));
      }
    }
  }
  GridHomotopy<S> h_prime(m + 1, h.cols(), std::move(pts));

  const double hs = h.horizontal_spacing();
  const double vs = 1.0 / double(m);
  st.length_beta_prime = path_length(space, beta_prime);
  st.lip_beta_prime = discrete_lipschitz(space, h_prime.row_span(m), hs);
  st.lip_h_prime = grid_lipschitz(space, h_prime);
  for (std::size_t s = 0; s <= m; ++s) {
    for (std::size_t j = 0; j <= n; ++j) {
      const TreePoint& x = g[s * h.cols() + j];
      if (j < n) st.lip_g = std::max(st.lip_g, t.distance(x, g[s * h.cols() + j + 1]) / hs);
      if (s < m) st.lip_g = std::max(st.lip_g, t.distance(x, g[(s + 1) * h.cols() + j]) / vs);
    }
  }
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      st.diam_subtree = std::max(st.diam_subtree, t.distance(a[i], a[j]));
    }
  }

  ShorteningResult<S> r{std::move(beta_prime), std::move(h_prime), st, {}};
  ShorteningStats& out = r.stats;
  for (const Point& v : r.beta_prime.vertices) {
    r.image_witness.push_back(detail::locate_on_row(space, row0, v));
    out.image_residual = std::max(out.image_residual, r.image_witness.back().residual);
  }
  for (const Point& v : r.h_prime.row_span(m)) {
    out.image_residual =
        std::max(out.image_residual, detail::locate_on_row(space, row0, v).residual);
  }
  for (const TreePoint& x : g) {
    double best = n == 0 ? t.distance(a[0], x) : std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n && best > 0.0; ++j) {
      best = std::min(best, t.distance(a[j], x) + t.distance(x, a[j + 1]) -
                                t.distance(a[j], a[j + 1]));
    }
    out.g_image_residual = std::max(out.g_image_residual, std::max(best, 0.0));
  }
  out.boundary_residual = std::max(
      space.distance(r.h_prime.at(m, 0), realize(space, f, eta.source)),
      space.distance(r.h_prime.at(m, n), realize(space, f, eta.target)));
  out.boundary_residual = std::max(out.boundary_residual, endpoint_drift(space, r.h_prime));

  auto check = [&](const char* name, double lhs, double rhs) {
    if (lhs > rhs + tol) {
      throw InternalConsistencyError(std::string("shortening certificate ") + name + " failed: " +
                                     std::to_string(lhs) + " > " + std::to_string(rhs));
    }
  };
  check("length_beta_prime", out.length_beta_prime, out.length_beta);
  check("lip_beta_prime", out.lip_beta_prime, out.lip_gamma);
  check("lip_h_prime", out.lip_h_prime, out.lip_gamma);
  check("lip_g", out.lip_g, out.lip_gamma);
  check("image_residual", out.image_residual, 0.0);
  check("g_image_residual", out.g_image_residual, 0.0);
  check("boundary_residual", out.boundary_residual, 0.0);
  return r;
}

/// Resamples a path at n_out + 1 points equally spaced in arc length.
/// Constant paths are returned unchanged.
template <TargetSpace S>
TargetPath<typename S::Point> arc_length_reparametrize(const S& space,
                                                       const TargetPath<typename S::Point>& p,
                                                       std::size_t n_out) {
  detail::require_path(p);
  std::vector<double> cumulative{0.0};
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    cumulative.push_back(cumulative.back() + space.segment_length(p.vertices[k], p.vertices[k + 1]));
  }
  const double total = cumulative.back();
  if (total <= kNumericTol) return p;
  if (n_out == 0) throw InputError("arc-length resampling needs at least one segment");
  TargetPath<typename S::Point> out;
  out.vertices.push_back(p.front());
  std::size_t seg = 0;
  for (std::size_t i = 1; i < n_out; ++i) {
    const double target = total * double(i) / double(n_out);
    while (seg + 2 < cumulative.size() && cumulative[seg + 1] < target) ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double frac = len > 0.0 ? std::clamp((target - cumulative[seg]) / len, 0.0, 1.0) : 0.0;
    if (frac == 0.0) {
      out.vertices.push_back(p.vertices[seg]);
    } else if (frac == 1.0) {
      out.vertices.push_back(p.vertices[seg + 1]);
    } else {
      out.vertices.push_back(space.interpolate(p.vertices[seg], p.vertices[seg + 1], frac));
    }
  }
  out.vertices.push_back(p.back());
  return out;
}

struct CoreComparison {
  bool equal_up_to_reparam = false;
  double max_matched = 0.0;
  double hausdorff = 0.0;
};

template <TargetSpace S>
CoreComparison compare_cores(const S& space, const TargetPath<typename S::Point>& c1,
                             const TargetPath<typename S::Point>& c2,
                             double tol_unique = kUniqueTol) {
  detail::require_path(c1);
  detail::require_path(c2);
  CoreComparison r;
  auto constant = [&](const TargetPath<typename S::Point>& c) {
    return std::all_of(c.vertices.begin(), c.vertices.end(),
                       [&](const auto& p) { return space.same(p, c.front()); });
  };
  const bool constant1 = constant(c1);
  const bool constant2 = constant(c2);
  if (c1.size() != c2.size() && !constant1 && !constant2) {
    throw InputError("cores must be resampled at the same resolution");
  }
  const std::size_t n = std::max(c1.size(), c2.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = c1.vertices[constant1 ? 0 : i];
    const auto& q = c2.vertices[constant2 ? 0 : i];
    r.max_matched = std::max(r.max_matched, space.same(p, q) ? 0.0 : space.distance(p, q));
  }
  auto directed = [&](const auto& from, const auto& to) {
    double worst = 0.0;
    for (const auto& p : from.vertices) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to.vertices) best = std::min(best, space.same(p, q) ? 0.0 : space.distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  r.hausdorff = std::max(directed(c1, c2), directed(c2, c1));
  r.equal_up_to_reparam = r.max_matched <= tol_unique;
  return r;
}

struct MinimizeOptions {
  double tol = kNumericTol;
  int cap = kMinimizeCap;
  FactorizationOptions factor;
};

template <TargetSpace S>
struct CoreResult {
  TargetPath<typename S::Point> core;
  double ell_min = 0.0;
  int iterations = 0;
  // H' of every shortening pass, in order; the first one starts at the
  // widened gamma, each later one at the previous core.
  std::vector<GridHomotopy<S>> homotopy_chain;
  std::vector<ShorteningStats> steps;
  std::vector<CertificateReport> certificates;
  // Length of beta before the first pass, then of each beta'.
  std::vector<double> lengths;
  double lip_gamma = 0.0;
};

/// Composes the move homotopies, factors the composite through its quotient
/// tree and shortens; later passes shorten the core's constant homotopy until
/// the length stops decreasing. Throws NonConvergence after options.cap passes.
template <TargetSpace S>
CoreResult<S> minimize(const S& space, const TargetPath<typename S::Point>& gamma,
                       const MoveSequence<typename S::Point>& moves,
                       const MinimizeOptions& options = {}) {
  detail::require_path(gamma);
  if (options.cap < 1) throw InputError("iteration cap must be at least 1");
  MoveChain<S> chain = apply_moves(space, gamma, moves);
  CoreResult<S> result;
  result.lip_gamma =
      discrete_lipschitz(space, chain.composite.row_span(0), chain.composite.horizontal_spacing());
  GridHomotopy<S> current = std::move(chain.composite);
  double previous = path_length(space, current.row_span(current.m()));
  result.lengths.push_back(previous);
  for (int it = 1; it <= options.cap; ++it) {
    const Factorization<S> f = quotient_tree(space, current, options.factor);
    CertificateReport cert = validate_factorization(space, f, current, options.tol,
                                                    options.factor.collapse_tol + options.factor.tree_tol);
    require(cert);
    ShorteningResult<S> step = shorten(space, f, current, options.tol);
    const double length = step.stats.length_beta_prime;
    result.core = step.h_prime.row(step.h_prime.m());
    result.iterations = it;
    result.lengths.push_back(length);
    result.steps.push_back(step.stats);
    result.certificates.push_back(std::move(cert));
    result.homotopy_chain.push_back(std::move(step.h_prime));
    if (previous - length < options.tol) {
      result.ell_min = path_length(space, result.core);
      return result;
    }
    previous = length;
    current = GridHomotopy<S>::constant(result.core, 1);
  }
  const double last = result.lengths.back();
  const double before = result.lengths[result.lengths.size() - 2];
  throw NonConvergence("minimize did not converge within " + std::to_string(options.cap) +
                           " iterations; last lengths " + std::to_string(before) + " and " +
                           std::to_string(last),
                       before, last);
}

struct LoopTriviality {
  bool trivial = false;
  double core_length = 0.0;
  int iterations = 0;
};

template <TargetSpace S>
LoopTriviality local_loop_triviality(const S& space, const typename S::Point& base, double radius,
                                     const TargetPath<typename S::Point>& loop,
                                     const MoveSequence<typename S::Point>& moves,
                                     const MinimizeOptions& options = {}) {
  detail::require_path(loop);
  auto d = [&](const auto& p) { return space.same(base, p) ? 0.0 : space.distance(base, p); };
  if (d(loop.front()) > options.tol || d(loop.back()) > options.tol) {
    throw InputError("loop does not start and end at the base point");
  }
  for (std::size_t k = 0; k < loop.size(); ++k) {
    if (d(loop.vertices[k]) > radius + options.tol) {
      throw InputError("loop vertex " + std::to_string(k) + " lies outside the ball");
    }
  }
  const CoreResult<S> core = minimize(space, loop, moves, options);
  return {core.ell_min <= options.tol, core.ell_min, core.iterations};
}

}  // namespace lipcore
