#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipcore/errors.hpp"
#include "lipcore/grid_homotopy.hpp"
#include "lipcore/target_space.hpp"

namespace lipcore {

enum class MoveKind { kInsertBacktrack, kRemoveBacktrack, kReparametrize, kConcatNullLoop, kSlide };

// Column range [start, end]. For removals, a stretch that traces out and back
// along a spur; for slides, start is the dropped column and end the new dwell.
struct Window {
  std::size_t start = 0;
  std::size_t end = 0;
};

template <class P>
struct Move {
  MoveKind kind = MoveKind::kInsertBacktrack;
  std::size_t column = 0;      // insert: spur attaches after this column
  TargetPath<P> spur;          // insert / null loop: spur[0] is the attachment point
  std::vector<Window> windows; // remove / slide
  std::vector<double> profile; // reparametrize: monotone table on a uniform grid of [0,1]
  std::size_t rows = 1;        // reparametrize: blend stages
};

template <class P>
struct MoveSequence {
  std::vector<Move<P>> moves;
  std::uint64_t seed = 0;
};

/// Output of one elementary move: the new path, a homotopy whose row 0 is the
/// input path widened by `column_map` and whose last row is `out`.
template <TargetSpace S>
struct MoveResult {
  TargetPath<typename S::Point> out;
  GridHomotopy<S> homotopy;
  std::vector<std::size_t> column_map;
};

namespace detail {

inline std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> map(n);
  for (std::size_t j = 0; j < n; ++j) map[j] = j;
  return map;
}

template <class P>
void require_path(const TargetPath<P>& p) {
  if (p.vertices.empty()) throw InputError("move applied to an empty path");
}

// Runs of equal consecutive values within [start, end].
struct Run {
  std::size_t first;
  std::size_t last;
};

template <TargetSpace S>
std::vector<Run> runs(const S& space, const TargetPath<typename S::Point>& p, std::size_t start,
                      std::size_t end) {
  std::vector<Run> out;
  for (std::size_t j = start; j <= end; ++j) {
    if (!out.empty() && space.same(p.vertices[out.back().last], p.vertices[j])) {
      out.back().last = j;
    } else {
      out.push_back({j, j});
    }
  }
  return out;
}

}  // namespace detail

/// Inserts the out-and-back excursion along `spur` after column c. Row s of
/// the homotopy advances the excursion to depth min(k, s), so row 0 is the
/// input with 2K duplicates of column c and row K is the output.
template <TargetSpace S>
MoveResult<S> insert_backtrack(const S& space, const TargetPath<typename S::Point>& p,
                               std::size_t c, const TargetPath<typename S::Point>& spur) {
  detail::require_path(p);
  if (c >= p.size()) throw InputError("insert column " + std::to_string(c) + " out of range");
  if (spur.vertices.empty()) throw InputError("spur must contain its attachment point");
  if (!space.same(spur.front(), p.vertices[c]) &&
      space.distance(spur.front(), p.vertices[c]) > kNumericTol) {
    throw InputError("spur does not start at column " + std::to_string(c));
  }
  const std::size_t k = spur.size() - 1;
  if (k == 0) {
    return {p, GridHomotopy<S>::constant(p, 1), detail::identity_map(p.size())};
  }
  const std::size_t cols = p.size() + 2 * k;
  std::vector<std::size_t> map(cols);
  // Spur depth for each output column, or none outside the excursion.
  std::vector<std::optional<std::size_t>> level(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    if (j <= c) {
      map[j] = j;
    } else if (j <= c + 2 * k) {
      map[j] = c;
      const std::size_t i = j - c;
      level[j] = i <= k ? i : 2 * k - i;
    } else {
      map[j] = j - 2 * k;
    }
  }
  std::vector<typename S::Point> pts;
  pts.reserve((k + 1) * cols);
  for (std::size_t s = 0; s <= k; ++s) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t depth = level[j] ? std::min(*level[j], s) : 0;
      pts.push_back(depth == 0 ? p.vertices[map[j]] : spur.vertices[depth]);
    }
  }
  GridHomotopy<S> h(k + 1, cols, std::move(pts));
  return {h.row(k), std::move(h), std::move(map)};
}

// Appends an out-and-back loop at the final point.
template <TargetSpace S>
MoveResult<S> concat_null_loop(const S& space, const TargetPath<typename S::Point>& p,
                               const TargetPath<typename S::Point>& spur) {
  detail::require_path(p);
  return insert_backtrack(space, p, p.size() - 1, spur);
}

/// Retracts every window at once. Each window's run-compressed values must
/// form a palindrome v0 .. vK .. v0; row s pulls the excursion back to depth
/// K - s, leaving a dwell at v0. The column count is unchanged.
template <TargetSpace S>
MoveResult<S> remove_backtracks(const S& space, const TargetPath<typename S::Point>& p,
                                const std::vector<Window>& windows) {
  detail::require_path(p);
  using Point = typename S::Point;
  const std::size_t cols = p.size();
  // Per column: window id and depth.
  std::vector<std::optional<std::size_t>> level(cols);
  std::vector<std::size_t> owner(cols, 0);
  std::vector<std::vector<Point>> spurs;
  std::size_t rows = 0;
  std::size_t floor = 0;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const Window& win = windows[w];
    if (win.start >= win.end || win.end >= cols) {
      throw InputError("window [" + std::to_string(win.start) + ", " + std::to_string(win.end) +
                       "] is empty or out of range");
    }
    if (w > 0 && win.start < floor) throw InputError("windows overlap or are unsorted");
    floor = win.end;
    const auto r = detail::runs(space, p, win.start, win.end);
    if (r.size() % 2 == 0 || r.size() < 3) {
      throw InputError("window starting at " + std::to_string(win.start) + " is not a backtrack");
    }
    const std::size_t k = r.size() / 2;
    for (std::size_t i = 0; i < k; ++i) {
      if (!space.same(p.vertices[r[i].first], p.vertices[r[r.size() - 1 - i].first])) {
        throw InputError("window starting at " + std::to_string(win.start) +
                         " does not retrace itself");
      }
    }
    std::vector<Point> spur;
    for (std::size_t i = 0; i <= k; ++i) spur.push_back(p.vertices[r[i].first]);
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (std::size_t j = r[i].first; j <= r[i].last; ++j) {
        if (i == 0 || i + 1 == r.size()) continue;
        level[j] = std::min(i, r.size() - 1 - i);
        owner[j] = w;
      }
    }
    spurs.push_back(std::move(spur));
    rows = std::max(rows, k);
  }
  if (rows == 0) return {p, GridHomotopy<S>::constant(p, 1), detail::identity_map(cols)};

  std::vector<Point> pts;
  pts.reserve((rows + 1) * cols);
  for (std::size_t s = 0; s <= rows; ++s) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (s == 0 || !level[j]) {
        pts.push_back(p.vertices[j]);
        continue;
      }
      const auto& spur = spurs[owner[j]];
      const std::size_t k = spur.size() - 1;
      const std::size_t depth = std::min(*level[j], s >= k ? 0 : k - s);
      pts.push_back(spur[depth]);
    }
  }
  GridHomotopy<S> h(rows + 1, cols, std::move(pts));
  return {h.row(rows), std::move(h), detail::identity_map(cols)};
}

namespace detail {

// Point at position x in [0, n] of the uniform parametrization; exact at samples.
template <TargetSpace S>
typename S::Point eval_uniform(const S& space, const TargetPath<typename S::Point>& p, double x) {
  const std::size_t n = p.size() - 1;
  if (n == 0) return p.vertices[0];
  const double rounded = std::round(x);
  if (std::abs(x - rounded) <= 1e-12) x = rounded;
  x = std::clamp(x, 0.0, double(n));
  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::floor(x)), n - 1);
  const double frac = x - double(k);
  if (frac == 0.0) return p.vertices[k];
  if (frac == 1.0) return p.vertices[k + 1];
  return space.interpolate(p.vertices[k], p.vertices[k + 1], frac);
}

inline double eval_profile(const std::vector<double>& profile, double u) {
  const std::size_t n = profile.size() - 1;
  const double x = std::clamp(u, 0.0, 1.0) * double(n);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::floor(x)), n - 1);
  const double frac = x - double(k);
  return profile[k] + frac * (profile[k + 1] - profile[k]);
}

}  // namespace detail

/// Homotopy from p to p o pi, where pi is the monotone surjection of [0,1]
/// tabulated by `profile`. Row s samples p at the straight-line blend
/// (1 - s/rows) u + (s/rows) pi(u) of the two parametrizations.
///
/// In a tree the blend maps every row onto the image of p, but at grid
/// resolution neighbouring columns move together and each cell spans a
/// genuine cycle of the pseudo-metric, so the homotopy factors through a tree
/// only in the limit. slide() is the discrete counterpart that factors exactly.
template <TargetSpace S>
MoveResult<S> reparametrize(const S& space, const TargetPath<typename S::Point>& p,
                            const std::vector<double>& profile, std::size_t rows = 1) {
  detail::require_path(p);
  if (profile.size() < 2) throw InputError("reparametrization profile needs at least two values");
  if (profile.front() != 0.0 || profile.back() != 1.0) {
    throw InputError("reparametrization profile must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    if (!(profile[i + 1] >= profile[i])) {
      throw InputError("reparametrization profile is not monotone at entry " + std::to_string(i));
    }
  }
  if (rows == 0) throw InputError("reparametrization needs at least one stage");
  const std::size_t cols = p.size();
  const std::size_t n = cols - 1;
  std::vector<typename S::Point> pts(p.vertices);
  pts.reserve((rows + 1) * cols);
  for (std::size_t s = 1; s <= rows; ++s) {
    const double w = double(s) / double(rows);
    for (std::size_t j = 0; j < cols; ++j) {
      const double u = n == 0 ? 0.0 : double(j) / double(n);
      const double target = detail::eval_profile(profile, u) * double(n);
      const double x = j == 0 ? 0.0 : j == n ? double(n) : (s == rows ? target : (1.0 - w) * double(j) + w * target);
      pts.push_back(detail::eval_uniform(space, p, x));
    }
  }
  GridHomotopy<S> h(rows + 1, cols, std::move(pts));
  return {h.row(rows), std::move(h), detail::identity_map(cols)};
}

/// Discrete reparametrization. Each window drops the vertex at column `start`
/// and shifts the samples between start and end one column toward it, leaving
/// a dwell at `end`. Row s moves the s-th column of every window onto the
/// current value of its neighbour, so each grid cell has a zero-length side.
/// The dropped vertex must lie on the geodesic between its neighbours, which
/// keeps image and length. Windows must be sorted with a static column between
/// neighbouring windows.
template <TargetSpace S>
MoveResult<S> slide(const S& space, const TargetPath<typename S::Point>& p,
                    const std::vector<Window>& windows, double tol = kNumericTol) {
  detail::require_path(p);
  const std::size_t cols = p.size();
  const std::size_t n = cols - 1;
  std::size_t rows = 0;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const Window& win = windows[w];
    const std::size_t lo = std::min(win.start, win.end);
    const std::size_t hi = std::max(win.start, win.end);
    if (win.start == win.end || hi > n || win.start == 0 || win.start == n) {
      throw InputError("slide window [" + std::to_string(win.start) + ", " + std::to_string(win.end) +
                       "] is empty or moves an endpoint");
    }
    if (w > 0 && lo <= std::max(windows[w - 1].start, windows[w - 1].end) + 1) {
      throw InputError("slide windows must be sorted and separated by a static column");
    }
    const auto& a = p.vertices[win.start - 1];
    const auto& b = p.vertices[win.start];
    const auto& c = p.vertices[win.start + 1];
    if (space.distance(a, b) + space.distance(b, c) - space.distance(a, c) > tol) {
      throw InputError("slide drops column " + std::to_string(win.start) +
                       ", which is off the geodesic between its neighbours");
    }
    rows = std::max(rows, hi - lo);
  }
  if (rows == 0) return {p, GridHomotopy<S>::constant(p, 1), detail::identity_map(cols)};
  std::vector<typename S::Point> cur(p.vertices);
  std::vector<typename S::Point> pts(p.vertices);
  pts.reserve((rows + 1) * cols);
  for (std::size_t s = 0; s < rows; ++s) {
    for (const Window& win : windows) {
      const std::size_t len = win.start < win.end ? win.end - win.start : win.start - win.end;
      if (s >= len) continue;
      if (win.start < win.end) {
        cur[win.start + s] = cur[win.start + s + 1];
      } else {
        cur[win.start - s] = cur[win.start - s - 1];
      }
    }
    pts.insert(pts.end(), cur.begin(), cur.end());
  }
  GridHomotopy<S> h(rows + 1, cols, std::move(pts));
  return {h.row(rows), std::move(h), detail::identity_map(cols)};
}

template <TargetSpace S>
MoveResult<S> apply_move(const S& space, const TargetPath<typename S::Point>& p,
                         const Move<typename S::Point>& move) {
  switch (move.kind) {
    case MoveKind::kInsertBacktrack:
      return insert_backtrack(space, p, move.column, move.spur);
    case MoveKind::kRemoveBacktrack:
      return remove_backtracks(space, p, move.windows);
    case MoveKind::kReparametrize:
      return reparametrize(space, p, move.profile, move.rows);
    case MoveKind::kConcatNullLoop:
      return concat_null_loop(space, p, move.spur);
    case MoveKind::kSlide:
      return slide(space, p, move.windows);
  }
  throw InputError("unknown move kind");
}

/// Paths visited by a move sequence and the composite homotopy from the
/// (widened) initial path to the final one.
template <TargetSpace S>
struct MoveChain {
  std::vector<TargetPath<typename S::Point>> paths;
  GridHomotopy<S> composite;
};

template <TargetSpace S>
MoveChain<S> apply_moves(const S& space, const TargetPath<typename S::Point>& gamma,
                         const MoveSequence<typename S::Point>& seq) {
  std::vector<TargetPath<typename S::Point>> paths{gamma};
  std::optional<GridHomotopy<S>> composite;
  for (std::size_t i = 0; i < seq.moves.size(); ++i) {
    MoveResult<S> r = [&] {
      try {
        return apply_move(space, paths.back(), seq.moves[i]);
      } catch (const InputError& err) {
        throw InputError("move " + std::to_string(i) + ": " + err.what());
      }
    }();
    if (composite) {
      composite = composite->with_columns(r.column_map).stacked(space, r.homotopy);
    } else {
      composite = std::move(r.homotopy);
    }
    paths.push_back(std::move(r.out));
  }
  if (!composite) composite = GridHomotopy<S>::constant(gamma, 1);
  return {std::move(paths), std::move(*composite)};
}

/// Moves that greedily cancel immediate backtracks v, w, v in the
/// run-compressed path, one removal round at a time, until none remain.
template <TargetSpace S>
std::vector<Move<typename S::Point>> reduction_moves(const S& space,
                                                     TargetPath<typename S::Point> path) {
  std::vector<Move<typename S::Point>> moves;
  detail::require_path(path);
  for (;;) {
    const auto r = detail::runs(space, path, 0, path.size() - 1);
    std::vector<Window> windows;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
      if (space.same(path.vertices[r[i - 1].first], path.vertices[r[i + 1].first])) {
        windows.push_back({r[i - 1].last, r[i + 1].first});
        i += 1;
      }
    }
    if (windows.empty()) return moves;
    Move<typename S::Point> m;
    m.kind = MoveKind::kRemoveBacktrack;
    m.windows = std::move(windows);
    path = remove_backtracks(space, path, m.windows).out;
    moves.push_back(std::move(m));
  }
}

}  // namespace lipcore
