#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lipcore/errors.hpp"
#include "lipcore/target_space.hpp"

namespace lipcore {

/// Sampled homotopy H on an (m+1) x (n+1) grid over I x I, stored row-major.
///
/// Row s is the path H(., s/m); row 0 is the initial path and row m the final
/// one. Column j is the track of the sample at parameter j/n. The grid carries
/// the L1 metric with spacing 1/n horizontally and 1/m vertically.
template <TargetSpace S>
class GridHomotopy {
 public:
  using Space = S;
  using Point = typename S::Point;

  GridHomotopy(std::size_t rows, std::size_t cols, std::vector<Point> points)
      : rows_(rows), cols_(cols), points_(std::move(points)) {
    if (rows == 0 || cols == 0) throw InputError("grid homotopy needs at least one row and column");
    if (points_.size() != rows * cols) {
      throw InputError("grid homotopy expects " + std::to_string(rows * cols) + " points, got " +
                       std::to_string(points_.size()));
    }
  }

  // The trivial homotopy from a path to itself with m rows of spacing.
  static GridHomotopy constant(const TargetPath<Point>& path, std::size_t m = 1) {
    if (path.vertices.empty()) throw InputError("cannot build a homotopy of an empty path");
    std::vector<Point> pts;
    pts.reserve((m + 1) * path.size());
    for (std::size_t s = 0; s <= m; ++s) pts.insert(pts.end(), path.vertices.begin(), path.vertices.end());
    return GridHomotopy(m + 1, path.size(), std::move(pts));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t m() const noexcept { return rows_ - 1; }
  std::size_t n() const noexcept { return cols_ - 1; }
  std::size_t vertex_count() const noexcept { return points_.size(); }
  std::size_t index(std::size_t s, std::size_t j) const noexcept { return s * cols_ + j; }
  std::size_t row_of(std::size_t v) const noexcept { return v / cols_; }
  std::size_t col_of(std::size_t v) const noexcept { return v % cols_; }

  const Point& at(std::size_t s, std::size_t j) const { return points_[index(s, j)]; }
  const Point& vertex(std::size_t v) const { return points_[v]; }
  std::span<const Point> points() const noexcept { return points_; }
  std::span<const Point> row_span(std::size_t s) const {
    return std::span<const Point>(points_).subspan(s * cols_, cols_);
  }
  TargetPath<Point> row(std::size_t s) const {
    auto r = row_span(s);
    return {std::vector<Point>(r.begin(), r.end())};
  }
  TargetPath<Point> column(std::size_t j) const {
    TargetPath<Point> out;
    for (std::size_t s = 0; s < rows_; ++s) out.vertices.push_back(at(s, j));
    return out;
  }

  double horizontal_spacing() const noexcept { return cols_ > 1 ? 1.0 / double(cols_ - 1) : 1.0; }
  double vertical_spacing() const noexcept { return rows_ > 1 ? 1.0 / double(rows_ - 1) : 1.0; }

  // New column c is old column column_map[c]; duplicated columns are exact
  // copies, so the grid pseudo-metric of the original vertices is unchanged.
  GridHomotopy with_columns(std::span<const std::size_t> column_map) const {
    std::vector<Point> pts;
    pts.reserve(rows_ * column_map.size());
    for (std::size_t s = 0; s < rows_; ++s) {
      for (std::size_t c : column_map) {
        if (c >= cols_) throw InputError("column map refers to missing column");
        pts.push_back(at(s, c));
      }
    }
    return GridHomotopy(rows_, column_map.size(), std::move(pts));
  }

  // This homotopy followed by `upper`, whose first row must match our last.
  GridHomotopy stacked(const S& space, const GridHomotopy& upper) const {
    if (upper.cols_ != cols_) throw InputError("stacked homotopies differ in column count");
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!space.same(at(m(), j), upper.at(0, j))) {
        throw InputError("stacked homotopies do not meet at column " + std::to_string(j));
      }
    }
    std::vector<Point> pts(points_);
    pts.insert(pts.end(), upper.points_.begin() + cols_, upper.points_.end());
    return GridHomotopy(rows_ + upper.rows_ - 1, cols_, std::move(pts));
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Point> points_;
};

// Largest column-0 / column-n drift from the path's endpoints.
template <TargetSpace S>
double endpoint_drift(const S& space, const GridHomotopy<S>& h) {
  double drift = 0.0;
  for (std::size_t s = 1; s < h.rows(); ++s) {
    drift = std::max(drift, space.distance(h.at(0, 0), h.at(s, 0)));
    drift = std::max(drift, space.distance(h.at(0, h.n()), h.at(s, h.n())));
  }
  return drift;
}

// Throws InputError unless both endpoint columns are constant within tol.
template <TargetSpace S>
void check_boundary(const S& space, const GridHomotopy<S>& h, double tol = kNumericTol) {
  const double drift = endpoint_drift(space, h);
  if (drift > tol) {
    throw InputError("homotopy does not fix endpoints (drift " + std::to_string(drift) + ")");
  }
}

// Max over grid edges of target distance over d1 spacing.
template <TargetSpace S>
double grid_lipschitz(const S& space, const GridHomotopy<S>& h) {
  double lip = 0.0;
  for (std::size_t s = 0; s < h.rows(); ++s) {
    lip = std::max(lip, discrete_lipschitz(space, h.row_span(s), h.horizontal_spacing()));
  }
  for (std::size_t s = 0; s + 1 < h.rows(); ++s) {
    for (std::size_t j = 0; j < h.cols(); ++j) {
      lip = std::max(lip, space.distance(h.at(s, j), h.at(s + 1, j)) / h.vertical_spacing());
    }
  }
  return lip;
}

}  // namespace lipcore
