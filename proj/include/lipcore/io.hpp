#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lipcore/core.hpp"
#include "lipcore/errors.hpp"
#include "lipcore/grid_homotopy.hpp"
#include "lipcore/heisenberg.hpp"
#include "lipcore/instances.hpp"
#include "lipcore/metric_tree.hpp"
#include "lipcore/moves.hpp"
#include "lipcore/target_space.hpp"

namespace lipcore::io {

/// Tokenizing line reader. Blank lines and `#` comments are skipped; every
/// parse error carries the source name and line number.
class Reader {
 public:
  Reader(std::istream& in, std::string source);

  // Next non-empty line split on whitespace; false at end of input.
  bool next();
  // As next(), but end of input is an error naming `what`.
  void expect(const std::string& what);
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::string& token(std::size_t i) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  std::size_t line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }
  void require_size(std::size_t count) const;
  void require_keyword(const std::string& keyword) const;

  [[noreturn]] void fail(const std::string& message) const;
  double real(std::size_t i) const;
  std::size_t index(std::size_t i) const;

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
  std::vector<std::string> tokens_;
};

// %.17g
std::string format_real(double v);

void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// `tree <nodes>` then one `edge u v length` line per edge.
MetricTree read_tree(Reader& r);
std::string format_tree(const MetricTree& tree);
std::shared_ptr<const MetricTree> load_tree(const std::filesystem::path& path);

// `planar <n>` then `x y` lines.
std::vector<PlanarPoint> read_planar(Reader& r);
// `hpath <n> <base_z>` then `x y` lines; z values are recomputed by lifting.
HorizontalPath read_hpath(Reader& r);
std::string format_hpath(const HorizontalPath& path);

// `table <k>` then k rows of k values.
DistanceTable read_table(Reader& r);
std::string format_table(const DistanceTable& d);

// Tree points are `<edge> <offset>`; H1 points are `x y z`.
TreePoint parse_point(const Reader& r, std::size_t first, const TreeSpace& space);
HPoint parse_point(const Reader& r, std::size_t first, const HeisenbergSpace& space);
inline std::size_t point_width(const TreeSpace&) { return 2; }
inline std::size_t point_width(const HeisenbergSpace&) { return 3; }
std::string format_point(const TreePoint& p);
std::string format_point(const HPoint& p);

// Target declared by a `target tree <file>` / `target h1` line, or by the
// trailing words of a `grid` header.
using AnySpace = std::variant<TreeSpace, HeisenbergSpace>;

AnySpace parse_target(const Reader& r, std::size_t first, const std::filesystem::path& base_dir);
std::string format_target(const TreeSpace& space, const std::string& tree_file);
std::string format_target(const HeisenbergSpace& space);

template <TargetSpace S>
std::vector<typename S::Point> read_points(Reader& r, const S& space, std::size_t count) {
  std::vector<typename S::Point> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    r.expect("point " + std::to_string(k));
    r.require_size(point_width(space));
    pts.push_back(parse_point(r, 0, space));
  }
  return pts;
}

// `path <n>` then points.
template <TargetSpace S>
TargetPath<typename S::Point> read_path_body(Reader& r, const S& space) {
  r.expect("path header");
  r.require_keyword("path");
  r.require_size(2);
  const std::size_t n = r.index(1);
  if (n == 0) r.fail("path needs at least one vertex");
  return {read_points(r, space, n)};
}

template <class P>
std::string format_path_body(const TargetPath<P>& path) {
  std::string out = "path " + std::to_string(path.size()) + "\n";
  for (const auto& p : path.vertices) out += format_point(p) + "\n";
  return out;
}

struct PathFile {
  AnySpace space;
  std::variant<TargetPath<TreePoint>, TargetPath<HPoint>> path;
};
PathFile read_path_file(Reader& r, const std::filesystem::path& base_dir);

// `grid <m> <n> h1` or `grid <m> <n> tree <file>` then (m+1)(n+1) points, row-major.
struct GridFile {
  AnySpace space;
  std::variant<GridHomotopy<TreeSpace>, GridHomotopy<HeisenbergSpace>> grid;
};
GridFile read_grid_file(Reader& r, const std::filesystem::path& base_dir);

template <TargetSpace S>
std::string format_grid(const GridHomotopy<S>& h, const std::string& target_words) {
  std::string out = "grid " + std::to_string(h.m()) + " " + std::to_string(h.n()) + " " +
                    target_words + "\n";
  for (const auto& p : h.points()) out += format_point(p) + "\n";
  return out;
}

/// `moves <count>`, optional `seed <s>`, then per move one of
///   remove <windows> <start> <end> ...
///   slide <windows> <start> <end> ...
///   insert <column> <k>       followed by k+1 spur points
///   nullloop <k>              followed by k+1 spur points
///   reparam <rows> <size>     followed by one line of `size` profile values
template <TargetSpace S>
MoveSequence<typename S::Point> read_moves(Reader& r, const S& space) {
  MoveSequence<typename S::Point> seq;
  r.expect("moves header");
  r.require_keyword("moves");
  r.require_size(2);
  const std::size_t count = r.index(1);
  bool have_line = r.next();
  if (have_line && r.token(0) == "seed") {
    r.require_size(2);
    seq.seed = r.index(1);
    have_line = r.next();
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!have_line) r.fail("expected " + std::to_string(count) + " moves, found " + std::to_string(i));
    Move<typename S::Point> m;
    const std::string kind = r.token(0);
    if (kind == "remove" || kind == "slide") {
      if (r.size() < 2) r.fail(kind + " needs a window count");
      const std::size_t w = r.index(1);
      r.require_size(2 + 2 * w);
      m.kind = kind == "remove" ? MoveKind::kRemoveBacktrack : MoveKind::kSlide;
      for (std::size_t k = 0; k < w; ++k) m.windows.push_back({r.index(2 + 2 * k), r.index(3 + 2 * k)});
    } else if (kind == "insert" || kind == "nullloop") {
      const bool insert = kind == "insert";
      r.require_size(insert ? 3 : 2);
      m.kind = insert ? MoveKind::kInsertBacktrack : MoveKind::kConcatNullLoop;
      if (insert) m.column = r.index(1);
      const std::size_t k = r.index(insert ? 2 : 1);
      m.spur.vertices = read_points(r, space, k + 1);
    } else if (kind == "reparam") {
      r.require_size(3);
      m.kind = MoveKind::kReparametrize;
      m.rows = r.index(1);
      const std::size_t size = r.index(2);
      r.expect("reparam profile");
      r.require_size(size);
      for (std::size_t k = 0; k < size; ++k) m.profile.push_back(r.real(k));
    } else {
      r.fail("unknown move kind '" + kind + "'");
    }
    seq.moves.push_back(std::move(m));
    have_line = r.next();
  }
  if (have_line) r.fail("unexpected content after the last move");
  return seq;
}

template <class P>
std::string format_moves(const MoveSequence<P>& seq) {
  std::string out = "moves " + std::to_string(seq.moves.size()) + "\n";
  out += "seed " + std::to_string(seq.seed) + "\n";
  for (const auto& m : seq.moves) {
    switch (m.kind) {
      case MoveKind::kRemoveBacktrack:
      case MoveKind::kSlide:
        out += (m.kind == MoveKind::kSlide ? "slide " : "remove ") + std::to_string(m.windows.size());
        for (const auto& w : m.windows) out += " " + std::to_string(w.start) + " " + std::to_string(w.end);
        out += "\n";
        break;
      case MoveKind::kInsertBacktrack:
      case MoveKind::kConcatNullLoop:
        if (m.kind == MoveKind::kInsertBacktrack) {
          out += "insert " + std::to_string(m.column) + " ";
        } else {
          out += "nullloop ";
        }
        out += std::to_string(m.spur.size() - 1) + "\n";
        for (const auto& p : m.spur.vertices) out += format_point(p) + "\n";
        break;
      case MoveKind::kReparametrize:
        out += "reparam " + std::to_string(m.rows) + " " + std::to_string(m.profile.size()) + "\n";
        for (std::size_t k = 0; k < m.profile.size(); ++k) {
          out += (k ? " " : "") + format_real(m.profile[k]);
        }
        out += "\n";
        break;
    }
  }
  return out;
}

// `core <n> <ell_min> <iterations>` then n vertices.
template <TargetSpace S>
std::string format_core(const CoreResult<S>& core) {
  std::string out = "core " + std::to_string(core.core.size()) + " " + format_real(core.ell_min) +
                    " " + std::to_string(core.iterations) + "\n";
  for (const auto& p : core.core.vertices) out += format_point(p) + "\n";
  return out;
}

/// Ordered `key value` report.
class Report {
 public:
  void add(const std::string& key, double value);
  void add(const std::string& key, std::size_t value);
  void add(const std::string& key, int value) { add(key, static_cast<std::size_t>(value)); }
  void add(const std::string& key, const std::string& value);
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Key-value pairs of a report, in order.
std::vector<std::pair<std::string, std::string>> parse_report(const std::string& text);

// Instance bundle: tree.txt, homotopy.txt, gamma.txt, moves.txt, truth.txt.
void write_instance(const std::filesystem::path& dir, const Instance& instance);

}  // namespace lipcore::io
