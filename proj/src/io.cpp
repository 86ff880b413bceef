#include "lipcore/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <system_error>

namespace lipcore::io {

Reader::Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

bool Reader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream words(text);
    tokens_.clear();
    for (std::string w; words >> w;) tokens_.push_back(std::move(w));
    if (!tokens_.empty()) return true;
  }
  tokens_.clear();
  return false;
}

void Reader::expect(const std::string& what) {
  if (!next()) {
    throw InputError(source_ + ":" + std::to_string(line_ + 1) + ": unexpected end of input, expected " + what);
  }
}

const std::string& Reader::token(std::size_t i) const {
  if (i >= tokens_.size()) fail("missing field " + std::to_string(i + 1));
  return tokens_[i];
}

void Reader::require_size(std::size_t count) const {
  if (tokens_.size() != count) {
    fail("expected " + std::to_string(count) + " fields, found " + std::to_string(tokens_.size()));
  }
}

void Reader::require_keyword(const std::string& keyword) const {
  if (token(0) != keyword) fail("expected '" + keyword + "', found '" + token(0) + "'");
}

void Reader::fail(const std::string& message) const {
  throw InputError(source_ + ":" + std::to_string(line_) + ": " + message);
}

double Reader::real(std::size_t i) const {
  const std::string& t = token(i);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v)) {
    fail("'" + t + "' is not a finite number");
  }
  return v;
}

std::size_t Reader::index(std::size_t i) const {
  const std::string& t = token(i);
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size()) fail("'" + t + "' is not a non-negative integer");
  return v;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw InputError("cannot write " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot write " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MetricTree read_tree(Reader& r) {
  r.expect("tree header");
  r.require_keyword("tree");
  r.require_size(2);
  const std::size_t nodes = r.index(1);
  if (nodes == 0) r.fail("tree needs at least one node");
  std::vector<TreeEdge> edges;
  for (std::size_t e = 0; e + 1 < nodes; ++e) {
    r.expect("edge " + std::to_string(e));
    r.require_keyword("edge");
    r.require_size(4);
    edges.push_back({r.index(1), r.index(2), r.real(3)});
  }
  if (r.next()) r.fail("unexpected content after the last edge");
  try {
    return MetricTree(nodes, std::move(edges));
  } catch (const InputError& err) {
    throw InputError(r.source() + ": " + err.what());
  }
}

std::string format_tree(const MetricTree& tree) {
  std::string out = "tree " + std::to_string(tree.node_count()) + "\n";
  for (const auto& e : tree.edges()) {
    out += "edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_real(e.length) + "\n";
  }
  return out;
}

std::shared_ptr<const MetricTree> load_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tree file " + path.string());
  Reader r(in, path.string());
  return std::make_shared<const MetricTree>(read_tree(r));
}

std::vector<PlanarPoint> read_planar(Reader& r) {
  r.expect("planar header");
  r.require_keyword("planar");
  r.require_size(2);
  const std::size_t n = r.index(1);
  if (n == 0) r.fail("planar path needs at least one vertex");
  std::vector<PlanarPoint> pts;
  for (std::size_t k = 0; k < n; ++k) {
    r.expect("vertex " + std::to_string(k));
    r.require_size(2);
    pts.push_back({r.real(0), r.real(1)});
  }
  if (r.next()) r.fail("unexpected content after the last vertex");
  return pts;
}

HorizontalPath read_hpath(Reader& r) {
  r.expect("hpath header");
  r.require_keyword("hpath");
  r.require_size(3);
  const std::size_t n = r.index(1);
  const double base = r.real(2);
  if (n == 0) r.fail("hpath needs at least one vertex");
  std::vector<PlanarPoint> pts;
  for (std::size_t k = 0; k < n; ++k) {
    r.expect("vertex " + std::to_string(k));
    r.require_size(2);
    pts.push_back({r.real(0), r.real(1)});
  }
  if (r.next()) r.fail("unexpected content after the last vertex");
  return HorizontalPath::lift(std::move(pts), base);
}

std::string format_hpath(const HorizontalPath& path) {
  std::string out = "hpath " + std::to_string(path.size()) + " " + format_real(path.base_z()) + "\n";
  for (const auto& p : path.planar_vertices()) out += format_real(p.x) + " " + format_real(p.y) + "\n";
  return out;
}

DistanceTable read_table(Reader& r) {
  r.expect("table header");
  r.require_keyword("table");
  r.require_size(2);
  const std::size_t k = r.index(1);
  DistanceTable d(k);
  for (std::size_t i = 0; i < k; ++i) {
    r.expect("table row " + std::to_string(i));
    r.require_size(k);
    for (std::size_t j = 0; j < k; ++j) d.at(i, j) = r.real(j);
  }
  if (r.next()) r.fail("unexpected content after the last row");
  try {
    check_distance_table(d);
  } catch (const InputError& err) {
    throw InputError(r.source() + ": " + err.what());
  }
  return d;
}

std::string format_table(const DistanceTable& d) {
  std::string out = "table " + std::to_string(d.size()) + "\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) out += (j ? " " : "") + format_real(d.at(i, j));
    out += "\n";
  }
  return out;
}

TreePoint parse_point(const Reader& r, std::size_t first, const TreeSpace& space) {
  const std::size_t edge = r.index(first);
  const double offset = r.real(first + 1);
  if (space.tree().edge_count() == 0) {
    if (offset != 0.0) r.fail("single-node tree only has offset 0");
    return {};
  }
  try {
    return space.tree().point_on_edge(edge, offset);
  } catch (const InputError& err) {
    r.fail(err.what());
  }
}

HPoint parse_point(const Reader& r, std::size_t first, const HeisenbergSpace&) {
  return {r.real(first), r.real(first + 1), r.real(first + 2)};
}

std::string format_point(const TreePoint& p) {
  return (p.edge == kNoEdge ? std::string("0") : std::to_string(p.edge)) + " " + format_real(p.offset);
}

std::string format_point(const HPoint& p) {
  return format_real(p.x) + " " + format_real(p.y) + " " + format_real(p.z);
}

AnySpace parse_target(const Reader& r, std::size_t first, const std::filesystem::path& base_dir) {
  const std::string& kind = r.token(first);
  if (kind == "h1") {
    if (r.size() != first + 1) r.fail("unexpected fields after 'h1'");
    return HeisenbergSpace();
  }
  if (kind == "tree") {
    if (r.size() != first + 2) r.fail("'tree' target needs exactly one file name");
    std::filesystem::path file = r.token(first + 1);
    if (file.is_relative()) file = base_dir / file;
    return TreeSpace(load_tree(file));
  }
  r.fail("unknown target '" + kind + "'");
}

std::string format_target(const TreeSpace&, const std::string& tree_file) { return "tree " + tree_file; }
std::string format_target(const HeisenbergSpace&) { return "h1"; }

PathFile read_path_file(Reader& r, const std::filesystem::path& base_dir) {
  r.expect("target line");
  r.require_keyword("target");
  AnySpace space = parse_target(r, 1, base_dir);
  return std::visit(
      [&](const auto& s) -> PathFile {
        auto path = read_path_body(r, s);
        if (r.next()) r.fail("unexpected content after the last vertex");
        return {s, std::move(path)};
      },
      space);
}

GridFile read_grid_file(Reader& r, const std::filesystem::path& base_dir) {
  r.expect("grid header");
  r.require_keyword("grid");
  if (r.size() < 4) r.fail("grid header needs m, n and a target");
  const std::size_t m = r.index(1);
  const std::size_t n = r.index(2);
  AnySpace space = parse_target(r, 3, base_dir);
  return std::visit(
      [&](const auto& s) -> GridFile {
        using S = std::decay_t<decltype(s)>;
        auto pts = read_points(r, s, (m + 1) * (n + 1));
        if (r.next()) r.fail("unexpected content after the last grid point");
        GridHomotopy<S> h(m + 1, n + 1, std::move(pts));
        return {s, std::move(h)};
      },
      space);
}

void Report::add(const std::string& key, double value) { entries_.emplace_back(key, format_real(value)); }
void Report::add(const std::string& key, std::size_t value) {
  entries_.emplace_back(key, std::to_string(value));
}
void Report::add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }

std::string Report::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " " + v + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_report(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto space = line.find(' ');
    if (line.empty() || space == std::string::npos) continue;
    out.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  return out;
}

void write_instance(const std::filesystem::path& dir, const Instance& instance) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw InputError("cannot create directory " + dir.string());
  const TreeSpace space(instance.tree);
  write_atomic(dir / "tree.txt", format_tree(*instance.tree));
  write_atomic(dir / "homotopy.txt", format_grid(instance.homotopy, "tree tree.txt"));
  write_atomic(dir / "gamma.txt", "target tree tree.txt\n" + format_path_body(instance.gamma));
  write_atomic(dir / "moves.txt", format_moves(instance.moves));
  write_atomic(dir / "truth.txt", "truth " + format_real(instance.truth) + "\n");
}

}  // namespace lipcore::io
