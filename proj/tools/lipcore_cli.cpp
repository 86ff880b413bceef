// lipcore: command-line front end for lifting, factoring and minimizing paths.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>

#include "lipcore/core.hpp"
#include "lipcore/factorization.hpp"
#include "lipcore/heisenberg.hpp"
#include "lipcore/instances.hpp"
#include "lipcore/io.hpp"
#include "lipcore/metric_tree.hpp"
#include "lipcore/tolerance.hpp"

namespace fs = std::filesystem;
using namespace lipcore;

namespace {

struct Flags {
  double tol = kNumericTol;
  double collapse_tol = kCollapseTol;
  int cap = kMinimizeCap;
  std::uint64_t seed = 0;
  std::string out;
};

template <class F>
auto with_reader(const std::string& file, F&& body) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  io::Reader r(in, file);
  return body(r);
}

fs::path dir_of(const std::string& file) {
  const fs::path p = fs::path(file).parent_path();
  return p.empty() ? fs::path(".") : p;
}

void emit(const io::Report& report, const Flags&) { std::cout << report.str(); }

int cmd_lift(const std::string& file, double base_z, const Flags& flags) {
  const std::vector<PlanarPoint> planar = with_reader(file, [](io::Reader& r) { return io::read_planar(r); });
  const HorizontalPath path = HorizontalPath::lift(planar, base_z);
  if (!flags.out.empty()) io::write_atomic(flags.out, io::format_hpath(path));
  io::Report rep;
  rep.add("vertices", path.size());
  rep.add("dz", path.final_z() - path.base_z());
  rep.add("final_z", path.final_z());
  rep.add("length", cc_length(path));
  emit(rep, flags);
  return 0;
}

void add_certificates(io::Report& rep, const CertificateReport& cert, const std::string& prefix = "") {
  rep.add(prefix + "lip_gamma", cert.lip_gamma);
  rep.add(prefix + "lip_h", cert.lip_h);
  for (const auto& c : cert.checks) {
    rep.add(prefix + c.name, c.lhs);
    rep.add(prefix + c.name + "_bound", c.rhs);
    rep.add(prefix + c.name + "_slack", c.slack());
    rep.add(prefix + c.name + "_pass", std::string(c.passed ? "1" : "0"));
  }
}

int cmd_factorize(const std::string& file, const Flags& flags) {
  io::GridFile grid = with_reader(file, [&](io::Reader& r) { return io::read_grid_file(r, dir_of(file)); });
  FactorizationOptions opt;
  opt.collapse_tol = flags.collapse_tol;
  opt.tol = flags.tol;
  return std::visit(
      [&](const auto& h) {
        using S = typename std::decay_t<decltype(h)>::Space;
        const S& space = std::get<S>(grid.space);
        check_boundary(space, h, flags.tol);
        const Factorization<S> f = quotient_tree(space, h, opt);
        const CertificateReport cert =
            validate_factorization(space, f, h, flags.tol, opt.collapse_tol + opt.tree_tol);
        if (!flags.out.empty()) io::write_atomic(flags.out, io::format_tree(f.tree));
        io::Report rep;
        rep.add("nodes", f.tree.node_count());
        rep.add("edges", f.tree.edge_count());
        rep.add("classes", f.representatives.size());
        add_certificates(rep, cert);
        rep.add("status", std::string(cert.passed() ? "ok" : "certificate_failure"));
        emit(rep, flags);
        require(cert);
        return 0;
      },
      grid.grid);
}

template <class S>
int run_core(const S& space, const TargetPath<typename S::Point>& gamma, const std::string& moves_file,
             const Flags& flags) {
  MoveSequence<typename S::Point> moves;
  if (!moves_file.empty()) {
    moves = with_reader(moves_file, [&](io::Reader& r) { return io::read_moves(r, space); });
  }
  MinimizeOptions opt;
  opt.tol = flags.tol;
  opt.cap = flags.cap;
  opt.factor.collapse_tol = flags.collapse_tol;
  opt.factor.tol = flags.tol;
  const CoreResult<S> core = minimize(space, gamma, moves, opt);
  if (!flags.out.empty()) io::write_atomic(flags.out, io::format_core(core));
  io::Report rep;
  rep.add("ell_min", core.ell_min);
  rep.add("iterations", core.iterations);
  rep.add("core_vertices", core.core.size());
  rep.add("lip_gamma", core.lip_gamma);
  for (std::size_t i = 0; i < core.steps.size(); ++i) {
    const std::string p = "step" + std::to_string(i + 1) + "_";
    const ShorteningStats& st = core.steps[i];
    add_certificates(rep, core.certificates[i], p);
    rep.add(p + "length_beta", st.length_beta);
    rep.add(p + "length_beta_prime", st.length_beta_prime);
    rep.add(p + "lip_beta_prime", st.lip_beta_prime);
    rep.add(p + "lip_h_prime", st.lip_h_prime);
    rep.add(p + "lip_g", st.lip_g);
    rep.add(p + "image_residual", st.image_residual);
    rep.add(p + "g_image_residual", st.g_image_residual);
  }
  emit(rep, flags);
  return 0;
}

int cmd_core(const std::string& file, const std::string& moves_file, const Flags& flags) {
  io::PathFile pf = with_reader(file, [&](io::Reader& r) { return io::read_path_file(r, dir_of(file)); });
  return std::visit(
      [&](const auto& space) {
        using S = std::decay_t<decltype(space)>;
        return run_core(space, std::get<TargetPath<typename S::Point>>(pf.path), moves_file, flags);
      },
      pf.space);
}

int cmd_validate(const std::string& file, const Flags& flags) {
  const DistanceTable d = with_reader(file, [](io::Reader& r) { return io::read_table(r); });
  const FourPointReport report = four_point_check(d, flags.tol);
  io::Report rep;
  rep.add("size", d.size());
  rep.add("is_tree_metric", std::string(report.is_tree_metric ? "1" : "0"));
  rep.add("worst_violation", report.worst_violation);
  rep.add("witness", std::to_string(report.witness[0]) + " " + std::to_string(report.witness[1]) + " " +
                         std::to_string(report.witness[2]) + " " + std::to_string(report.witness[3]));
  emit(rep, flags);
  return report.is_tree_metric ? 0 : 2;
}

int cmd_gen(std::size_t tree_size, std::size_t m, std::size_t n, const Flags& flags) {
  if (flags.out.empty()) throw InputError("gen needs --out <directory>");
  const Instance inst = random_instance(flags.seed, tree_size, {m, n});
  io::write_instance(flags.out, inst);
  io::Report rep;
  rep.add("seed", static_cast<std::size_t>(flags.seed));
  rep.add("tree_nodes", inst.tree->node_count());
  rep.add("gamma_vertices", inst.gamma.size());
  rep.add("moves", inst.moves.moves.size());
  rep.add("grid_rows", inst.homotopy.rows());
  rep.add("grid_cols", inst.homotopy.cols());
  rep.add("truth", inst.truth);
  emit(rep, flags);
  return 0;
}

int cmd_ccdist(const std::vector<double>& c, const Flags& flags) {
  const HPoint p{c[0], c[1], c[2]};
  const HPoint q{c[3], c[4], c[5]};
  io::Report rep;
  rep.add("distance", cc_distance(p, q, flags.tol));
  emit(rep, flags);
  return 0;
}

void print_witness(const std::array<std::size_t, 4>& w, double violation) {
  std::cout << "witness " << w[0] << " " << w[1] << " " << w[2] << " " << w[3] << "\n";
  std::cout << "violation " << io::format_real(violation) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz path cores in metric trees and the Heisenberg group"};
  app.require_subcommand(1);
  Flags flags;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", flags.tol, "numeric tolerance")->capture_default_str();
    sub->add_option("--collapse-tol", flags.collapse_tol, "pseudo-distance collapse threshold")
        ->capture_default_str();
    sub->add_option("--cap", flags.cap, "minimizer iteration cap")->capture_default_str();
    sub->add_option("--seed", flags.seed, "random seed")->capture_default_str();
    sub->add_option("--out", flags.out, "output file or directory");
  };

  std::string input;
  std::string moves_file;
  double base_z = 0.0;
  std::size_t tree_size = 8;
  std::size_t rows = 16;
  std::size_t cols = 64;
  std::vector<double> coords;

  auto* lift = app.add_subcommand("lift", "lift a planar polyline to a horizontal path");
  lift->add_option("file", input, "planar path file")->required();
  lift->add_option("--base-z", base_z, "height of the first vertex");
  common(lift);

  auto* factorize = app.add_subcommand("factorize", "factor a grid homotopy through its quotient tree");
  factorize->add_option("file", input, "grid homotopy file")->required();
  common(factorize);

  auto* core = app.add_subcommand("core", "minimize a path within its generated class");
  core->add_option("file", input, "path file")->required();
  core->add_option("moves", moves_file, "move sequence file");
  common(core);

  auto* validate = app.add_subcommand("validate", "four-point check of a distance table");
  validate->add_option("file", input, "distance table file")->required();
  common(validate);

  auto* gen = app.add_subcommand("gen", "write a random instance bundle");
  gen->add_option("--tree-size", tree_size, "tree node count")->capture_default_str();
  gen->add_option("--rows", rows, "row budget m")->capture_default_str();
  gen->add_option("--cols", cols, "column budget n")->capture_default_str();
  common(gen);

  auto* ccdist = app.add_subcommand("ccdist", "Carnot-Caratheodory distance between two points");
  ccdist->add_option("coords", coords, "x1 y1 z1 x2 y2 z2")->expected(6)->required();
  common(ccdist);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*lift) return cmd_lift(input, base_z, flags);
    if (*factorize) return cmd_factorize(input, flags);
    if (*core) return cmd_core(input, moves_file, flags);
    if (*validate) return cmd_validate(input, flags);
    if (*gen) return cmd_gen(tree_size, rows, cols, flags);
    if (*ccdist) {
      if (ccdist->count("--tol") == 0) flags.tol = kCcTol;
      return cmd_ccdist(coords, flags);
    }
  } catch (const NotTreeLike& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_witness(e.witness(), e.violation());
    return 2;
  } catch (const QuotientInconsistent& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "vertex " << e.vertex() << "\nrepresentative " << e.representative() << "\ngap "
              << io::format_real(e.gap()) << "\n";
    return 2;
  } catch (const CertificateFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InternalConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "previous_length " << io::format_real(e.previous_length()) << "\nlast_length "
              << io::format_real(e.last_length()) << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
