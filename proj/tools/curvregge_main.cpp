// curvregge: discrete Gaussian curvature of piecewise-polynomial Regge
// metrics on triangulated planar domains.
//
// Subcommands:
//   curvature     solve for kappa_h of an interpolated or imported metric
//   conv          refinement study of the curvature error for the test metric
//   interp-study  refinement study of the metric interpolation error alone
//   verify        run the built-in property suites
//
// Exit codes: 0 ok, 1 configuration error, 2 metric lost positive
// definiteness, 3 linear solver failure, 4 property-suite failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "curvregge/analysis.hpp"
#include "curvregge/curvature.hpp"
#include "curvregge/parallel.hpp"
#include "curvregge/verify.hpp"

namespace {

using namespace curvregge;

struct GenSpec {
  int n = 16;
  double perturb = 0.2;
  std::uint64_t seed = 42;
};

GenSpec parse_gen(const std::string& spec) {
  GenSpec g;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("bad --gen item: " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "n")
      g.n = std::stoi(value);
    else if (key == "perturb")
      g.perturb = std::stod(value);
    else if (key == "seed")
      g.seed = std::stoull(value);
    else
      throw ConfigError("unknown --gen key: " + key);
  }
  return g;
}

struct Options {
  int r = 2;
  int q = 1;
  std::string mesh_path;
  std::string gen = "n=16,perturb=0.2,seed=42";
  std::string metric = "gexact";
  std::string exact = "none";
  std::string out;
  std::string sizes = "8,16,32,64";
  std::string property;
  std::uint64_t seed = 42;
  QuadratureConfig quad;
  double solver_tol = 1e-12;
  int solver_maxit = -1;
  bool lumped = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--r", opt.r, "Regge degree (0..3)");
  cmd->add_option("--q", opt.q, "Lagrange degree (1..3)");
  cmd->add_option("--mesh", opt.mesh_path, "mesh file (text format)");
  cmd->add_option("--gen", opt.gen, "generator spec n=<n>,perturb=<a>,seed=<s>");
  cmd->add_option("--tri-degree", opt.quad.tri_degree, "triangle rule exactness degree");
  cmd->add_option("--edge-points", opt.quad.edge_points, "Gauss points per edge");
  cmd->add_option("--t-points", opt.quad.t_points, "Gauss points for the t-integral");
  cmd->add_option("--solver-tol", opt.solver_tol, "relative solver tolerance");
  cmd->add_option("--solver-maxit", opt.solver_maxit,
                  "iteration cap for the mass solve (-1 = automatic)");
  cmd->add_flag("--lumped", opt.lumped, "use the lumped mass matrix");
  cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
  cmd->add_option("--seed", opt.seed, "seed for studies and property suites");
  cmd->add_option("--out", opt.out, "output path (or prefix)");
}

Mesh make_mesh(const Options& opt) {
  if (!opt.mesh_path.empty()) return read_mesh_file(opt.mesh_path);
  const GenSpec g = parse_gen(opt.gen);
  return perturb_interior_vertices(build_uniform_square_mesh(g.n), g.perturb, g.seed);
}

void echo_config(const Options& opt, const std::string& cmd) {
  std::cout << "# curvregge " << cmd << " r=" << opt.r << " q=" << opt.q << " mesh="
            << (opt.mesh_path.empty() ? "gen:" + opt.gen : opt.mesh_path)
            << " metric=" << opt.metric << " " << opt.quad.describe()
            << " solver-tol=" << opt.solver_tol
            << " mass=" << (opt.lumped ? "lumped" : "consistent")
            << " seed=" << opt.seed << " threads=" << num_threads() << "\n";
}

std::vector<int> parse_sizes(const std::string& csv) {
  std::vector<int> sizes;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) sizes.push_back(std::stoi(item));
  if (sizes.empty()) throw ConfigError("--sizes must name at least one mesh size");
  return sizes;
}

int cmd_curvature(const Options& opt) {
  echo_config(opt, "curvature");
  const Mesh mesh = make_mesh(opt);
  const ReggeSpace regge(mesh, opt.r);
  const LagrangeSpace lagrange(mesh, opt.q);

  std::optional<ReggeFunction> g_h;
  if (opt.metric == "gexact") {
    g_h = interpolate_metric(regge, *test_metric_field());
  } else if (opt.metric == "identity") {
    g_h = interpolate_metric(regge, ConstantMetric(Mat2::Identity()));
  } else if (opt.metric.rfind("csv:", 0) == 0) {
    g_h = ReggeFunction(regge, read_dof_csv(opt.metric.substr(4)));
  } else {
    throw ConfigError("unknown --metric (use gexact, identity, or csv:<path>)");
  }

  const CurvatureResult result =
      discrete_curvature(*g_h, lagrange, opt.quad,
                         opt.lumped ? MassKind::lumped : MassKind::consistent,
                         opt.solver_tol, opt.solver_maxit);
  std::printf("mesh: v=%d t=%d e=%d h=%.6g\n", mesh.n_vertices(), mesh.n_triangles(),
              mesh.n_edges(), mesh.h());
  std::printf("spd: min-eig=%.6g max-eig=%.6g points=%d\n", result.spd.min_eigenvalue,
              result.spd.max_eigenvalue, result.spd.points_checked);
  std::printf("solver: iterations=%d rel-residual=%.3e\n", result.solver.iterations,
              result.solver.rel_residual);

  const QuadratureConfig& quad = opt.quad;
  const double norm = l2_error(result.kappa, [](const Vec2&) { return 0.0; }, quad);
  std::printf("kappa_l2_norm: %.12e\n", norm);
  if (opt.exact == "gexact") {
    const double err = l2_error(
        result.kappa, [](const Vec2& p) { return exact_test_curvature(p.x(), p.y()); },
        quad);
    std::printf("kappa_l2_error: %.12e\n", err);
  }
  if (!opt.out.empty()) {
    write_nodal_csv(opt.out + ".csv", result.kappa);
    write_vtk(opt.out + ".vtk", result.kappa);
    write_dof_csv(opt.out + ".gh.csv", *g_h);
    std::printf("wrote %s.csv %s.vtk %s.gh.csv\n", opt.out.c_str(), opt.out.c_str(),
                opt.out.c_str());
  }
  return 0;
}

int cmd_conv(const Options& opt) {
  echo_config(opt, "conv");
  const GenSpec g = parse_gen(opt.gen);
  const ConvergenceTable table = run_convergence_study(
      opt.r, opt.q, parse_sizes(opt.sizes), opt.seed, opt.quad,
      opt.lumped ? MassKind::lumped : MassKind::consistent, g.perturb);
  const std::string csv = table.to_csv();
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    if (!f) throw ConfigError("cannot write " + opt.out);
    f << csv;
    std::printf("wrote %s\n", opt.out.c_str());
  }
  std::cout << csv;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    std::printf("order h=%.4g -> %.4g: l2 %.3f\n", table.rows[i - 1].h, table.rows[i].h,
                *table.rows[i].l2_order);
  return 0;
}

int cmd_interp_study(const Options& opt) {
  echo_config(opt, "interp-study");
  const GenSpec g = parse_gen(opt.gen);
  const InterpolationTable table = run_interpolation_study(
      opt.r, parse_sizes(opt.sizes), opt.seed, opt.quad, g.perturb);
  const std::string csv = table.to_csv();
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    if (!f) throw ConfigError("cannot write " + opt.out);
    f << csv;
    std::printf("wrote %s\n", opt.out.c_str());
  }
  std::cout << csv;
  return 0;
}

int cmd_verify(const Options& opt) {
  echo_config(opt, "verify");
  const char* mutation_env = std::getenv("CURVREGGE_VERIFY_MUTATE");
  const std::string mutation = mutation_env ? mutation_env : "";
  const auto results = run_properties(opt.property, opt.seed, opt.quad, mutation);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete Gaussian curvature of Regge metric fields"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* curvature = app.add_subcommand("curvature", "compute kappa_h on one mesh");
  add_common(curvature, opt);
  curvature->add_option("--metric", opt.metric,
                        "metric to interpolate: gexact, identity, csv:<path>");
  curvature->add_option("--exact", opt.exact,
                        "report the L2 error against this exact curvature (gexact)");

  CLI::App* conv = app.add_subcommand("conv", "curvature convergence study");
  add_common(conv, opt);
  conv->add_option("--sizes", opt.sizes, "comma-separated mesh subdivisions");

  CLI::App* interp = app.add_subcommand("interp-study", "interpolation rates only");
  add_common(interp, opt);
  interp->add_option("--sizes", opt.sizes, "comma-separated mesh subdivisions");

  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  add_common(verify, opt);
  verify->add_option("--property", opt.property,
                     "run one property: frames, s-g-identity, angle-defect, "
                     "linearization, flat-metric");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message / help text
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (const char* env = std::getenv("CURVREGGE_THREADS"))
      set_num_threads(std::atoi(env));
    else
      set_num_threads(opt.threads);
    if (opt.r < 0 || opt.r > kMaxReggeDegree)
      throw ConfigError("--r out of supported range");
    if (opt.q < 1 || opt.q > kMaxLagrangeDegree)
      throw ConfigError("--q out of supported range");

    if (curvature->parsed()) return cmd_curvature(opt);
    if (conv->parsed()) return cmd_conv(opt);
    if (interp->parsed()) return cmd_interp_study(opt);
    if (verify->parsed()) return cmd_verify(opt);
    return 1;
  } catch (const SpdError& e) {
    std::cerr << "error (spd): " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "error (solver): " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
