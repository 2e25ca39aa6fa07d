#include "curvregge/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace curvregge {

namespace {

// g-length of mesh edge e under a degree-0 Regge metric: the edge dof is the
// value of tau^T g tau, so the squared g-length is |e|^2 * dof. The lattice
// of degree 0 stores one sub-edge per mesh edge, in mesh-edge order.
double edge_length_g(const ReggeFunction& g_h, int edge) {
  const double dof = g_h.dofs()(edge);
  if (!(dof > 0.0))
    throw SpdError("degree-0 metric has a nonpositive edge dof", -1,
                   g_h.space().mesh().vertex(g_h.space().mesh().edge(edge).v[0]));
  return g_h.space().mesh().edge_length(edge) * std::sqrt(dof);
}

void require_degree0(const ReggeFunction& g_h, const char* what) {
  if (g_h.space().degree() != 0)
    throw ConfigError(std::string(what) + " requires a degree-0 Regge function");
}

}  // namespace

double metric_angle(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
    throw ConfigError("metric_angle: nonpositive edge length");
  double cosine = (a * a + b * b - c * c) / (2.0 * a * b);
  if (std::abs(cosine) > 1.0 + 1e-12)
    throw ConfigError("metric lengths violate the triangle inequality");
  cosine = std::clamp(cosine, -1.0, 1.0);
  return std::acos(cosine);
}

double angle_defect(const ReggeFunction& g_h, int vertex) {
  require_degree0(g_h, "angle_defect");
  const Mesh& mesh = g_h.space().mesh();
  if (vertex < 0 || vertex >= mesh.n_vertices())
    throw ConfigError("vertex index out of range");
  if (mesh.vertex_on_boundary(vertex))
    throw ConfigError("angle defect is defined at interior vertices");
  double angle_sum = 0.0;
  for (int t : vertex_star(mesh, vertex).triangles) {
    const int corner = mesh.local_corner(t, vertex);
    const auto& te = mesh.tri_edges(t);
    // local edges (0,1),(1,2),(2,0): edge `corner+1` is opposite `corner`
    const double opposite = edge_length_g(g_h, te[(corner + 1) % 3]);
    const double adj_a = edge_length_g(g_h, te[corner]);
    const double adj_b = edge_length_g(g_h, te[(corner + 2) % 3]);
    angle_sum += metric_angle(adj_a, adj_b, opposite);
  }
  return 2.0 * M_PI - angle_sum;
}

AngleDefectReport angle_defect_report(const ReggeFunction& g_h) {
  require_degree0(g_h, "angle_defect_report");
  const Mesh& mesh = g_h.space().mesh();
  AngleDefectReport report;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.vertex_on_boundary(v)) continue;
    report.interior_vertices.push_back(v);
    std::vector<double> angles;
    double angle_sum = 0.0;
    for (int t : vertex_star(mesh, v).triangles) {
      const int corner = mesh.local_corner(t, v);
      const auto& te = mesh.tri_edges(t);
      const double theta = metric_angle(edge_length_g(g_h, te[corner]),
                                        edge_length_g(g_h, te[(corner + 2) % 3]),
                                        edge_length_g(g_h, te[(corner + 1) % 3]));
      angles.push_back(theta);
      angle_sum += theta;
    }
    report.defects.push_back(2.0 * M_PI - angle_sum);
    report.angles.push_back(std::move(angles));
  }
  return report;
}

CurvatureResult discrete_curvature(const ReggeFunction& g_h, const LagrangeSpace& space,
                                   const QuadratureConfig& quad, MassKind mass_kind,
                                   double solver_tol, int solver_max_iter) {
  const TriangleRule rule = TriangleRule::create(quad.tri_degree);
  const SpdReport spd = check_spd(g_h, rule);
  if (!spd.spd)
    throw SpdError("discrete metric is not in the positive definite cone "
                   "(min eigenvalue " +
                       std::to_string(spd.min_eigenvalue) + ")",
                   spd.triangle, spd.point);

  const VecX rhs = assemble_curvature_rhs(g_h, space, quad);
  const ReggeMetricField g_field(g_h);
  const SparseMat mass = assemble_mass_matrix(g_field, space, quad, mass_kind);
  auto [coeffs, solver] = solve_spd(mass, rhs, solver_tol, solver_max_iter);
  return CurvatureResult{LagrangeFunction(space, std::move(coeffs)), rhs, mass_kind,
                         solver, spd, quad};
}

LinearizationCheck verify_linearization(const ReggeFunction& g_h,
                                        const ReggeFunction& sigma_h, int vertex,
                                        double eps, const QuadratureConfig& quad) {
  require_degree0(g_h, "verify_linearization");
  require_degree0(sigma_h, "verify_linearization");
  const ReggeSpace& space = g_h.space();
  if (&space != &sigma_h.space())
    throw ConfigError("g_h and sigma_h must share a space");
  // dof functionals are linear, so perturbed metrics are coefficient sums
  const ReggeFunction plus(space, g_h.dofs() + eps * sigma_h.dofs());
  const ReggeFunction minus(space, g_h.dofs() - eps * sigma_h.dofs());
  LinearizationCheck check;
  check.fd_derivative =
      (angle_defect(plus, vertex) - angle_defect(minus, vertex)) / (2.0 * eps);

  const LagrangeSpace v_space(space.mesh(), 1);
  const int dof = v_space.vertex_dof(vertex);
  if (dof < 0) throw ConfigError("vertex is not an interior dof");
  const ReggeMetricField g_field(g_h);
  const ReggeMetricField sigma_field(sigma_h);
  check.half_b_h = 0.5 * assemble_b_h(g_field, sigma_field, v_space, quad)(dof);
  check.discrepancy = std::abs(check.fd_derivative - check.half_b_h);
  return check;
}

VecX pairing_all(const LagrangeFunction& kappa, const ReggeFunction& g_h,
                 const QuadratureConfig& quad) {
  const ReggeMetricField g_field(g_h);
  const SparseMat mass =
      assemble_mass_matrix(g_field, kappa.space(), quad, MassKind::consistent);
  return mass * kappa.coefficients();
}

double pairing(const LagrangeFunction& kappa, int dof, const ReggeFunction& g_h,
               const QuadratureConfig& quad) {
  return pairing_all(kappa, g_h, quad)(dof);
}

void write_vtk(const std::string& path, const LagrangeFunction& u,
               const std::string& field_name) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write vtk file: " + path);
  const Mesh& mesh = u.space().mesh();
  out << "# vtk DataFile Version 3.0\n"
      << field_name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  char buf[120];
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Vec2& p : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g 0\n", p.x(), p.y());
    out << buf;
  }
  out << "CELLS " << mesh.n_triangles() << " " << 4 * mesh.n_triangles() << "\n";
  for (const auto& t : mesh.triangles())
    out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.n_triangles() << "\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
  out << "POINT_DATA " << mesh.n_vertices() << "\n";
  out << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    // vertex nodes share the vertex id at every degree
    std::snprintf(buf, sizeof(buf), "%.17g\n", u.node_value(v));
    out << buf;
  }
}

}  // namespace curvregge
