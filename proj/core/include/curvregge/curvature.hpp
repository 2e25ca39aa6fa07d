#pragma once

#include <string>
#include <vector>

#include "curvregge/assembly.hpp"
#include "curvregge/lagrange.hpp"
#include "curvregge/regge.hpp"
#include "curvregge/types.hpp"

namespace curvregge {

/// Discrete Gaussian curvature of a positive definite Regge metric, plus the
/// diagnostics of the solve that produced it.
struct CurvatureResult {
  LagrangeFunction kappa;
  VecX rhs;
  MassKind mass_kind = MassKind::consistent;
  SolverDiagnostics solver;
  SpdReport spd;
  QuadratureConfig quad;
};

/// Per-vertex angle defects of a piecewise constant (degree-0) metric.
struct AngleDefectReport {
  std::vector<int> interior_vertices;
  std::vector<double> defects;                       ///< 2*pi - sum of angles
  std::vector<std::vector<double>> angles;           ///< per vertex, per star triangle
};

/// Solve for the unique kappa_h in the degree-q Lagrange space with
///   <kappa_h, v_h>_{g_h} = 1/2 * integral over [0,1] of
///                          b_h((1-t)delta + t g_h; g_h - delta, v_h) dt.
/// Requires g_h positive definite at the quadrature points (SpdError
/// otherwise).
CurvatureResult discrete_curvature(const ReggeFunction& g_h, const LagrangeSpace& space,
                                   const QuadratureConfig& quad,
                                   MassKind mass_kind = MassKind::consistent,
                                   double solver_tol = 1e-12, int solver_max_iter = -1);

/// Interior angle at `corner` of triangle tri under a constant metric g,
/// from the law of cosines of the three g-edge lengths. Lengths must satisfy
/// the triangle inequality (up to a 1e-12 guard) or a ConfigError is thrown.
double metric_angle(double adjacent_a, double adjacent_b, double opposite);

/// Angle defect 2*pi - sum of star angles at an interior vertex, with edge
/// lengths measured by a degree-0 Regge metric: the squared length of edge e
/// is |e|^2 times the edge dof. Well defined across elements by
/// tangential-tangential continuity.
double angle_defect(const ReggeFunction& g_h, int vertex);

AngleDefectReport angle_defect_report(const ReggeFunction& g_h);

/// Check of the angle-defect linearization at a degree-0 metric: compares
/// the central finite difference of the defect under g_h + eps*sigma_h with
/// half the bilinear form b_h(g_h; sigma_h, phi_i).
struct LinearizationCheck {
  double fd_derivative = 0.0;
  double half_b_h = 0.0;
  double discrepancy = 0.0;
};

LinearizationCheck verify_linearization(const ReggeFunction& g_h,
                                        const ReggeFunction& sigma_h, int vertex,
                                        double eps, const QuadratureConfig& quad);

/// <kappa, phi_i>_{g_h}: row i of the consistent mass matrix applied to the
/// coefficients of kappa.
double pairing(const LagrangeFunction& kappa, int dof, const ReggeFunction& g_h,
               const QuadratureConfig& quad);
VecX pairing_all(const LagrangeFunction& kappa, const ReggeFunction& g_h,
                 const QuadratureConfig& quad);

/// Legacy ASCII VTK export of a Lagrange field sampled at the mesh vertices
/// (POINT_DATA scalar "kappa_h").
void write_vtk(const std::string& path, const LagrangeFunction& u,
               const std::string& field_name = "kappa_h");

}  // namespace curvregge
