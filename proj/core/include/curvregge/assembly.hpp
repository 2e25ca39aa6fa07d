#pragma once

#include <utility>

#include "curvregge/lagrange.hpp"
#include "curvregge/metric.hpp"
#include "curvregge/quadrature.hpp"
#include "curvregge/regge.hpp"
#include "curvregge/types.hpp"

namespace curvregge {

enum class MassKind { consistent, lumped };

/// Symmetric sparse system over the interior Lagrange dofs.
struct LinearSystem {
  SparseMat matrix;
  VecX rhs;
};

struct SolverDiagnostics {
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Assemble b_h(G; sigma, phi_i) for every interior basis function phi_i:
///
///   sum_K integral of <S_G sigma, Hess_G v>_G against the G-volume form
///   + sum over all mesh edges of the tangential-tangential trace of sigma
///     paired with the jump of the one-sided G-normal derivatives of v.
///
/// G must be positive definite at every quadrature point (SpdError
/// otherwise, reporting the location); sigma is any symmetric matrix field
/// with tangential-tangential continuity. t_label only decorates SPD error
/// messages.
VecX assemble_b_h(const MetricField& G, const MetricField& sigma, const LagrangeSpace& space,
                  const QuadratureConfig& quad, double t_label = -1.0);

/// Right-hand side of the discrete curvature problem:
///   rhs_i = 1/2 * integral over t in [0,1] of
///           b_h((1-t)*delta + t*g_h; g_h - delta, phi_i)
/// by Gauss-Legendre in t. The discrete overload represents g_h - delta
/// exactly by coefficient subtraction (the identity interpolates exactly at
/// every degree).
VecX assemble_curvature_rhs(const ReggeFunction& g_h, const LagrangeSpace& space,
                            const QuadratureConfig& quad);
/// Same homotopy integral with an analytic metric endpoint (no interpolation).
VecX assemble_curvature_rhs(const MetricField& g, const LagrangeSpace& space,
                            const QuadratureConfig& quad);

/// Mass matrix M_ij = integral of phi_i phi_j sqrt(det g) over the domain,
/// restricted to interior dofs. The lumped variant replaces each row by its
/// row sum on the diagonal.
SparseMat assemble_mass_matrix(const MetricField& g, const LagrangeSpace& space,
                               const QuadratureConfig& quad,
                               MassKind kind = MassKind::consistent);

/// Jacobi-preconditioned conjugate gradients. Deterministic; throws
/// SolverError on non-convergence or detected loss of positive definiteness.
std::pair<VecX, SolverDiagnostics> solve_spd(const SparseMat& matrix, const VecX& rhs,
                                             double rel_tol = 1e-12, int max_iter = -1);
std::pair<VecX, SolverDiagnostics> solve_spd(const LinearSystem& system,
                                             double rel_tol = 1e-12, int max_iter = -1);

}  // namespace curvregge
