#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace curvregge {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double>;

/// Counterclockwise quarter-turn: J*(x,y) = (y,-x).
inline Mat2 quarter_turn() {
  Mat2 j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

/// Rotate a vector by the quarter-turn J. For an edge tangent oriented
/// counterclockwise around a triangle, this is the outward unit normal.
inline Vec2 rotate_quarter(const Vec2& v) { return Vec2(v.y(), -v.x()); }

/// A metric lost positive definiteness at an evaluation point.
class SpdError : public std::runtime_error {
 public:
  SpdError(std::string what, int triangle = -1, Vec2 point = Vec2::Zero(),
           double t = -1.0)
      : std::runtime_error(std::move(what)),
        triangle(triangle),
        point(std::move(point)),
        t(t) {}
  int triangle;  ///< offending element, -1 if not element-local
  Vec2 point;    ///< world coordinates of the offending point
  double t;      ///< homotopy parameter, -1 if not applicable
};

/// Linear solver failed (non-convergence or loss of positive definiteness).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid mesh, file, or parameter input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace curvregge
