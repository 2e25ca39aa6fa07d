#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvregge/types.hpp"

namespace curvregge {

/// Axis-aligned rectangle used by the structured mesh generator.
struct Rect {
  double xmin = -1.0, ymin = -1.0, xmax = 1.0, ymax = 1.0;
};

/// Triangulation of a simply connected planar polygon.
///
/// Triangles are stored counterclockwise, edges are deduplicated vertex
/// pairs with adjacency back-references, and the shape-regularity and
/// quasi-uniformity ratios are recorded as diagnostics. Immutable after
/// construction; safe for concurrent reads.
class Mesh {
 public:
  struct Edge {
    std::array<int, 2> v{-1, -1};      ///< endpoint vertex ids, v[0] < v[1]
    std::array<int, 2> tris{-1, -1};   ///< adjacent triangles (tris[1] = -1 on boundary)
    std::array<int, 2> orient{0, 0};   ///< +1 if the triangle traverses v[0]->v[1] ccw
    bool boundary = false;
  };

  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_triangles() const { return static_cast<int>(triangles_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& tri(int t) const { return triangles_[t]; }
  Vec2 tri_vertex(int t, int corner) const { return vertices_[triangles_[t][corner]]; }

  bool vertex_on_boundary(int v) const { return vertex_on_boundary_[v]; }
  /// Global edge ids of triangle t, in local-edge order (0,1),(1,2),(2,0).
  const std::array<int, 3>& tri_edges(int t) const { return tri_edges_[t]; }
  /// Local corner of vertex v in triangle t, or -1.
  int local_corner(int t, int v) const;

  double area(int t) const { return area_[t]; }
  double h() const { return h_; }
  double h_K(int t) const { return h_K_[t]; }
  double inradius(int t) const { return rho_K_[t]; }
  /// max over K of h_K / rho_K.
  double shape_regularity() const { return shape_regularity_; }
  /// max over K of h / h_K.
  double quasi_uniformity() const { return quasi_uniformity_; }

  Vec2 barycentric_to_world(int t, const Vec3& lambda) const;
  /// Euclidean gradients of the three barycentric coordinates on triangle t.
  const std::array<Vec2, 3>& barycentric_gradients(int t) const { return bary_grad_[t]; }

  /// Euclidean edge vector from edge.v[0] to edge.v[1].
  Vec2 edge_vector(int e) const { return vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]; }
  double edge_length(int e) const { return edge_vector(e).norm(); }

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<bool> vertex_on_boundary_;
  std::vector<double> area_, h_K_, rho_K_;
  std::vector<std::array<Vec2, 3>> bary_grad_;
  double h_ = 0.0, shape_regularity_ = 0.0, quasi_uniformity_ = 0.0;
};

/// Triangles incident to a vertex.
struct VertexStar {
  int vertex = -1;
  std::vector<int> triangles;
};

/// Uniform triangulation of a rectangle: n subdivisions per side, each cell
/// split along the (low,low)-(high,high) diagonal. (n+1)^2 vertices, 2n^2
/// triangles.
Mesh build_uniform_square_mesh(int n, const Rect& domain = Rect{});

/// Displace every interior vertex by a seeded random vector of magnitude at
/// most amplitude_fraction times its shortest incident edge. Boundary
/// vertices are fixed. Throws if any triangle inverts. Deterministic for a
/// fixed seed.
Mesh perturb_interior_vertices(const Mesh& mesh, double amplitude_fraction,
                               std::uint64_t seed);

VertexStar vertex_star(const Mesh& mesh, int vertex);

/// Plain-text mesh format: "mesh 2d v=<V> t=<T>", V lines "x y",
/// T lines "i j k" (0-based).
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

// ---------------------------------------------------------------------------
// Subdivision edge lattice
// ---------------------------------------------------------------------------

/// One globally identified lattice sub-edge. Sub-edges lying on a mesh edge
/// are shared by both adjacent triangles and carry canonical world data
/// computed once from the mesh edge, so the two sides agree bitwise.
struct LatticeSubEdge {
  Vec2 midpoint;                    ///< world midpoint z_e
  Vec2 direction;                   ///< world direction (unnormalized)
  int mesh_edge = -1;               ///< owning mesh edge, -1 for interior sub-edges
  std::array<int, 2> tris{-1, -1};  ///< triangles containing this sub-edge
  Vec2 tangent() const { return direction.normalized(); }
};

/// Per-triangle view of a sub-edge, in that triangle's barycentric frame.
struct LocalSubEdge {
  int global = -1;       ///< index into SubdivisionLattice::sub_edges
  Vec3 bary_a, bary_b;   ///< endpoints
  Vec3 bary_mid;
  bool on_triangle_boundary = false;
};

/// The degree-r subdivision lattice: each triangle is partitioned along the
/// barycentric lines lambda_i = j/(r+1) into (r+1)^2 subtriangles, and the
/// sub-edges of that partition carry the Regge degrees of freedom. Each
/// triangle owns 3(r+1)(r+2)/2 local sub-edges; sub-edges on interior mesh
/// edges are identified between the two neighbors.
struct SubdivisionLattice {
  int degree = 0;
  std::vector<LatticeSubEdge> sub_edges;
  std::vector<std::vector<LocalSubEdge>> local;  ///< per triangle

  int n_global() const { return static_cast<int>(sub_edges.size()); }
  int per_triangle() const { return 3 * (degree + 1) * (degree + 2) / 2; }
};

/// Supported degrees are r in {0,1,2,3}.
SubdivisionLattice subdivision_lattice(const Mesh& mesh, int degree);

constexpr int kMaxReggeDegree = 3;
constexpr int kMaxLagrangeDegree = 3;

}  // namespace curvregge
