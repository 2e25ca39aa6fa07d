#include "curvregge/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace curvregge {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

// Uniform double in [0,1) from the full 64-bit state; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = n_vertices();
  const int nt = n_triangles();
  if (nv < 3 || nt < 1) throw ConfigError("mesh needs at least one triangle");

  for (auto& t : triangles_) {
    for (int v : t)
      if (v < 0 || v >= nv) throw ConfigError("triangle vertex index out of range");
    double a = signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    if (a < 0.0) {  // normalize to counterclockwise
      std::swap(t[1], t[2]);
      a = -a;
    }
    if (!(a > 0.0)) throw ConfigError("degenerate triangle (zero area)");
    area_.push_back(a);
  }

  // Deduplicated edge table with adjacency.
  std::map<std::array<int, 2>, int> edge_index;
  tri_edges_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const int a = triangles_[t][k];
      const int b = triangles_[t][(k + 1) % 3];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) {
        Edge e;
        e.v = key;
        edges_.push_back(e);
      }
      Edge& e = edges_[it->second];
      const int slot = (e.tris[0] == -1) ? 0 : 1;
      if (slot == 1 && e.tris[1] != -1)
        throw ConfigError("edge shared by more than two triangles");
      e.tris[slot] = t;
      e.orient[slot] = (a == key[0]) ? +1 : -1;
      tri_edges_[t][k] = it->second;
    }
  }
  vertex_on_boundary_.assign(nv, false);
  for (auto& e : edges_) {
    e.boundary = (e.tris[1] == -1);
    if (e.boundary) {
      vertex_on_boundary_[e.v[0]] = true;
      vertex_on_boundary_[e.v[1]] = true;
    }
  }

  // Euler relation for a triangulated simply connected polygon.
  if (nv - n_edges() + nt != 1)
    throw ConfigError("mesh is not a triangulated simply connected polygon (V-E+F != 1)");

  // Element size and shape diagnostics.
  h_K_.resize(nt);
  rho_K_.resize(nt);
  bary_grad_.resize(nt);
  h_ = 0.0;
  shape_regularity_ = 0.0;
  for (int t = 0; t < nt; ++t) {
    const Vec2 p0 = tri_vertex(t, 0), p1 = tri_vertex(t, 1), p2 = tri_vertex(t, 2);
    const double l0 = (p1 - p0).norm(), l1 = (p2 - p1).norm(), l2 = (p0 - p2).norm();
    h_K_[t] = std::max({l0, l1, l2});
    rho_K_[t] = 2.0 * area_[t] / (l0 + l1 + l2);
    h_ = std::max(h_, h_K_[t]);
    shape_regularity_ = std::max(shape_regularity_, h_K_[t] / rho_K_[t]);

    Mat2 b;
    b.col(0) = p1 - p0;
    b.col(1) = p2 - p0;
    const Mat2 binv = b.inverse();
    bary_grad_[t][1] = binv.row(0).transpose();
    bary_grad_[t][2] = binv.row(1).transpose();
    bary_grad_[t][0] = -bary_grad_[t][1] - bary_grad_[t][2];
  }
  quasi_uniformity_ = 0.0;
  for (int t = 0; t < nt; ++t)
    quasi_uniformity_ = std::max(quasi_uniformity_, h_ / h_K_[t]);
}

int Mesh::local_corner(int t, int v) const {
  for (int k = 0; k < 3; ++k)
    if (triangles_[t][k] == v) return k;
  return -1;
}

Vec2 Mesh::barycentric_to_world(int t, const Vec3& lambda) const {
  return lambda[0] * tri_vertex(t, 0) + lambda[1] * tri_vertex(t, 1) +
         lambda[2] * tri_vertex(t, 2);
}

Mesh build_uniform_square_mesh(int n, const Rect& domain) {
  if (n < 1) throw ConfigError("subdivision count must be >= 1");
  if (!(domain.xmax > domain.xmin) || !(domain.ymax > domain.ymin))
    throw ConfigError("degenerate rectangle");
  const double dx = (domain.xmax - domain.xmin) / n;
  const double dy = (domain.ymax - domain.ymin) / n;
  std::vector<Vec2> verts;
  verts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.emplace_back(domain.xmin + i * dx, domain.ymin + j * dy);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      tris.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      tris.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  return Mesh(std::move(verts), std::move(tris));
}

Mesh perturb_interior_vertices(const Mesh& mesh, double amplitude_fraction,
                               std::uint64_t seed) {
  if (amplitude_fraction < 0.0) throw ConfigError("perturbation amplitude must be >= 0");
  std::vector<double> min_incident(mesh.n_vertices(), std::numeric_limits<double>::max());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const double len = mesh.edge_length(e);
    for (int v : mesh.edge(e).v)
      min_incident[v] = std::min(min_incident[v], len);
  }
  std::mt19937_64 rng(seed);
  std::vector<Vec2> verts = mesh.vertices();
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.vertex_on_boundary(v)) continue;
    const double angle = 2.0 * M_PI * unit_uniform(rng);
    const double radius = amplitude_fraction * min_incident[v] * unit_uniform(rng);
    verts[v] += radius * Vec2(std::cos(angle), std::sin(angle));
  }
  for (const auto& t : mesh.triangles())
    if (!(signed_area(verts[t[0]], verts[t[1]], verts[t[2]]) > 0.0))
      throw ConfigError("perturbation inverted a triangle; reduce the amplitude");
  return Mesh(std::move(verts), mesh.triangles());
}

VertexStar vertex_star(const Mesh& mesh, int vertex) {
  if (vertex < 0 || vertex >= mesh.n_vertices())
    throw ConfigError("vertex index out of range");
  VertexStar star;
  star.vertex = vertex;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    if (mesh.local_corner(t, vertex) >= 0) star.triangles.push_back(t);
  return star;
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

Mesh read_mesh(std::istream& in) {
  std::string word, dim;
  int nv = -1, nt = -1;
  in >> word >> dim;
  std::string vtok, ttok;
  in >> vtok >> ttok;
  if (word != "mesh" || dim != "2d" || vtok.rfind("v=", 0) != 0 || ttok.rfind("t=", 0) != 0)
    throw ConfigError("bad mesh header; expected 'mesh 2d v=<V> t=<T>'");
  nv = std::stoi(vtok.substr(2));
  nt = std::stoi(ttok.substr(2));
  if (nv < 3 || nt < 1) throw ConfigError("bad mesh header counts");
  std::vector<Vec2> verts(nv);
  for (int i = 0; i < nv; ++i) in >> verts[i].x() >> verts[i].y();
  std::vector<std::array<int, 3>> tris(nt);
  for (int i = 0; i < nt; ++i) in >> tris[i][0] >> tris[i][1] >> tris[i][2];
  if (!in) throw ConfigError("truncated mesh file");
  return Mesh(std::move(verts), std::move(tris));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file: " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "mesh 2d v=" << mesh.n_vertices() << " t=" << mesh.n_triangles() << "\n";
  char buf[80];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x(), v.y());
    out << buf;
  }
  for (const auto& t : mesh.triangles())
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write mesh file: " + path);
  write_mesh(out, mesh);
}

// ---------------------------------------------------------------------------
// Subdivision edge lattice
// ---------------------------------------------------------------------------

namespace {

// Position of a sub-edge along mesh edge (a,b): slot k covers the span
// [k/m, (k+1)/m] measured from the lower-indexed endpoint.
int canonical_slot(int from_vertex, int low_vertex, int k, int m) {
  return (from_vertex == low_vertex) ? k : m - 1 - k;
}

}  // namespace

SubdivisionLattice subdivision_lattice(const Mesh& mesh, int degree) {
  if (degree < 0 || degree > kMaxReggeDegree)
    throw ConfigError("subdivision lattice degree must be in {0,...," +
                      std::to_string(kMaxReggeDegree) + "}");
  const int m = degree + 1;
  SubdivisionLattice lat;
  lat.degree = degree;
  lat.local.resize(mesh.n_triangles());

  // Pre-create the m sub-edges carried by every mesh edge, with canonical
  // world data so both adjacent triangles share them bitwise.
  std::vector<int> mesh_edge_base(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    mesh_edge_base[e] = lat.n_global();
    const Vec2 pa = mesh.vertex(mesh.edge(e).v[0]);
    const Vec2 dir = mesh.edge_vector(e);
    for (int k = 0; k < m; ++k) {
      LatticeSubEdge se;
      se.midpoint = pa + dir * ((k + 0.5) / m);
      se.direction = dir;
      se.mesh_edge = e;
      lat.sub_edges.push_back(se);
    }
  }

  auto bary = [m](int i, int j) {
    return Vec3(static_cast<double>(m - i - j) / m, static_cast<double>(i) / m,
                static_cast<double>(j) / m);
  };

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tv = mesh.tri(t);
    auto& local = lat.local[t];
    local.reserve(lat.per_triangle());

    auto add = [&](Vec3 a, Vec3 b, int mesh_edge, int slot) {
      LocalSubEdge ls;
      ls.bary_a = a;
      ls.bary_b = b;
      ls.bary_mid = 0.5 * (a + b);
      ls.on_triangle_boundary = (mesh_edge >= 0);
      if (mesh_edge >= 0) {
        ls.global = mesh_edge_base[mesh_edge] + slot;
        auto& ge = lat.sub_edges[ls.global];
        if (ge.tris[0] == -1)
          ge.tris[0] = t;
        else
          ge.tris[1] = t;
      } else {
        LatticeSubEdge se;
        const Vec2 wa = mesh.barycentric_to_world(t, a);
        const Vec2 wb = mesh.barycentric_to_world(t, b);
        se.midpoint = 0.5 * (wa + wb);
        se.direction = wb - wa;
        se.tris[0] = t;
        ls.global = lat.n_global();
        lat.sub_edges.push_back(se);
      }
      local.push_back(ls);
    };

    // Edges of mesh triangle t in local order (0,1),(1,2),(2,0); needed to
    // map boundary-lying sub-edges onto their canonical slot.
    const auto& te = mesh.tri_edges(t);
    for (int i = 0; i + 0 <= m - 1; ++i) {
      for (int j = 0; i + j <= m - 1; ++j) {
        // family along v0->v1 (lambda2 = const)
        {
          const int me = (j == 0) ? te[0] : -1;
          const int slot =
              (j == 0) ? canonical_slot(tv[0], mesh.edge(te[0]).v[0], i, m) : -1;
          add(bary(i, j), bary(i + 1, j), me, slot);
        }
        // family along v0->v2 (lambda1 = const)
        {
          const int me = (i == 0) ? te[2] : -1;
          const int slot =
              (i == 0) ? canonical_slot(tv[0], mesh.edge(te[2]).v[0], j, m) : -1;
          add(bary(i, j), bary(i, j + 1), me, slot);
        }
        // family along v1->v2 (lambda0 = const)
        {
          const int me = (i + j == m - 1) ? te[1] : -1;
          const int slot =
              (i + j == m - 1) ? canonical_slot(tv[1], mesh.edge(te[1]).v[0], j, m) : -1;
          add(bary(i + 1, j), bary(i, j + 1), me, slot);
        }
      }
    }
  }
  return lat;
}

}  // namespace curvregge
