#pragma once

#include "twistspin/arc_model.hpp"
#include "twistspin/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twistspin {

struct SurfaceMeta {
  std::string arc_id;
  int twist = 0;
  int angular_samples = 0;

  bool operator==(const SurfaceMeta&) const = default;
};

/// Closed triangulated surface in R^4 with coordinates (x, y, u, v).
struct Surface4 {
  std::vector<Vec4> vertices;
  std::vector<Tri> triangles;
  SurfaceMeta meta;
};

/// Combinatorial audit of a triangle mesh.
struct MeshAudit {
  int vertex_count = 0;
  int edge_count = 0;
  int face_count = 0;
  int boundary_edges = 0;     // edges with one incident triangle
  int nonmanifold_edges = 0;  // edges with three or more
  bool closed = false;
  bool orientable = false;
  bool consistently_wound = false;  // stored orders already agree
  int components = 0;
  std::optional<int> euler;  // empty when the mesh is not an edge-manifold
};

struct SymmetryReport {
  int order_tested = 0;
  double max_deviation = 0.0;
  bool exact_on_vertices = false;
};

struct TriangleContact {
  int a = 0;
  int b = 0;
  double distance = 0.0;
};

struct EmbeddingReport {
  bool embedded = true;
  std::vector<TriangleContact> contacts;  // non-adjacent pairs closer than tolerance
  long long pairs_tested = 0;
};

/// Spins the arc about the plane z = 0: (x, y, z) -> (x, y, z cos t, z sin t) at
/// t = 2 pi j / m. Endpoints become single pole vertices.
Surface4 spin(const PolylineArc& arc, int m);

/// As spin, but arc points strictly inside the ball are first rotated by n t about
/// the ball axis. n = 0 gives exactly spin(arc, m).
Surface4 twist_spin(const PolylineArc& arc, const TwistBall& ball, int n, int m);

/// Spin of a closed loop in the open upper half-space (a torus of revolution).
Surface4 spin_closed_curve(const std::vector<Vec3>& loop, int m);

/// Torus fixture: circle of radius `minor` centred at (0, 0, major) in the (y, z) plane, spun.
Surface4 make_torus_fixture(double major, double minor, int loop_samples, int m);

MeshAudit audit_mesh(const std::vector<Tri>& triangles, int vertex_count);

/// V - E + F, or empty when some edge does not have exactly two incident triangles.
std::optional<int> euler_characteristic(const Surface4& surface);

/// Rotates every vertex by 2 pi / order in the (u, v) plane and measures its
/// distance to the surface. `vertex_tolerance` <= 0 selects 1e-12 times the
/// bounding-box diagonal.
SymmetryReport check_rotational_symmetry(const Surface4& surface, int order,
                                         double vertex_tolerance = 0.0);

/// Minimum distance between two triangles in R^4.
double triangle_distance(const Vec4& a0, const Vec4& a1, const Vec4& a2, const Vec4& b0,
                         const Vec4& b1, const Vec4& b2);

/// Non-adjacent triangle pairs within `tolerance` (absolute) of each other.
EmbeddingReport check_embedding(const Surface4& surface, double tolerance);

}  // namespace twistspin
