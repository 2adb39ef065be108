#include "twistspin/spin_engine.hpp"

#include "twistspin/bvh.hpp"
#include "twistspin/error.hpp"
#include "twistspin/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace twistspin {

namespace {

constexpr int kMinAngularSamples = 8;

Vec4 place(const Vec3& p, double theta) {
  return Vec4(p.x(), p.y(), p.z() * std::cos(theta), p.z() * std::sin(theta));
}

double ring_angle(int j, int m) { return kTwoPi * static_cast<double>(j) / m; }

// Rings of `ring_size` vertices starting at `first`; quads between ring j and
// ring j+1 use the diagonal (j, i)-(j+1, i+1).
void add_bands(std::vector<Tri>& tris, int first, int ring_size, int m, bool wrap_loop) {
  auto id = [&](int j, int i) { return first + (j % m) * ring_size + (i % ring_size); };
  const int quads = wrap_loop ? ring_size : ring_size - 1;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < quads; ++i) {
      const int a = id(j, i);
      const int b = id(j, i + 1);
      const int c = id(j + 1, i + 1);
      const int d = id(j + 1, i);
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  }
}

Surface4 build(const PolylineArc& arc, int m, const std::vector<std::vector<Vec3>>& profiles) {
  const int n = static_cast<int>(arc.vertices.size());
  const int ring = n - 2;
  Surface4 s;
  s.vertices.reserve(2 + static_cast<std::size_t>(ring) * m);
  const Vec3& a0 = arc.vertices.front();
  const Vec3& a1 = arc.vertices.back();
  s.vertices.emplace_back(a0.x(), a0.y(), 0.0, 0.0);
  for (int j = 0; j < m; ++j) {
    const double theta = ring_angle(j, m);
    for (int i = 1; i <= ring; ++i) s.vertices.push_back(place(profiles[j][i], theta));
  }
  const int last = static_cast<int>(s.vertices.size());
  s.vertices.emplace_back(a1.x(), a1.y(), 0.0, 0.0);

  s.triangles.reserve(static_cast<std::size_t>(2) * m * (ring - 1) + 2 * m);
  auto id = [&](int j, int i) { return 1 + (j % m) * ring + (i - 1); };
  for (int j = 0; j < m; ++j) s.triangles.push_back({0, id(j, 1), id(j + 1, 1)});
  add_bands(s.triangles, 1, ring, m, false);
  for (int j = 0; j < m; ++j) s.triangles.push_back({id(j, ring), last, id(j + 1, ring)});
  s.meta.arc_id = arc.name;
  s.meta.angular_samples = m;
  return s;
}

void require_valid_arc(const PolylineArc& arc) {
  const double scale = std::max(1.0, bbox_diagonal(arc.vertices));
  const ValidationReport r = validate_arc(arc, 1e-9 * scale);
  if (!r.ok) {
    const Violation& v = r.violations.front();
    throw ValidationError(std::string("invalid arc: ") + to_string(v.kind));
  }
}

}  // namespace

Surface4 spin(const PolylineArc& arc, int m) {
  if (m < kMinAngularSamples) throw ValidationError("spin: need at least 8 angular samples");
  require_valid_arc(arc);
  std::vector<std::vector<Vec3>> profiles(m, arc.vertices);
  return build(arc, m, profiles);
}

Surface4 twist_spin(const PolylineArc& arc, const TwistBall& ball, int n, int m) {
  if (n < 0) throw ValidationError("twist_spin: twist count must be non-negative");
  if (m < kMinAngularSamples) throw ValidationError("twist_spin: need at least 8 angular samples");
  if (m % std::max(n, 1) != 0) {
    throw ValidationError("twist_spin: m = " + std::to_string(m) + " is not a multiple of n = " +
                          std::to_string(n));
  }
  require_valid_arc(arc);
  const double tol = 1e-9 * std::max(1.0, bbox_diagonal(arc.vertices));
  if (const std::string problem = twist_ball_problem(arc, ball, tol); !problem.empty()) {
    throw ValidationError("twist_spin: inadmissible ball: " + problem);
  }
  std::vector<std::vector<Vec3>> profiles(m, arc.vertices);
  if (n != 0) {
    for (int j = 0; j < m; ++j) {
      // n t_j reduced mod 2 pi in exact integer arithmetic, so rings j and
      // j + m/n carry bitwise identical profiles.
      const int step = static_cast<int>((static_cast<long long>(n) * j) % m);
      if (step == 0) continue;
      const double angle = ring_angle(step, m);
      for (Vec3& p : profiles[j]) {
        if (ball.contains_strictly(p, tol)) p = rotate_about_axis(p, ball.center, ball.axis, angle);
      }
    }
  }
  Surface4 s = build(arc, m, profiles);
  s.meta.twist = n;
  return s;
}

Surface4 spin_closed_curve(const std::vector<Vec3>& loop, int m) {
  if (m < kMinAngularSamples) throw ValidationError("spin: need at least 8 angular samples");
  if (loop.size() < 3) throw ValidationError("spin: closed curve needs at least 3 vertices");
  for (const Vec3& p : loop) {
    if (!(p.z() > 0.0)) throw ValidationError("spin: closed curve must lie in z > 0");
  }
  const int ring = static_cast<int>(loop.size());
  Surface4 s;
  for (int j = 0; j < m; ++j) {
    for (const Vec3& p : loop) s.vertices.push_back(place(p, ring_angle(j, m)));
  }
  add_bands(s.triangles, 0, ring, m, true);
  s.meta.arc_id = "loop";
  s.meta.angular_samples = m;
  return s;
}

Surface4 make_torus_fixture(double major, double minor, int loop_samples, int m) {
  if (!(minor > 0.0) || !(major > minor)) throw ValidationError("torus fixture: need major > minor > 0");
  std::vector<Vec3> loop;
  for (int k = 0; k < loop_samples; ++k) {
    const double a = kTwoPi * k / loop_samples;
    loop.emplace_back(0.0, minor * std::cos(a), major + minor * std::sin(a));
  }
  Surface4 s = spin_closed_curve(loop, m);
  s.meta.arc_id = "torus";
  return s;
}

MeshAudit audit_mesh(const std::vector<Tri>& triangles, int vertex_count) {
  MeshAudit audit;
  const MeshTopology topo = build_topology(triangles, vertex_count);
  audit.vertex_count = vertex_count;
  audit.edge_count = static_cast<int>(topo.edges.size());
  audit.face_count = static_cast<int>(triangles.size());
  for (const auto& et : topo.edge_triangles) {
    if (et.size() == 1) ++audit.boundary_edges;
    if (et.size() > 2) ++audit.nonmanifold_edges;
  }
  audit.closed = audit.boundary_edges == 0 && audit.nonmanifold_edges == 0;

  // Direction (+1 / -1) in which triangle t traverses edge e.
  auto direction = [&](int t, int e) {
    const Tri& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (topo.triangle_edges[t][k] == e) return tri[k] < tri[(k + 1) % 3] ? 1 : -1;
    }
    return 0;
  };
  std::vector<int> flip(triangles.size(), 0);  // 0 unvisited, +1 keep, -1 flipped
  bool orientable = audit.nonmanifold_edges == 0;
  bool wound = orientable;
  for (std::size_t seed = 0; seed < triangles.size(); ++seed) {
    if (flip[seed] != 0) continue;
    ++audit.components;
    flip[seed] = 1;
    std::deque<int> queue{static_cast<int>(seed)};
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop_front();
      for (int k = 0; k < 3; ++k) {
        const int e = topo.triangle_edges[t][k];
        if (topo.edge_triangles[e].size() != 2) continue;
        const int o = topo.edge_triangles[e][0] == t ? topo.edge_triangles[e][1] : topo.edge_triangles[e][0];
        const bool opposite = direction(t, e) != direction(o, e);
        if (!opposite) wound = false;
        const int want = opposite ? flip[t] : -flip[t];
        if (flip[o] == 0) {
          flip[o] = want;
          queue.push_back(o);
        } else if (flip[o] != want) {
          orientable = false;
        }
      }
    }
  }
  // Isolated vertices count as components too.
  for (int v = 0; v < vertex_count; ++v) audit.components += topo.vertex_triangles[v].empty();
  audit.orientable = orientable;
  audit.consistently_wound = wound;
  if (audit.closed) audit.euler = audit.vertex_count - audit.edge_count + audit.face_count;
  return audit;
}

std::optional<int> euler_characteristic(const Surface4& surface) {
  return audit_mesh(surface.triangles, static_cast<int>(surface.vertices.size())).euler;
}

SymmetryReport check_rotational_symmetry(const Surface4& surface, int order, double vertex_tolerance) {
  if (order < 1) throw ValidationError("symmetry: order must be at least 1");
  SymmetryReport report;
  report.order_tested = order;
  if (surface.vertices.empty()) {
    report.exact_on_vertices = true;
    return report;
  }
  if (vertex_tolerance <= 0.0) vertex_tolerance = 1e-12 * bbox_diagonal(surface.vertices);

  std::vector<Aabb<4>> point_boxes(surface.vertices.size());
  for (std::size_t i = 0; i < surface.vertices.size(); ++i) point_boxes[i].expand(surface.vertices[i]);
  const Bvh<4> points(std::move(point_boxes));
  std::vector<Aabb<4>> tri_boxes(surface.triangles.size());
  for (std::size_t t = 0; t < surface.triangles.size(); ++t) {
    for (int k : surface.triangles[t]) tri_boxes[t].expand(surface.vertices[k]);
  }
  const Bvh<4> tris(std::move(tri_boxes));

  const double angle = kTwoPi / order;
  bool exact = true;
  for (const Vec4& p : surface.vertices) {
    const Vec4 q = rotate_uv(p, angle);
    double nearest_vertex = std::numeric_limits<double>::infinity();
    points.visit_near(q, nearest_vertex, [&](int i, double) {
      nearest_vertex = std::min(nearest_vertex, (surface.vertices[i] - q).norm());
      return nearest_vertex;
    });
    if (nearest_vertex > vertex_tolerance) exact = false;
    double nearest = nearest_vertex;
    tris.visit_near(q, nearest, [&](int t, double) {
      const Tri& tri = surface.triangles[t];
      nearest = std::min(nearest, point_triangle_distance<4>(q, surface.vertices[tri[0]],
                                                             surface.vertices[tri[1]],
                                                             surface.vertices[tri[2]]));
      return nearest;
    });
    report.max_deviation = std::max(report.max_deviation, nearest);
  }
  report.exact_on_vertices = exact;
  return report;
}

namespace {

// Stationary distance between the open segment (p0, p1) and the open triangle
// (b0, b1, b2); infinity when the stationary point is not interior to both.
double segment_triangle_interior_distance(const Vec4& p0, const Vec4& p1, const Vec4& b0,
                                          const Vec4& b1, const Vec4& b2) {
  Eigen::Matrix<double, 4, 3> m;
  m.col(0) = p1 - p0;
  m.col(1) = b0 - b1;
  m.col(2) = b0 - b2;
  const Eigen::Matrix3d gram = m.transpose() * m;
  Eigen::LDLT<Eigen::Matrix3d> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      std::abs(gram.determinant()) <= 1e-14 * std::pow(gram.norm(), 3)) {
    return std::numeric_limits<double>::infinity();
  }
  const Eigen::Vector3d x = ldlt.solve(m.transpose() * (b0 - p0));
  if (!(x[0] > 0.0 && x[0] < 1.0 && x[1] > 0.0 && x[2] > 0.0 && x[1] + x[2] < 1.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return (p0 - b0 + m * x).norm();
}

}  // namespace

double triangle_distance(const Vec4& a0, const Vec4& a1, const Vec4& a2, const Vec4& b0,
                         const Vec4& b1, const Vec4& b2) {
  const std::array<Vec4, 3> a{a0, a1, a2};
  const std::array<Vec4, 3> b{b0, b1, b2};
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    best = std::min(best, point_triangle_distance<4>(a[k], b0, b1, b2));
    best = std::min(best, point_triangle_distance<4>(b[k], a0, a1, a2));
    for (int l = 0; l < 3; ++l) {
      best = std::min(best, segment_distance(a[k], a[(k + 1) % 3], b[l], b[(l + 1) % 3]));
    }
  }
  for (int k = 0; k < 3; ++k) {
    best = std::min(best, segment_triangle_interior_distance(a[k], a[(k + 1) % 3], b0, b1, b2));
    best = std::min(best, segment_triangle_interior_distance(b[k], b[(k + 1) % 3], a0, a1, a2));
  }
  if (best == 0.0) return best;
  // Two triangles in general position in R^4 meet, if at all, in an isolated
  // interior point: a0 + s e1 + t e2 = b0 + p f1 + q f2.
  Eigen::Matrix4d m;
  m.col(0) = a1 - a0;
  m.col(1) = a2 - a0;
  m.col(2) = b0 - b1;
  m.col(3) = b0 - b2;
  Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
  if (lu.rank() == 4) {
    const Eigen::Vector4d x = lu.solve(b0 - a0);
    if (x[0] >= 0.0 && x[1] >= 0.0 && x[0] + x[1] <= 1.0 && x[2] >= 0.0 && x[3] >= 0.0 &&
        x[2] + x[3] <= 1.0) {
      return 0.0;
    }
  }
  return best;
}

EmbeddingReport check_embedding(const Surface4& surface, double tolerance) {
  EmbeddingReport report;
  std::vector<Aabb<4>> boxes(surface.triangles.size());
  for (std::size_t t = 0; t < surface.triangles.size(); ++t) {
    for (int k : surface.triangles[t]) boxes[t].expand(surface.vertices[k]);
    boxes[t].inflate(0.5 * tolerance);
  }
  const Bvh<4> bvh(std::move(boxes));
  for (const auto& [i, j] : bvh.self_overlaps()) {
    const Tri& a = surface.triangles[i];
    const Tri& b = surface.triangles[j];
    if (triangles_share_vertex(a, b)) continue;
    ++report.pairs_tested;
    const auto& v = surface.vertices;
    const double d = triangle_distance(v[a[0]], v[a[1]], v[a[2]], v[b[0]], v[b[1]], v[b[2]]);
    if (d <= tolerance) report.contacts.push_back({i, j, d});
  }
  report.embedded = report.contacts.empty();
  return report;
}

}  // namespace twistspin
