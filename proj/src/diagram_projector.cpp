#include "twistspin/diagram_projector.hpp"

#include "twistspin/bvh.hpp"
#include "twistspin/error.hpp"
#include "twistspin/mesh.hpp"
#include "twistspin/singularity_detail.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace twistspin {

const char* to_string(Axis4 axis) {
  switch (axis) {
    case Axis4::kX: return "x";
    case Axis4::kY: return "y";
    case Axis4::kU: return "u";
    case Axis4::kV: return "v";
  }
  return "?";
}

Axis4 parse_axis4(const std::string& name) {
  if (name == "x") return Axis4::kX;
  if (name == "y") return Axis4::kY;
  if (name == "u") return Axis4::kU;
  if (name == "v") return Axis4::kV;
  throw ValidationError("unknown drop axis '" + name + "' (expected x, y, u or v)");
}

namespace {

ImmersedDiagram3 apply_projection(const Surface4& surface, const Eigen::Matrix4d& rotation, int drop) {
  ImmersedDiagram3 d;
  d.vertices.reserve(surface.vertices.size());
  d.height.reserve(surface.vertices.size());
  for (const Vec4& p : surface.vertices) {
    const Vec4 w = rotation * p;
    Vec3 q;
    for (int k = 0, c = 0; k < 4; ++k) {
      if (k != drop) q[c++] = w[k];
    }
    d.vertices.push_back(q);
    d.height.push_back(w[drop]);
  }
  d.triangles = surface.triangles;
  d.projection_direction = rotation.row(drop).transpose();
  return d;
}

std::vector<Degeneracy> certificate(const ImmersedDiagram3& d, const Tolerances& tol) {
  std::vector<Degeneracy> degs;
  const auto segments = intersection_segments(d, tol, true, &degs);
  detail::find_triple_points(d, segments, tol, &degs);
  return degs;
}

}  // namespace

ImmersedDiagram3 project_generic(const Surface4& surface, Axis4 drop, double perturb_magnitude,
                                 std::uint64_t seed, const Tolerances& tol) {
  if (perturb_magnitude < 0.0) throw ValidationError("perturbation magnitude must be non-negative");
  const int axis = static_cast<int>(drop);
  if (perturb_magnitude == 0.0) {
    ImmersedDiagram3 d = apply_projection(surface, Eigen::Matrix4d::Identity(), axis);
    d.drop_axis = drop;
    d.perturbation_seed = seed;
    d.degeneracies = certificate(d, tol);
    return d;
  }
  std::size_t last_count = 0;
  for (int attempt = 0; attempt < kMaxProjectionAttempts; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL;
    Rng rng(s);
    const Eigen::Matrix4d r = random_small_rotation(perturb_magnitude, rng);
    ImmersedDiagram3 d = apply_projection(surface, r, axis);
    d.drop_axis = drop;
    d.perturbation_seed = s;
    d.perturb_magnitude = perturb_magnitude;
    d.attempts = attempt + 1;
    d.degeneracies = certificate(d, tol);
    if (d.generic()) return d;
    last_count = d.degeneracies.size();
  }
  throw GenericityError("non-generic after retries: " + std::to_string(last_count) +
                        " degeneracies persist after " + std::to_string(kMaxProjectionAttempts) +
                        " perturbations (try a larger --perturb or another --seed)");
}

ImmersedDiagram3 project_along(const Surface4& surface, const Vec4& direction, const Tolerances& tol) {
  const double len = direction.norm();
  if (!(len > 0.0)) throw ValidationError("projection direction must be non-zero");
  const Vec4 d = direction / len;
  // Complete d to an orthonormal basis; d becomes the dropped first coordinate.
  const Eigen::HouseholderQR<Vec4> qr(d);
  Eigen::Matrix4d basis = qr.householderQ();
  basis.col(0) = d;
  if (basis.determinant() < 0.0) basis.col(3) = -basis.col(3);
  const Eigen::Matrix4d rotation = basis.transpose();
  ImmersedDiagram3 out = apply_projection(surface, rotation, 0);
  out.drop_axis = Axis4::kX;
  out.projection_direction = d;
  out.degeneracies = certificate(out, tol);
  return out;
}

double height_at(const ImmersedDiagram3& d, int t, const Vec3& p) {
  const Tri& tri = d.triangles[t];
  const Vec3& a = d.vertices[tri[0]];
  const Vec3 e1 = d.vertices[tri[1]] - a;
  const Vec3 e2 = d.vertices[tri[2]] - a;
  Eigen::Matrix2d g;
  g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  const Eigen::Vector2d rhs(e1.dot(p - a), e2.dot(p - a));
  const Eigen::Vector2d st = g.ldlt().solve(rhs);
  const double h0 = d.height[tri[0]];
  return h0 + st[0] * (d.height[tri[1]] - h0) + st[1] * (d.height[tri[2]] - h0);
}

namespace detail {

Plane triangle_plane(const ImmersedDiagram3& d, int t) {
  const Tri& tri = d.triangles[t];
  const Vec3& a = d.vertices[tri[0]];
  Vec3 n = (d.vertices[tri[1]] - a).cross(d.vertices[tri[2]] - a);
  const double len = n.norm();
  if (len > 0.0) n /= len;
  return Plane{n, a};
}

Vec3 edge_plane_point(const ImmersedDiagram3& d, int va, int vb, const Plane& plane) {
  if (va > vb) std::swap(va, vb);
  const Vec3& pa = d.vertices[va];
  const Vec3& pb = d.vertices[vb];
  const double da = plane.distance(pa);
  const double db = plane.distance(pb);
  const double t = da / (da - db);
  return pa + t * (pb - pa);
}

}  // namespace detail

namespace {

using detail::Plane;

int sign_of(double x, double eps) { return x > eps ? 1 : (x < -eps ? -1 : 0); }

// Barycentric containment of p (assumed in the plane of t) with slack eps (absolute).
bool inside_triangle(const ImmersedDiagram3& d, int t, const Vec3& p, double eps) {
  const Tri& tri = d.triangles[t];
  const Vec3& a = d.vertices[tri[0]];
  const Vec3& b = d.vertices[tri[1]];
  const Vec3& c = d.vertices[tri[2]];
  const Vec3 n = (b - a).cross(c - a);
  const double nn = n.norm();
  if (nn == 0.0) return false;
  const Vec3 u = n / nn;
  // Signed distances to the three edge lines within the plane.
  const std::array<const Vec3*, 3> v{&a, &b, &c};
  for (int k = 0; k < 3; ++k) {
    const Vec3& p0 = *v[k];
    const Vec3& p1 = *v[(k + 1) % 3];
    const Vec3 e = p1 - p0;
    const double el = e.norm();
    if (el == 0.0) return false;
    if (u.cross(e / el).dot(p - p0) < -eps) return false;
  }
  return true;
}

// 2D overlap of two coplanar triangles (projected to the dominant plane of n).
bool coplanar_overlap(const ImmersedDiagram3& d, int ta, int tb, const Vec3& n, double eps) {
  int drop = 0;
  n.cwiseAbs().maxCoeff(&drop);
  auto to2 = [&](const Vec3& p) {
    return drop == 0 ? Vec2(p.y(), p.z()) : (drop == 1 ? Vec2(p.z(), p.x()) : Vec2(p.x(), p.y()));
  };
  std::array<Vec2, 3> a;
  std::array<Vec2, 3> b;
  for (int k = 0; k < 3; ++k) {
    a[k] = to2(d.vertices[d.triangles[ta][k]]);
    b[k] = to2(d.vertices[d.triangles[tb][k]]);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      double t = 0.0;
      if (segments_cross_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3], 0.0, s, t)) return true;
    }
  }
  auto strictly_inside = [&](const std::array<Vec2, 3>& tri, const Vec2& p) {
    const double area = cross2(tri[1] - tri[0], tri[2] - tri[0]);
    const double sgn = area > 0 ? 1.0 : -1.0;
    for (int k = 0; k < 3; ++k) {
      if (sgn * cross2(tri[(k + 1) % 3] - tri[k], p - tri[k]) <= eps * (tri[(k + 1) % 3] - tri[k]).norm()) {
        return false;
      }
    }
    return true;
  };
  for (int k = 0; k < 3; ++k) {
    if (strictly_inside(b, a[k]) || strictly_inside(a, b[k])) return true;
  }
  return false;
}

struct PairResult {
  bool has_segment = false;
  Vec3 p0;
  Vec3 p1;
};

// Portion of triangle t lying in `plane`: the points where its edges cross it.
// Returns false when t does not cross the plane transversally.
struct Crossing {
  int count = 0;
  std::array<Vec3, 2> pts;
  bool touching = false;  // meets the plane without crossing
};

Crossing cross_plane(const ImmersedDiagram3& d, int t, const Plane& plane, double eps) {
  Crossing c;
  const Tri& tri = d.triangles[t];
  std::array<int, 3> s;
  for (int k = 0; k < 3; ++k) s[k] = sign_of(plane.distance(d.vertices[tri[k]]), eps);
  const bool has_pos = s[0] > 0 || s[1] > 0 || s[2] > 0;
  const bool has_neg = s[0] < 0 || s[1] < 0 || s[2] < 0;
  if (!(has_pos && has_neg)) {
    c.touching = (s[0] == 0 || s[1] == 0 || s[2] == 0);
    return c;
  }
  for (int k = 0; k < 3; ++k) {
    if (s[k] == 0 && c.count < 2) c.pts[c.count++] = d.vertices[tri[k]];
  }
  for (int k = 0; k < 3; ++k) {
    const int a = k;
    const int b = (k + 1) % 3;
    if (s[a] * s[b] < 0 && c.count < 2) c.pts[c.count++] = detail::edge_plane_point(d, tri[a], tri[b], plane);
  }
  return c;
}

PairResult intersect_disjoint(const ImmersedDiagram3& d, int ta, int tb, double eps,
                              std::vector<Degeneracy>* degs) {
  PairResult r;
  const Plane pa = detail::triangle_plane(d, ta);
  const Plane pb = detail::triangle_plane(d, tb);
  // All three vertices of one triangle on the other's plane: coplanar.
  auto all_on = [&](int t, const Plane& p) {
    for (int v : d.triangles[t]) {
      if (sign_of(p.distance(d.vertices[v]), eps) != 0) return false;
    }
    return true;
  };
  if (all_on(ta, pb) || all_on(tb, pa)) {
    if (coplanar_overlap(d, ta, tb, pa.n, eps) && degs) {
      degs->push_back({"coplanar_overlap", ta, tb, d.vertices[d.triangles[ta][0]]});
    }
    return r;
  }
  const Crossing ca = cross_plane(d, ta, pb, eps);
  const Crossing cb = cross_plane(d, tb, pa, eps);
  if (ca.touching || cb.touching) {
    // One triangle only touches the other's plane; report a contact inside the other.
    const auto report = [&](int t, const Plane& own_plane_of_other, int other) {
      for (int v : d.triangles[t]) {
        const Vec3& p = d.vertices[v];
        if (sign_of(own_plane_of_other.distance(p), eps) == 0 && inside_triangle(d, other, p, eps)) {
          if (degs) degs->push_back({"non_transverse", std::min(ta, tb), std::max(ta, tb), p});
          return true;
        }
      }
      return false;
    };
    if (ca.touching && (cb.count == 2 || cb.touching)) report(ta, pb, tb);
    if (cb.touching && (ca.count == 2 || ca.touching)) report(tb, pa, ta);
    return r;
  }
  if (ca.count < 2 || cb.count < 2) return r;
  const Vec3 dir = pa.n.cross(pb.n);
  if (dir.squaredNorm() == 0.0) return r;
  auto param = [&](const Vec3& p) { return dir.dot(p); };
  std::array<std::pair<double, Vec3>, 2> ia{{{param(ca.pts[0]), ca.pts[0]}, {param(ca.pts[1]), ca.pts[1]}}};
  std::array<std::pair<double, Vec3>, 2> ib{{{param(cb.pts[0]), cb.pts[0]}, {param(cb.pts[1]), cb.pts[1]}}};
  auto by_param = [](const auto& x, const auto& y) { return x.first < y.first; };
  std::sort(ia.begin(), ia.end(), by_param);
  std::sort(ib.begin(), ib.end(), by_param);
  // The lower triangle index wins ties so the choice is canonical.
  const bool a_first = ta < tb;
  const auto& lo = (ia[0].first > ib[0].first || (ia[0].first == ib[0].first && a_first)) ? ia[0] : ib[0];
  const auto& hi = (ia[1].first < ib[1].first || (ia[1].first == ib[1].first && a_first)) ? ia[1] : ib[1];
  if (hi.first - lo.first <= 0.0) return r;
  r.has_segment = true;
  r.p0 = lo.second;
  r.p1 = hi.second;
  return r;
}

PairResult intersect_one_shared(const ImmersedDiagram3& d, int ta, int tb, int shared, double eps,
                                std::vector<Degeneracy>* degs) {
  PairResult r;
  const Tri& a = d.triangles[ta];
  const Tri& b = d.triangles[tb];
  std::array<int, 2> oa{};
  std::array<int, 2> ob{};
  for (int k = 0, i = 0, j = 0; k < 3; ++k) {
    if (a[k] != shared) oa[i++] = a[k];
    if (b[k] != shared) ob[j++] = b[k];
  }
  const Plane pa = detail::triangle_plane(d, ta);
  const Plane pb = detail::triangle_plane(d, tb);
  const Vec3& v = d.vertices[shared];
  const int s1 = sign_of(pb.distance(d.vertices[oa[0]]), eps);
  const int s2 = sign_of(pb.distance(d.vertices[oa[1]]), eps);
  const int t1 = sign_of(pa.distance(d.vertices[ob[0]]), eps);
  const int t2 = sign_of(pa.distance(d.vertices[ob[1]]), eps);
  if (s1 == 0 || s2 == 0 || t1 == 0 || t2 == 0) {
    // An edge at the shared vertex lies in the other plane; flag it when it runs into the other triangle.
    auto probe = [&](int own, int other, int s_first, int s_second, const std::array<int, 2>& ov) {
      for (int k = 0; k < 2; ++k) {
        if ((k == 0 ? s_first : s_second) != 0) continue;
        const Vec3 q = v + 1e-3 * (d.vertices[ov[k]] - v);
        if (inside_triangle(d, other, q, eps)) {
          if (degs) degs->push_back({"non_transverse", std::min(ta, tb), std::max(ta, tb), v});
          return true;
        }
      }
      (void)own;
      return false;
    };
    if (!probe(ta, tb, s1, s2, oa)) probe(tb, ta, t1, t2, ob);
    return r;
  }
  if (s1 == s2 || t1 == t2) return r;
  const Vec3 x = detail::edge_plane_point(d, oa[0], oa[1], pb);
  const Vec3 y = detail::edge_plane_point(d, ob[0], ob[1], pa);
  if ((x - v).dot(y - v) <= 0.0) return r;
  r.has_segment = true;
  r.p0 = v;
  r.p1 = (x - v).squaredNorm() <= (y - v).squaredNorm() ? x : y;
  return r;
}

}  // namespace

std::vector<IntersectionSegment> intersection_segments(const ImmersedDiagram3& d, const Tolerances& tol,
                                                       bool use_index,
                                                       std::vector<Degeneracy>* degeneracies) {
  const double scale = std::max(d.scale(), 1e-300);
  const double eps = tol.intersect * scale;
  const double min_len = tol.stitch * scale;
  const int nt = static_cast<int>(d.triangles.size());

  std::vector<std::pair<int, int>> candidates;
  if (use_index) {
    std::vector<Aabb<3>> boxes(nt);
    for (int t = 0; t < nt; ++t) {
      for (int v : d.triangles[t]) boxes[t].expand(d.vertices[v]);
      boxes[t].inflate(eps);
    }
    candidates = Bvh<3>(std::move(boxes)).self_overlaps();
  } else {
    for (int i = 0; i < nt; ++i) {
      for (int j = i + 1; j < nt; ++j) candidates.emplace_back(i, j);
    }
  }

  std::vector<IntersectionSegment> out;
  for (const auto& [i, j] : candidates) {
    const Tri& a = d.triangles[i];
    const Tri& b = d.triangles[j];
    const int shared = shared_vertex_count(a, b);
    if (shared >= 2) continue;
    PairResult r;
    if (shared == 0) {
      r = intersect_disjoint(d, i, j, eps, degeneracies);
    } else {
      int v = -1;
      for (int x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end()) v = x;
      }
      r = intersect_one_shared(d, i, j, v, eps, degeneracies);
    }
    if (!r.has_segment) continue;
    if ((r.p1 - r.p0).norm() <= min_len) continue;  // point contact across a shared ring
    const Vec3 mid = 0.5 * (r.p0 + r.p1);
    const double hi = height_at(d, i, mid);
    const double hj = height_at(d, j, mid);
    if (std::abs(hi - hj) <= eps) {
      throw GenericityError("equal heights along the intersection of triangles " + std::to_string(i) +
                            " and " + std::to_string(j) + ": the surface is not embedded");
    }
    IntersectionSegment s;
    s.over = hi > hj ? i : j;
    s.under = hi > hj ? j : i;
    s.p0 = r.p0;
    s.p1 = r.p1;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const IntersectionSegment& x, const IntersectionSegment& y) {
    return std::make_pair(std::min(x.over, x.under), std::max(x.over, x.under)) <
           std::make_pair(std::min(y.over, y.under), std::max(y.over, y.under));
  });
  if (degeneracies) {
    std::sort(degeneracies->begin(), degeneracies->end(), [](const Degeneracy& x, const Degeneracy& y) {
      return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b);
    });
  }
  return out;
}

namespace detail {

std::vector<TriplePoint> find_triple_points(const ImmersedDiagram3& d,
                                            const std::vector<IntersectionSegment>& segments,
                                            const Tolerances& tol, std::vector<Degeneracy>* degs) {
  const double scale = std::max(d.scale(), 1e-300);
  const double eps = tol.intersect * scale;
  const double merge = tol.stitch * scale;
  const int nt = static_cast<int>(d.triangles.size());
  std::vector<std::vector<int>> partners(nt);
  for (const auto& s : segments) {
    partners[s.over].push_back(s.under);
    partners[s.under].push_back(s.over);
  }
  for (auto& p : partners) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }

  struct Hit {
    std::array<int, 3> tris;
    Vec3 point;
  };
  std::map<std::array<int, 3>, Vec3> found;
  std::vector<int> common;
  for (const auto& s : segments) {
    const int a = s.over;
    const int b = s.under;
    common.clear();
    std::set_intersection(partners[a].begin(), partners[a].end(), partners[b].begin(), partners[b].end(),
                          std::back_inserter(common));
    for (int c : common) {
      if (triangles_share_vertex(d.triangles[c], d.triangles[a]) ||
          triangles_share_vertex(d.triangles[c], d.triangles[b])) {
        continue;
      }
      const Plane pc = triangle_plane(d, c);
      const double d0 = pc.distance(s.p0);
      const double d1 = pc.distance(s.p1);
      const int g0 = sign_of(d0, eps);
      const int g1 = sign_of(d1, eps);
      if (g0 == g1) continue;  // both on one side, or both on the plane
      Vec3 x;
      if (g0 == 0) {
        x = s.p0;
      } else if (g1 == 0) {
        x = s.p1;
      } else {
        x = s.p0 + (d0 / (d0 - d1)) * (s.p1 - s.p0);
      }
      if (!inside_triangle(d, c, x, eps)) continue;
      std::array<int, 3> key{a, b, c};
      std::sort(key.begin(), key.end());
      found.emplace(key, x);
    }
  }

  std::vector<Hit> hits;
  for (const auto& [k, p] : found) hits.push_back({k, p});
  const int nh = static_cast<int>(hits.size());
  std::vector<int> parent(nh);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < nh; ++i) {
    for (int j = i + 1; j < nh; ++j) {
      if ((hits[i].point - hits[j].point).norm() <= merge) parent[find(i)] = find(j);
    }
  }
  std::map<int, std::vector<int>> clusters;
  for (int i = 0; i < nh; ++i) clusters[find(i)].push_back(i);

  std::vector<TriplePoint> out;
  for (const auto& [root, members] : clusters) {
    std::vector<int> tris;
    for (int h : members) tris.insert(tris.end(), hits[h].tris.begin(), hits[h].tris.end());
    std::sort(tris.begin(), tris.end());
    tris.erase(std::unique(tris.begin(), tris.end()), tris.end());
    const int n = static_cast<int>(tris.size());
    std::vector<int> sheet(n);
    std::iota(sheet.begin(), sheet.end(), 0);
    auto sfind = [&](int x) {
      while (sheet[x] != x) x = sheet[x] = sheet[sheet[x]];
      return x;
    };
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (triangles_share_vertex(d.triangles[tris[i]], d.triangles[tris[j]])) sheet[sfind(i)] = sfind(j);
      }
    }
    std::map<int, int> rep;  // sheet root -> smallest triangle
    for (int i = 0; i < n; ++i) rep.emplace(sfind(i), tris[i]);
    const Vec3 point = hits[members.front()].point;
    if (rep.size() >= 4) {
      if (degs) degs->push_back({"quadruple_point", tris.front(), tris.back(), point});
      continue;
    }
    if (rep.size() != 3) continue;
    std::vector<std::pair<double, int>> layers;
    for (const auto& [r, t] : rep) layers.emplace_back(height_at(d, t, point), t);
    std::sort(layers.rbegin(), layers.rend());
    TriplePoint tp;
    tp.point = point;
    for (int k = 0; k < 3; ++k) {
      tp.heights[k] = layers[k].first;
      tp.sheets[k] = layers[k].second;
    }
    out.push_back(tp);
  }
  std::sort(out.begin(), out.end(), [](const TriplePoint& x, const TriplePoint& y) {
    return std::lexicographical_compare(x.point.data(), x.point.data() + 3, y.point.data(), y.point.data() + 3);
  });
  return out;
}

}  // namespace detail

namespace {

// Joins intersection segments into double curves. Endpoints are clustered
// within the stitching tolerance; at clusters with more than two incident ends
// the ends are paired by triangle continuity.
void stitch_curves(const ImmersedDiagram3& d, SingularitySet& sing, const Tolerances& tol) {
  const auto& segs = sing.segments;
  const int ns = static_cast<int>(segs.size());
  if (ns == 0) return;
  const double scale = std::max(d.scale(), 1e-300);
  const double merge = tol.stitch * scale;

  // End e = 2 * segment + side.
  const int ne = 2 * ns;
  auto end_point = [&](int e) -> const Vec3& { return (e & 1) ? segs[e >> 1].p1 : segs[e >> 1].p0; };
  std::vector<int> parent(ne);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::array<long long, 3>, std::vector<int>> grid;
  auto cell = [&](const Vec3& p) {
    return std::array<long long, 3>{static_cast<long long>(std::floor(p.x() / merge)),
                                    static_cast<long long>(std::floor(p.y() / merge)),
                                    static_cast<long long>(std::floor(p.z() / merge))};
  };
  for (int e = 0; e < ne; ++e) grid[cell(end_point(e))].push_back(e);
  for (int e = 0; e < ne; ++e) {
    const auto c = cell(end_point(e));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          const auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == grid.end()) continue;
          for (int f : it->second) {
            if (f > e && (end_point(e) - end_point(f)).norm() <= merge) parent[find(e)] = find(f);
          }
        }
      }
    }
  }
  std::map<int, std::vector<int>> nodes;
  for (int e = 0; e < ne; ++e) nodes[find(e)].push_back(e);

  const MeshTopology topo = build_topology(d.triangles, static_cast<int>(d.vertices.size()));
  auto edge_adjacent = [&](int s, int t) { return s == t || shared_vertex_count(d.triangles[s], d.triangles[t]) == 2; };
  auto continues = [&](int e, int f) {
    const auto& a = segs[e >> 1];
    const auto& b = segs[f >> 1];
    if (a.over == b.over || a.under == b.under || a.over == b.under || a.under == b.over) return true;
    return (edge_adjacent(a.over, b.over) && edge_adjacent(a.under, b.under)) ||
           (edge_adjacent(a.over, b.under) && edge_adjacent(a.under, b.over));
  };
  (void)topo;

  std::vector<int> mate(ne, -1);
  for (const auto& [root, ends] : nodes) {
    if (ends.size() == 1) {
      const int e = ends.front();
      const auto& s = segs[e >> 1];
      const Vec3& p = end_point(e);
      int vertex = -1;
      for (int t : {s.over, s.under}) {
        for (int v : d.triangles[t]) {
          if ((d.vertices[v] - p).norm() <= merge) vertex = v;
        }
      }
      if (vertex < 0) {
        throw GenericityError("stitching failure: double curve ends away from a mesh vertex (insufficient resolution)");
      }
      // One branch point per vertex.
      if (std::none_of(sing.branch_points.begin(), sing.branch_points.end(),
                       [&](const BranchPoint& b) { return b.vertex == vertex; })) {
        sing.branch_points.push_back({d.vertices[vertex], vertex});
      }
      continue;
    }
    if (ends.size() == 2) {
      mate[ends[0]] = ends[1];
      mate[ends[1]] = ends[0];
      continue;
    }
    if (ends.size() % 2 != 0) {
      throw GenericityError("stitching failure: odd number of double-curve ends meet at one point");
    }
    std::vector<int> open(ends.begin(), ends.end());
    while (!open.empty()) {
      const int e = open.front();
      auto it = std::find_if(open.begin() + 1, open.end(), [&](int f) { return (e >> 1) != (f >> 1) && continues(e, f); });
      if (it == open.end()) {
        throw GenericityError("stitching failure: cannot pair double-curve ends at a junction");
      }
      mate[e] = *it;
      mate[*it] = e;
      open.erase(it);
      open.erase(open.begin());
    }
  }

  std::vector<bool> used(ns, false);
  auto trace = [&](int start_end) {
    DoubleCurve c;
    int e = start_end;  // entering end of the current segment
    while (true) {
      const int s = e >> 1;
      if (used[s]) break;
      used[s] = true;
      const int other = e ^ 1;
      c.points.push_back(end_point(e));
      c.sheets.emplace_back(segs[s].over, segs[s].under);
      const int next = mate[other];
      if (next < 0) {
        c.points.push_back(end_point(other));
        c.closed = false;
        return c;
      }
      e = next;
    }
    c.closed = true;
    return c;
  };
  // Open curves first (start at branch-point ends), then the closed ones.
  for (int e = 0; e < ne; ++e) {
    if (mate[e] < 0 && !used[e >> 1]) sing.double_curves.push_back(trace(e));
  }
  for (int s = 0; s < ns; ++s) {
    if (!used[s]) sing.double_curves.push_back(trace(2 * s));
  }
  for (const auto& c : sing.double_curves) {
    if (!c.closed) {
      // Both ends must be branch points.
      for (const Vec3& p : {c.points.front(), c.points.back()}) {
        const bool ok = std::any_of(sing.branch_points.begin(), sing.branch_points.end(),
                                    [&](const BranchPoint& b) { return (b.point - p).norm() <= merge; });
        if (!ok) throw GenericityError("stitching failure: open double curve without branch point");
      }
    }
  }
  std::sort(sing.branch_points.begin(), sing.branch_points.end(),
            [](const BranchPoint& a, const BranchPoint& b) { return a.vertex < b.vertex; });
}

}  // namespace

SingularitySet compute_singularity_set(const ImmersedDiagram3& diagram, const Tolerances& tol) {
  SingularitySet sing;
  sing.segments = intersection_segments(diagram, tol, true, &sing.degeneracies);
  // Over/under sanity at segment midpoints.
  const double eps = tol.intersect * std::max(diagram.scale(), 1e-300);
  for (const auto& s : sing.segments) {
    const Vec3 mid = 0.5 * (s.p0 + s.p1);
    if (!(height_at(diagram, s.over, mid) > height_at(diagram, s.under, mid) + eps)) {
      throw GenericityError("over/under undecided along a double curve");
    }
  }
  sing.triple_points = detail::find_triple_points(diagram, sing.segments, tol, &sing.degeneracies);
  stitch_curves(diagram, sing, tol);
  return sing;
}

SingularitySummary singularity_summary(const SingularitySet& sing, const BrokenSurface& broken) {
  SingularitySummary s;
  s.double_curve_count = static_cast<int>(sing.double_curves.size());
  s.triple_point_count = static_cast<int>(sing.triple_points.size());
  s.branch_point_count = static_cast<int>(sing.branch_points.size());
  s.sheet_count = broken.component_count;
  return s;
}

namespace {

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace

ProjectionSearch optimize_projection(const Surface4& surface, int candidate_count, std::uint64_t seed,
                                     const Tolerances& tol) {
  if (candidate_count < 1) throw ValidationError("optimize_projection: need at least one candidate");
  ProjectionSearch search;
  auto evaluate = [&](const std::string& label, const Vec4& dir, auto&& project) {
    ProjectionCandidate c;
    c.label = label;
    c.direction = dir;
    try {
      const ImmersedDiagram3 d = project();
      if (!d.generic()) {
        c.note = "non-generic: " + d.degeneracies.front().kind;
      } else {
        c.triple_count = static_cast<int>(compute_singularity_set(d, tol).triple_points.size());
        c.ok = true;
      }
    } catch (const GenericityError& e) {
      c.note = e.what();
    }
    if (c.ok && (search.best_triple_count < 0 || c.triple_count < search.best_triple_count)) {
      search.best_triple_count = c.triple_count;
      search.best_direction = dir;
    }
    search.trace.push_back(std::move(c));
  };
  for (Axis4 axis : {Axis4::kX, Axis4::kY, Axis4::kU, Axis4::kV}) {
    Vec4 dir = Vec4::Zero();
    dir[static_cast<int>(axis)] = 1.0;
    evaluate(std::string("drop ") + to_string(axis), dir,
             [&] { return project_generic(surface, axis, 0.0, seed, tol); });
  }
  // Shoemake's uniform map from the unit cube to unit quaternions, fed with a
  // Halton sequence shifted by a seeded offset (Cranley-Patterson rotation).
  Rng rng(seed);
  const double o1 = rng.uniform();
  const double o2 = rng.uniform();
  const double o3 = rng.uniform();
  for (int k = 0; k < candidate_count; ++k) {
    const double u1 = std::fmod(radical_inverse(k + 1, 2) + o1, 1.0);
    const double u2 = std::fmod(radical_inverse(k + 1, 3) + o2, 1.0);
    const double u3 = std::fmod(radical_inverse(k + 1, 5) + o3, 1.0);
    const double a = std::sqrt(1.0 - u1);
    const double b = std::sqrt(u1);
    const Vec4 dir(a * std::sin(kTwoPi * u2), a * std::cos(kTwoPi * u2), b * std::sin(kTwoPi * u3),
                   b * std::cos(kTwoPi * u3));
    evaluate("quasi " + std::to_string(k), dir, [&] { return project_along(surface, dir, tol); });
  }
  return search;
}

}  // namespace twistspin
