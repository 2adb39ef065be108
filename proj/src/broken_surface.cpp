#include "twistspin/diagram_projector.hpp"
#include "twistspin/error.hpp"
#include "twistspin/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace twistspin {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Where a cut endpoint sits on its under-triangle.
struct Placement {
  enum Kind { kCorner, kEdge, kInterior } kind = kInterior;
  int index = -1;      // corner or local edge
  double param = 0.0;  // along the mesh edge, measured from its lower vertex id
};

Placement place(const ImmersedDiagram3& d, const Tri& tri, const Vec3& p, double tol) {
  Placement pl;
  for (int k = 0; k < 3; ++k) {
    if ((d.vertices[tri[k]] - p).norm() <= tol) {
      pl.kind = Placement::kCorner;
      pl.index = k;
      return pl;
    }
  }
  for (int k = 0; k < 3; ++k) {
    int a = tri[k];
    int b = tri[(k + 1) % 3];
    if (a > b) std::swap(a, b);
    const Vec3& pa = d.vertices[a];
    const Vec3 e = d.vertices[b] - pa;
    const double t = std::clamp(e.dot(p - pa) / e.squaredNorm(), 0.0, 1.0);
    if ((pa + t * e - p).norm() <= tol) {
      pl.kind = Placement::kEdge;
      pl.index = k;
      pl.param = t;
      return pl;
    }
  }
  return pl;
}

struct Face {
  std::vector<int> outer;               // node ids, counter-clockwise
  std::vector<std::vector<int>> holes;  // node ids
};

struct Arrangement {
  std::vector<Vec2> pos;
  std::vector<Vec3> pos3;
  std::vector<bool> on_cut;
  std::vector<Face> faces;
  // Per local edge k: face id of each sub-interval, in local order k -> k+1.
  std::array<std::vector<int>, 3> interval_face;
  std::array<std::vector<bool>, 3> interval_blocked;
  double feature_size = std::numeric_limits<double>::infinity();
};

// Planar arrangement of triangle `t` cut along `cuts` (3D segments lying in it).
// `edge_params[k]` are the canonical split parameters of local edge k, in local
// order (from corner k towards corner k+1).
Arrangement arrange(const ImmersedDiagram3& d, int t, const std::vector<std::pair<Vec3, Vec3>>& cuts,
                    const std::array<std::vector<double>, 3>& edge_params, double tol) {
  const Tri& tri = d.triangles[t];
  const Vec3 c0 = d.vertices[tri[0]];
  const Vec3 e1 = (d.vertices[tri[1]] - c0).normalized();
  Vec3 n = (d.vertices[tri[1]] - c0).cross(d.vertices[tri[2]] - c0);
  const Vec3 e2 = n.normalized().cross(e1);
  auto to2 = [&](const Vec3& p) { return Vec2((p - c0).dot(e1), (p - c0).dot(e2)); };

  Arrangement ar;
  auto add_node = [&](const Vec3& p, bool cut) {
    ar.pos.push_back(to2(p));
    ar.pos3.push_back(p);
    ar.on_cut.push_back(cut);
    return static_cast<int>(ar.pos.size()) - 1;
  };
  for (int k = 0; k < 3; ++k) add_node(d.vertices[tri[k]], false);
  std::array<std::vector<int>, 3> chain;
  for (int k = 0; k < 3; ++k) {
    const Vec3& a = d.vertices[tri[k]];
    const Vec3& b = d.vertices[tri[(k + 1) % 3]];
    chain[k].push_back(k);
    for (double s : edge_params[k]) chain[k].push_back(add_node(a + s * (b - a), true));
    chain[k].push_back((k + 1) % 3);
  }

  std::vector<std::array<int, 2>> cut_edges;
  auto node_for = [&](const Vec3& p) {
    const Placement pl = place(d, tri, p, tol);
    if (pl.kind == Placement::kCorner) {
      ar.on_cut[pl.index] = true;
      return pl.index;
    }
    if (pl.kind == Placement::kEdge) {
      const int k = pl.index;
      const bool forward = tri[k] < tri[(k + 1) % 3];
      const double local = forward ? pl.param : 1.0 - pl.param;
      int best = -1;
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < edge_params[k].size(); ++i) {
        const double g = std::abs(edge_params[k][i] - local);
        if (g < gap) {
          gap = g;
          best = chain[k][i + 1];
        }
      }
      if (best >= 0) return best;
    }
    for (std::size_t i = 3; i < ar.pos3.size(); ++i) {
      if ((ar.pos3[i] - p).norm() <= tol) return static_cast<int>(i);
    }
    return add_node(p, true);
  };
  for (const auto& [p, q] : cuts) {
    const int a = node_for(p);
    const int b = node_for(q);
    if (a != b) cut_edges.push_back({std::min(a, b), std::max(a, b)});
  }

  // Split cuts at mutual crossings and at nodes lying on them until stable.
  for (bool changed = true; changed;) {
    changed = false;
    std::sort(cut_edges.begin(), cut_edges.end());
    cut_edges.erase(std::unique(cut_edges.begin(), cut_edges.end()), cut_edges.end());
    for (std::size_t i = 0; i < cut_edges.size() && !changed; ++i) {
      const auto [a, b] = cut_edges[i];
      for (int v = 0; v < static_cast<int>(ar.pos.size()) && !changed; ++v) {
        if (v == a || v == b) continue;
        const Vec2 ab = ar.pos[b] - ar.pos[a];
        const double s = ab.dot(ar.pos[v] - ar.pos[a]) / ab.squaredNorm();
        if (s <= 0.0 || s >= 1.0) continue;
        if ((ar.pos[a] + s * ab - ar.pos[v]).norm() > tol) continue;
        cut_edges[i] = {std::min(a, v), std::max(a, v)};
        cut_edges.push_back({std::min(v, b), std::max(v, b)});
        ar.on_cut[v] = true;
        changed = true;
      }
      for (std::size_t j = i + 1; j < cut_edges.size() && !changed; ++j) {
        const auto [c, e] = cut_edges[j];
        if (a == c || a == e || b == c || b == e) continue;
        double s = 0.0;
        double u = 0.0;
        if (!segments_cross_2d(ar.pos[a], ar.pos[b], ar.pos[c], ar.pos[e], 0.0, s, u)) continue;
        const Vec3 p = ar.pos3[a] + s * (ar.pos3[b] - ar.pos3[a]);
        int x = -1;
        for (std::size_t k = 3; k < ar.pos3.size(); ++k) {
          if ((ar.pos3[k] - p).norm() <= tol) x = static_cast<int>(k);
        }
        if (x < 0) x = add_node(p, true);
        if (x == a || x == b || x == c || x == e) continue;
        cut_edges[i] = {std::min(a, x), std::max(a, x)};
        cut_edges[j] = {std::min(c, x), std::max(c, x)};
        cut_edges.push_back({std::min(x, b), std::max(x, b)});
        cut_edges.push_back({std::min(x, e), std::max(x, e)});
        changed = true;
      }
    }
  }

  // Local feature size: closest approach of cut curves that do not touch inside
  // this triangle (bands wider than half of it would merge them).
  UnionFind touching(static_cast<int>(ar.pos.size()));
  for (const auto& [a, b] : cut_edges) touching.unite(a, b);
  for (std::size_t i = 0; i < cut_edges.size(); ++i) {
    for (std::size_t j = i + 1; j < cut_edges.size(); ++j) {
      const auto [a, b] = cut_edges[i];
      const auto [c, e] = cut_edges[j];
      if (touching.find(a) == touching.find(c)) continue;
      ar.feature_size = std::min(ar.feature_size, segment_distance(ar.pos3[a], ar.pos3[b], ar.pos3[c], ar.pos3[e]));
    }
  }

  // Undirected edges: boundary sub-edges then cuts not already on the boundary.
  std::vector<std::array<int, 2>> edges;
  std::map<std::array<int, 2>, int> edge_id;
  std::vector<bool> is_cut;
  auto add_edge = [&](int a, int b, bool cut) {
    const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    const auto it = edge_id.find(key);
    if (it != edge_id.end()) {
      if (cut) is_cut[it->second] = true;
      return;
    }
    edge_id.emplace(key, static_cast<int>(edges.size()));
    edges.push_back({a, b});
    is_cut.push_back(cut);
  };
  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i + 1 < chain[k].size(); ++i) add_edge(chain[k][i], chain[k][i + 1], false);
  }
  for (const auto& [a, b] : cut_edges) add_edge(a, b, true);

  // Half-edges 2e (a -> b) and 2e+1 (b -> a).
  const int nn = static_cast<int>(ar.pos.size());
  const int nh = 2 * static_cast<int>(edges.size());
  auto origin = [&](int h) { return (h & 1) ? edges[h >> 1][1] : edges[h >> 1][0]; };
  auto target = [&](int h) { return origin(h ^ 1); };
  std::vector<std::vector<int>> out(nn);
  for (int h = 0; h < nh; ++h) out[origin(h)].push_back(h);
  for (int v = 0; v < nn; ++v) {
    auto angle = [&](int h) {
      const Vec2 dv = ar.pos[target(h)] - ar.pos[v];
      return std::atan2(dv.y(), dv.x());
    };
    std::sort(out[v].begin(), out[v].end(), [&](int x, int y) { return angle(x) < angle(y); });
  }
  std::vector<int> slot(nh);
  for (int v = 0; v < nn; ++v) {
    for (std::size_t i = 0; i < out[v].size(); ++i) slot[out[v][i]] = static_cast<int>(i);
  }
  auto next = [&](int h) {
    const int v = target(h);
    const int twin = h ^ 1;
    const int deg = static_cast<int>(out[v].size());
    return out[v][(slot[twin] - 1 + deg) % deg];
  };

  std::vector<int> cycle_of(nh, -1);
  std::vector<std::vector<int>> cycles;
  for (int h = 0; h < nh; ++h) {
    if (cycle_of[h] >= 0) continue;
    const int id = static_cast<int>(cycles.size());
    cycles.emplace_back();
    for (int g = h; cycle_of[g] < 0; g = next(g)) {
      cycle_of[g] = id;
      cycles.back().push_back(g);
    }
  }
  const int nc = static_cast<int>(cycles.size());
  std::vector<double> area(nc, 0.0);
  for (int c = 0; c < nc; ++c) {
    for (int h : cycles[c]) area[c] += cross2(ar.pos[origin(h)], ar.pos[target(h)]);
    area[c] *= 0.5;
  }
  // The exterior is the cycle running clockwise along the triangle boundary.
  const int first_edge = edge_id.at({std::min(chain[0][0], chain[0][1]), std::max(chain[0][0], chain[0][1])});
  const int exterior = cycle_of[2 * first_edge + (edges[first_edge][0] == chain[0][0] ? 1 : 0)];

  // Connected pieces of the edge graph, so holes are not matched to their own faces.
  UnionFind comp(nn);
  for (const auto& [a, b] : edges) comp.unite(a, b);

  std::vector<int> face_of_cycle(nc, -1);
  for (int c = 0; c < nc; ++c) {
    if (c == exterior || area[c] <= 0.0) continue;
    face_of_cycle[c] = static_cast<int>(ar.faces.size());
    Face f;
    for (int h : cycles[c]) f.outer.push_back(origin(h));
    ar.faces.push_back(std::move(f));
  }
  auto point_in = [&](int c, const Vec2& p) {
    bool inside = false;
    for (int h : cycles[c]) {
      const Vec2& a = ar.pos[origin(h)];
      const Vec2& b = ar.pos[target(h)];
      if ((a.y() > p.y()) != (b.y() > p.y())) {
        const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
        if (p.x() < x) inside = !inside;
      }
    }
    return inside;
  };
  for (int c = 0; c < nc; ++c) {
    if (c == exterior || face_of_cycle[c] >= 0) continue;
    const int root = comp.find(origin(cycles[c].front()));
    const Vec2 probe = ar.pos[origin(cycles[c].front())];
    int best = -1;
    for (int o = 0; o < nc; ++o) {
      if (face_of_cycle[o] < 0 || comp.find(origin(cycles[o].front())) == root) continue;
      if (!point_in(o, probe)) continue;
      if (best < 0 || area[o] < area[best]) best = o;
    }
    if (best < 0) {
      // Numerical fallback: attach to the largest face.
      for (int o = 0; o < nc; ++o) {
        if (face_of_cycle[o] >= 0 && (best < 0 || area[o] > area[best])) best = o;
      }
    }
    face_of_cycle[c] = face_of_cycle[best];
    std::vector<int> hole;
    for (int h : cycles[c]) hole.push_back(origin(h));
    ar.faces[face_of_cycle[best]].holes.push_back(std::move(hole));
  }

  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i + 1 < chain[k].size(); ++i) {
      const int a = chain[k][i];
      const int b = chain[k][i + 1];
      const int e = edge_id.at({std::min(a, b), std::max(a, b)});
      const int h = 2 * e + (edges[e][0] == a ? 0 : 1);  // a -> b, interior on the left
      ar.interval_face[k].push_back(face_of_cycle[cycle_of[h]]);
      ar.interval_blocked[k].push_back(is_cut[e]);
    }
  }
  return ar;
}

}  // namespace

BrokenSurface break_sheets(const ImmersedDiagram3& d, const SingularitySet& sing, double band_width,
                           const Tolerances& tol) {
  const double scale = std::max(d.scale(), 1e-300);
  if (band_width <= 0.0) band_width = 1e-5 * scale;
  const double snap = tol.stitch * scale;
  const int nt = static_cast<int>(d.triangles.size());
  const MeshTopology topo = build_topology(d.triangles, static_cast<int>(d.vertices.size()));

  BrokenSurface broken;
  broken.band_width = band_width;
  std::vector<std::vector<std::pair<Vec3, Vec3>>> cuts(nt);
  for (const auto& s : sing.segments) {
    cuts[s.under].emplace_back(s.p0, s.p1);
    broken.cuts.emplace_back(s.p0, s.p1);
  }

  // Canonical split parameters per mesh edge, gathered from both sides.
  std::vector<std::vector<double>> params(topo.edges.size());
  for (int t = 0; t < nt; ++t) {
    for (const auto& [p, q] : cuts[t]) {
      for (const Vec3* x : {&p, &q}) {
        const Placement pl = place(d, d.triangles[t], *x, snap);
        if (pl.kind == Placement::kEdge) params[topo.triangle_edges[t][pl.index]].push_back(pl.param);
      }
    }
  }
  for (std::size_t e = 0; e < params.size(); ++e) {
    auto& ps = params[e];
    if (ps.empty()) continue;
    const double len = (d.vertices[topo.edges[e][1]] - d.vertices[topo.edges[e][0]]).norm();
    const double gap = snap / len;
    std::sort(ps.begin(), ps.end());
    std::vector<double> merged;
    for (double p : ps) {
      if (p <= gap || p >= 1.0 - gap) continue;
      if (merged.empty() || p - merged.back() > gap) merged.push_back(p);
    }
    ps = std::move(merged);
  }

  std::vector<Arrangement> arrangements(nt);
  std::vector<int> face_offset(nt + 1, 0);
  for (int t = 0; t < nt; ++t) {
    std::array<std::vector<double>, 3> local;
    for (int k = 0; k < 3; ++k) {
      const auto& ps = params[topo.triangle_edges[t][k]];
      const bool forward = d.triangles[t][k] < d.triangles[t][(k + 1) % 3];
      for (double p : ps) local[k].push_back(forward ? p : 1.0 - p);
      std::sort(local[k].begin(), local[k].end());
    }
    arrangements[t] = arrange(d, t, cuts[t], local, snap);
    if (2.0 * band_width >= arrangements[t].feature_size) {
      throw ValidationError("over-broad band: band width " + std::to_string(band_width) +
                            " exceeds the local feature size near triangle " + std::to_string(t));
    }
    face_offset[t + 1] = face_offset[t] + static_cast<int>(arrangements[t].faces.size());
  }

  UnionFind uf(face_offset[nt]);
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    const auto& ts = topo.edge_triangles[e];
    if (ts.size() != 2) continue;
    std::array<std::vector<int>, 2> faces;
    std::array<std::vector<bool>, 2> blocked;
    for (int side = 0; side < 2; ++side) {
      const int t = ts[side];
      const int k = std::find(topo.triangle_edges[t].begin(), topo.triangle_edges[t].end(), static_cast<int>(e)) -
                    topo.triangle_edges[t].begin();
      faces[side] = arrangements[t].interval_face[k];
      blocked[side] = arrangements[t].interval_blocked[k];
      if (d.triangles[t][k] > d.triangles[t][(k + 1) % 3]) {
        std::reverse(faces[side].begin(), faces[side].end());
        std::vector<bool> b(blocked[side].rbegin(), blocked[side].rend());
        blocked[side] = b;
      }
    }
    if (faces[0].size() != faces[1].size()) {
      throw GenericityError("sheet breaking: inconsistent edge subdivision between neighbouring triangles");
    }
    for (std::size_t i = 0; i < faces[0].size(); ++i) {
      if (blocked[0][i] || blocked[1][i]) continue;
      uf.unite(face_offset[ts[0]] + faces[0][i], face_offset[ts[1]] + faces[1][i]);
    }
  }

  std::map<int, int> component_id;
  for (int t = 0; t < nt; ++t) {
    const Arrangement& ar = arrangements[t];
    for (std::size_t f = 0; f < ar.faces.size(); ++f) {
      const int root = uf.find(face_offset[t] + static_cast<int>(f));
      const auto [it, inserted] = component_id.emplace(root, static_cast<int>(component_id.size()));
      SheetPiece piece;
      piece.triangle = t;
      piece.component = it->second;
      for (int v : ar.faces[f].outer) {
        piece.outer.push_back(ar.pos3[v]);
        piece.outer_on_cut.push_back(ar.on_cut[v]);
      }
      for (const auto& hole : ar.faces[f].holes) {
        std::vector<Vec3> h;
        for (int v : hole) h.push_back(ar.pos3[v]);
        piece.holes.push_back(std::move(h));
      }
      broken.pieces.push_back(std::move(piece));
    }
  }
  broken.component_count = static_cast<int>(component_id.size());
  broken.components.assign(broken.component_count, {});
  for (const auto& p : broken.pieces) broken.components[p.component].push_back(p.triangle);
  for (auto& c : broken.components) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  return broken;
}

}  // namespace twistspin
