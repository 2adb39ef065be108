#include "twistspin/slicer.hpp"

#include "twistspin/error.hpp"
#include "twistspin/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

namespace twistspin {

const char* to_string(SliceFamily family) {
  switch (family) {
    case SliceFamily::kVertical: return "vertical";
    case SliceFamily::kHorizontal: return "horizontal";
    case SliceFamily::kRadial: return "radial";
  }
  return "vertical";
}

SliceFamily parse_slice_family(const std::string& name) {
  if (name == "vertical") return SliceFamily::kVertical;
  if (name == "horizontal") return SliceFamily::kHorizontal;
  if (name == "radial") return SliceFamily::kRadial;
  throw ValidationError("unknown slice family '" + name + "'");
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kMinimum: return "minimum";
    case EventKind::kMaximum: return "maximum";
    case EventKind::kSaddle: return "saddle";
  }
  return "minimum";
}

EventKind parse_event_kind(const std::string& name) {
  if (name == "minimum") return EventKind::kMinimum;
  if (name == "maximum") return EventKind::kMaximum;
  if (name == "saddle") return EventKind::kSaddle;
  throw ValidationError("unknown event kind '" + name + "'");
}

namespace {

// Level set {f = level} of a PL function on a closed triangle mesh. A vertex is
// on the positive side iff f > level. Returns loops of crossing-edge indices.
std::vector<std::vector<int>> level_loops(const MeshTopology& topo, const std::vector<double>& f, double level) {
  const int ne = static_cast<int>(topo.edges.size());
  std::vector<char> crossing(ne, 0);
  for (int e = 0; e < ne; ++e) {
    crossing[e] = (f[topo.edges[e][0]] > level) != (f[topo.edges[e][1]] > level);
  }
  // Each triangle with a sign change has exactly two crossing edges.
  std::vector<std::array<int, 2>> partner(ne, {-1, -1});
  auto link = [&](int a, int b) {
    auto& pa = partner[a];
    (pa[0] < 0 ? pa[0] : pa[1]) = b;
  };
  for (const auto& te : topo.triangle_edges) {
    int found[2];
    int n = 0;
    for (int e : te) {
      if (crossing[e]) found[n++] = e;
    }
    if (n == 2) {
      link(found[0], found[1]);
      link(found[1], found[0]);
    }
  }
  std::vector<char> seen(ne, 0);
  std::vector<std::vector<int>> loops;
  for (int s = 0; s < ne; ++s) {
    if (!crossing[s] || seen[s]) continue;
    std::vector<int> loop{s};
    seen[s] = 1;
    int prev = s;
    int cur = partner[s][0];
    while (cur >= 0 && cur != s) {
      loop.push_back(cur);
      seen[cur] = 1;
      const int next = partner[cur][0] == prev ? partner[cur][1] : partner[cur][0];
      prev = cur;
      cur = next;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

double edge_param(const std::vector<double>& f, int a, int b, double level) {
  const double den = f[b] - f[a];
  return den == 0.0 ? 0.0 : std::clamp((level - f[a]) / den, 0.0, 1.0);
}

void drop_repeats(std::vector<Vec3>& pts, double tol) {
  std::vector<Vec3> out;
  for (const Vec3& p : pts) {
    if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
  pts = std::move(out);
}

double diagram_scale4(const std::vector<Vec4>& v) { return bbox_diagonal(std::span<const Vec4>(v)); }

// Moves `t` off every value in `f` by alternating steps; returns the new value.
double clear_of_values(const std::vector<double>& f, double t, double clearance, double step, bool* moved) {
  auto blocked = [&](double x) {
    return std::any_of(f.begin(), f.end(), [&](double y) { return std::abs(y - x) <= clearance; });
  };
  *moved = false;
  if (!blocked(t)) return t;
  *moved = true;
  for (int k = 1; k <= 64; ++k) {
    const double cand = t + ((k % 2) ? 1.0 : -1.0) * ((k + 1) / 2) * step;
    if (!blocked(cand)) return cand;
  }
  throw GenericityError("frame parameter could not be moved off vertex values");
}

Vec3 pick3(const Vec4& p, const std::array<int, 3>& idx) { return Vec3(p[idx[0]], p[idx[1]], p[idx[2]]); }

int family_axis(SliceFamily family) {
  if (family == SliceFamily::kVertical) return 3;
  if (family == SliceFamily::kHorizontal) return 1;
  throw ValidationError("radial family has no height axis on the surface");
}

std::array<int, 3> family_coords(SliceFamily family) {
  return family == SliceFamily::kVertical ? std::array<int, 3>{0, 1, 2} : std::array<int, 3>{0, 2, 3};
}

std::string describe(const Surface4& s) {
  return s.meta.arc_id + " n=" + std::to_string(s.meta.twist) + " m=" + std::to_string(s.meta.angular_samples);
}

MotionPicture slice_family(const Surface4& surface, SliceFamily family, const std::vector<double>& frame_values) {
  std::vector<double> values = frame_values;
  std::sort(values.begin(), values.end());
  if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
    throw ValidationError("frame parameters must be distinct");
  }
  const int axis = family_axis(family);
  const auto coords = family_coords(family);
  const double scale = diagram_scale4(surface.vertices);
  const MeshTopology topo = build_topology(surface.triangles, static_cast<int>(surface.vertices.size()));
  std::vector<double> f(surface.vertices.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = surface.vertices[i][axis];

  MotionPicture mp;
  mp.family = family;
  mp.source = describe(surface);
  mp.events = detect_events(surface, family, 0.0, 0);
  for (double t : values) {
    Frame fr;
    fr.requested = t;
    fr.parameter = clear_of_values(f, t, kVertexClearance * scale, kNudgeFraction * scale, &fr.nudged);
    for (const auto& e : mp.events) fr.flagged |= std::abs(e.value - t) <= kNudgeFraction * scale;
    for (const auto& loop : level_loops(topo, f, fr.parameter)) {
      std::vector<Vec3> pts;
      pts.reserve(loop.size());
      for (int e : loop) {
        const auto [a, b] = topo.edges[e];
        const double s = edge_param(f, a, b, fr.parameter);
        pts.push_back(pick3(surface.vertices[a] + s * (surface.vertices[b] - surface.vertices[a]), coords));
      }
      drop_repeats(pts, kFrameMergeFraction * scale);
      if (pts.size() >= 3) fr.curves.push_back(std::move(pts));
    }
    mp.frames.push_back(std::move(fr));
  }
  return mp;
}

// Cyclic link of vertex v as an ordered list of neighbours (closed manifold star).
std::vector<int> vertex_link(const std::vector<Tri>& tris, const std::vector<int>& star, int v) {
  std::map<int, int> next;
  for (int t : star) {
    const Tri& tri = tris[t];
    const int k = tri[0] == v ? 0 : tri[1] == v ? 1 : 2;
    next[tri[(k + 1) % 3]] = tri[(k + 2) % 3];
  }
  std::vector<int> cycle;
  if (next.empty()) return cycle;
  const int start = next.begin()->first;
  int cur = start;
  do {
    cycle.push_back(cur);
    const auto it = next.find(cur);
    if (it == next.end()) break;
    cur = it->second;
  } while (cur != start && cycle.size() <= next.size());
  return cycle;
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

MotionPicture slice_vertical(const Surface4& surface, const std::vector<double>& frame_values) {
  return slice_family(surface, SliceFamily::kVertical, frame_values);
}

MotionPicture slice_horizontal(const Surface4& surface, const std::vector<double>& frame_values) {
  return slice_family(surface, SliceFamily::kHorizontal, frame_values);
}

std::vector<CriticalEvent> detect_events(const Surface4& surface, SliceFamily family, double tilt,
                                         std::uint64_t seed) {
  if (tilt < 0.0) throw ValidationError("tilt must be nonnegative");
  const int axis = family_axis(family);
  const auto coords = family_coords(family);
  Vec4 dir = Vec4::Zero();
  dir[axis] = 1.0;
  if (tilt > 0.0) {
    Rng rng(seed);
    dir = (random_small_rotation(tilt, rng) * dir).normalized();
  }
  const int nv = static_cast<int>(surface.vertices.size());
  std::vector<double> h(nv);
  for (int i = 0; i < nv; ++i) h[i] = surface.vertices[i].dot(dir);
  const MeshTopology topo = build_topology(surface.triangles, nv);
  const double tol = tilt > 0.0 ? 0.0 : 1e-12 * diagram_scale4(surface.vertices);
  // Strict order with index tie-break (simulation of simplicity).
  auto below = [&](int a, int b) { return h[a] < h[b] || (h[a] == h[b] && a < b); };

  // Plateaus: vertices joined by edges of equal height (untilted only).
  Dsu plateau(nv);
  if (tol > 0.0) {
    for (const auto& e : topo.edges) {
      if (std::abs(h[e[0]] - h[e[1]]) <= tol) plateau.unite(e[0], e[1]);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < nv; ++v) groups[plateau.find(v)].push_back(v);

  std::vector<CriticalEvent> events;
  for (const auto& [root, members] : groups) {
    CriticalEvent ev;
    ev.vertex = members.front();
    ev.value = h[ev.vertex];
    ev.location = pick3(surface.vertices[ev.vertex], coords);
    if (members.size() == 1) {
      const int v = members.front();
      const auto cycle = vertex_link(surface.triangles, topo.vertex_triangles[v], v);
      int lower = 0;
      int runs = 0;
      for (std::size_t k = 0; k < cycle.size(); ++k) {
        const bool lo = below(cycle[k], v);
        lower += lo;
        runs += lo && !below(cycle[(k + cycle.size() - 1) % cycle.size()], v);
      }
      if (lower == 0) {
        ev.kind = EventKind::kMinimum;
      } else if (lower == static_cast<int>(cycle.size())) {
        ev.kind = EventKind::kMaximum;
      } else if (runs >= 2) {
        ev.kind = EventKind::kSaddle;
        ev.multiplicity = runs - 1;
      } else {
        continue;
      }
    } else {
      const double level = h[members.front()];
      std::vector<char> in(nv, 0);
      for (int v : members) in[v] = 1;
      std::vector<int> side(nv, 0);  // -1 lower, +1 upper neighbour
      std::vector<int> star;
      for (int v : members) {
        for (int t : topo.vertex_triangles[v]) star.push_back(t);
      }
      std::sort(star.begin(), star.end());
      star.erase(std::unique(star.begin(), star.end()), star.end());
      for (int t : star) {
        for (int w : surface.triangles[t]) {
          if (!in[w]) side[w] = h[w] < level ? -1 : 1;
        }
      }
      Dsu comp(nv);
      for (int t : star) {
        const Tri& tri = surface.triangles[t];
        for (int k = 0; k < 3; ++k) {
          const int a = tri[k];
          const int b = tri[(k + 1) % 3];
          if (!in[a] && !in[b] && side[a] == side[b]) comp.unite(a, b);
        }
      }
      std::vector<int> lower_roots, upper_roots;
      for (int w = 0; w < nv; ++w) {
        if (side[w] < 0) lower_roots.push_back(comp.find(w));
        if (side[w] > 0) upper_roots.push_back(comp.find(w));
      }
      auto distinct = [](std::vector<int>& r) {
        std::sort(r.begin(), r.end());
        return static_cast<int>(std::unique(r.begin(), r.end()) - r.begin());
      };
      const int lc = distinct(lower_roots);
      const int uc = distinct(upper_roots);
      if (lc == 0 && uc == 0) continue;
      if (lc == 0) {
        ev.kind = EventKind::kMinimum;
      } else if (uc == 0) {
        ev.kind = EventKind::kMaximum;
      } else if (lc == 1 && uc == 1) {
        continue;
      } else {
        ev.kind = EventKind::kSaddle;
        ev.multiplicity = std::max(lc, uc) - 1;
      }
      for (int v : members) ev.degenerate_set.push_back(pick3(surface.vertices[v], coords));
    }
    events.push_back(std::move(ev));
  }
  std::sort(events.begin(), events.end(), [&](const CriticalEvent& a, const CriticalEvent& b) {
    return a.value != b.value ? a.value < b.value : a.vertex < b.vertex;
  });
  return events;
}

int morse_balance(const std::vector<CriticalEvent>& events) {
  int sum = 0;
  for (const auto& e : events) sum += e.kind == EventKind::kSaddle ? -e.multiplicity : 1;
  return sum;
}

MotionPicture slice_radial(const ImmersedDiagram3& diagram, const std::vector<double>& angles,
                           const SingularitySet* sing, const BrokenSurface* broken) {
  if (diagram.drop_axis != Axis4::kX) throw ValidationError("radial slicing needs a drop-x diagram");
  std::vector<double> values = angles;
  std::sort(values.begin(), values.end());
  if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
    throw ValidationError("frame angles must be distinct");
  }
  const auto& V = diagram.vertices;
  const int nv = static_cast<int>(V.size());
  const double scale = diagram.scale();
  const MeshTopology topo = build_topology(diagram.triangles, nv);

  std::vector<double> singular_angles;
  if (sing) {
    for (const auto& t : sing->triple_points) singular_angles.push_back(std::atan2(t.point.z(), t.point.y()));
    for (const auto& b : sing->branch_points) singular_angles.push_back(std::atan2(b.point.z(), b.point.y()));
  }
  auto angle_gap = [](double a, double b) {
    const double d = std::remainder(a - b, kTwoPi);
    return std::abs(d);
  };

  MotionPicture mp;
  mp.family = SliceFamily::kRadial;
  mp.source = std::string("diagram drop ") + to_string(diagram.drop_axis);
  for (double theta0 : values) {
    Frame fr;
    fr.requested = theta0;
    double theta = theta0;
    for (int k = 1; k <= 64; ++k) {
      const bool near_singular = std::any_of(singular_angles.begin(), singular_angles.end(),
                                             [&](double a) { return angle_gap(a, theta) <= kAngularClearance; });
      if (k == 1) fr.flagged = near_singular;
      if (!near_singular) break;
      theta = theta0 + ((k % 2) ? 1.0 : -1.0) * ((k + 1) / 2) * 2.0 * kAngularClearance;
    }
    // Off-axis vertices lying on the plane move the angle slightly.
    const double base = theta;
    for (int k = 1; k <= 64; ++k) {
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      bool touching = false;
      for (int i = 0; i < nv && !touching; ++i) {
        const double r = std::hypot(V[i].y(), V[i].z());
        touching = r > kVertexClearance * scale && std::abs(-V[i].y() * s + V[i].z() * c) <= kVertexClearance * scale;
      }
      if (!touching) break;
      theta = base + ((k % 2) ? 1.0 : -1.0) * ((k + 1) / 2) * kNudgeFraction;
    }
    fr.parameter = theta;
    fr.nudged = theta != theta0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<double> f(nv), w(nv);
    for (int i = 0; i < nv; ++i) {
      f[i] = -V[i].y() * s + V[i].z() * c;
      w[i] = V[i].y() * c + V[i].z() * s;
    }
    auto frame_point = [&](int a, int b, double t) {
      return Vec3(V[a].x() + t * (V[b].x() - V[a].x()), w[a] + t * (w[b] - w[a]),
                  diagram.height[a] + t * (diagram.height[b] - diagram.height[a]));
    };

    // Full-plane loops, clipped to the closed half-plane r >= 0.
    std::vector<std::vector<Vec3>> closed;
    std::vector<std::vector<Vec3>> runs;
    for (const auto& loop : level_loops(topo, f, 0.0)) {
      std::vector<Vec3> pts;
      for (int e : loop) {
        const auto [a, b] = topo.edges[e];
        pts.push_back(frame_point(a, b, edge_param(f, a, b, 0.0)));
      }
      const int n = static_cast<int>(pts.size());
      auto cut = [&](const Vec3& p, const Vec3& q) {
        const double t = p.y() / (p.y() - q.y());
        Vec3 x = p + t * (q - p);
        x.y() = 0.0;
        return x;
      };
      if (std::all_of(pts.begin(), pts.end(), [](const Vec3& p) { return p.y() > 0.0; })) {
        closed.push_back(std::move(pts));
        continue;
      }
      int start = 0;
      while (start < n && pts[start].y() > 0.0) ++start;
      std::vector<Vec3> run;
      for (int k = 0; k < n; ++k) {
        const Vec3& p = pts[(start + k) % n];
        const Vec3& q = pts[(start + k + 1) % n];
        const double w0 = p.y();
        const double w1 = q.y();
        if (w0 >= 0.0 && w1 >= 0.0 && (w0 > 0.0 || w1 > 0.0)) {
          if (run.empty()) run.push_back(p);
          run.push_back(q);
        } else if (w0 > 0.0 && w1 < 0.0) {
          if (run.empty()) run.push_back(p);
          run.push_back(cut(p, q));
        } else if (w0 < 0.0 && w1 > 0.0) {
          run.push_back(cut(p, q));
          run.push_back(q);
        }
        const bool ends = run.size() >= 2 && run.back().y() <= 0.0;
        if (ends) {
          runs.push_back(std::move(run));
          run.clear();
        }
      }
      if (!run.empty()) runs.push_back(std::move(run));
    }
    // Join open runs along the axis: endpoints sorted by y are paired in order.
    struct End {
      double y;
      int run;
      int side;
    };
    std::vector<End> ends;
    for (int r = 0; r < static_cast<int>(runs.size()); ++r) {
      ends.push_back({runs[r].front().x(), r, 0});
      ends.push_back({runs[r].back().x(), r, 1});
    }
    std::sort(ends.begin(), ends.end(), [](const End& a, const End& b) {
      return a.y != b.y ? a.y < b.y : std::tie(a.run, a.side) < std::tie(b.run, b.side);
    });
    std::map<std::pair<int, int>, std::pair<int, int>> mate;
    for (std::size_t k = 0; k + 1 < ends.size(); k += 2) {
      mate[{ends[k].run, ends[k].side}] = {ends[k + 1].run, ends[k + 1].side};
      mate[{ends[k + 1].run, ends[k + 1].side}] = {ends[k].run, ends[k].side};
    }
    std::vector<char> used(runs.size(), 0);
    for (int r0 = 0; r0 < static_cast<int>(runs.size()); ++r0) {
      if (used[r0]) continue;
      std::vector<Vec3> curve;
      int r = r0;
      int entry = 0;
      while (!used[r]) {
        used[r] = 1;
        if (entry == 0) {
          curve.insert(curve.end(), runs[r].begin(), runs[r].end());
        } else {
          curve.insert(curve.end(), runs[r].rbegin(), runs[r].rend());
        }
        const auto it = mate.find({r, 1 - entry});
        if (it == mate.end()) break;
        r = it->second.first;
        entry = it->second.second;
      }
      closed.push_back(std::move(curve));
    }
    for (auto& curve : closed) {
      drop_repeats(curve, kFrameMergeFraction * scale);
      if (curve.size() >= 3) fr.curves.push_back(std::move(curve));
    }

    if (broken) {
      for (const auto& [p0, p1] : broken->cuts) {
        const double f0 = -p0.y() * s + p0.z() * c;
        const double f1 = -p1.y() * s + p1.z() * c;
        if ((f0 > 0.0) == (f1 > 0.0)) continue;
        const Vec3 x = p0 + (f0 / (f0 - f1)) * (p1 - p0);
        const Vec2 at(x.x(), x.y() * c + x.z() * s);
        if (at.y() <= 0.0) continue;
        BreakMark best;
        double best_h = 0.0;
        const double reach = 1e-6 * scale;
        for (int ci = 0; ci < fr.component_count(); ++ci) {
          const auto& cv = fr.curves[ci];
          for (int k = 0; k < static_cast<int>(cv.size()); ++k) {
            const Vec3& a = cv[k];
            const Vec3& b = cv[(k + 1) % cv.size()];
            const Vec2 ab(b.x() - a.x(), b.y() - a.y());
            const double len2 = ab.squaredNorm();
            const double t = len2 > 0.0 ? std::clamp(ab.dot(at - Vec2(a.x(), a.y())) / len2, 0.0, 1.0) : 0.0;
            const Vec3 q = a + t * (b - a);
            if ((Vec2(q.x(), q.y()) - at).norm() > reach) continue;
            if (best.curve < 0 || q.z() < best_h) {
              best = {ci, k, q};
              best_h = q.z();
            }
          }
        }
        if (best.curve >= 0) fr.breaks.push_back(best);
      }
      std::sort(fr.breaks.begin(), fr.breaks.end(), [](const BreakMark& a, const BreakMark& b) {
        return std::tie(a.curve, a.segment) < std::tie(b.curve, b.segment);
      });
    }
    mp.frames.push_back(std::move(fr));
  }
  return mp;
}

NormalFormReport check_normal_form(const MotionPicture& mp, double tolerance) {
  NormalFormReport r;
  r.conditions = {true, true, true, false};
  for (const auto& e : mp.events) {
    if (e.kind == EventKind::kMinimum && std::abs(e.value + 2.0) > tolerance) {
      r.conditions[0] = false;
      r.notes.push_back("minimum at t = " + std::to_string(e.value));
    }
    if (e.kind == EventKind::kMaximum && std::abs(e.value - 2.0) > tolerance) {
      r.conditions[1] = false;
      r.notes.push_back("maximum at t = " + std::to_string(e.value));
    }
    if (e.kind == EventKind::kSaddle && std::abs(std::abs(e.value) - 1.0) > tolerance) {
      r.conditions[2] = false;
      r.notes.push_back("saddle at t = " + std::to_string(e.value));
    }
  }
  if (mp.frames.empty()) {
    r.notes.push_back("no frames");
  } else {
    const auto mid = std::min_element(mp.frames.begin(), mp.frames.end(), [](const Frame& a, const Frame& b) {
      return std::abs(a.parameter) < std::abs(b.parameter);
    });
    r.conditions[3] = mid->component_count() == 1;
    if (!r.conditions[3]) {
      r.notes.push_back("frame at t = " + std::to_string(mid->parameter) + " has " +
                        std::to_string(mid->component_count()) + " components");
    }
  }
  r.ok = std::all_of(r.conditions.begin(), r.conditions.end(), [](bool b) { return b; });
  return r;
}

MotionPicture reparametrize(const MotionPicture& mp, const std::function<double(double)>& map) {
  MotionPicture out = mp;
  for (std::size_t i = 0; i < out.frames.size(); ++i) {
    out.frames[i].parameter = map(mp.frames[i].parameter);
    out.frames[i].requested = map(mp.frames[i].requested);
    if (i > 0 && !(out.frames[i].parameter > out.frames[i - 1].parameter)) {
      throw ValidationError("reparametrization is not strictly increasing");
    }
  }
  for (auto& e : out.events) e.value = map(e.value);
  for (std::size_t i = 1; i < out.events.size(); ++i) {
    if (out.events[i].value < out.events[i - 1].value) {
      throw ValidationError("reparametrization is not strictly increasing");
    }
  }
  return out;
}

std::vector<double> default_frame_values(const Surface4& surface, SliceFamily family, int count) {
  if (count < 1) throw ValidationError("frame count must be positive");
  std::vector<double> out;
  if (family == SliceFamily::kRadial) {
    for (int k = 0; k < count; ++k) out.push_back(kTwoPi * k / count);
    return out;
  }
  const int axis = family_axis(family);
  double lo = surface.vertices.front()[axis];
  double hi = lo;
  for (const Vec4& p : surface.vertices) {
    lo = std::min(lo, p[axis]);
    hi = std::max(hi, p[axis]);
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  if (count == 1) return {0.5 * (lo + hi)};
  for (int k = 0; k < count; ++k) out.push_back(lo + (hi - lo) * k / (count - 1));
  return out;
}

double frame_rotation_deviation(const Frame& frame, int order) {
  if (order < 1) throw ValidationError("rotation order must be positive");
  std::vector<Vec3> pts;
  for (const auto& c : frame.curves) pts.insert(pts.end(), c.begin(), c.end());
  const double a = kTwoPi / order;
  const double c = std::cos(a);
  const double s = std::sin(a);
  double worst = 0.0;
  for (const Vec3& p : pts) {
    const Vec3 q(p.x(), c * p.y() - s * p.z(), s * p.y() + c * p.z());
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& r : pts) best = std::min(best, (q - r).squaredNorm());
    worst = std::max(worst, std::sqrt(best));
  }
  return worst;
}

}  // namespace twistspin
