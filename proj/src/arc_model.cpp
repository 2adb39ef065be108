#include "twistspin/arc_model.hpp"

#include "twistspin/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace twistspin {

namespace {

// Layout of the trefoil fixture, in units of `scale`. The knotted part is a
// standard trefoil (lobes at 90, 210 and 330 degrees around the ball center),
// opened at the 210-degree lobe and routed out along a circle of radius
// kRouteRadius to the axis points (0, -kBallRadius, kCenterZ), (0, kBallRadius, kCenterZ).
constexpr double kCenterZ = 5.0;
constexpr double kBallRadius = 4.2;
constexpr double kFootY = 5.0;
constexpr double kRouteRadius = 3.5;
constexpr double kOpening = 0.2;  // half-width in curve parameter of the removed lobe tip
constexpr int kMinTrefoilSamples = 24;

Vec3 trefoil_point(double t) {
  const double y = -(std::sin(t) + 2.0 * std::sin(2.0 * t));
  const double z = -(std::cos(t) - 2.0 * std::cos(2.0 * t));
  return Vec3(-std::sin(3.0 * t), y, kCenterZ + z);
}

Vec3 route_point(double angle, double x) {
  return Vec3(x, kRouteRadius * std::cos(angle), kCenterZ + kRouteRadius * std::sin(angle));
}

double polar_angle(const Vec3& p) {
  double a = std::atan2(p.z() - kCenterZ, p.y());
  if (a < 0.0) a += kTwoPi;
  return a;
}

PolylineArc subdivide(const PolylineArc& arc, int factor) {
  if (factor <= 1) return arc;
  PolylineArc out;
  out.name = arc.name;
  for (std::size_t i = 0; i + 1 < arc.vertices.size(); ++i) {
    for (int k = 0; k < factor; ++k) {
      const double s = static_cast<double>(k) / factor;
      out.vertices.push_back(arc.vertices[i] + s * (arc.vertices[i + 1] - arc.vertices[i]));
    }
  }
  out.vertices.push_back(arc.vertices.back());
  return out;
}

}  // namespace

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kTooFewVertices: return "too few vertices";
    case ViolationKind::kEndpointOffBoundary: return "endpoint off boundary";
    case ViolationKind::kInteriorTouchesBoundary: return "interior touches boundary";
    case ViolationKind::kSelfIntersection: return "self-intersection";
    case ViolationKind::kDegenerateSegment: return "degenerate segment";
  }
  return "unknown";
}

PolylineArc make_trefoil_arc(double scale, int samples) {
  if (!(scale > 0.0)) throw ValidationError("trefoil arc: scale must be positive");
  if (samples < kMinTrefoilSamples) {
    throw ValidationError("trefoil arc: insufficient resolution (need at least " +
                          std::to_string(kMinTrefoilSamples) + " samples)");
  }
  const int left_route = std::max(1, samples / 40);
  const int right_route = std::max(3, samples / 12);
  const int knot_samples = samples - 8 - left_route - right_route;

  std::vector<Vec3> knot;
  knot.reserve(knot_samples);
  const double t_begin = kPi / 3.0 + kTwoPi - kOpening;
  const double t_end = kPi / 3.0 + kOpening;
  for (int k = 0; k < knot_samples; ++k) {
    const double s = static_cast<double>(k) / (knot_samples - 1);
    knot.push_back(trefoil_point(t_begin + s * (t_end - t_begin)));
  }
  const Vec3& left_end = knot.front();
  const Vec3& right_end = knot.back();
  const double left_angle = polar_angle(left_end);
  const double right_angle = polar_angle(right_end);

  std::vector<Vec3> v;
  v.reserve(samples);
  v.emplace_back(0.0, -kFootY, 0.0);
  v.emplace_back(0.0, -kBallRadius, kCenterZ);
  v.push_back(route_point(kPi, 0.0));
  for (int k = 1; k <= left_route; ++k) {
    const double s = static_cast<double>(k) / (left_route + 1);
    v.push_back(route_point(kPi + s * (left_angle - kPi), 0.5 * left_end.x() * s));
  }
  v.push_back(route_point(left_angle, 0.5 * left_end.x()));
  v.insert(v.end(), knot.begin(), knot.end());
  v.push_back(route_point(right_angle, 0.5 * right_end.x()));
  for (int k = 1; k <= right_route; ++k) {
    const double s = static_cast<double>(k) / (right_route + 1);
    v.push_back(route_point(right_angle + s * (kTwoPi - right_angle), 0.5 * right_end.x() * (1.0 - s)));
  }
  v.push_back(route_point(0.0, 0.0));
  v.emplace_back(0.0, kBallRadius, kCenterZ);
  v.emplace_back(0.0, kFootY, 0.0);

  PolylineArc arc;
  arc.name = "trefoil";
  arc.vertices.reserve(v.size());
  for (const Vec3& p : v) arc.vertices.push_back(scale * p);
  // The route circle passes through the axis at angle 0 with z - kCenterZ == sin(0) == 0,
  // but cos/sin round-off would leave the legs a hair off the axis otherwise.
  arc.vertices[2].z() = scale * kCenterZ;
  arc.vertices[samples - 3].z() = scale * kCenterZ;
  return arc;
}

PolylineArc make_unknotted_arc(double scale, int samples) {
  if (!(scale > 0.0)) throw ValidationError("unknotted arc: scale must be positive");
  if (samples < 4) throw ValidationError("unknotted arc: need at least 4 samples");
  PolylineArc arc;
  arc.name = "unknot";
  arc.vertices.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double phi = kPi * static_cast<double>(k) / (samples - 1);
    arc.vertices.emplace_back(0.0, -scale * std::cos(phi), scale * std::sin(phi));
  }
  arc.vertices.front().z() = 0.0;
  arc.vertices.back().z() = 0.0;
  return arc;
}

ValidationReport validate_arc(const PolylineArc& arc, double tolerance) {
  ValidationReport report;
  const auto& v = arc.vertices;
  const int n = static_cast<int>(v.size());
  auto add = [&](ViolationKind kind, std::vector<int> idx, double gap) {
    report.violations.push_back(Violation{kind, std::move(idx), gap});
  };
  if (n < 4) {
    add(ViolationKind::kTooFewVertices, {}, static_cast<double>(n));
    report.ok = false;
    return report;
  }
  for (int end : {0, n - 1}) {
    if (std::abs(v[end].z()) > tolerance) add(ViolationKind::kEndpointOffBoundary, {end}, v[end].z());
  }
  for (int i = 1; i + 1 < n; ++i) {
    if (v[i].z() <= tolerance) add(ViolationKind::kInteriorTouchesBoundary, {i}, v[i].z());
  }
  for (int i = 0; i + 1 < n; ++i) {
    const double len = (v[i + 1] - v[i]).norm();
    if (len <= tolerance) add(ViolationKind::kDegenerateSegment, {i}, len);
  }
  // Adjacent segments may only share their common vertex: the far endpoint of each
  // must stay away from the other segment.
  for (int i = 0; i + 2 < n; ++i) {
    const double d1 = segment_distance(v[i], v[i], v[i + 1], v[i + 2]);
    const double d2 = segment_distance(v[i + 2], v[i + 2], v[i], v[i + 1]);
    const double gap = std::min(d1, d2);
    if (gap <= tolerance) add(ViolationKind::kDegenerateSegment, {i, i + 1}, gap);
  }
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = i + 2; j + 1 < n; ++j) {
      const double d = segment_distance(v[i], v[i + 1], v[j], v[j + 1]);
      if (d <= tolerance) add(ViolationKind::kSelfIntersection, {i, j}, d);
    }
  }
  report.ok = report.violations.empty();
  return report;
}

std::vector<ArcCrossing> projected_crossings(const PolylineArc& arc, int drop_axis) {
  const int n = arc.segment_count();
  std::vector<Vec2> p(arc.vertices.size());
  std::vector<double> depth(arc.vertices.size());
  for (std::size_t i = 0; i < arc.vertices.size(); ++i) {
    const Vec3& q = arc.vertices[i];
    const int a = drop_axis == 0 ? 1 : 0;
    const int b = drop_axis == 2 ? 1 : 2;
    p[i] = Vec2(q[a], q[b]);
    depth[i] = q[drop_axis];
  }
  // Sweep over segments ordered by their left end; the active list holds segments
  // whose x-extent still reaches the sweep position.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto xmin = [&](int s) { return std::min(p[s].x(), p[s + 1].x()); };
  auto xmax = [&](int s) { return std::max(p[s].x(), p[s + 1].x()); };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::make_tuple(xmin(a), a) < std::make_tuple(xmin(b), b);
  });
  std::vector<ArcCrossing> out;
  std::vector<int> active;
  for (int s : order) {
    const double x = xmin(s);
    std::erase_if(active, [&](int a) { return xmax(a) < x; });
    for (int a : active) {
      if (std::abs(a - s) < 2) continue;
      double ta = 0.0;
      double ts = 0.0;
      if (!segments_cross_2d(p[a], p[a + 1], p[s], p[s + 1], 0.0, ta, ts)) continue;
      const double da = depth[a] + ta * (depth[a + 1] - depth[a]);
      const double ds = depth[s] + ts * (depth[s + 1] - depth[s]);
      ArcCrossing c;
      c.point = p[a] + ta * (p[a + 1] - p[a]);
      if (da > ds) {
        c.over_segment = a, c.over_param = ta, c.under_segment = s, c.under_param = ts;
      } else {
        c.over_segment = s, c.over_param = ts, c.under_segment = a, c.under_param = ta;
      }
      out.push_back(c);
    }
    active.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const ArcCrossing& a, const ArcCrossing& b) {
    return std::make_tuple(a.over_segment, a.over_param) < std::make_tuple(b.over_segment, b.over_param);
  });
  return out;
}

bool crossings_alternate(const std::vector<ArcCrossing>& crossings) {
  std::vector<std::pair<double, bool>> events;
  for (const auto& c : crossings) {
    events.emplace_back(c.over_segment + c.over_param, true);
    events.emplace_back(c.under_segment + c.under_param, false);
  }
  std::sort(events.begin(), events.end());
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].second == events[i - 1].second) return false;
  }
  return true;
}

std::string twist_ball_problem(const PolylineArc& arc, const TwistBall& ball, double tol) {
  if (!(ball.radius > 0.0)) return "radius not positive";
  if (std::abs(ball.axis.norm() - 1.0) > 1e-12) return "axis not unit length";
  if (!(ball.center.z() > ball.radius)) return "ball leaves the open upper half-space";
  const auto& v = arc.vertices;
  const int n = static_cast<int>(v.size());
  // -1 inside, 0 on the sphere, +1 outside
  std::vector<int> side(n);
  for (int i = 0; i < n; ++i) {
    const double d = (v[i] - ball.center).norm() - ball.radius;
    side[i] = d < -tol ? -1 : (d > tol ? 1 : 0);
  }
  std::vector<int> on;
  for (int i = 0; i < n; ++i) {
    if (side[i] == 0) on.push_back(i);
  }
  if (on.size() != 2) return "arc must meet the boundary sphere at exactly two vertices";
  const int first = on[0];
  const int last = on[1];
  for (int i = 0; i < n; ++i) {
    const bool between = i > first && i < last;
    if (i == first || i == last) continue;
    if (between && side[i] != -1) return "arc leaves the ball between its boundary points";
    if (!between && side[i] != 1) return "arc enters the ball outside its boundary points";
  }
  if (last - first < 2) return "ball contains no interior arc vertex";
  for (int i : on) {
    const Vec3 r = v[i] - ball.center;
    const double off_axis = (r - ball.axis * ball.axis.dot(r)).norm();
    if (off_axis > tol) return "boundary point not on the axis";
  }
  // Segments outside the ball must not dip into it.
  for (int i = 0; i + 1 < n; ++i) {
    if (i >= first && i < last) continue;
    const double d = segment_distance(v[i], v[i + 1], ball.center, ball.center);
    if (d < ball.radius - tol) return "segment outside the boundary points passes through the ball";
  }
  return {};
}

TwistSetup default_twist_ball(const PolylineArc& arc) {
  const ValidationReport report = validate_arc(arc, 1e-9 * std::max(1.0, bbox_diagonal(arc.vertices)));
  if (!report.ok) throw ValidationError("default twist ball: arc is not properly embedded");
  const double tol = 1e-9 * bbox_diagonal(arc.vertices);
  for (int factor : {1, 2, 4}) {
    PolylineArc candidate = subdivide(arc, factor);
    const auto& v = candidate.vertices;
    const int n = static_cast<int>(v.size());
    int lo_seg = n;
    int hi_seg = -1;
    for (const auto& c : projected_crossings(candidate)) {
      lo_seg = std::min({lo_seg, c.over_segment, c.under_segment});
      hi_seg = std::max({hi_seg, c.over_segment, c.under_segment});
    }
    bool found = false;
    TwistBall best;
    std::tuple<double, double, int, int> best_key{};
    for (int i = 1; i < n - 1; ++i) {
      if (i > lo_seg) break;
      for (int j = std::max(i + 2, hi_seg + 1); j < n - 1; ++j) {
        TwistBall ball;
        ball.center = 0.5 * (v[i] + v[j]);
        ball.radius = 0.5 * (v[j] - v[i]).norm();
        if (!(ball.center.z() > ball.radius)) continue;
        ball.axis = (v[j] - v[i]).normalized();
        if (found) {
          // Radii equal up to tolerance count as ties, broken by height then index.
          const double dr = ball.radius - std::get<0>(best_key);
          if (dr > tol) continue;
          if (dr >= -tol && ball.center.z() <= -std::get<1>(best_key) + tol) continue;
        }
        const auto key = std::make_tuple(ball.radius, -ball.center.z(), i, j);
        if (!twist_ball_problem(candidate, ball, tol).empty()) continue;
        best = ball;
        best_key = key;
        found = true;
      }
    }
    if (found) return TwistSetup{std::move(candidate), best};
  }
  throw ValidationError("default twist ball: no admissible ball for arc '" + arc.name + "'");
}

}  // namespace twistspin
