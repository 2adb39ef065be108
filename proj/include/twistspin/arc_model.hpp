#pragma once

#include "twistspin/geometry.hpp"

#include <string>
#include <vector>

namespace twistspin {

/// Properly embedded PL arc in the closed upper half-space z >= 0. Endpoints sit
/// on z = 0; every interior vertex has z > 0.
struct PolylineArc {
  std::string name;
  std::vector<Vec3> vertices;

  int segment_count() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Ball inside which the arc is rigidly rotated during twist-spinning. The arc
/// crosses the boundary sphere exactly twice, at the two points where the axis
/// line pierces it.
struct TwistBall {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  Vec3 axis = Vec3::UnitY();

  bool contains_strictly(const Vec3& p, double tol) const {
    return (p - center).norm() < radius - tol;
  }
};

enum class ViolationKind {
  kTooFewVertices,
  kEndpointOffBoundary,
  kInteriorTouchesBoundary,
  kSelfIntersection,
  kDegenerateSegment,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<int> indices;  // offending vertex or segment indices
  double gap = 0.0;          // measured distance / height
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// A crossing of the arc's planar projection (the coordinate `drop_axis` removed).
struct ArcCrossing {
  int over_segment = 0;
  int under_segment = 0;
  double over_param = 0.0;
  double under_param = 0.0;
  Vec2 point = Vec2::Zero();
};

/// Long trefoil whose (y, z) projection is the standard alternating 3-crossing
/// diagram, closed off by two legs that drop to the plane z = 0. `samples` is the
/// exact vertex count.
PolylineArc make_trefoil_arc(double scale, int samples);

/// Semicircle of radius `scale` in the (y, z) plane, endpoints (0, +-scale, 0).
PolylineArc make_unknotted_arc(double scale, int samples);

ValidationReport validate_arc(const PolylineArc& arc, double tolerance);

/// Crossings of the projection that drops coordinate `drop_axis` (0 = x). Depth
/// along the dropped axis decides over/under (larger is over).
std::vector<ArcCrossing> projected_crossings(const PolylineArc& arc, int drop_axis = 0);

/// True when the crossings alternate over/under along the arc.
bool crossings_alternate(const std::vector<ArcCrossing>& crossings);

struct TwistSetup {
  PolylineArc arc;
  TwistBall ball;
};

/// Checks the TwistBall invariants against `arc`; returns an empty string when
/// admissible, otherwise a description of the first failure.
std::string twist_ball_problem(const PolylineArc& arc, const TwistBall& ball, double tol);

/// Chooses a ball whose diameter joins two arc vertices so that the arc between
/// them lies strictly inside, the rest strictly outside, and every segment
/// involved in a projected crossing is inside. Segments are subdivided (up to a
/// bounded factor) when no vertex pair qualifies; the possibly re-sampled arc is
/// returned alongside the ball.
TwistSetup default_twist_ball(const PolylineArc& arc);

}  // namespace twistspin
