#include "twistspin/arc_model.hpp"
#include "twistspin/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace twistspin;

namespace {

std::vector<Vec2> drop_x(const PolylineArc& arc) {
  std::vector<Vec2> out;
  for (const Vec3& p : arc.vertices) out.emplace_back(p.y(), p.z());
  return out;
}

double min_nonadjacent_distance(const PolylineArc& arc) {
  double best = std::numeric_limits<double>::infinity();
  const auto& v = arc.vertices;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    for (std::size_t j = i + 2; j + 1 < v.size(); ++j) {
      best = std::min(best, oracle::segment_distance(v[i], v[i + 1], v[j], v[j + 1]));
    }
  }
  return best;
}

}  // namespace

TEST(TrefoilArc, HasRequestedVertexCountAndBoundaryEndpoints) {
  const PolylineArc arc = make_trefoil_arc(1.0, 60);
  ASSERT_EQ(arc.vertices.size(), 60u);
  EXPECT_EQ(arc.vertices.front().z(), 0.0);
  EXPECT_EQ(arc.vertices.back().z(), 0.0);
  for (std::size_t i = 1; i + 1 < arc.vertices.size(); ++i) EXPECT_GT(arc.vertices[i].z(), 0.0);
}

TEST(TrefoilArc, ThreeAlternatingCrossingsMatchBruteForce) {
  for (int samples : {24, 30, 48, 60, 100, 200}) {
    const PolylineArc arc = make_trefoil_arc(1.0, samples);
    const auto sweep = projected_crossings(arc);
    const auto brute = oracle::brute_force_crossings(drop_x(arc));
    EXPECT_EQ(sweep.size(), 3u) << samples;
    EXPECT_EQ(brute.size(), 3u) << samples;
    EXPECT_TRUE(crossings_alternate(sweep)) << samples;
  }
}

TEST(TrefoilArc, EmbeddedByExhaustiveDistanceOracle) {
  for (int samples : {24, 60, 120}) {
    const PolylineArc arc = make_trefoil_arc(1.0, samples);
    EXPECT_GT(min_nonadjacent_distance(arc), 1e-3) << samples;
    EXPECT_TRUE(validate_arc(arc, 1e-9).ok) << samples;
  }
}

TEST(TrefoilArc, ScalingMultipliesCoordinates) {
  const PolylineArc a = make_trefoil_arc(1.0, 60);
  const PolylineArc b = make_trefoil_arc(2.0, 60);
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    EXPECT_LE((2.0 * a.vertices[i] - b.vertices[i]).norm(), 1e-12);
  }
  EXPECT_EQ(projected_crossings(b).size(), 3u);
}

TEST(TrefoilArc, RejectsBadParameters) {
  EXPECT_THROW(make_trefoil_arc(1.0, 10), ValidationError);
  EXPECT_THROW(make_trefoil_arc(0.0, 60), ValidationError);
  EXPECT_THROW(make_trefoil_arc(-1.0, 60), ValidationError);
}

TEST(UnknottedArc, SemicircleWithoutCrossings) {
  const PolylineArc arc = make_unknotted_arc(1.0, 16);
  ASSERT_EQ(arc.vertices.size(), 16u);
  EXPECT_EQ(arc.vertices.front(), Vec3(0.0, -1.0, 0.0));
  EXPECT_EQ(arc.vertices.back(), Vec3(0.0, 1.0, 0.0));
  EXPECT_TRUE(validate_arc(arc, 1e-9).ok);
  for (int drop = 0; drop < 3; ++drop) EXPECT_TRUE(projected_crossings(arc, drop).empty());
  EXPECT_EQ(make_unknotted_arc(1.0, 4).vertices.size(), 4u);
  EXPECT_THROW(make_unknotted_arc(0.0, 16), ValidationError);
  EXPECT_THROW(make_unknotted_arc(1.0, 3), ValidationError);
}

TEST(ValidateArc, ReportsInteriorTouchingBoundary) {
  PolylineArc arc = make_unknotted_arc(1.0, 8);
  arc.vertices[3].z() = 0.0;
  const ValidationReport r = validate_arc(arc, 1e-9);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.violations.front().kind, ViolationKind::kInteriorTouchesBoundary);
  EXPECT_EQ(r.violations.front().indices, std::vector<int>{3});
}

TEST(ValidateArc, ReportsSelfIntersection) {
  PolylineArc arc;
  arc.vertices = {{0, -1, 0}, {0, 1, 1}, {0, 1, 2}, {0, -1, 1}, {0, -1, 2}, {0, 0, 3}, {0, 2, 0}};
  const ValidationReport r = validate_arc(arc, 1e-9);
  ASSERT_FALSE(r.ok);
  bool found = false;
  for (const auto& v : r.violations) found |= v.kind == ViolationKind::kSelfIntersection;
  EXPECT_TRUE(found);
}

TEST(ValidateArc, ReportsShortArcAndOffBoundaryEndpoint) {
  PolylineArc arc;
  arc.vertices = {{0, 0, 0}, {0, 1, 1}, {0, 2, 0}};
  EXPECT_EQ(validate_arc(arc, 1e-9).violations.front().kind, ViolationKind::kTooFewVertices);
  PolylineArc lifted = make_unknotted_arc(1.0, 8);
  lifted.vertices.back().z() = 0.1;
  const auto r = validate_arc(lifted, 1e-9);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.violations.front().kind, ViolationKind::kEndpointOffBoundary);
}

TEST(ValidateArc, ReportsFoldedBackSegments) {
  PolylineArc arc;
  arc.vertices = {{0, 0, 0}, {0, 0, 2}, {0, 0, 1}, {0, 1, 1}, {0, 2, 0}};
  const auto r = validate_arc(arc, 1e-9);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.violations.front().kind, ViolationKind::kDegenerateSegment);
}

TEST(ValidateArc, InvariantUnderUniformScaling) {
  const PolylineArc arc = make_trefoil_arc(1.0, 48);
  PolylineArc bad = arc;
  bad.vertices[10].z() = 0.0;
  for (double s : {0.5, 3.0, 100.0}) {
    for (const PolylineArc* a : {&arc, static_cast<const PolylineArc*>(&bad)}) {
      PolylineArc scaled = *a;
      for (Vec3& p : scaled.vertices) p *= s;
      const auto r0 = validate_arc(*a, 1e-9);
      const auto r1 = validate_arc(scaled, 1e-9 * s);
      EXPECT_EQ(r0.ok, r1.ok);
      EXPECT_EQ(r0.violations.size(), r1.violations.size());
    }
  }
}

TEST(TwistBall, TrefoilBallContainsAllCrossingsWithBoundaryOnAxis) {
  const PolylineArc arc = make_trefoil_arc(1.0, 60);
  const TwistSetup setup = default_twist_ball(arc);
  const TwistBall& b = setup.ball;
  EXPECT_GT(b.center.z(), b.radius);
  EXPECT_NEAR(b.axis.norm(), 1.0, 1e-15);
  EXPECT_EQ(twist_ball_problem(setup.arc, b, 1e-9), "");
  // Containment oracle: both endpoints of every crossing segment strictly inside.
  const auto& v = setup.arc.vertices;
  for (const auto& c : projected_crossings(setup.arc)) {
    for (int s : {c.over_segment, c.under_segment}) {
      for (int k : {s, s + 1}) {
        const Vec3& p = v[k];
        const double d = (p - b.center).norm();
        const bool on_sphere = std::abs(d - b.radius) <= 1e-9;
        EXPECT_TRUE(d < b.radius || on_sphere);
      }
      const Vec3 mid = 0.5 * (v[s] + v[s + 1]);
      EXPECT_LT((mid - b.center).norm(), b.radius);
    }
  }
  // Exactly two vertices on the sphere, each on the axis line.
  int on = 0;
  for (const Vec3& p : v) {
    if (std::abs((p - b.center).norm() - b.radius) <= 1e-9) {
      ++on;
      const Vec3 r = p - b.center;
      EXPECT_LE((r - b.axis * b.axis.dot(r)).norm(), 1e-9);
    }
  }
  EXPECT_EQ(on, 2);
}

TEST(TwistBall, UnknotBallSitsAtApex) {
  const PolylineArc arc = make_unknotted_arc(1.0, 16);
  const TwistSetup setup = default_twist_ball(arc);
  EXPECT_EQ(twist_ball_problem(setup.arc, setup.ball, 1e-9), "");
  EXPECT_LT(std::abs(setup.ball.center.y()), 0.25);
  EXPECT_GT(setup.ball.center.z(), 0.9);
}

TEST(TwistBall, RejectsKnotAbuttingBoundary) {
  // Three crossings immediately above z = 0: every candidate ball would poke
  // through the boundary plane.
  PolylineArc arc = make_trefoil_arc(1.0, 60);
  const double z0 = 5.0 - 3.2;
  for (std::size_t i = 1; i + 1 < arc.vertices.size(); ++i) {
    Vec3& p = arc.vertices[i];
    p.z() = std::max(1e-3, p.z() - z0);
  }
  arc.vertices.front().z() = 0.0;
  arc.vertices.back().z() = 0.0;
  EXPECT_THROW(default_twist_ball(arc), ValidationError);
}

TEST(TwistBall, ProblemDetectsBadBalls) {
  const PolylineArc arc = make_trefoil_arc(1.0, 60);
  const TwistSetup setup = default_twist_ball(arc);
  TwistBall low = setup.ball;
  low.center.z() = 0.5 * low.radius;
  EXPECT_NE(twist_ball_problem(setup.arc, low, 1e-9), "");
  TwistBall shifted = setup.ball;
  shifted.radius *= 1.01;
  EXPECT_NE(twist_ball_problem(setup.arc, shifted, 1e-9), "");
}
