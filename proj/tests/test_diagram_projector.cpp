#include "twistspin/diagram_projector.hpp"
#include "twistspin/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace twistspin;

namespace {

const TwistSetup& trefoil_setup() {
  static const TwistSetup s = default_twist_ball(make_trefoil_arc(1.0, 60));
  return s;
}

struct Projected {
  ImmersedDiagram3 diagram;
  SingularitySet sing;
  BrokenSurface broken;
};

Projected run(const Surface4& s, double perturb, std::uint64_t seed) {
  Projected p{project_generic(s, Axis4::kX, perturb, seed), {}, {}};
  p.sing = compute_singularity_set(p.diagram);
  p.broken = break_sheets(p.diagram, p.sing, 0.0);
  return p;
}

const Projected& spun() {
  static const Projected p = run(spin(trefoil_setup().arc, 24), 1e-6, 7);
  return p;
}

const Projected& twisted2() {
  static const Projected p = run(twist_spin(trefoil_setup().arc, trefoil_setup().ball, 2, 24), 1e-6, 7);
  return p;
}

oracle::MeshView view(const ImmersedDiagram3& d) { return {&d.vertices, &d.triangles}; }

std::set<std::pair<int, int>> library_pairs(const ImmersedDiagram3& d, const std::vector<IntersectionSegment>& segs,
                                            bool skip_vertex_sharing) {
  std::set<std::pair<int, int>> out;
  for (const auto& s : segs) {
    if (skip_vertex_sharing && oracle::share_vertex(d.triangles[s.over], d.triangles[s.under])) continue;
    out.insert(std::minmax(s.over, s.under));
  }
  return out;
}

}  // namespace

TEST(Projection, AxisNamesRoundTrip) {
  for (Axis4 a : {Axis4::kX, Axis4::kY, Axis4::kU, Axis4::kV}) EXPECT_EQ(parse_axis4(to_string(a)), a);
  EXPECT_THROW(parse_axis4("w"), ValidationError);
}

TEST(Projection, DropAxisKeepsHeight) {
  const Surface4 s = spin(trefoil_setup().arc, 12);
  const ImmersedDiagram3 d = project_generic(s, Axis4::kU, 0.0, 1);
  ASSERT_EQ(d.vertices.size(), s.vertices.size());
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    EXPECT_DOUBLE_EQ(d.height[i], s.vertices[i][2]);
    EXPECT_DOUBLE_EQ(d.vertices[i][0], s.vertices[i][0]);
    EXPECT_DOUBLE_EQ(d.vertices[i][1], s.vertices[i][1]);
    EXPECT_DOUBLE_EQ(d.vertices[i][2], s.vertices[i][3]);
  }
}

TEST(Projection, AlongDirectionIsOrthogonalSplit) {
  const Surface4 s = spin(trefoil_setup().arc, 12);
  const Vec4 dir = Vec4(1.0, 2.0, -0.5, 0.3).normalized();
  const ImmersedDiagram3 d = project_along(s, dir);
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    EXPECT_NEAR(d.height[i], s.vertices[i].dot(dir), 1e-12);
    const double norm2 = d.vertices[i].squaredNorm() + d.height[i] * d.height[i];
    EXPECT_NEAR(norm2, s.vertices[i].squaredNorm(), 1e-9);
  }
}

TEST(Projection, PerturbedDiagramIsGeneric) {
  EXPECT_TRUE(spun().diagram.generic());
  EXPECT_GE(spun().diagram.attempts, 1);
  EXPECT_LE(spun().diagram.attempts, kMaxProjectionAttempts);
}

TEST(Intersections, IndexedAndExhaustiveAgree) {
  const auto& d = twisted2().diagram;
  const auto fast = intersection_segments(d, {}, true, nullptr);
  const auto slow = intersection_segments(d, {}, false, nullptr);
  ASSERT_EQ(fast.size(), slow.size());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    EXPECT_EQ(fast[i].over, slow[i].over);
    EXPECT_EQ(fast[i].under, slow[i].under);
    EXPECT_EQ(fast[i].p0, slow[i].p0);
    EXPECT_EQ(fast[i].p1, slow[i].p1);
  }
}

TEST(Intersections, PairsMatchEdgePiercingOracle) {
  for (const Projected* p : {&spun(), &twisted2()}) {
    const auto expected = oracle::crossing_pairs(view(p->diagram), 1e-7 * p->diagram.scale());
    const auto got = library_pairs(p->diagram, p->sing.segments, true);
    const std::set<std::pair<int, int>> want(expected.begin(), expected.end());
    EXPECT_EQ(got, want);
  }
}

TEST(Intersections, OverSheetIsHigherAtMidpoint) {
  for (const Projected* p : {&spun(), &twisted2()}) {
    for (const auto& s : p->sing.segments) {
      const Vec3 mid = 0.5 * (s.p0 + s.p1);
      EXPECT_GT(height_at(p->diagram, s.over, mid), height_at(p->diagram, s.under, mid));
    }
  }
}

TEST(DoubleCurves, SpunTrefoilHasThreeClosedCurves) {
  const auto pairs = oracle::crossing_pairs(view(spun().diagram));
  EXPECT_EQ(oracle::double_curve_count(view(spun().diagram), pairs), 3);
  ASSERT_EQ(spun().sing.double_curves.size(), 3u);
  for (const auto& c : spun().sing.double_curves) EXPECT_TRUE(c.closed);
  EXPECT_TRUE(spun().sing.branch_points.empty());
  EXPECT_TRUE(spun().sing.triple_points.empty());
}

TEST(DoubleCurves, OpenCurvesEndAtBranchPoints) {
  const auto& sing = twisted2().sing;
  int open = 0;
  for (const auto& c : sing.double_curves) {
    if (c.closed) continue;
    ++open;
    for (const Vec3& end : {c.points.front(), c.points.back()}) {
      bool found = false;
      for (const auto& b : sing.branch_points) found |= (b.point - end).norm() < 1e-9;
      EXPECT_TRUE(found);
    }
  }
  EXPECT_EQ(static_cast<int>(sing.branch_points.size()), 2 * open);
}

TEST(TriplePoints, MatchBruteForceTriples) {
  const auto& p = twisted2();
  const auto pairs = oracle::crossing_pairs(view(p.diagram));
  const double merge = 1e-7 * p.diagram.scale();
  EXPECT_EQ(static_cast<int>(p.sing.triple_points.size()), oracle::triple_point_count(view(p.diagram), pairs, merge));
  EXPECT_GE(p.sing.triple_points.size(), 4u);
  for (const auto& t : p.sing.triple_points) {
    EXPECT_GE(t.heights[0], t.heights[1]);
    EXPECT_GE(t.heights[1], t.heights[2]);
  }
}

TEST(Sheets, SpunTrefoilHasFourSheets) {
  EXPECT_EQ(spun().broken.component_count, 4);
  // Arc oracle: each under-crossing of the knot diagram cuts the arc once.
  std::vector<oracle::V2> planar;
  for (const Vec3& v : trefoil_setup().arc.vertices) planar.emplace_back(v.y(), v.z());
  const int unders = static_cast<int>(oracle::brute_force_crossings(planar).size());
  EXPECT_EQ(spun().broken.component_count, unders + 1);
  // Mesh oracle: delete every triangle lying under a double curve, flood fill.
  const auto& d = spun().diagram;
  std::vector<bool> removed(d.triangles.size(), false);
  for (const auto& s : spun().sing.segments) removed[s.under] = true;
  EXPECT_EQ(oracle::components_after_removal(d.triangles, removed), 4);
}

TEST(Sheets, PiecesPartitionEachTriangle) {
  const auto& p = twisted2();
  std::vector<double> covered(p.diagram.triangles.size(), 0.0);
  for (const auto& piece : p.broken.pieces) {
    double a = 0.0;
    for (std::size_t i = 1; i + 1 < piece.outer.size(); ++i) {
      a += 0.5 * (piece.outer[i] - piece.outer[0]).cross(piece.outer[i + 1] - piece.outer[0]).norm();
    }
    covered[piece.triangle] += a;
  }
  for (std::size_t t = 0; t < covered.size(); ++t) {
    const auto& tri = p.diagram.triangles[t];
    const auto& v = p.diagram.vertices;
    const double area = 0.5 * (v[tri[1]] - v[tri[0]]).cross(v[tri[2]] - v[tri[0]]).norm();
    EXPECT_GE(covered[t], area * (1.0 - 1e-6)) << "triangle " << t;
  }
  EXPECT_GE(p.broken.component_count, 4);
}

TEST(Sheets, OverBroadBandIsRejected) {
  const auto& p = twisted2();
  EXPECT_THROW(break_sheets(p.diagram, p.sing, 0.5 * p.diagram.scale()), ValidationError);
}

TEST(Summary, EmbeddedSphereIsTrivial) {
  const Projected p = run(spin(make_unknotted_arc(1.0, 16), 16), 1e-6, 3);
  const SingularitySummary s = singularity_summary(p.sing, p.broken);
  EXPECT_EQ(s, (SingularitySummary{0, 0, 0, 1}));
}

TEST(Summary, StableAcrossPerturbationSeeds) {
  const Surface4 s = twist_spin(trefoil_setup().arc, trefoil_setup().ball, 2, 24);
  std::optional<SingularitySummary> first;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const Projected p = run(s, 1e-6, seed);
    const SingularitySummary sum = singularity_summary(p.sing, p.broken);
    if (!first) first = sum;
    EXPECT_EQ(sum, *first) << "seed " << seed;
  }
}

TEST(Optimize, PicksMinimumOverTrace) {
  const Surface4 s = twist_spin(trefoil_setup().arc, trefoil_setup().ball, 1, 16);
  const ProjectionSearch r = optimize_projection(s, 4, 5);
  ASSERT_EQ(r.trace.size(), 8u);
  EXPECT_EQ(r.trace[0].label, "drop x");
  for (const auto& c : r.trace) {
    EXPECT_NEAR(c.direction.norm(), 1.0, 1e-12);
    if (c.ok) EXPECT_LE(r.best_triple_count, c.triple_count);
  }
  EXPECT_GE(r.best_triple_count, 0);
}
