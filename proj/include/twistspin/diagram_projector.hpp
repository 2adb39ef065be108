#pragma once

#include "twistspin/geometry.hpp"
#include "twistspin/spin_engine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twistspin {

enum class Axis4 { kX = 0, kY = 1, kU = 2, kV = 3 };

const char* to_string(Axis4 axis);
/// Accepts "x", "y", "u", "v".
Axis4 parse_axis4(const std::string& name);

struct Degeneracy {
  std::string kind;  // "coplanar_overlap", "non_transverse", "quadruple_point"
  int a = -1;
  int b = -1;
  Vec3 point = Vec3::Zero();
};

/// Image of a Surface4 under a linear projection to R^3; the discarded
/// coordinate is kept as a per-vertex height (larger is "over").
struct ImmersedDiagram3 {
  std::vector<Vec3> vertices;
  std::vector<double> height;
  std::vector<Tri> triangles;
  Vec4 projection_direction = Vec4::UnitX();  // in the source coordinates
  Axis4 drop_axis = Axis4::kX;
  std::uint64_t perturbation_seed = 0;
  double perturb_magnitude = 0.0;
  int attempts = 1;
  std::vector<Degeneracy> degeneracies;

  bool generic() const { return degeneracies.empty(); }
  double scale() const { return bbox_diagonal(vertices); }
};

/// Transverse intersection of two non-adjacent triangles of the image.
struct IntersectionSegment {
  int over = -1;   // triangle with the larger height along the segment
  int under = -1;
  Vec3 p0 = Vec3::Zero();
  Vec3 p1 = Vec3::Zero();
};

struct DoubleCurve {
  std::vector<Vec3> points;                  // closed curves repeat no point; segments i -> i+1 (mod size)
  std::vector<std::pair<int, int>> sheets;   // (over, under) per segment
  bool closed = false;
};

struct TriplePoint {
  Vec3 point = Vec3::Zero();
  std::array<int, 3> sheets{};     // triangles, ordered top, middle, bottom
  std::array<double, 3> heights{};
};

struct BranchPoint {
  Vec3 point = Vec3::Zero();
  int vertex = -1;
};

struct SingularitySet {
  std::vector<IntersectionSegment> segments;  // canonical order
  std::vector<DoubleCurve> double_curves;
  std::vector<TriplePoint> triple_points;
  std::vector<BranchPoint> branch_points;
  std::vector<Degeneracy> degeneracies;
};

/// One face of a triangle after cutting it along the under-side preimages of
/// the double curves.
struct SheetPiece {
  int triangle = -1;
  int component = -1;
  std::vector<Vec3> outer;
  std::vector<std::vector<Vec3>> holes;
  std::vector<bool> outer_on_cut;  // per outer vertex: lies on a cut
};

/// The broken surface: pieces partition the surface, components are the sheets.
struct BrokenSurface {
  std::vector<SheetPiece> pieces;
  std::vector<std::vector<int>> components;  // sorted triangle ids touched by each sheet
  int component_count = 0;
  double band_width = 0.0;
  std::vector<std::pair<Vec3, Vec3>> cuts;  // under-side cut segments
};

struct SingularitySummary {
  int double_curve_count = 0;
  int triple_point_count = 0;
  int branch_point_count = 0;
  int sheet_count = 0;

  bool operator==(const SingularitySummary&) const = default;
};

struct ProjectionCandidate {
  std::string label;
  Vec4 direction = Vec4::Zero();
  bool ok = false;
  int triple_count = -1;
  std::string note;
};

struct ProjectionSearch {
  Vec4 best_direction = Vec4::UnitX();
  int best_triple_count = -1;
  std::vector<ProjectionCandidate> trace;
};

/// Drops `drop` (recorded as height). With perturb_magnitude > 0 the surface is
/// first rotated by a seeded small rotation; persistent degeneracies trigger up
/// to kMaxProjectionAttempts re-seeded attempts before a GenericityError. With no
/// perturbation the degeneracies are only recorded.
inline constexpr int kMaxProjectionAttempts = 5;
ImmersedDiagram3 project_generic(const Surface4& surface, Axis4 drop, double perturb_magnitude,
                                 std::uint64_t seed, const Tolerances& tol = {});

/// Projection along an arbitrary unit direction of R^4 (no perturbation).
ImmersedDiagram3 project_along(const Surface4& surface, const Vec4& direction,
                               const Tolerances& tol = {});

/// All transverse intersection segments between non-adjacent triangles, in
/// canonical order. `use_index` = false runs the exhaustive O(T^2) pair loop.
std::vector<IntersectionSegment> intersection_segments(const ImmersedDiagram3& diagram,
                                                       const Tolerances& tol, bool use_index,
                                                       std::vector<Degeneracy>* degeneracies);

SingularitySet compute_singularity_set(const ImmersedDiagram3& diagram, const Tolerances& tol = {});

/// `band_width` <= 0 selects 1e-5 times the diagram scale.
BrokenSurface break_sheets(const ImmersedDiagram3& diagram, const SingularitySet& sing,
                           double band_width, const Tolerances& tol = {});

SingularitySummary singularity_summary(const SingularitySet& sing, const BrokenSurface& broken);

/// Minimises the triple point count over the four axis drops and
/// `candidate_count` quasi-uniform directions on the unit 3-sphere.
ProjectionSearch optimize_projection(const Surface4& surface, int candidate_count,
                                     std::uint64_t seed, const Tolerances& tol = {});

/// Height of the image point p inside triangle t (barycentric interpolation).
double height_at(const ImmersedDiagram3& diagram, int t, const Vec3& p);

}  // namespace twistspin
