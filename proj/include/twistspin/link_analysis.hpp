#pragma once

#include "twistspin/geometry.hpp"
#include "twistspin/slicer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twistspin {

/// One passage through a crossing along a component.
struct GaussEntry {
  int crossing = 0;
  bool over = false;
  int sign = 1;

  bool operator==(const GaussEntry&) const = default;
};

/// Per component, the crossings met from its base point in traversal order.
using GaussCode = std::vector<std::vector<GaussEntry>>;

/// "O1+ U2- ..." per component; components are separated by " | " and a
/// crossingless component is written "_".
std::string format_gauss_code(const GaussCode& code);
GaussCode parse_gauss_code(const std::string& text);

/// Renumbers crossings 1..c by first appearance.
GaussCode canonical_gauss_code(const GaussCode& code);

struct CrossingRecord {
  int id = 0;
  int over_arc = -1;
  int under_in_arc = -1;
  int under_out_arc = -1;
  int over_component = -1;
  int under_component = -1;
  int sign = 1;
  Vec2 point = Vec2::Zero();  // image position when built from geometry
};

/// Stretch of a component between consecutive cut points (under-passes and the
/// base point). Entries strictly between the two cuts are over-passes.
struct DiagramArc {
  int component = -1;
  int begin = 0;  // index of the first entry after the opening cut
  int end = 0;    // index one past the last entry before the closing cut
};

struct LinkDiagram {
  int components = 0;
  GaussCode code;
  std::string gauss_code;
  std::vector<CrossingRecord> crossings;  // indexed by crossing id - 1 after canonicalisation
  std::vector<DiagramArc> arcs;
  Vec3 view_direction = Vec3::UnitZ();
  int view_attempts = 1;
  std::vector<std::string> resolutions;       // degeneracies removed by view perturbation
  std::vector<std::vector<Vec2>> projected;   // image polylines (closed)
};

/// Builds crossings and arcs from a Gauss code (each crossing must appear
/// exactly once over and once under, with equal signs).
LinkDiagram diagram_from_gauss(const GaussCode& code);

/// Orthographic projection of closed 3D polylines. The viewer sits on the +view
/// side: larger depth along the view direction passes over. Sign convention:
/// +1 when det[over direction, under direction] > 0 in the image frame (e1, e2)
/// with e1 x e2 = view.
LinkDiagram planar_project_curves(const std::vector<std::vector<Vec3>>& curves, const Vec3& view_direction,
                                  std::uint64_t seed);
LinkDiagram planar_project_frame(const Frame& frame, const Vec3& view_direction, std::uint64_t seed);

inline constexpr int kMaxViewAttempts = 8;

/// Number of Fox 3-colorings, 3^(dim kernel).
std::int64_t tricoloring_count(const LinkDiagram& diagram);

/// (i, j): half the signed count of crossings between components i and j.
std::vector<std::vector<int>> linking_matrix(const LinkDiagram& diagram);

struct InvariantSignature {
  int component_count = 0;
  int crossing_count_reduced = 0;
  std::int64_t tricoloring_count = 0;
  std::vector<std::vector<int>> linking_matrix;
  int total_linking = 0;

  bool operator==(const InvariantSignature&) const = default;
};

InvariantSignature signature(const LinkDiagram& diagram);

/// Equality of component count, tricoloring count and linking data. The reduced
/// crossing count comes from a greedy, non-canonical simplification and is left out.
bool signatures_equal(const InvariantSignature& a, const InvariantSignature& b);

/// Greedy removal of kinks (R1) and bigons (R2) until none remain.
GaussCode simplify(const GaussCode& code);

enum class ReidemeisterMove { kR1Add, kR1Remove, kR2Add, kR2Remove, kR3 };

const char* to_string(ReidemeisterMove move);

/// Removes the first kink found; false if none.
bool remove_kink(GaussCode& code);
/// Removes the first bigon found; false if none.
bool remove_bigon(GaussCode& code);
/// Adds a kink before entry `position` of `component` (position may equal its size).
void add_kink(GaussCode& code, int component, int position, bool over_first, int sign);
/// Pushes a finger of one strand at crossing `crossing` over the other strand,
/// adding two crossings. Sides select the half-edges (false: before the passage).
bool add_bigon(GaussCode& code, int crossing, bool finger_is_over_strand, bool over_side_after,
               bool under_side_after, bool swap_order);
/// Performs some R3 move on a non-alternating triangle; false if none exists.
bool triangle_move(GaussCode& code, Rng& rng);

/// Applies one randomly chosen applicable move and reports which.
ReidemeisterMove random_reidemeister_move(GaussCode& code, Rng& rng);

}  // namespace twistspin
