#pragma once

#include "twistspin/diagram_projector.hpp"
#include "twistspin/geometry.hpp"
#include "twistspin/spin_engine.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace twistspin {

enum class SliceFamily { kVertical, kHorizontal, kRadial };

const char* to_string(SliceFamily family);
/// Accepts "vertical", "horizontal", "radial".
SliceFamily parse_slice_family(const std::string& name);

/// Point where a frame curve passes under a removed band of the broken surface.
struct BreakMark {
  int curve = -1;
  int segment = -1;  // segment index along the curve (vertex i -> i + 1)
  Vec3 point = Vec3::Zero();
};

/// One cross-section. Curves are closed polylines (the last vertex joins the
/// first) in the 3D slice coordinates of the family:
///   vertical   {v = t}: (x, y, u)
///   horizontal {y = t}: (x, u, v)
///   radial     half-plane at angle t about the image y-axis: (y, r, height)
struct Frame {
  double parameter = 0.0;
  double requested = 0.0;  // parameter before any nudge
  bool nudged = false;     // moved off a vertex value or a singular angle
  bool flagged = false;    // requested parameter was at (or next to) a critical value
  std::vector<std::vector<Vec3>> curves;
  std::vector<BreakMark> breaks;

  int component_count() const { return static_cast<int>(curves.size()); }
};

enum class EventKind { kMinimum, kMaximum, kSaddle };

const char* to_string(EventKind kind);
EventKind parse_event_kind(const std::string& name);

struct CriticalEvent {
  double value = 0.0;
  EventKind kind = EventKind::kMinimum;
  int multiplicity = 1;  // saddles: lower-link components minus one
  Vec3 location = Vec3::Zero();
  std::vector<Vec3> degenerate_set;  // whole critical level set when slicing is symmetry-aligned
  int vertex = -1;
};

struct MotionPicture {
  SliceFamily family = SliceFamily::kVertical;
  std::vector<Frame> frames;
  std::vector<CriticalEvent> events;
  std::string source;
};

struct NormalFormReport {
  bool ok = false;
  std::array<bool, 4> conditions{};  // minima at -2, maxima at 2, saddles at +-1, t = 0 connected
  std::vector<std::string> notes;
};

/// Frame parameters within this fraction of the diagram scale of a vertex value
/// are moved by kNudgeFraction times the scale.
inline constexpr double kVertexClearance = 1e-9;
inline constexpr double kNudgeFraction = 1e-7;
/// Consecutive frame vertices closer than this fraction of the scale are merged.
inline constexpr double kFrameMergeFraction = 1e-7;
/// Angular clearance for radial frames near triple and branch points.
inline constexpr double kAngularClearance = 1e-6;

/// Sections by {v = t}.
MotionPicture slice_vertical(const Surface4& surface, const std::vector<double>& frame_values);

/// Sections by {y = t}.
MotionPicture slice_horizontal(const Surface4& surface, const std::vector<double>& frame_values);

/// Half-plane sections of a drop-x diagram about its y-axis. With `broken`
/// present each frame carries the break marks of the removed under-bands; with
/// `sing` present angles through triple or branch points are nudged.
MotionPicture slice_radial(const ImmersedDiagram3& diagram, const std::vector<double>& angles,
                           const SingularitySet* sing = nullptr, const BrokenSurface* broken = nullptr);

/// PL Morse events of the height along the family direction, optionally tilted
/// by a seeded rotation of angle `tilt`. Untilted symmetric heights may yield
/// degenerate critical sets, reported as single events.
std::vector<CriticalEvent> detect_events(const Surface4& surface, SliceFamily family, double tilt,
                                         std::uint64_t seed);

/// #minima + #maxima - sum of saddle multiplicities.
int morse_balance(const std::vector<CriticalEvent>& events);

NormalFormReport check_normal_form(const MotionPicture& mp, double tolerance = 1e-9);

/// Applies a strictly increasing map to every frame parameter and event value.
MotionPicture reparametrize(const MotionPicture& mp, const std::function<double(double)>& map);

/// Uniform grid over the family coordinate range padded by 5%; radial grids are
/// `count` angles k * 2 pi / count.
std::vector<double> default_frame_values(const Surface4& surface, SliceFamily family, int count);

/// Largest distance from a frame vertex rotated by 2 pi / order in the plane of
/// the last two slice coordinates to the nearest frame vertex.
double frame_rotation_deviation(const Frame& frame, int order);

}  // namespace twistspin
