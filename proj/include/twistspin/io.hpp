#pragma once

#include "twistspin/arc_model.hpp"
#include "twistspin/diagram_projector.hpp"
#include "twistspin/link_analysis.hpp"
#include "twistspin/slicer.hpp"
#include "twistspin/spin_engine.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace twistspin {

using Json = nlohmann::json;  // std::map objects: keys serialize sorted

struct PipelineConfig {
  std::string arc = "trefoil";  // preset name or path to an arc JSON file
  int n = 2;
  int m = 48;
  Axis4 drop = Axis4::kX;
  std::uint64_t seed = 7;
  double perturb = 1e-6;       // projection perturbation magnitude
  double tilt = 1e-4;          // Morse-event tilt
  Tolerances tol;
  double band_width = 0.0;     // 0: derived from the diagram scale
  SliceFamily family = SliceFamily::kHorizontal;
  int frames = 41;
  std::vector<double> frame_values;  // overrides the default grid when non-empty
  Vec3 view = Vec3(1.0, 0.05, 0.02);  // link-diagram view direction for frame signatures
  std::filesystem::path out = ".";
};

/// Throws ValidationError when m is not a positive multiple of max(n, 1), a
/// tolerance is not positive, or the frame count is not positive.
void validate_config(const PipelineConfig& config);

/// Preset "trefoil" or "unknot", or a path to an arc JSON file.
TwistSetup load_arc_setup(const std::string& spec);

Json to_json(const Vec2& v);
Json to_json(const Vec3& v);
Json to_json(const Vec4& v);
Json to_json(const PolylineArc& arc);
Json to_json(const TwistBall& ball);
Json to_json(const Surface4& surface);
Json to_json(const MeshAudit& audit);
Json to_json(const SymmetryReport& report);
Json to_json(const ImmersedDiagram3& diagram);
Json to_json(const SingularitySet& sing);
Json to_json(const BrokenSurface& broken);
Json to_json(const SingularitySummary& summary);
Json to_json(const MotionPicture& mp);
Json to_json(const LinkDiagram& diagram);
Json to_json(const InvariantSignature& sig);
Json to_json(const NormalFormReport& report);
Json to_json(const PipelineConfig& config);

Vec2 vec2_from_json(const Json& j);
Vec3 vec3_from_json(const Json& j);
Vec4 vec4_from_json(const Json& j);
PolylineArc arc_from_json(const Json& j);
TwistBall ball_from_json(const Json& j);
Surface4 surface_from_json(const Json& j);
ImmersedDiagram3 diagram_from_json(const Json& j);
SingularitySet singularity_set_from_json(const Json& j);
BrokenSurface broken_surface_from_json(const Json& j);
SingularitySummary summary_from_json(const Json& j);
MotionPicture motion_picture_from_json(const Json& j);
LinkDiagram link_diagram_from_json(const Json& j);
InvariantSignature signature_from_json(const Json& j);
PipelineConfig config_from_json(const Json& j);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump_json(const Json& j);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoError.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& j);
/// Throws IoError on a missing file or malformed JSON.
Json load_json(const std::filesystem::path& path);

/// ASCII OBJ of the diagram vertices and triangles.
std::string diagram_obj(const ImmersedDiagram3& diagram);
/// Per-vertex height plus the singularity set and its summary.
Json diagram_sidecar(const ImmersedDiagram3& diagram, const SingularitySet& sing, const BrokenSurface& broken);
/// One OBJ group per sheet, made of the broken pieces (outer polygons).
std::string broken_obj(const BrokenSurface& broken);

struct SvgCamera {
  int width = 480;
  int height = 480;
  double half_extent = 0.0;  // world half-width shown; 0: fitted to the picture
  double elevation = 0.35;   // radians; tilt of the second slice coordinate toward the viewer
  double break_gap = 0.012;  // gap half-length at breaks, as a fraction of the half extent
};

/// Camera shared by every frame of a picture, fitted to its largest extent.
SvgCamera fixed_camera(const MotionPicture& mp, const SvgCamera& base = {});

/// SVG 1.1 drawing of one frame: orthographic view of the slice coordinates
/// (first, second * sin(elevation) + third * cos(elevation)). Break marks are drawn
/// as gaps in the strand.
std::string frame_svg(const Frame& frame, SliceFamily family, const SvgCamera& camera);

}  // namespace twistspin
