#include "twistspin/error.hpp"
#include "twistspin/io.hpp"

#include <gtest/gtest.h>

#include <regex>

using namespace twistspin;
namespace fs = std::filesystem;

namespace {

struct Pipeline {
  Surface4 surface;
  ImmersedDiagram3 diagram;
  SingularitySet sing;
  BrokenSurface broken;
};

const Pipeline& small_pipeline() {
  static const Pipeline p = [] {
    Pipeline out;
    const TwistSetup setup = load_arc_setup("trefoil");
    out.surface = twist_spin(setup.arc, setup.ball, 2, 24);
    out.diagram = project_generic(out.surface, Axis4::kX, 1e-6, 7);
    out.sing = compute_singularity_set(out.diagram);
    out.broken = break_sheets(out.diagram, out.sing, 0.0);
    return out;
  }();
  return p;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("twistspin_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Serialized forms are compared after a second pass: equal text means every
// field survived, doubles included, since the writer emits round-trip digits.
template <class T, class F>
void expect_round_trip(const T& value, F&& reload) {
  const Json first = to_json(value);
  const Json second = to_json(reload(Json::parse(dump_json(first))));
  EXPECT_EQ(dump_json(first), dump_json(second));
}

}  // namespace

TEST(Json, VectorsRoundTripExactly) {
  const Vec4 v(0.1, -1.0 / 3.0, 1e-300, 12345.678901234567);
  EXPECT_EQ(vec4_from_json(Json::parse(dump_json(to_json(v)))), v);
  const Vec3 w(std::nextafter(1.0, 2.0), -0.0, 6.02214076e23);
  EXPECT_EQ(vec3_from_json(Json::parse(dump_json(to_json(w)))), w);
}

TEST(Json, SurfaceRoundTrip) {
  const Surface4& s = small_pipeline().surface;
  const Surface4 back = surface_from_json(Json::parse(dump_json(to_json(s))));
  EXPECT_EQ(back.meta, s.meta);
  EXPECT_EQ(back.triangles, s.triangles);
  ASSERT_EQ(back.vertices.size(), s.vertices.size());
  for (std::size_t i = 0; i < s.vertices.size(); ++i) EXPECT_EQ(back.vertices[i], s.vertices[i]);
}

TEST(Json, DiagramAndSingularitiesRoundTrip) {
  const Pipeline& p = small_pipeline();
  expect_round_trip(p.diagram, diagram_from_json);
  expect_round_trip(p.sing, singularity_set_from_json);
  expect_round_trip(p.broken, broken_surface_from_json);
  const SingularitySummary sum = singularity_summary(p.sing, p.broken);
  EXPECT_EQ(summary_from_json(to_json(sum)), sum);
  const ImmersedDiagram3 back = diagram_from_json(Json::parse(dump_json(to_json(p.diagram))));
  EXPECT_EQ(back.triangles, p.diagram.triangles);
  EXPECT_EQ(back.height, p.diagram.height);
  EXPECT_EQ(back.perturbation_seed, p.diagram.perturbation_seed);
}

TEST(Json, MotionPictureRoundTrip) {
  const Pipeline& p = small_pipeline();
  const MotionPicture h = slice_horizontal(p.surface, default_frame_values(p.surface, SliceFamily::kHorizontal, 9));
  expect_round_trip(h, motion_picture_from_json);
  const MotionPicture r = slice_radial(p.diagram, {0.3, 1.9}, &p.sing, &p.broken);
  expect_round_trip(r, motion_picture_from_json);
  const MotionPicture back = motion_picture_from_json(Json::parse(dump_json(to_json(r))));
  ASSERT_EQ(back.frames.size(), r.frames.size());
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    EXPECT_EQ(back.frames[i].parameter, r.frames[i].parameter);
    EXPECT_EQ(back.frames[i].breaks.size(), r.frames[i].breaks.size());
    EXPECT_EQ(back.frames[i].curves, r.frames[i].curves);
  }
}

TEST(Json, LinkDiagramAndSignatureRoundTrip) {
  const LinkDiagram d = diagram_from_gauss(parse_gauss_code("O1+ U2+ | U1+ O2+ O3- U3-"));
  expect_round_trip(d, link_diagram_from_json);
  const LinkDiagram back = link_diagram_from_json(to_json(d));
  EXPECT_EQ(back.code, d.code);
  EXPECT_EQ(tricoloring_count(back), tricoloring_count(d));
  const InvariantSignature s = signature(d);
  EXPECT_EQ(signature_from_json(Json::parse(dump_json(to_json(s)))), s);
}

TEST(Json, ConfigRoundTrip) {
  PipelineConfig c;
  c.n = 3;
  c.m = 96;
  c.family = SliceFamily::kRadial;
  c.frame_values = {0.25, 0.5};
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  expect_round_trip(c, config_from_json);
  EXPECT_EQ(config_from_json(to_json(c)).seed, c.seed);
}

TEST(Json, KeysAreSorted) {
  const std::string text = dump_json(to_json(small_pipeline().sing));
  const std::regex top_key("\n  \"([a-z_]+)\":");
  std::vector<std::string> keys;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), top_key); it != std::sregex_iterator(); ++it) {
    keys.push_back((*it)[1]);
  }
  ASSERT_EQ(keys.size(), 5u);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
}

TEST(Json, MalformedInputIsRejected) {
  EXPECT_THROW(surface_from_json(Json::parse(R"({"vertices": [[0, 0, 0]]})")), ValidationError);
  EXPECT_THROW(motion_picture_from_json(Json::parse(R"({"family": "diagonal"})")), ValidationError);
  const fs::path dir = scratch_dir("malformed");
  write_text_atomic(dir / "bad.json", "{ not json");
  EXPECT_THROW(load_json(dir / "bad.json"), IoError);
  EXPECT_THROW(load_json(dir / "missing.json"), IoError);
}

TEST(Files, AtomicWriteReplacesAndLeavesNoTemporary) {
  const fs::path dir = scratch_dir("atomic");
  const fs::path file = dir / "nested" / "out.json";
  save_json(file, Json{{"b", 1}, {"a", 2}});
  save_json(file, Json{{"b", 3}, {"a", 4}});
  EXPECT_EQ(read_text(file), "{\n  \"a\": 4,\n  \"b\": 3\n}\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(file.parent_path())) ++entries;
  EXPECT_EQ(entries, 1);
}

TEST(Files, WriteIntoUnwritableLocationThrowsIoError) {
  const fs::path dir = scratch_dir("blocked");
  write_text_atomic(dir / "plain", "x");
  EXPECT_THROW(write_text_atomic(dir / "plain" / "child.json", "{}"), IoError);
}

TEST(Files, SerializationIsDeterministic) {
  const TwistSetup setup = load_arc_setup("trefoil");
  const Surface4 s = twist_spin(setup.arc, setup.ball, 2, 24);
  const ImmersedDiagram3 a = project_generic(s, Axis4::kX, 1e-6, 11);
  const ImmersedDiagram3 b = project_generic(s, Axis4::kX, 1e-6, 11);
  const SingularitySet sa = compute_singularity_set(a);
  const SingularitySet sb = compute_singularity_set(b);
  EXPECT_EQ(dump_json(to_json(a)), dump_json(to_json(b)));
  EXPECT_EQ(dump_json(to_json(sa)), dump_json(to_json(sb)));
}

TEST(Obj, DiagramCountsMatch) {
  const Pipeline& p = small_pipeline();
  const std::string obj = diagram_obj(p.diagram);
  std::istringstream in(obj);
  std::string line;
  std::size_t v = 0, f = 0;
  while (std::getline(in, line)) {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  EXPECT_EQ(v, p.diagram.vertices.size());
  EXPECT_EQ(f, p.diagram.triangles.size());
  const Json side = diagram_sidecar(p.diagram, p.sing, p.broken);
  EXPECT_EQ(side.at("height").size(), p.diagram.vertices.size());
  EXPECT_EQ(summary_from_json(side.at("singularity_summary")), singularity_summary(p.sing, p.broken));
}

TEST(Obj, BrokenSurfaceHasOneGroupPerSheet) {
  const Pipeline& p = small_pipeline();
  const std::string obj = broken_obj(p.broken);
  std::istringstream in(obj);
  std::string line;
  int groups = 0;
  while (std::getline(in, line)) groups += line.rfind("g ", 0) == 0;
  EXPECT_EQ(groups, p.broken.component_count);
}

TEST(Svg, BreaksBecomeGaps) {
  Frame f;
  f.curves = {{Vec3(-1, 0, -1), Vec3(1, 0, -1), Vec3(1, 0, 1), Vec3(-1, 0, 1)}};
  SvgCamera cam;
  cam.half_extent = 2.0;
  const std::string plain = frame_svg(f, SliceFamily::kRadial, cam);
  f.breaks = {{0, 0, Vec3(0, 0, -1)}, {0, 2, Vec3(0, 0, 1)}};
  const std::string broken = frame_svg(f, SliceFamily::kRadial, cam);
  auto moves = [](const std::string& s) { return std::count(s.begin(), s.end(), 'M'); };
  EXPECT_EQ(moves(plain), 1);
  EXPECT_EQ(moves(broken), 3);
  EXPECT_NE(plain.find("version=\"1.1\""), std::string::npos);
}

TEST(Svg, CameraIsSharedAcrossFrames) {
  const Pipeline& p = small_pipeline();
  const MotionPicture h = slice_horizontal(p.surface, default_frame_values(p.surface, SliceFamily::kHorizontal, 5));
  const SvgCamera cam = fixed_camera(h);
  EXPECT_GT(cam.half_extent, 0.0);
  for (const auto& f : h.frames) {
    for (const auto& c : f.curves) {
      for (const Vec3& q : c) {
        EXPECT_LE(std::abs(q.x()), cam.half_extent);
      }
    }
  }
}

TEST(Config, RejectsBadResolution) {
  PipelineConfig c;
  c.n = 2;
  c.m = 47;
  EXPECT_THROW(validate_config(c), ValidationError);
  c.m = 48;
  EXPECT_NO_THROW(validate_config(c));
  c.tol.stitch = 0;
  EXPECT_THROW(validate_config(c), ValidationError);
  c = PipelineConfig{};
  c.n = 0;
  c.m = 7;
  EXPECT_NO_THROW(validate_config(c));
}

TEST(Config, ArcPresetsAndFiles) {
  EXPECT_EQ(load_arc_setup("trefoil").arc.vertices.size(), 60u);
  EXPECT_THROW(load_arc_setup("/nonexistent/arc.json"), IoError);
  const fs::path dir = scratch_dir("arc");
  const TwistSetup t = load_arc_setup("unknot");
  save_json(dir / "arc.json", Json{{"arc", to_json(t.arc)}, {"ball", to_json(t.ball)}});
  const TwistSetup back = load_arc_setup((dir / "arc.json").string());
  EXPECT_EQ(back.arc.vertices, t.arc.vertices);
  EXPECT_EQ(back.ball.center, t.ball.center);
}
