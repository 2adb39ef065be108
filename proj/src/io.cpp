#include "twistspin/io.hpp"

#include "twistspin/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace twistspin {

namespace fs = std::filesystem;

namespace {

template <class T, class F>
Json array_of(const std::vector<T>& items, F&& f) {
  Json out = Json::array();
  for (const auto& item : items) out.push_back(f(item));
  return out;
}

template <class T, class F>
std::vector<T> vector_of(const Json& j, F&& f) {
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(f(item));
  return out;
}

Json tri_json(const Tri& t) { return Json::array({t[0], t[1], t[2]}); }
Tri tri_from(const Json& j) { return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()}; }

Json polyline_json(const std::vector<Vec3>& pts) {
  return array_of(pts, [](const Vec3& p) { return to_json(p); });
}
std::vector<Vec3> polyline_from(const Json& j) { return vector_of<Vec3>(j, vec3_from_json); }

Json degeneracy_json(const Degeneracy& d) {
  return {{"kind", d.kind}, {"a", d.a}, {"b", d.b}, {"point", to_json(d.point)}};
}
Degeneracy degeneracy_from(const Json& j) {
  Degeneracy d;
  d.kind = j.at("kind").get<std::string>();
  d.a = j.at("a").get<int>();
  d.b = j.at("b").get<int>();
  d.point = vec3_from_json(j.at("point"));
  return d;
}

// Wraps nlohmann parse and type errors so callers see a single error family.
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed ") + what + ": " + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

Vec2 screen(const Vec3& p, double elevation) {
  return {p.x(), p.y() * std::sin(elevation) + p.z() * std::cos(elevation)};
}

}  // namespace

void validate_config(const PipelineConfig& c) {
  if (c.n < 0) throw ValidationError("twist count n must be non-negative");
  if (c.m <= 0 || c.m % std::max(c.n, 1) != 0) {
    throw ValidationError("m = " + std::to_string(c.m) + " is not a positive multiple of max(n, 1) = " +
                          std::to_string(std::max(c.n, 1)));
  }
  if (!(c.tol.intersect > 0) || !(c.tol.stitch > 0)) throw ValidationError("tolerances must be positive");
  if (!(c.perturb >= 0) || !(c.tilt >= 0)) throw ValidationError("perturbation and tilt must be non-negative");
  if (c.frames <= 0) throw ValidationError("frame count must be positive");
  if (!(c.view.norm() > 0)) throw ValidationError("view direction must be non-zero");
}

TwistSetup load_arc_setup(const std::string& spec) {
  PolylineArc arc;
  if (spec == "trefoil") {
    arc = make_trefoil_arc(1.0, 60);
  } else if (spec == "unknot") {
    arc = make_unknotted_arc(1.0, 16);
  } else {
    const Json j = load_json(spec);
    arc = arc_from_json(j.contains("arc") ? j.at("arc") : j);
    if (j.contains("ball")) {
      TwistSetup setup{arc, ball_from_json(j.at("ball"))};
      const double tol = 1e-9 * bbox_diagonal(arc.vertices);
      if (const std::string problem = twist_ball_problem(setup.arc, setup.ball, tol); !problem.empty()) {
        throw ValidationError("twist ball: " + problem);
      }
      return setup;
    }
  }
  return default_twist_ball(arc);
}

Json to_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }
Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
Json to_json(const Vec4& v) { return Json::array({v[0], v[1], v[2], v[3]}); }

Vec2 vec2_from_json(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
Vec3 vec3_from_json(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }
Vec4 vec4_from_json(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(), j.at(3).get<double>()};
}

Json to_json(const PolylineArc& arc) { return {{"name", arc.name}, {"vertices", polyline_json(arc.vertices)}}; }

PolylineArc arc_from_json(const Json& j) {
  return guarded("arc", [&] {
    PolylineArc arc;
    arc.name = j.value("name", std::string("custom"));
    arc.vertices = polyline_from(j.at("vertices"));
    return arc;
  });
}

Json to_json(const TwistBall& b) {
  return {{"center", to_json(b.center)}, {"radius", b.radius}, {"axis", to_json(b.axis)}};
}

TwistBall ball_from_json(const Json& j) {
  return guarded("twist ball", [&] {
    TwistBall b;
    b.center = vec3_from_json(j.at("center"));
    b.radius = j.at("radius").get<double>();
    b.axis = vec3_from_json(j.at("axis"));
    return b;
  });
}

Json to_json(const Surface4& s) {
  return {{"vertices", array_of(s.vertices, [](const Vec4& v) { return to_json(v); })},
          {"triangles", array_of(s.triangles, tri_json)},
          {"meta", {{"arc_id", s.meta.arc_id}, {"twist", s.meta.twist}, {"angular_samples", s.meta.angular_samples}}}};
}

Surface4 surface_from_json(const Json& j) {
  return guarded("surface", [&] {
    Surface4 s;
    s.vertices = vector_of<Vec4>(j.at("vertices"), vec4_from_json);
    s.triangles = vector_of<Tri>(j.at("triangles"), tri_from);
    const Json& m = j.at("meta");
    s.meta.arc_id = m.at("arc_id").get<std::string>();
    s.meta.twist = m.at("twist").get<int>();
    s.meta.angular_samples = m.at("angular_samples").get<int>();
    return s;
  });
}

Json to_json(const MeshAudit& a) {
  return {{"vertex_count", a.vertex_count}, {"edge_count", a.edge_count}, {"face_count", a.face_count},
          {"boundary_edges", a.boundary_edges}, {"nonmanifold_edges", a.nonmanifold_edges},
          {"closed", a.closed}, {"orientable", a.orientable}, {"consistently_wound", a.consistently_wound},
          {"components", a.components}, {"euler", a.euler ? Json(*a.euler) : Json(nullptr)}};
}

Json to_json(const SymmetryReport& r) {
  return {{"order_tested", r.order_tested}, {"max_deviation", r.max_deviation},
          {"exact_on_vertices", r.exact_on_vertices}};
}

Json to_json(const ImmersedDiagram3& d) {
  return {{"vertices", polyline_json(d.vertices)},
          {"height", d.height},
          {"triangles", array_of(d.triangles, tri_json)},
          {"projection_direction", to_json(d.projection_direction)},
          {"drop_axis", to_string(d.drop_axis)},
          {"perturbation_seed", d.perturbation_seed},
          {"perturb_magnitude", d.perturb_magnitude},
          {"attempts", d.attempts},
          {"degeneracies", array_of(d.degeneracies, degeneracy_json)}};
}

ImmersedDiagram3 diagram_from_json(const Json& j) {
  return guarded("diagram", [&] {
    ImmersedDiagram3 d;
    d.vertices = polyline_from(j.at("vertices"));
    d.height = j.at("height").get<std::vector<double>>();
    d.triangles = vector_of<Tri>(j.at("triangles"), tri_from);
    d.projection_direction = vec4_from_json(j.at("projection_direction"));
    d.drop_axis = parse_axis4(j.at("drop_axis").get<std::string>());
    d.perturbation_seed = j.at("perturbation_seed").get<std::uint64_t>();
    d.perturb_magnitude = j.at("perturb_magnitude").get<double>();
    d.attempts = j.at("attempts").get<int>();
    d.degeneracies = vector_of<Degeneracy>(j.at("degeneracies"), degeneracy_from);
    if (d.height.size() != d.vertices.size()) throw ValidationError("diagram: height count differs from vertex count");
    return d;
  });
}

Json to_json(const SingularitySet& s) {
  return {
      {"segments", array_of(s.segments,
                            [](const IntersectionSegment& g) {
                              return Json{{"over", g.over}, {"under", g.under}, {"p0", to_json(g.p0)},
                                          {"p1", to_json(g.p1)}};
                            })},
      {"double_curves", array_of(s.double_curves,
                                 [](const DoubleCurve& c) {
                                   return Json{{"points", polyline_json(c.points)},
                                               {"sheets", c.sheets},
                                               {"closed", c.closed}};
                                 })},
      {"triple_points", array_of(s.triple_points,
                                 [](const TriplePoint& t) {
                                   return Json{{"point", to_json(t.point)},
                                               {"sheets", t.sheets},
                                               {"heights", t.heights}};
                                 })},
      {"branch_points", array_of(s.branch_points,
                                 [](const BranchPoint& b) {
                                   return Json{{"point", to_json(b.point)}, {"vertex", b.vertex}};
                                 })},
      {"degeneracies", array_of(s.degeneracies, degeneracy_json)}};
}

SingularitySet singularity_set_from_json(const Json& j) {
  return guarded("singularity set", [&] {
    SingularitySet s;
    s.segments = vector_of<IntersectionSegment>(j.at("segments"), [](const Json& g) {
      return IntersectionSegment{g.at("over").get<int>(), g.at("under").get<int>(), vec3_from_json(g.at("p0")),
                                 vec3_from_json(g.at("p1"))};
    });
    s.double_curves = vector_of<DoubleCurve>(j.at("double_curves"), [](const Json& c) {
      DoubleCurve d;
      d.points = polyline_from(c.at("points"));
      d.sheets = c.at("sheets").get<std::vector<std::pair<int, int>>>();
      d.closed = c.at("closed").get<bool>();
      return d;
    });
    s.triple_points = vector_of<TriplePoint>(j.at("triple_points"), [](const Json& t) {
      TriplePoint p;
      p.point = vec3_from_json(t.at("point"));
      p.sheets = t.at("sheets").get<std::array<int, 3>>();
      p.heights = t.at("heights").get<std::array<double, 3>>();
      return p;
    });
    s.branch_points = vector_of<BranchPoint>(j.at("branch_points"), [](const Json& b) {
      return BranchPoint{vec3_from_json(b.at("point")), b.at("vertex").get<int>()};
    });
    s.degeneracies = vector_of<Degeneracy>(j.at("degeneracies"), degeneracy_from);
    return s;
  });
}

Json to_json(const BrokenSurface& b) {
  return {{"pieces", array_of(b.pieces,
                              [](const SheetPiece& p) {
                                return Json{{"triangle", p.triangle},
                                            {"component", p.component},
                                            {"outer", polyline_json(p.outer)},
                                            {"holes", array_of(p.holes, polyline_json)},
                                            {"outer_on_cut", p.outer_on_cut}};
                              })},
          {"components", b.components},
          {"component_count", b.component_count},
          {"band_width", b.band_width},
          {"cuts", array_of(b.cuts, [](const std::pair<Vec3, Vec3>& c) {
             return Json::array({to_json(c.first), to_json(c.second)});
           })}};
}

BrokenSurface broken_surface_from_json(const Json& j) {
  return guarded("broken surface", [&] {
    BrokenSurface b;
    b.pieces = vector_of<SheetPiece>(j.at("pieces"), [](const Json& p) {
      SheetPiece s;
      s.triangle = p.at("triangle").get<int>();
      s.component = p.at("component").get<int>();
      s.outer = polyline_from(p.at("outer"));
      s.holes = vector_of<std::vector<Vec3>>(p.at("holes"), polyline_from);
      s.outer_on_cut = p.at("outer_on_cut").get<std::vector<bool>>();
      return s;
    });
    b.components = j.at("components").get<std::vector<std::vector<int>>>();
    b.component_count = j.at("component_count").get<int>();
    b.band_width = j.at("band_width").get<double>();
    b.cuts = vector_of<std::pair<Vec3, Vec3>>(j.at("cuts"), [](const Json& c) {
      return std::pair<Vec3, Vec3>{vec3_from_json(c.at(0)), vec3_from_json(c.at(1))};
    });
    return b;
  });
}

Json to_json(const SingularitySummary& s) {
  return {{"double_curve_count", s.double_curve_count}, {"triple_point_count", s.triple_point_count},
          {"branch_point_count", s.branch_point_count}, {"sheet_count", s.sheet_count}};
}

SingularitySummary summary_from_json(const Json& j) {
  return guarded("singularity summary", [&] {
    return SingularitySummary{j.at("double_curve_count").get<int>(), j.at("triple_point_count").get<int>(),
                              j.at("branch_point_count").get<int>(), j.at("sheet_count").get<int>()};
  });
}

Json to_json(const MotionPicture& mp) {
  Json frames = array_of(mp.frames, [](const Frame& f) {
    return Json{{"parameter", f.parameter},
                {"requested", f.requested},
                {"nudged", f.nudged},
                {"flagged", f.flagged},
                {"curves", array_of(f.curves, polyline_json)},
                {"breaks", array_of(f.breaks, [](const BreakMark& b) {
                   return Json{{"curve", b.curve}, {"segment", b.segment}, {"point", to_json(b.point)}};
                 })}};
  });
  Json events = array_of(mp.events, [](const CriticalEvent& e) {
    return Json{{"value", e.value},
                {"kind", to_string(e.kind)},
                {"multiplicity", e.multiplicity},
                {"location", to_json(e.location)},
                {"degenerate_set", polyline_json(e.degenerate_set)},
                {"vertex", e.vertex}};
  });
  return {{"family", to_string(mp.family)}, {"frames", frames}, {"events", events}, {"source", mp.source}};
}

MotionPicture motion_picture_from_json(const Json& j) {
  return guarded("motion picture", [&] {
    MotionPicture mp;
    mp.family = parse_slice_family(j.at("family").get<std::string>());
    mp.source = j.at("source").get<std::string>();
    mp.frames = vector_of<Frame>(j.at("frames"), [](const Json& f) {
      Frame fr;
      fr.parameter = f.at("parameter").get<double>();
      fr.requested = f.at("requested").get<double>();
      fr.nudged = f.at("nudged").get<bool>();
      fr.flagged = f.at("flagged").get<bool>();
      fr.curves = vector_of<std::vector<Vec3>>(f.at("curves"), polyline_from);
      fr.breaks = vector_of<BreakMark>(f.at("breaks"), [](const Json& b) {
        return BreakMark{b.at("curve").get<int>(), b.at("segment").get<int>(), vec3_from_json(b.at("point"))};
      });
      return fr;
    });
    mp.events = vector_of<CriticalEvent>(j.at("events"), [](const Json& e) {
      CriticalEvent ev;
      ev.value = e.at("value").get<double>();
      ev.kind = parse_event_kind(e.at("kind").get<std::string>());
      ev.multiplicity = e.at("multiplicity").get<int>();
      ev.location = vec3_from_json(e.at("location"));
      ev.degenerate_set = polyline_from(e.at("degenerate_set"));
      ev.vertex = e.at("vertex").get<int>();
      return ev;
    });
    return mp;
  });
}

Json to_json(const LinkDiagram& d) {
  return {{"components", d.components},
          {"gauss_code", format_gauss_code(d.code)},
          {"crossings", array_of(d.crossings,
                                 [](const CrossingRecord& c) {
                                   return Json{{"id", c.id},
                                               {"over_arc", c.over_arc},
                                               {"under_in_arc", c.under_in_arc},
                                               {"under_out_arc", c.under_out_arc},
                                               {"over_component", c.over_component},
                                               {"under_component", c.under_component},
                                               {"sign", c.sign},
                                               {"point", to_json(c.point)}};
                                 })},
          {"arcs", array_of(d.arcs,
                            [](const DiagramArc& a) {
                              return Json{{"component", a.component}, {"begin", a.begin}, {"end", a.end}};
                            })},
          {"view_direction", to_json(d.view_direction)},
          {"view_attempts", d.view_attempts},
          {"resolutions", d.resolutions},
          {"projected", array_of(d.projected, [](const std::vector<Vec2>& c) {
             return array_of(c, [](const Vec2& p) { return to_json(p); });
           })}};
}

LinkDiagram link_diagram_from_json(const Json& j) {
  return guarded("link diagram", [&] {
    LinkDiagram d;
    d.components = j.at("components").get<int>();
    d.gauss_code = j.at("gauss_code").get<std::string>();
    d.code = parse_gauss_code(d.gauss_code);
    if (static_cast<int>(d.code.size()) != d.components) throw ValidationError("link diagram: component count mismatch");
    d.crossings = vector_of<CrossingRecord>(j.at("crossings"), [](const Json& c) {
      CrossingRecord r;
      r.id = c.at("id").get<int>();
      r.over_arc = c.at("over_arc").get<int>();
      r.under_in_arc = c.at("under_in_arc").get<int>();
      r.under_out_arc = c.at("under_out_arc").get<int>();
      r.over_component = c.at("over_component").get<int>();
      r.under_component = c.at("under_component").get<int>();
      r.sign = c.at("sign").get<int>();
      r.point = vec2_from_json(c.at("point"));
      return r;
    });
    d.arcs = vector_of<DiagramArc>(j.at("arcs"), [](const Json& a) {
      return DiagramArc{a.at("component").get<int>(), a.at("begin").get<int>(), a.at("end").get<int>()};
    });
    d.view_direction = vec3_from_json(j.at("view_direction"));
    d.view_attempts = j.at("view_attempts").get<int>();
    d.resolutions = j.at("resolutions").get<std::vector<std::string>>();
    d.projected = vector_of<std::vector<Vec2>>(j.at("projected"), [](const Json& c) {
      return vector_of<Vec2>(c, vec2_from_json);
    });
    return d;
  });
}

Json to_json(const InvariantSignature& s) {
  return {{"component_count", s.component_count}, {"crossing_count_reduced", s.crossing_count_reduced},
          {"tricoloring_count", s.tricoloring_count}, {"linking_matrix", s.linking_matrix},
          {"total_linking", s.total_linking}};
}

InvariantSignature signature_from_json(const Json& j) {
  return guarded("signature", [&] {
    InvariantSignature s;
    s.component_count = j.at("component_count").get<int>();
    s.crossing_count_reduced = j.at("crossing_count_reduced").get<int>();
    s.tricoloring_count = j.at("tricoloring_count").get<std::int64_t>();
    s.linking_matrix = j.at("linking_matrix").get<std::vector<std::vector<int>>>();
    s.total_linking = j.at("total_linking").get<int>();
    return s;
  });
}

Json to_json(const NormalFormReport& r) {
  return {{"ok", r.ok}, {"conditions", r.conditions}, {"notes", r.notes}};
}

Json to_json(const PipelineConfig& c) {
  return {{"arc", c.arc},
          {"n", c.n},
          {"m", c.m},
          {"drop", to_string(c.drop)},
          {"seed", c.seed},
          {"perturb", c.perturb},
          {"tilt", c.tilt},
          {"tol", {{"intersect", c.tol.intersect}, {"stitch", c.tol.stitch}}},
          {"band_width", c.band_width},
          {"family", to_string(c.family)},
          {"frames", c.frames},
          {"frame_values", c.frame_values},
          {"view", to_json(c.view)},
          {"out", c.out.generic_string()}};
}

PipelineConfig config_from_json(const Json& j) {
  return guarded("config", [&] {
    PipelineConfig c;
    c.arc = j.at("arc").get<std::string>();
    c.n = j.at("n").get<int>();
    c.m = j.at("m").get<int>();
    c.drop = parse_axis4(j.at("drop").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.perturb = j.at("perturb").get<double>();
    c.tilt = j.at("tilt").get<double>();
    c.tol.intersect = j.at("tol").at("intersect").get<double>();
    c.tol.stitch = j.at("tol").at("stitch").get<double>();
    c.band_width = j.at("band_width").get<double>();
    c.family = parse_slice_family(j.at("family").get<std::string>());
    c.frames = j.at("frames").get<int>();
    c.frame_values = j.at("frame_values").get<std::vector<double>>();
    c.view = vec3_from_json(j.at("view"));
    c.out = j.at("out").get<std::string>();
    return c;
  });
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_atomic(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

void save_json(const fs::path& path, const Json& j) { write_text_atomic(path, dump_json(j)); }

Json load_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::string diagram_obj(const ImmersedDiagram3& d) {
  std::ostringstream out;
  out.precision(17);
  out << "# twistspin diagram, drop " << to_string(d.drop_axis) << "\n";
  for (const Vec3& v : d.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << "\n";
  for (const Tri& t : d.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
  return out.str();
}

Json diagram_sidecar(const ImmersedDiagram3& d, const SingularitySet& sing, const BrokenSurface& broken) {
  return {{"height", d.height},
          {"drop_axis", to_string(d.drop_axis)},
          {"projection_direction", to_json(d.projection_direction)},
          {"singularity_set", to_json(sing)},
          {"singularity_summary", to_json(singularity_summary(sing, broken))}};
}

std::string broken_obj(const BrokenSurface& broken) {
  std::ostringstream out;
  out.precision(17);
  out << "# twistspin broken surface, " << broken.component_count << " sheets\n";
  std::vector<std::vector<const SheetPiece*>> by_sheet(broken.component_count);
  for (const auto& p : broken.pieces) {
    if (p.component >= 0 && p.component < broken.component_count && p.outer.size() >= 3) {
      by_sheet[p.component].push_back(&p);
    }
  }
  int next = 1;
  for (int s = 0; s < broken.component_count; ++s) {
    out << "g sheet_" << s << "\n";
    for (const SheetPiece* p : by_sheet[s]) {
      for (const Vec3& v : p->outer) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << "\n";
      out << "f";
      for (std::size_t i = 0; i < p->outer.size(); ++i) out << ' ' << next + static_cast<int>(i);
      out << "\n";
      next += static_cast<int>(p->outer.size());
    }
  }
  return out.str();
}

SvgCamera fixed_camera(const MotionPicture& mp, const SvgCamera& base) {
  SvgCamera cam = base;
  if (cam.half_extent > 0) return cam;
  double extent = 0.0;
  for (const auto& f : mp.frames) {
    for (const auto& c : f.curves) {
      for (const Vec3& p : c) extent = std::max(extent, screen(p, cam.elevation).cwiseAbs().maxCoeff());
    }
  }
  cam.half_extent = extent > 0 ? 1.05 * extent : 1.0;
  return cam;
}

std::string frame_svg(const Frame& frame, SliceFamily family, const SvgCamera& cam) {
  const double half = cam.half_extent > 0 ? cam.half_extent : 1.0;
  const double sx = cam.width / (2 * half);
  const double sy = cam.height / (2 * half);
  auto px = [&](const Vec2& q) {
    return fmt(cam.width / 2.0 + q.x() * sx) + "," + fmt(cam.height / 2.0 - q.y() * sy);
  };
  const double gap = cam.break_gap * half;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << cam.width << "\" height=\""
      << cam.height << "\" viewBox=\"0 0 " << cam.width << ' ' << cam.height << "\">\n"
      << "<title>" << to_string(family) << " t=" << fmt(frame.parameter) << (frame.flagged ? " (near critical)" : "")
      << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int ci = 0; ci < frame.component_count(); ++ci) {
    const auto& c = frame.curves[ci];
    const int n = static_cast<int>(c.size());
    if (n < 2) continue;
    std::string d;
    bool pen = false;
    auto move = [&](const Vec3& p) {
      d += (pen ? " L" : " M") + px(screen(p, cam.elevation));
      pen = true;
    };
    for (int s = 0; s < n; ++s) {
      const Vec3& a = c[s];
      const Vec3& b = c[(s + 1) % n];
      const double len = (b - a).norm();
      std::vector<double> cuts;
      for (const auto& br : frame.breaks) {
        if (br.curve == ci && br.segment == s && len > 0) cuts.push_back((br.point - a).dot(b - a) / (len * len));
      }
      std::sort(cuts.begin(), cuts.end());
      if (!pen) move(a);
      for (double t : cuts) {
        const double g = gap / len;
        if (t - g > 0) move(a + (t - g) * (b - a));
        pen = false;
        if (t + g < 1) move(a + (t + g) * (b - a));
      }
      if (pen) move(b);
    }
    out << "<path d=\"" << d.substr(1) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace twistspin
