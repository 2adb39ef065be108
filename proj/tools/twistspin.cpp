// twistspin: build, project, slice and analyze twist-spun knot surfaces.

#include "twistspin/error.hpp"
#include "twistspin/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <regex>

using namespace twistspin;
namespace fs = std::filesystem;

namespace {

struct Inputs {
  std::string surface;
  std::string diagram;
  std::string picture;
};

fs::path or_default(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

Surface4 build_surface(const PipelineConfig& c) {
  const TwistSetup setup = load_arc_setup(c.arc);
  if (c.n == 0) return spin(setup.arc, c.m);
  return twist_spin(setup.arc, setup.ball, c.n, c.m);
}

int cmd_build(const PipelineConfig& c) {
  const Surface4 s = build_surface(c);
  const MeshAudit audit = audit_mesh(s.triangles, static_cast<int>(s.vertices.size()));
  const int order = c.n > 0 ? c.n : c.m;
  const SymmetryReport sym = check_rotational_symmetry(s, order);
  save_json(c.out / "surface.json", to_json(s));
  save_json(c.out / "build_audit.json",
            Json{{"audit", to_json(audit)}, {"symmetry", to_json(sym)}, {"config", to_json(c)}});
  std::cout << "surface: " << s.vertices.size() << " vertices, " << s.triangles.size() << " triangles\n"
            << "euler characteristic: " << (audit.euler ? std::to_string(*audit.euler) : "undefined") << "\n"
            << "closed: " << (audit.closed ? "yes" : "no") << ", orientable: " << (audit.orientable ? "yes" : "no")
            << "\n"
            << "rotation by 2pi/" << order << ": deviation " << sym.max_deviation << "\n"
            << "wrote " << (c.out / "surface.json").string() << "\n";
  if (!audit.euler || *audit.euler != 2 || !audit.closed || !audit.orientable) {
    throw ValidationError("surface audit failed: not an orientable closed sphere");
  }
  return 0;
}

int cmd_project(const PipelineConfig& c, const Inputs& in) {
  const Surface4 s = surface_from_json(load_json(or_default(in.surface, c.out / "surface.json")));
  ImmersedDiagram3 d;
  try {
    d = project_generic(s, c.drop, c.perturb, c.seed, c.tol);
  } catch (const GenericityError& e) {
    throw GenericityError(std::string(e.what()) + "; retry with another --seed or a larger perturbation");
  }
  const SingularitySet sing = compute_singularity_set(d, c.tol);
  const BrokenSurface broken = break_sheets(d, sing, c.band_width, c.tol);
  const SingularitySummary sum = singularity_summary(sing, broken);
  save_json(c.out / "diagram.json", to_json(d));
  save_json(c.out / "singularities.json", to_json(sing));
  save_json(c.out / "broken.json", to_json(broken));
  save_json(c.out / "diagram.sidecar.json", diagram_sidecar(d, sing, broken));
  write_text_atomic(c.out / "diagram.obj", diagram_obj(d));
  write_text_atomic(c.out / "broken.obj", broken_obj(broken));
  std::cout << "double curves: " << sum.double_curve_count << "\n"
            << "triple points: " << sum.triple_point_count << "\n"
            << "branch points: " << sum.branch_point_count << "\n"
            << "sheets: " << sum.sheet_count << "\n";
  if (!d.generic()) std::cout << "warning: " << d.degeneracies.size() << " degenerate incidences kept\n";
  return 0;
}

std::vector<double> frame_values(const PipelineConfig& c, const Surface4* s) {
  if (!c.frame_values.empty()) return c.frame_values;
  if (c.family == SliceFamily::kRadial) {
    std::vector<double> out;
    for (int k = 0; k < c.frames; ++k) out.push_back(kTwoPi * k / c.frames);
    return out;
  }
  return default_frame_values(*s, c.family, c.frames);
}

void write_svgs(const MotionPicture& mp, const fs::path& dir) {
  const SvgCamera cam = fixed_camera(mp);
  for (std::size_t i = 0; i < mp.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03zu.svg", i);
    write_text_atomic(dir / name, frame_svg(mp.frames[i], mp.family, cam));
  }
}

int cmd_slice(const PipelineConfig& c, const Inputs& in) {
  MotionPicture mp;
  if (c.family == SliceFamily::kRadial) {
    const fs::path dpath = or_default(in.diagram, c.out / "diagram.json");
    const ImmersedDiagram3 d = diagram_from_json(load_json(dpath));
    const fs::path dir = dpath.parent_path();
    const SingularitySet sing = singularity_set_from_json(load_json(dir / "singularities.json"));
    const BrokenSurface broken = broken_surface_from_json(load_json(dir / "broken.json"));
    mp = slice_radial(d, frame_values(c, nullptr), &sing, &broken);
  } else {
    const Surface4 s = surface_from_json(load_json(or_default(in.surface, c.out / "surface.json")));
    const auto values = frame_values(c, &s);
    mp = c.family == SliceFamily::kVertical ? slice_vertical(s, values) : slice_horizontal(s, values);
  }
  const std::string family = to_string(c.family);
  save_json(c.out / ("picture_" + family + ".json"), to_json(mp));
  write_svgs(mp, c.out / ("frames_" + family));
  int flagged = 0;
  for (const auto& f : mp.frames) {
    if (f.flagged) {
      ++flagged;
      std::cout << "flagged: frame at t = " << f.requested << " is near a critical value (sliced at " << f.parameter
                << ")\n";
    }
  }
  std::cout << mp.frames.size() << " " << family << " frames, " << flagged << " flagged, " << mp.events.size()
            << " events\n";
  return 0;
}

int twist_from_source(const std::string& source) {
  std::smatch m;
  if (std::regex_search(source, m, std::regex("n=(\\d+)"))) return std::stoi(m[1]);
  return -1;
}

int cmd_analyze(const PipelineConfig& c, const Inputs& in) {
  const fs::path ppath = or_default(in.picture, c.out / ("picture_" + std::string(to_string(c.family)) + ".json"));
  const MotionPicture mp = motion_picture_from_json(load_json(ppath));
  Json report;
  Json frames = Json::array();
  std::cout << "frame  parameter  components  colorings  linking\n";
  for (std::size_t i = 0; i < mp.frames.size(); ++i) {
    const Frame& f = mp.frames[i];
    Json row{{"parameter", f.parameter}, {"flagged", f.flagged}, {"components", f.component_count()}};
    try {
      const InvariantSignature sig = signature(planar_project_frame(f, c.view, c.seed));
      row["signature"] = to_json(sig);
      std::printf("%5zu  %9.5f  %10d  %9lld  %7d%s\n", i, f.parameter, sig.component_count,
                  static_cast<long long>(sig.tricoloring_count), sig.total_linking, f.flagged ? "  flagged" : "");
    } catch (const GenericityError& e) {
      row["signature"] = nullptr;
      row["note"] = e.what();
      std::printf("%5zu  %9.5f  %10d  %9s\n", i, f.parameter, f.component_count(), "n/a");
    }
    frames.push_back(row);
  }
  report["frames"] = frames;
  report["events"] = Json::array();
  for (const auto& e : mp.events) {
    report["events"].push_back(Json{{"value", e.value}, {"kind", to_string(e.kind)},
                                    {"multiplicity", e.multiplicity}, {"degenerate", !e.degenerate_set.empty()}});
  }
  std::cout << "events: " << mp.events.size() << ", untilted balance " << morse_balance(mp.events) << "\n";

  const fs::path spath = or_default(in.surface, c.out / "surface.json");
  if (mp.family != SliceFamily::kRadial && fs::exists(spath)) {
    const Surface4 s = surface_from_json(load_json(spath));
    const auto tilted = detect_events(s, mp.family, c.tilt, c.seed);
    const int balance = morse_balance(tilted);
    report["morse_balance"] = balance;
    report["tilt"] = c.tilt;
    std::cout << "morse balance (tilt " << c.tilt << "): " << balance << "\n";
  }

  if (mp.family != SliceFamily::kRadial) {
    const NormalFormReport nf = check_normal_form(mp);
    report["normal_form"] = to_json(nf);
    std::cout << "normal form: " << (nf.ok ? "yes" : "no") << "\n";
    for (const auto& note : nf.notes) std::cout << "  " << note << "\n";
  }

  const int n = twist_from_source(mp.source);
  if (mp.family == SliceFamily::kHorizontal && n >= 1) {
    double worst = 0.0;
    for (const auto& f : mp.frames) worst = std::max(worst, frame_rotation_deviation(f, n));
    const bool ok = worst <= 1e-12;
    const std::string verdict = "period 2π/" + std::to_string(n) + (ok ? " confirmed" : " not confirmed");
    report["periodicity"] = {{"order", n}, {"max_deviation", worst}, {"verdict", verdict}};
    std::cout << verdict << " (max deviation " << worst << ")\n";
  } else if (mp.family == SliceFamily::kRadial) {
    // Half-plane angles t and t + pi carry equal signatures on a symmetric diagram.
    int compared = 0, equal = 0;
    for (std::size_t i = 0; i < mp.frames.size(); ++i) {
      for (std::size_t j = i + 1; j < mp.frames.size(); ++j) {
        if (std::abs(mp.frames[j].requested - mp.frames[i].requested - kPi) > 1e-9) continue;
        if (frames[i]["signature"].is_null() || frames[j]["signature"].is_null()) continue;
        ++compared;
        equal += signatures_equal(signature_from_json(frames[i]["signature"]),
                                  signature_from_json(frames[j]["signature"]));
      }
    }
    report["half_turn_pairs"] = {{"compared", compared}, {"equal", equal}};
    std::cout << "half-turn pairs with equal signatures: " << equal << "/" << compared << "\n";
  }
  save_json(c.out / ("analysis_" + std::string(to_string(mp.family)) + ".json"), report);
  return 0;
}

int cmd_export(const PipelineConfig& c, const Inputs& in) {
  int written = 0;
  const fs::path dpath = or_default(in.diagram, c.out / "diagram.json");
  if (fs::exists(dpath)) {
    const ImmersedDiagram3 d = diagram_from_json(load_json(dpath));
    write_text_atomic(c.out / "diagram.obj", diagram_obj(d));
    ++written;
    const fs::path bpath = dpath.parent_path() / "broken.json";
    if (fs::exists(bpath)) {
      write_text_atomic(c.out / "broken.obj", broken_obj(broken_surface_from_json(load_json(bpath))));
      ++written;
    }
  }
  std::vector<fs::path> pictures;
  if (!in.picture.empty()) {
    pictures.push_back(in.picture);
  } else if (fs::exists(c.out)) {
    for (const auto& e : fs::directory_iterator(c.out)) {
      const std::string name = e.path().filename().string();
      if (name.rfind("picture_", 0) == 0 && e.path().extension() == ".json") pictures.push_back(e.path());
    }
    std::sort(pictures.begin(), pictures.end());
  }
  for (const auto& p : pictures) {
    const MotionPicture mp = motion_picture_from_json(load_json(p));
    write_svgs(mp, c.out / ("frames_" + std::string(to_string(mp.family))));
    written += static_cast<int>(mp.frames.size());
  }
  if (written == 0) throw IoError("nothing to export in " + c.out.string());
  std::cout << "exported " << written << " files\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twist-spun knot surfaces: construction, diagrams, motion pictures"};
  app.require_subcommand(1);

  PipelineConfig config;
  Inputs inputs;
  std::string drop = "x";
  std::string family = "horizontal";
  if (const char* env = std::getenv("TWISTSPIN_OUT")) config.out = env;
  std::string out = config.out.string();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--arc", config.arc, "arc preset (trefoil, unknot) or arc JSON file")->capture_default_str();
    sub->add_option("--n", config.n, "twist count")->capture_default_str();
    sub->add_option("--m", config.m, "angular samples")->capture_default_str();
    sub->add_option("--drop", drop, "projection drop axis (x, y, u, v)")->capture_default_str();
    sub->add_option("--family", family, "slice family (vertical, horizontal, radial)")->capture_default_str();
    sub->add_option("--frames", config.frames, "frame count")->capture_default_str();
    sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
    sub->add_option("--tol", config.tol.intersect, "intersection tolerance (scale-relative)")->capture_default_str();
    sub->add_option("--stitch", config.tol.stitch, "stitching tolerance (scale-relative)")->capture_default_str();
    sub->add_option("--perturb", config.perturb, "projection perturbation magnitude")->capture_default_str();
    sub->add_option("--tilt", config.tilt, "Morse event tilt")->capture_default_str();
    sub->add_option("--values", config.frame_values, "explicit frame parameters");
    sub->add_option("--out", out, "output directory (default $TWISTSPIN_OUT or .)")->capture_default_str();
    sub->add_option("--surface", inputs.surface, "surface JSON (default <out>/surface.json)");
    sub->add_option("--diagram", inputs.diagram, "diagram JSON (default <out>/diagram.json)");
    sub->add_option("--picture", inputs.picture, "motion picture JSON");
  };
  CLI::App* build = app.add_subcommand("build", "spin or twist-spin the arc into a surface in R^4");
  CLI::App* project = app.add_subcommand("project", "project to R^3 and compute the singularity set");
  CLI::App* slice = app.add_subcommand("slice", "cut into a motion picture and draw SVG frames");
  CLI::App* analyze = app.add_subcommand("analyze", "frame invariants, events, normal form, periodicity");
  CLI::App* exp = app.add_subcommand("export", "rewrite OBJ and SVG files from stored JSON");
  for (CLI::App* sub : {build, project, slice, analyze, exp}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::kValidation);
  }

  try {
    config.out = out;
    config.drop = parse_axis4(drop);
    config.family = parse_slice_family(family);
    validate_config(config);
    if (*build) return cmd_build(config);
    if (*project) return cmd_project(config, inputs);
    if (*slice) return cmd_slice(config, inputs);
    if (*analyze) return cmd_analyze(config, inputs);
    return cmd_export(config, inputs);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kIo);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kValidation);
  }
}
