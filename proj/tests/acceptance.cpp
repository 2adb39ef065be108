// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "twistspin/error.hpp"
#include "twistspin/io.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

using namespace twistspin;

namespace {

// Pinned tolerances and budgets.
constexpr double kSymmetryTol = 1e-12;
constexpr double kTilt = 1e-4;
constexpr double kPerturb = 1e-6;
constexpr double kMinLengthFraction = 1e-7;  // oracle pairs shorter than this times scale are dropped
constexpr double kTripleMergeFraction = 1e-7;
constexpr double kExtremeFraction = 0.95;  // "within 5% of the extreme parameter"
constexpr int kRandomMoves = 100;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const TwistSetup& trefoil() {
  static const TwistSetup s = default_twist_ball(make_trefoil_arc(1.0, 60));
  return s;
}

Surface4 surface(int n, int m) {
  return n == 0 ? spin(trefoil().arc, m) : twist_spin(trefoil().arc, trefoil().ball, n, m);
}

std::vector<std::vector<oracle::Passage>> passages(const GaussCode& code) {
  std::vector<std::vector<oracle::Passage>> out;
  for (const auto& comp : code) {
    out.emplace_back();
    for (const auto& e : comp) out.back().push_back({e.crossing, e.over});
  }
  return out;
}

// Largest distance from a vertex rotated by `angle` in (u, v) to the nearest vertex.
double vertex_set_deviation(const Surface4& s, double angle) {
  const double c = std::cos(angle);
  const double d = std::sin(angle);
  double worst = 0.0;
  for (const Vec4& p : s.vertices) {
    const Vec4 q(p[0], p[1], c * p[2] - d * p[3], d * p[2] + c * p[3]);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec4& r : s.vertices) best = std::min(best, (q - r).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

// Same for frame points (x, u, v) of a horizontal frame.
double frame_deviation(const Frame& f, double angle) {
  std::vector<Vec3> pts;
  for (const auto& c : f.curves) pts.insert(pts.end(), c.begin(), c.end());
  const double c = std::cos(angle);
  const double d = std::sin(angle);
  double worst = 0.0;
  for (const Vec3& p : pts) {
    const Vec3 q(p.x(), c * p.y() - d * p.z(), d * p.y() + c * p.z());
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& r : pts) best = std::min(best, (q - r).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

void criterion_1(Outcome& o) {
  for (int n : {0, 1, 2, 3}) {
    for (int m : {24, 48}) {
      const Surface4 s = surface(n, m);
      const MeshAudit a = audit_mesh(s.triangles, static_cast<int>(s.vertices.size()));
      const int chi = oracle::euler_by_edge_set(s.triangles, static_cast<int>(s.vertices.size()));
      const std::string tag = "n=" + std::to_string(n) + " m=" + std::to_string(m);
      o.require(a.euler && *a.euler == 2 && chi == 2, tag + " euler characteristic");
      o.require(a.closed && a.boundary_edges == 0 && a.nonmanifold_edges == 0, tag + " edge-manifold");
      o.require(a.orientable && oracle::closed_and_coherently_oriented(s.triangles), tag + " orientable");
    }
  }
  o.detail << "chi = 2, closed, orientable for n in {0,1,2,3}, m in {24,48}";
}

void criterion_2(Outcome& o) {
  const Surface4 s = surface(2, 48);
  const double half = vertex_set_deviation(s, kPi);
  const double quarter = vertex_set_deviation(s, kPi / 2);
  o.require(half <= kSymmetryTol, "vertex set not pi-invariant");
  o.require(check_rotational_symmetry(s, 2).max_deviation <= kSymmetryTol, "library symmetry report");
  o.require(quarter > kSymmetryTol, "vertex set pi/2-invariant");
  const MotionPicture mp = slice_horizontal(s, default_frame_values(s, SliceFamily::kHorizontal, 41));
  double frame_half = 0.0;
  double frame_quarter = 0.0;
  for (const auto& f : mp.frames) {
    frame_half = std::max(frame_half, frame_deviation(f, kPi));
    frame_quarter = std::max(frame_quarter, frame_deviation(f, kPi / 2));
  }
  o.require(frame_half <= kSymmetryTol, "horizontal frame not pi-invariant");
  o.require(frame_quarter > kSymmetryTol, "horizontal frames pi/2-invariant");
  o.detail << "vertices: pi " << half << ", pi/2 " << quarter << "; 41 frames: pi " << frame_half << ", pi/2 "
           << frame_quarter;
}

void criterion_3(Outcome& o) {
  const ImmersedDiagram3 d = project_generic(surface(0, 48), Axis4::kX, kPerturb, 7);
  const SingularitySet sing = compute_singularity_set(d);
  const BrokenSurface broken = break_sheets(d, sing, 0.0);
  const SingularitySummary sum = singularity_summary(sing, broken);
  int closed = 0;
  for (const auto& c : sing.double_curves) closed += c.closed;
  o.require(sum.double_curve_count == 3 && closed == 3, "3 closed double curves");
  o.require(sum.triple_point_count == 0, "0 triple points");
  o.require(sum.branch_point_count == 0, "0 branch points");
  o.require(sum.sheet_count == 4, "4 sheets");

  const oracle::MeshView view{&d.vertices, &d.triangles};
  const double scale = d.scale();
  const auto pairs = oracle::crossing_pairs(view, kMinLengthFraction * scale);
  std::set<std::pair<int, int>> got;
  for (const auto& s : sing.segments) {
    if (!oracle::share_vertex(d.triangles[s.over], d.triangles[s.under])) got.insert(std::minmax(s.over, s.under));
  }
  o.require(got == std::set<std::pair<int, int>>(pairs.begin(), pairs.end()), "pair set differs from O(T^2) oracle");
  const int curves = oracle::double_curve_count(view, oracle::crossing_pairs(view));
  const int triples = oracle::triple_point_count(view, pairs, kTripleMergeFraction * scale);
  std::vector<bool> removed(d.triangles.size(), false);
  for (const auto& s : sing.segments) removed[s.under] = true;
  const int sheets = oracle::components_after_removal(d.triangles, removed);
  o.require(curves == 3 && triples == 0 && sheets == 4, "oracle counts");
  o.detail << "summary (" << sum.double_curve_count << ", " << sum.triple_point_count << ", "
           << sum.branch_point_count << ", " << sum.sheet_count << "), oracle (" << curves << ", " << triples
           << ", -, " << sheets << "), " << pairs.size() << " crossing pairs";
}

void criterion_4(Outcome& o) {
  for (int m : {48, 96}) {
    const Surface4 s = surface(2, m);
    std::set<std::pair<int, int>> seen;
    o.detail << "m=" << m << ":";
    for (std::uint64_t seed : {11, 12, 13}) {
      const ImmersedDiagram3 d = project_generic(s, Axis4::kX, kPerturb, seed);
      const SingularitySet sing = compute_singularity_set(d);
      const BrokenSurface broken = break_sheets(d, sing, 0.0);
      const SingularitySummary sum = singularity_summary(sing, broken);
      o.require(sum.triple_point_count >= 4, "triple points >= 4");
      o.require(sum.sheet_count >= 4, "sheets >= 4");
      seen.insert({sum.triple_point_count, sum.sheet_count});
      o.detail << " (" << sum.triple_point_count << " triple, " << sum.sheet_count << " sheets)";
    }
    o.require(seen.size() == 1, "counts vary with seed at m=" + std::to_string(m));
    o.detail << "; ";
  }
}

void criterion_5(Outcome& o) {
  const Surface4 s = surface(0, 48);
  const Vec3 view = Vec3(1.0, 0.05, 0.02).normalized();
  double vmax = 0.0;
  for (const Vec4& p : s.vertices) vmax = std::max(vmax, std::abs(p[3]));
  const MotionPicture v = slice_vertical(s, {-kExtremeFraction * vmax, 0.0, kExtremeFraction * vmax});
  const Frame& mid = v.frames[1];
  const LinkDiagram dm = planar_project_frame(mid, view, 1);
  const auto mid_count = tricoloring_count(dm);
  o.require(mid.component_count() == 1, "middle frame has one component");
  o.require(mid_count == 27 && oracle::brute_force_tricolorings(passages(dm.code)) == 27, "middle frame 27");
  o.detail << "vertical t=0: " << mid.component_count() << " component, " << mid_count << " colorings; ";
  for (int i : {0, 2}) {
    const Frame& f = v.frames[i];
    const LinkDiagram d = planar_project_frame(f, view, 1);
    const auto count = tricoloring_count(d);
    o.require(f.component_count() == 1 && count == 3, "extreme frame colorings");
    o.detail << "t=" << f.parameter << ": " << count << "; ";
  }
  // Generic horizontal levels: the arc meets {y = t} in k points.
  for (double t : {-3.7, -1.9, -0.37, 0.81, 2.1, 4.3}) {
    int k = 0;
    const auto& a = trefoil().arc.vertices;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) k += (a[i].y() > t) != (a[i + 1].y() > t);
    const Frame f = slice_horizontal(s, {t}).frames.front();
    const LinkDiagram d = planar_project_frame(f, Vec3(0.3, 0.2, 1.0).normalized(), 1);
    long long want = 1;
    for (int j = 0; j < k; ++j) want *= 3;
    const auto count = tricoloring_count(d);
    o.require(k > 0 && f.component_count() == k && count == want, "horizontal t=" + std::to_string(t));
    o.require(oracle::brute_force_tricolorings(passages(d.code)) == want, "horizontal oracle");
    o.detail << "y=" << t << ": " << k << " points, " << f.component_count() << " components, " << count << "; ";
  }
}

void criterion_6(Outcome& o) {
  for (int n : {0, 2}) {
    const Surface4 s = surface(n, 48);
    for (SliceFamily fam : {SliceFamily::kVertical, SliceFamily::kHorizontal}) {
      const int b = morse_balance(detect_events(s, fam, kTilt, 1));
      o.require(b == 2, "n=" + std::to_string(n) + " " + to_string(fam));
      o.detail << "n=" << n << " " << to_string(fam) << ": " << b << "; ";
    }
  }
  const Surface4 torus = make_torus_fixture(3.0, 1.0, 16, 24);
  const int bt = morse_balance(detect_events(torus, SliceFamily::kVertical, kTilt, 1));
  o.require(bt == 0, "torus");
  o.detail << "torus: " << bt;
}

void criterion_7(Outcome& o) {
  const ImmersedDiagram3 d = project_generic(surface(2, 48), Axis4::kX, 0.0, 1);
  const SingularitySet sing = compute_singularity_set(d);
  const BrokenSurface broken = break_sheets(d, sing, 0.0);
  std::vector<double> angles;
  for (int k = 0; k < 16; ++k) angles.push_back((k + 0.5) * kPi / 16);
  for (int k = 0; k < 16; ++k) angles.push_back((k + 0.5) * kPi / 16 + kPi);
  const MotionPicture mp = slice_radial(d, angles, &sing, &broken);
  const Vec3 view = Vec3(0.3, 0.2, 1.0).normalized();
  int equal = 0;
  std::set<long long> colorings;
  for (int k = 0; k < 16; ++k) {
    const auto a = signature(planar_project_frame(mp.frames[k], view, 1));
    const auto b = signature(planar_project_frame(mp.frames[k + 16], view, 1));
    equal += signatures_equal(a, b);
    colorings.insert(a.tricoloring_count);
  }
  o.require(equal == 16, "signature mismatch");
  o.detail << equal << "/16 half-turn pairs equal; colorings seen:";
  for (long long c : colorings) o.detail << " " << c;
}

MotionPicture synthetic(const std::vector<std::pair<double, EventKind>>& events, int middle_components) {
  MotionPicture mp;
  for (const auto& [t, k] : events) {
    CriticalEvent e;
    e.value = t;
    e.kind = k;
    mp.events.push_back(e);
  }
  for (double t : {-1.5, 0.0, 1.5}) {
    Frame f;
    f.parameter = f.requested = t;
    for (int c = 0; c < (t == 0.0 ? middle_components : 1); ++c) {
      f.curves.push_back({Vec3(c, 0, 0), Vec3(c, 1, 0), Vec3(c, 0, 1)});
    }
    mp.frames.push_back(f);
  }
  return mp;
}

void criterion_8(Outcome& o) {
  using K = EventKind;
  const std::vector<std::pair<double, K>> good{{-2, K::kMinimum}, {-2, K::kMinimum}, {-1, K::kSaddle},
                                               {1, K::kSaddle},   {2, K::kMaximum},  {2, K::kMaximum}};
  auto with = [&](int index, double value) {
    auto e = good;
    e[index].first = value;
    return e;
  };
  struct Case {
    std::string name;
    MotionPicture mp;
    bool ok;
    int failing;  // condition expected to fail, -1 for none
  };
  std::vector<Case> cases{
      {"compliant", synthetic(good, 1), true, -1},
      {"minimum off -2", synthetic(with(0, -1.7), 1), false, 0},
      {"maximum off 2", synthetic(with(5, 2.4), 1), false, 1},
      {"saddle off +-1", synthetic(with(2, -0.5), 1), false, 2},
      {"split middle frame", synthetic(good, 2), false, 3},
      {"empty", MotionPicture{}, false, -2},
  };
  int right = 0;
  for (const auto& c : cases) {
    const NormalFormReport r = check_normal_form(c.mp);
    bool match = r.ok == c.ok;
    if (c.failing >= 0) {
      for (int i = 0; i < 4; ++i) match = match && (r.conditions[i] == (i != c.failing));
    }
    right += match;
    o.require(match, c.name);
  }
  o.detail << right << "/6 fixtures classified";
}

void criterion_9(Outcome& o) {
  const std::vector<std::pair<std::string, long long>> corpus{
      {"_", 3},
      {"O1+ U2+ O3+ U1+ O2+ U3+", 9},
      {"O1+ U2+ O3+ U1+ O2+ U3+ U4- O5- U6- O4- U5- O6-", 27},
      {"_ | _", 9},
      {"_ | _ | _", 27},
      {"_ | _ | _ | _", 81}};
  int moves = 0;
  for (const auto& [text, want] : corpus) {
    GaussCode code = parse_gauss_code(text);
    const LinkDiagram d = diagram_from_gauss(code);
    o.require(tricoloring_count(d) == want, text + " solver");
    o.require(oracle::brute_force_tricolorings(passages(code)) == want, text + " oracle");
    Rng rng(2024);
    for (int i = 0; i < kRandomMoves; ++i) {
      random_reidemeister_move(code, rng);
      ++moves;
      if (tricoloring_count(diagram_from_gauss(code)) != want) {
        o.require(false, text + " changed after move " + std::to_string(i));
        break;
      }
    }
  }
  o.detail << "6 corpus diagrams match the oracle; " << moves << " random moves preserved counts";
}

struct PipelineText {
  std::string surface, diagram, sing, broken, horizontal, radial, signature;
};

PipelineText pipeline_text() {
  PipelineText t;
  const Surface4 s = surface(2, 24);
  const ImmersedDiagram3 d = project_generic(s, Axis4::kX, kPerturb, 5);
  const SingularitySet sing = compute_singularity_set(d);
  const BrokenSurface broken = break_sheets(d, sing, 0.0);
  const MotionPicture h = slice_horizontal(s, default_frame_values(s, SliceFamily::kHorizontal, 9));
  const MotionPicture r = slice_radial(d, default_frame_values(s, SliceFamily::kRadial, 8), &sing, &broken);
  const LinkDiagram ld = planar_project_frame(h.frames[4], Vec3(0.3, 0.2, 1.0).normalized(), 1);
  t.surface = dump_json(to_json(s));
  t.diagram = dump_json(to_json(d));
  t.sing = dump_json(to_json(sing));
  t.broken = dump_json(to_json(broken));
  t.horizontal = dump_json(to_json(h));
  t.radial = dump_json(to_json(r));
  t.signature = dump_json(Json{{"diagram", to_json(ld)}, {"signature", to_json(signature(ld))}});
  return t;
}

void criterion_10(Outcome& o) {
  const PipelineText a = pipeline_text();
  const PipelineText b = pipeline_text();
  o.require(a.surface == b.surface && a.diagram == b.diagram && a.sing == b.sing && a.broken == b.broken &&
                a.horizontal == b.horizontal && a.radial == b.radial && a.signature == b.signature,
            "runs differ");
  auto again = [](const std::string& text, auto reload) { return dump_json(to_json(reload(Json::parse(text)))); };
  o.require(again(a.surface, surface_from_json) == a.surface, "surface round trip");
  o.require(again(a.diagram, diagram_from_json) == a.diagram, "diagram round trip");
  o.require(again(a.sing, singularity_set_from_json) == a.sing, "singularity round trip");
  o.require(again(a.broken, broken_surface_from_json) == a.broken, "broken surface round trip");
  o.require(again(a.horizontal, motion_picture_from_json) == a.horizontal, "horizontal picture round trip");
  o.require(again(a.radial, motion_picture_from_json) == a.radial, "radial picture round trip");
  const Json sj = Json::parse(a.signature);
  o.require(dump_json(to_json(link_diagram_from_json(sj.at("diagram")))) == dump_json(sj.at("diagram")),
            "link diagram round trip");
  o.require(signature_from_json(sj.at("signature")) == signature_from_json(sj.at("signature")) &&
                dump_json(to_json(signature_from_json(sj.at("signature")))) == dump_json(sj.at("signature")),
            "signature round trip");
  PipelineConfig c;
  o.require(dump_json(to_json(config_from_json(to_json(c)))) == dump_json(to_json(c)), "config round trip");
  std::size_t bytes = 0;
  for (const std::string* t : {&a.surface, &a.diagram, &a.sing, &a.broken, &a.horizontal, &a.radial, &a.signature}) {
    bytes += t->size();
  }
  o.detail << "two runs byte-identical (" << bytes << " bytes); 9 persisted types round trip";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "sphere topology", 5, criterion_1},
      {2, "exact periodicity", 10, criterion_2},
      {3, "spun-trefoil singularities", 60, criterion_3},
      {4, "twist-spun lower bounds", 300, criterion_4},
      {5, "classical motion picture content", 30, criterion_5},
      {6, "PL Morse balance", 10, criterion_6},
      {7, "radial half-turn signatures", 60, criterion_7},
      {8, "normal-form checker", 10, criterion_8},
      {9, "invariant soundness", 60, criterion_9},
      {10, "determinism and round trip", 60, criterion_10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < c.budget_s, "runtime budget");
    failed += !o.pass;
    std::printf("[%s] %2d %-34s %7.2f s (< %g s)  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
