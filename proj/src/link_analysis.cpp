#include "twistspin/link_analysis.hpp"

#include "twistspin/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace twistspin {

std::string format_gauss_code(const GaussCode& code) {
  std::string out;
  for (std::size_t k = 0; k < code.size(); ++k) {
    if (k > 0) out += " | ";
    if (code[k].empty()) {
      out += "_";
      continue;
    }
    for (std::size_t i = 0; i < code[k].size(); ++i) {
      const GaussEntry& e = code[k][i];
      if (i > 0) out += ' ';
      out += e.over ? 'O' : 'U';
      out += std::to_string(e.crossing);
      out += e.sign > 0 ? '+' : '-';
    }
  }
  return out;
}

GaussCode parse_gauss_code(const std::string& text) {
  GaussCode code;
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, '|')) {
    std::vector<GaussEntry> comp;
    std::stringstream tokens(part);
    std::string tok;
    while (tokens >> tok) {
      if (tok == "_") continue;
      if (tok.size() < 3 || (tok[0] != 'O' && tok[0] != 'U') || (tok.back() != '+' && tok.back() != '-')) {
        throw ValidationError("malformed Gauss code token '" + tok + "'");
      }
      GaussEntry e;
      e.over = tok[0] == 'O';
      e.sign = tok.back() == '+' ? 1 : -1;
      const std::string digits = tok.substr(1, tok.size() - 2);
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        throw ValidationError("malformed Gauss code token '" + tok + "'");
      }
      e.crossing = std::stoi(digits);
      comp.push_back(e);
    }
    code.push_back(std::move(comp));
  }
  return code;
}

GaussCode canonical_gauss_code(const GaussCode& code) {
  std::map<int, int> renumber;
  GaussCode out = code;
  for (auto& comp : out) {
    for (auto& e : comp) {
      const auto [it, fresh] = renumber.try_emplace(e.crossing, static_cast<int>(renumber.size()) + 1);
      e.crossing = it->second;
    }
  }
  return out;
}

LinkDiagram diagram_from_gauss(const GaussCode& raw) {
  LinkDiagram d;
  d.code = canonical_gauss_code(raw);
  d.components = static_cast<int>(d.code.size());
  d.gauss_code = format_gauss_code(d.code);
  int count = 0;
  for (const auto& comp : d.code) {
    for (const auto& e : comp) count = std::max(count, e.crossing);
  }
  d.crossings.resize(count);
  std::vector<int> overs(count, 0), unders(count, 0), signs(count, 0);
  for (int k = 0; k < d.components; ++k) {
    const auto& comp = d.code[k];
    int arc = static_cast<int>(d.arcs.size());
    d.arcs.push_back({k, 0, 0});
    for (int p = 0; p < static_cast<int>(comp.size()); ++p) {
      const GaussEntry& e = comp[p];
      CrossingRecord& c = d.crossings[e.crossing - 1];
      c.id = e.crossing;
      if (signs[e.crossing - 1] != 0 && signs[e.crossing - 1] != e.sign) {
        throw ValidationError("crossing " + std::to_string(e.crossing) + " has inconsistent signs");
      }
      signs[e.crossing - 1] = e.sign;
      c.sign = e.sign;
      if (e.over) {
        ++overs[e.crossing - 1];
        c.over_arc = arc;
        c.over_component = k;
      } else {
        ++unders[e.crossing - 1];
        d.arcs[arc].end = p;
        c.under_in_arc = arc;
        arc = static_cast<int>(d.arcs.size());
        d.arcs.push_back({k, p + 1, 0});
        c.under_out_arc = arc;
        c.under_component = k;
      }
    }
    d.arcs[arc].end = static_cast<int>(comp.size());
  }
  for (int i = 0; i < count; ++i) {
    if (overs[i] != 1 || unders[i] != 1) {
      throw ValidationError("crossing " + std::to_string(i + 1) + " must appear once over and once under");
    }
  }
  return d;
}

namespace {

struct Segment2 {
  int curve;
  int index;
  Vec2 a, b;
  double da, db;
  double xmin, xmax, ymin, ymax;
};

struct FoundCrossing {
  int over_curve, over_index, under_curve, under_index;
  double over_t, under_t;
  int sign;
  Vec2 point;
};

Vec3 perpendicular_unit(const Vec3& d) {
  const Vec3 a = std::abs(d.x()) <= std::abs(d.y()) && std::abs(d.x()) <= std::abs(d.z()) ? Vec3::UnitX()
                 : std::abs(d.y()) <= std::abs(d.z())                                   ? Vec3::UnitY()
                                                                                         : Vec3::UnitZ();
  return a.cross(d).normalized();
}

// Crossings of the projection, or a description of the first degeneracy.
std::optional<std::string> find_crossings(const std::vector<std::vector<Vec3>>& curves, const Vec3& view,
                                          std::vector<FoundCrossing>& out,
                                          std::vector<std::vector<Vec2>>& projected) {
  const Vec3 e1 = perpendicular_unit(view);
  const Vec3 e2 = view.cross(e1);
  std::vector<Vec3> all;
  for (const auto& c : curves) all.insert(all.end(), c.begin(), c.end());
  const double scale = std::max(bbox_diagonal(std::span<const Vec3>(all)), 1e-300);
  const double tol = 1e-9 * scale;

  std::vector<Segment2> segs;
  projected.assign(curves.size(), {});
  for (int ci = 0; ci < static_cast<int>(curves.size()); ++ci) {
    const auto& c = curves[ci];
    const int n = static_cast<int>(c.size());
    for (const Vec3& p : c) projected[ci].emplace_back(p.dot(e1), p.dot(e2));
    for (int k = 0; k < n; ++k) {
      const Vec3& p = c[k];
      const Vec3& q = c[(k + 1) % n];
      Segment2 s{ci, k, projected[ci][k], projected[ci][(k + 1) % n], p.dot(view), q.dot(view), 0, 0, 0, 0};
      s.xmin = std::min(s.a.x(), s.b.x());
      s.xmax = std::max(s.a.x(), s.b.x());
      s.ymin = std::min(s.a.y(), s.b.y());
      s.ymax = std::max(s.a.y(), s.b.y());
      segs.push_back(s);
    }
  }
  std::vector<int> order(segs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tie(segs[a].xmin, a) < std::tie(segs[b].xmin, b);
  });

  out.clear();
  std::vector<int> active;
  for (int si : order) {
    const Segment2& s = segs[si];
    active.erase(std::remove_if(active.begin(), active.end(), [&](int a) { return segs[a].xmax < s.xmin - tol; }),
                 active.end());
    for (int ai : active) {
      const Segment2& r = segs[ai];
      if (r.ymax < s.ymin - tol || s.ymax < r.ymin - tol) continue;
      if (r.curve == s.curve) {
        const int n = static_cast<int>(curves[s.curve].size());
        const int gap = std::abs(r.index - s.index);
        if (gap == 1 || gap == n - 1) continue;
        // Segments joined through one very short segment only meet at its ends.
        if (gap == 2 || gap == n - 2) {
          const int mid = gap == 2 ? (std::min(r.index, s.index) + 1) % n : (std::max(r.index, s.index) + 1) % n;
          if ((curves[s.curve][mid] - curves[s.curve][(mid + 1) % n]).norm() <= 1e-6 * scale) continue;
        }
      }
      const double dist = segment_distance(Vec3(r.a.x(), r.a.y(), 0), Vec3(r.b.x(), r.b.y(), 0),
                                           Vec3(s.a.x(), s.a.y(), 0), Vec3(s.b.x(), s.b.y(), 0));
      if (dist > tol) continue;
      const double o1 = cross2(r.b - r.a, s.a - r.a);
      const double o2 = cross2(r.b - r.a, s.b - r.a);
      const double o3 = cross2(s.b - s.a, r.a - s.a);
      const double o4 = cross2(s.b - s.a, r.b - s.a);
      const bool proper = o1 * o2 < 0.0 && o3 * o4 < 0.0;
      if (!proper) return "touching segments";
      const double tr = o3 / (o3 - o4);
      const double ts = o1 / (o1 - o2);
      const double lr = (r.b - r.a).norm();
      const double ls = (s.b - s.a).norm();
      if (tr * lr <= tol || (1 - tr) * lr <= tol || ts * ls <= tol || (1 - ts) * ls <= tol) {
        return "crossing at a vertex";
      }
      const double dr = r.da + tr * (r.db - r.da);
      const double ds = s.da + ts * (s.db - s.da);
      if (std::abs(dr - ds) <= tol) return "crossing at equal depth";
      const bool r_over = dr > ds;
      const Segment2& o = r_over ? r : s;
      const Segment2& u = r_over ? s : r;
      FoundCrossing fc{o.curve, o.index, u.curve, u.index, r_over ? tr : ts, r_over ? ts : tr,
                       cross2(o.b - o.a, u.b - u.a) > 0.0 ? 1 : -1, r.a + tr * (r.b - r.a)};
      out.push_back(fc);
    }
    active.push_back(si);
  }
  std::sort(out.begin(), out.end(), [](const FoundCrossing& a, const FoundCrossing& b) {
    return std::tie(a.point.x(), a.point.y()) < std::tie(b.point.x(), b.point.y());
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size() && out[j].point.x() - out[i].point.x() <= tol; ++j) {
      if ((out[i].point - out[j].point).norm() <= tol) return "coincident crossings";
    }
  }
  return std::nullopt;
}

}  // namespace

LinkDiagram planar_project_curves(const std::vector<std::vector<Vec3>>& curves, const Vec3& view_direction,
                                  std::uint64_t seed) {
  if (view_direction.norm() == 0.0) throw ValidationError("view direction must be nonzero");
  for (const auto& c : curves) {
    if (c.size() < 3) throw ValidationError("frame curves need at least three vertices");
  }
  Rng rng(seed);
  Vec3 view = view_direction.normalized();
  std::vector<std::string> notes;
  std::vector<FoundCrossing> found;
  std::vector<std::vector<Vec2>> projected;
  int attempt = 0;
  for (;; ++attempt) {
    if (attempt >= kMaxViewAttempts) {
      throw GenericityError("planar projection still degenerate after " + std::to_string(kMaxViewAttempts) +
                            " view perturbations (" + notes.back() + ")");
    }
    if (attempt > 0) {
      const Vec3 axis = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
      view = rotate_about_axis(view, Vec3::Zero(), axis, 1e-6 * attempt).normalized();
    }
    const auto problem = find_crossings(curves, view, found, projected);
    if (!problem) break;
    notes.push_back("attempt " + std::to_string(attempt + 1) + ": " + *problem);
  }

  // Passages per curve in traversal order.
  struct Passage {
    int index;
    double t;
    int crossing;
    bool over;
  };
  std::vector<std::vector<Passage>> passages(curves.size());
  for (int i = 0; i < static_cast<int>(found.size()); ++i) {
    const auto& f = found[i];
    passages[f.over_curve].push_back({f.over_index, f.over_t, i, true});
    passages[f.under_curve].push_back({f.under_index, f.under_t, i, false});
  }
  GaussCode code(curves.size());
  for (std::size_t c = 0; c < curves.size(); ++c) {
    auto& ps = passages[c];
    std::sort(ps.begin(), ps.end(), [](const Passage& a, const Passage& b) {
      return std::tie(a.index, a.t) < std::tie(b.index, b.t);
    });
    for (const auto& p : ps) code[c].push_back({p.crossing + 1, p.over, found[p.crossing].sign});
  }
  // Canonical numbering follows first appearance; carry the image points along.
  std::map<int, int> renumber;
  for (const auto& comp : code) {
    for (const auto& e : comp) renumber.try_emplace(e.crossing, static_cast<int>(renumber.size()) + 1);
  }
  LinkDiagram d = diagram_from_gauss(code);
  for (const auto& [old_id, new_id] : renumber) d.crossings[new_id - 1].point = found[old_id - 1].point;
  d.view_direction = view;
  d.view_attempts = attempt + 1;
  d.resolutions = std::move(notes);
  d.projected = std::move(projected);
  return d;
}

LinkDiagram planar_project_frame(const Frame& frame, const Vec3& view_direction, std::uint64_t seed) {
  return planar_project_curves(frame.curves, view_direction, seed);
}

std::int64_t tricoloring_count(const LinkDiagram& d) {
  const int n = static_cast<int>(d.arcs.size());
  std::vector<std::vector<int>> rows;
  for (const auto& c : d.crossings) {
    std::vector<int> row(n, 0);
    row[c.over_arc] += 2;
    row[c.under_in_arc] += 2;  // -1 mod 3
    row[c.under_out_arc] += 2;
    for (int& x : row) x %= 3;
    rows.push_back(std::move(row));
  }
  // The base point splits an arc without changing its colour.
  for (int k = 0; k < d.components; ++k) {
    int first = -1;
    int last = -1;
    for (int a = 0; a < n; ++a) {
      if (d.arcs[a].component != k) continue;
      if (first < 0) first = a;
      last = a;
    }
    if (first >= 0 && first != last) {
      std::vector<int> row(n, 0);
      row[first] = 1;
      row[last] = 2;
      rows.push_back(std::move(row));
    }
  }
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    const int inv = rows[rank][col];  // 1 and 2 are their own inverses mod 3
    for (int& x : rows[rank]) x = (x * inv) % 3;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const int f = rows[r][col];
      for (int c = 0; c < n; ++c) rows[r][c] = ((rows[r][c] - f * rows[rank][c]) % 3 + 3) % 3;
    }
    ++rank;
  }
  const int dim = n - rank;
  if (dim > 39) throw ValidationError("tricoloring count exceeds 64-bit range");
  std::int64_t count = 1;
  for (int i = 0; i < dim; ++i) count *= 3;
  return count;
}

std::vector<std::vector<int>> linking_matrix(const LinkDiagram& d) {
  std::vector<std::vector<int>> twice(d.components, std::vector<int>(d.components, 0));
  for (const auto& c : d.crossings) {
    if (c.over_component == c.under_component) continue;
    twice[c.over_component][c.under_component] += c.sign;
    twice[c.under_component][c.over_component] += c.sign;
  }
  for (auto& row : twice) {
    for (int& x : row) {
      if (x % 2 != 0) throw ValidationError("odd inter-component crossing sum");
      x /= 2;
    }
  }
  return twice;
}

InvariantSignature signature(const LinkDiagram& d) {
  InvariantSignature s;
  s.component_count = d.components;
  int reduced = 0;
  for (const auto& comp : simplify(d.code)) reduced += static_cast<int>(comp.size());
  s.crossing_count_reduced = reduced / 2;
  s.tricoloring_count = tricoloring_count(d);
  s.linking_matrix = linking_matrix(d);
  for (int i = 0; i < d.components; ++i) {
    for (int j = i + 1; j < d.components; ++j) s.total_linking += s.linking_matrix[i][j];
  }
  return s;
}

bool signatures_equal(const InvariantSignature& a, const InvariantSignature& b) {
  return a.component_count == b.component_count && a.tricoloring_count == b.tricoloring_count &&
         a.linking_matrix == b.linking_matrix && a.total_linking == b.total_linking;
}

const char* to_string(ReidemeisterMove move) {
  switch (move) {
    case ReidemeisterMove::kR1Add: return "R1+";
    case ReidemeisterMove::kR1Remove: return "R1-";
    case ReidemeisterMove::kR2Add: return "R2+";
    case ReidemeisterMove::kR2Remove: return "R2-";
    case ReidemeisterMove::kR3: return "R3";
  }
  return "R1+";
}

namespace {

struct Pos {
  int comp;
  int index;
};

// Cyclically consecutive entry pairs (p, p + 1).
std::vector<std::pair<Pos, Pos>> adjacent_pairs(const GaussCode& code) {
  std::vector<std::pair<Pos, Pos>> out;
  for (int k = 0; k < static_cast<int>(code.size()); ++k) {
    const int n = static_cast<int>(code[k].size());
    if (n < 2) continue;
    for (int p = 0; p < (n == 2 ? 1 : n); ++p) out.push_back({{k, p}, {k, (p + 1) % n}});
  }
  return out;
}

const GaussEntry& at(const GaussCode& code, const Pos& p) { return code[p.comp][p.index]; }

void erase_positions(GaussCode& code, std::vector<Pos> ps) {
  std::sort(ps.begin(), ps.end(), [](const Pos& a, const Pos& b) {
    return std::tie(a.comp, b.index) < std::tie(b.comp, a.index);
  });
  for (const Pos& p : ps) code[p.comp].erase(code[p.comp].begin() + p.index);
}

std::vector<std::pair<Pos, Pos>> kink_candidates(const GaussCode& code) {
  std::vector<std::pair<Pos, Pos>> out;
  for (const auto& [a, b] : adjacent_pairs(code)) {
    if (at(code, a).crossing == at(code, b).crossing) out.push_back({a, b});
  }
  return out;
}

std::vector<std::vector<Pos>> bigon_candidates(const GaussCode& code) {
  std::vector<std::vector<Pos>> out;
  const auto pairs = adjacent_pairs(code);
  for (const auto& [a, b] : pairs) {
    const GaussEntry& ea = at(code, a);
    const GaussEntry& eb = at(code, b);
    if (!ea.over || !eb.over || ea.crossing == eb.crossing || ea.sign == eb.sign) continue;
    for (const auto& [c, d] : pairs) {
      const GaussEntry& ec = at(code, c);
      const GaussEntry& ed = at(code, d);
      if (ec.over || ed.over) continue;
      const bool same = (ec.crossing == ea.crossing && ed.crossing == eb.crossing) ||
                        (ec.crossing == eb.crossing && ed.crossing == ea.crossing);
      if (same) out.push_back({a, b, c, d});
    }
  }
  return out;
}

int max_crossing(const GaussCode& code) {
  int m = 0;
  for (const auto& comp : code) {
    for (const auto& e : comp) m = std::max(m, e.crossing);
  }
  return m;
}

void insert_at(GaussCode& code, int comp, int index, const std::vector<GaussEntry>& entries) {
  code[comp].insert(code[comp].begin() + index, entries.begin(), entries.end());
}

}  // namespace

bool remove_kink(GaussCode& code) {
  const auto c = kink_candidates(code);
  if (c.empty()) return false;
  erase_positions(code, {c.front().first, c.front().second});
  return true;
}

bool remove_bigon(GaussCode& code) {
  const auto c = bigon_candidates(code);
  if (c.empty()) return false;
  erase_positions(code, c.front());
  return true;
}

void add_kink(GaussCode& code, int component, int position, bool over_first, int sign) {
  if (component < 0 || component >= static_cast<int>(code.size()) || position < 0 ||
      position > static_cast<int>(code[component].size())) {
    throw ValidationError("kink position out of range");
  }
  const int id = max_crossing(code) + 1;
  insert_at(code, component, position, {{id, over_first, sign}, {id, !over_first, sign}});
}

bool add_bigon(GaussCode& code, int crossing, bool finger_is_over_strand, bool over_side_after,
               bool under_side_after, bool swap_order) {
  std::optional<Pos> over_pos, under_pos;
  for (int k = 0; k < static_cast<int>(code.size()); ++k) {
    for (int p = 0; p < static_cast<int>(code[k].size()); ++p) {
      if (code[k][p].crossing != crossing) continue;
      (code[k][p].over ? over_pos : under_pos) = Pos{k, p};
    }
  }
  if (!over_pos || !under_pos) return false;
  const Pos go{over_pos->comp, over_pos->index + (over_side_after ? 1 : 0)};
  const Pos gu{under_pos->comp, under_pos->index + (under_side_after ? 1 : 0)};
  if (go.comp == gu.comp) {
    const int n = static_cast<int>(code[go.comp].size());
    if (go.index % n == gu.index % n) return false;  // both half-edges lie on one edge
  }
  const int a = max_crossing(code) + 1;
  const int b = a + 1;
  const Pos finger = finger_is_over_strand ? go : gu;
  const Pos other = finger_is_over_strand ? gu : go;
  const std::vector<GaussEntry> over_run{{a, true, 1}, {b, true, -1}};
  std::vector<GaussEntry> under_run{{a, false, 1}, {b, false, -1}};
  if (swap_order) std::swap(under_run[0], under_run[1]);
  if (finger.comp == other.comp && finger.index < other.index) {
    insert_at(code, other.comp, other.index, under_run);
    insert_at(code, finger.comp, finger.index, over_run);
  } else {
    insert_at(code, finger.comp, finger.index, over_run);
    insert_at(code, other.comp, other.index, under_run);
  }
  return true;
}

bool triangle_move(GaussCode& code, Rng& rng) {
  struct Edge {
    Pos a, b;
  };
  std::vector<Edge> edges;
  for (const auto& [a, b] : adjacent_pairs(code)) {
    if (code[a.comp].size() >= 3 && at(code, a).crossing != at(code, b).crossing) edges.push_back({a, b});
  }
  // Occurrence (crossing, over) -> incident edges with the far end.
  std::map<std::pair<int, bool>, std::vector<std::pair<int, Pos>>> incident;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const GaussEntry& ea = at(code, edges[i].a);
    const GaussEntry& eb = at(code, edges[i].b);
    incident[{ea.crossing, ea.over}].push_back({i, edges[i].b});
    incident[{eb.crossing, eb.over}].push_back({i, edges[i].a});
  }
  std::vector<std::array<int, 3>> triangles;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const GaussEntry& a1 = at(code, edges[i].a);
    const GaussEntry& b1 = at(code, edges[i].b);
    for (const auto& [j, cpos] : incident[{b1.crossing, !b1.over}]) {
      const GaussEntry& c1 = at(code, cpos);
      if (j == i || c1.crossing == a1.crossing || c1.crossing == b1.crossing) continue;
      for (const auto& [k, apos] : incident[{c1.crossing, !c1.over}]) {
        const GaussEntry& a2 = at(code, apos);
        if (k == i || k == j || a2.crossing != a1.crossing || a2.over == a1.over) continue;
        const int oo = (a1.over && b1.over) + (!b1.over && c1.over) + (!c1.over && a2.over);
        const int uu = (!a1.over && !b1.over) + (b1.over && !c1.over) + (c1.over && !a2.over);
        if (oo == 1 && uu == 1) triangles.push_back({i, j, k});
      }
    }
  }
  if (triangles.empty()) return false;
  const auto& t = triangles[rng.below(static_cast<int>(triangles.size()))];
  for (int e : t) std::swap(code[edges[e].a.comp][edges[e].a.index], code[edges[e].b.comp][edges[e].b.index]);
  return true;
}

GaussCode simplify(const GaussCode& code) {
  GaussCode out = code;
  while (remove_kink(out) || remove_bigon(out)) {
  }
  return out;
}

ReidemeisterMove random_reidemeister_move(GaussCode& code, Rng& rng) {
  if (code.empty()) throw ValidationError("diagram has no components");
  const int first = rng.below(5);
  for (int step = 0; step < 5; ++step) {
    const auto move = static_cast<ReidemeisterMove>((first + step) % 5);
    switch (move) {
      case ReidemeisterMove::kR1Add: {
        const int k = rng.below(static_cast<int>(code.size()));
        add_kink(code, k, rng.below(static_cast<int>(code[k].size()) + 1), rng.below(2) == 1,
                 rng.below(2) == 1 ? 1 : -1);
        return move;
      }
      case ReidemeisterMove::kR1Remove: {
        const auto c = kink_candidates(code);
        if (c.empty()) break;
        const auto& pick = c[rng.below(static_cast<int>(c.size()))];
        erase_positions(code, {pick.first, pick.second});
        return move;
      }
      case ReidemeisterMove::kR2Add: {
        std::set<int> ids;
        for (const auto& comp : code) {
          for (const auto& e : comp) ids.insert(e.crossing);
        }
        if (ids.empty()) break;
        const std::vector<int> pool(ids.begin(), ids.end());
        for (int tries = 0; tries < 8; ++tries) {
          if (add_bigon(code, pool[rng.below(static_cast<int>(pool.size()))], rng.below(2) == 1,
                        rng.below(2) == 1, rng.below(2) == 1, rng.below(2) == 1)) {
            return move;
          }
        }
        break;
      }
      case ReidemeisterMove::kR2Remove: {
        const auto c = bigon_candidates(code);
        if (c.empty()) break;
        erase_positions(code, c[rng.below(static_cast<int>(c.size()))]);
        return move;
      }
      case ReidemeisterMove::kR3:
        if (triangle_move(code, rng)) return move;
        break;
    }
  }
  return ReidemeisterMove::kR1Add;  // unreachable: kink insertion always applies
}

}  // namespace twistspin
