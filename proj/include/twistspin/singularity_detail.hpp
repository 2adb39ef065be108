#pragma once

#include "twistspin/diagram_projector.hpp"

#include <vector>

namespace twistspin::detail {

/// Plane of a triangle: unit normal from the stored vertex order, origin at its first vertex.
struct Plane {
  Vec3 n;
  Vec3 o;
  double distance(const Vec3& p) const { return n.dot(p - o); }
};

Plane triangle_plane(const ImmersedDiagram3& d, int t);

/// Crossing of mesh edge (va, vb) with a plane. The edge is always walked from
/// the lower vertex id, so both triangles sharing it get bitwise equal points.
Vec3 edge_plane_point(const ImmersedDiagram3& d, int va, int vb, const Plane& plane);

std::vector<TriplePoint> find_triple_points(const ImmersedDiagram3& d,
                                            const std::vector<IntersectionSegment>& segments,
                                            const Tolerances& tol, std::vector<Degeneracy>* degs);

}  // namespace twistspin::detail
