#include "twistspin/mesh.hpp"

#include <algorithm>

namespace twistspin {

MeshTopology build_topology(const std::vector<Tri>& triangles, int vertex_count) {
  MeshTopology topo;
  topo.vertex_triangles.resize(vertex_count);
  std::vector<std::array<int, 2>> all;
  all.reserve(triangles.size() * 3);
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const Tri& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      all.push_back({std::min(a, b), std::max(a, b)});
      topo.vertex_triangles[a].push_back(static_cast<int>(t));
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  topo.edges = std::move(all);
  topo.edge_index.reserve(topo.edges.size() * 2);
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    topo.edge_index.emplace(edge_key(topo.edges[e][0], topo.edges[e][1]), static_cast<int>(e));
  }
  topo.edge_triangles.resize(topo.edges.size());
  topo.triangle_edges.resize(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int e = topo.find_edge(triangles[t][k], triangles[t][(k + 1) % 3]);
      topo.triangle_edges[t][k] = e;
      topo.edge_triangles[e].push_back(static_cast<int>(t));
    }
  }
  return topo;
}

int shared_vertex_count(const Tri& a, const Tri& b) {
  int n = 0;
  for (int x : a) {
    for (int y : b) n += x == y;
  }
  return n;
}

bool triangles_share_vertex(const Tri& a, const Tri& b) { return shared_vertex_count(a, b) > 0; }

}  // namespace twistspin
