#pragma once

#include "twistspin/geometry.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace twistspin {

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

/// Edge and incidence tables of a triangle list. Edges are stored as sorted
/// vertex pairs in lexicographic order so indices are deterministic.
struct MeshTopology {
  std::vector<std::array<int, 2>> edges;
  std::vector<std::vector<int>> edge_triangles;
  std::vector<std::array<int, 3>> triangle_edges;  // edge k joins corners k and k+1
  std::vector<std::vector<int>> vertex_triangles;
  std::unordered_map<std::uint64_t, int> edge_index;

  int find_edge(int a, int b) const {
    const auto it = edge_index.find(edge_key(a, b));
    return it == edge_index.end() ? -1 : it->second;
  }
};

MeshTopology build_topology(const std::vector<Tri>& triangles, int vertex_count);

bool triangles_share_vertex(const Tri& a, const Tri& b);
int shared_vertex_count(const Tri& a, const Tri& b);

}  // namespace twistspin
