// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace volcap {

/// Named per-vertex attribute channel; data holds `components` values per
/// vertex, interleaved.
struct AttributeChannel {
  std::string name;
  int components = 1;
  std::vector<float> data;
};

struct TriMesh {
  std::vector<Vec3> vertices;                // mm
  std::vector<Vec3> normals;                 // unit, one per vertex (may be empty)
  std::vector<std::array<int, 3>> triangles;
  std::vector<AttributeChannel> channels;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  bool empty() const { return vertices.empty(); }

  void validate() const;

  AttributeChannel& add_channel(const std::string& name, int components);
  const AttributeChannel* find_channel(const std::string& name) const;
};

struct MeshTopology {
  bool edge_manifold = false;  // every edge shared by exactly two triangles
  long long vertex_count = 0, edge_count = 0, face_count = 0;
  long long euler_characteristic() const { return vertex_count - edge_count + face_count; }
};

/// Edge-incidence census over triangle connectivity. A watertight mesh is
/// one where edge_manifold holds.
MeshTopology analyze_topology(const TriMesh& mesh);

double surface_area(const TriMesh& mesh);

}  // namespace volcap
