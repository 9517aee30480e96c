// SPDX-License-Identifier: Apache-2.0
#include "volcap/core/mesh.hpp"

#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace volcap {

void TriMesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  if (!normals.empty() && normals.size() != vertices.size())
    throw std::invalid_argument("TriMesh: normal count != vertex count");
  for (const auto& t : triangles)
    for (int i : t)
      if (i < 0 || i >= n) throw std::invalid_argument("TriMesh: triangle index out of range");
  for (const auto& n3 : normals) {
    const double len = n3.norm();
    if (len > 0 && std::abs(len - 1.0) > 1e-6)
      throw std::invalid_argument("TriMesh: normal not unit length");
  }
  for (const auto& ch : channels)
    if (ch.data.size() != vertices.size() * static_cast<std::size_t>(ch.components))
      throw std::invalid_argument("TriMesh: channel '" + ch.name + "' length mismatch");
}

AttributeChannel& TriMesh::add_channel(const std::string& name, int components) {
  channels.push_back(AttributeChannel{name, components,
                                      std::vector<float>(vertices.size() * components, 0.f)});
  return channels.back();
}

const AttributeChannel* TriMesh::find_channel(const std::string& name) const {
  for (const auto& ch : channels)
    if (ch.name == name) return &ch;
  return nullptr;
}

MeshTopology analyze_topology(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, int> edge_use;
  edge_use.reserve(mesh.triangles.size() * 3);
  auto key = [](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  };
  for (const auto& t : mesh.triangles) {
    ++edge_use[key(t[0], t[1])];
    ++edge_use[key(t[1], t[2])];
    ++edge_use[key(t[2], t[0])];
  }
  MeshTopology topo;
  topo.vertex_count = static_cast<long long>(mesh.vertices.size());
  topo.face_count = static_cast<long long>(mesh.triangles.size());
  topo.edge_count = static_cast<long long>(edge_use.size());
  topo.edge_manifold = !mesh.triangles.empty();
  for (const auto& [k, uses] : edge_use)
    if (uses != 2) topo.edge_manifold = false;
  return topo;
}

double surface_area(const TriMesh& mesh) {
  double area = 0;
  for (const auto& t : mesh.triangles) {
    const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    area += 0.5 * e1.cross(e2).norm();
  }
  return area;
}

}  // namespace volcap
