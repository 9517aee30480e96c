// SPDX-License-Identifier: Apache-2.0
#include "volcap/recon/marching_cubes.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace volcap::recon {
namespace {

// corner i sits at ((i>>0)&1, (i>>1)&1, (i>>2)&1)
constexpr std::array<std::array<int, 2>, 12> kEdges = {{
    {0, 1}, {2, 3}, {4, 5}, {6, 7},  // x
    {0, 2}, {1, 3}, {4, 6}, {5, 7},  // y
    {0, 4}, {1, 5}, {2, 6}, {3, 7},  // z
}};

// cyclic corner order of each cube face
constexpr std::array<std::array<int, 4>, 6> kFaces = {{
    {0, 2, 6, 4},  // x = 0
    {1, 3, 7, 5},  // x = 1
    {0, 1, 5, 4},  // y = 0
    {2, 3, 7, 6},  // y = 1
    {0, 1, 3, 2},  // z = 0
    {4, 5, 7, 6},  // z = 1
}};

int edge_between(int a, int b) {
  for (int e = 0; e < 12; ++e)
    if ((kEdges[e][0] == a && kEdges[e][1] == b) || (kEdges[e][0] == b && kEdges[e][1] == a))
      return e;
  return -1;
}

Vec3 corner_pos(int c) {
  return Vec3((c >> 0) & 1, (c >> 1) & 1, (c >> 2) & 1);
}

struct CaseTable {
  // per config: flat triangle list of edge indices
  std::array<std::vector<std::array<int, 3>>, 256> tris;
};

/// Builds the lookup table by tracing the cross-section polygons of every
/// configuration. On an ambiguous face (diagonal sign pattern) the chords
/// always cut off the inside corners, a rule that depends only on the
/// face's own signs — neighboring cells therefore agree on every shared
/// face and the traced surface closes.
CaseTable build_case_table() {
  CaseTable table;
  for (int config = 1; config < 255; ++config) {
    auto inside = [&](int corner) { return (config >> corner) & 1; };

    // chords per cut edge: each cut edge belongs to two faces and receives
    // exactly one chord partner on each
    std::array<std::array<int, 2>, 12> partner;
    for (auto& p : partner) p = {-1, -1};
    auto link = [&](int ea, int eb) {
      for (int e : {ea, eb}) {
        auto& p = partner[e];
        assert(p[0] == -1 || p[1] == -1);
        (p[0] == -1 ? p[0] : p[1]) = e == ea ? eb : ea;
      }
    };

    for (const auto& face : kFaces) {
      int cuts[4], n_cuts = 0;
      for (int i = 0; i < 4; ++i) {
        const int a = face[i], b = face[(i + 1) % 4];
        if (inside(a) != inside(b)) cuts[n_cuts++] = edge_between(a, b);
      }
      if (n_cuts == 2) {
        link(cuts[0], cuts[1]);
      } else if (n_cuts == 4) {
        // diagonal pattern; pair the chords around each inside corner
        if (inside(face[0])) {
          link(cuts[3], cuts[0]);  // around face[0]
          link(cuts[1], cuts[2]);  // around face[2]
        } else {
          link(cuts[0], cuts[1]);  // around face[1]
          link(cuts[2], cuts[3]);  // around face[3]
        }
      }
    }

    // trace the disjoint cycles
    std::array<bool, 12> used{};
    for (int start = 0; start < 12; ++start) {
      if (used[start] || partner[start][0] == -1) continue;
      std::vector<int> loop;
      int prev = -1, cur = start;
      do {
        loop.push_back(cur);
        used[cur] = true;
        const int next = partner[cur][0] == prev ? partner[cur][1] : partner[cur][0];
        prev = cur;
        cur = next;
      } while (cur != start);

      // orient the loop so the right-hand normal points from inside to out
      Vec3 outward = Vec3::Zero();
      std::vector<Vec3> mid(loop.size());
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto [a, b] = std::make_pair(kEdges[loop[i]][0], kEdges[loop[i]][1]);
        mid[i] = 0.5 * (corner_pos(a) + corner_pos(b));
        outward += inside(a) ? corner_pos(b) - corner_pos(a) : corner_pos(a) - corner_pos(b);
      }
      Vec3 newell = Vec3::Zero();
      for (std::size_t i = 0; i < loop.size(); ++i)
        newell += mid[i].cross(mid[(i + 1) % loop.size()]);
      assert(newell.norm() > 1e-9 && std::abs(newell.dot(outward)) > 1e-9);
      if (newell.dot(outward) < 0) std::reverse(loop.begin(), loop.end());

      for (std::size_t i = 1; i + 1 < loop.size(); ++i)
        table.tris[config].push_back({loop[0], loop[i], loop[i + 1]});
    }
  }
  return table;
}

const CaseTable& case_table() {
  static const CaseTable table = build_case_table();
  return table;
}

}  // namespace

TriMesh marching_cubes(const VolumeGrid<double>& volume, double level) {
  const auto& table = case_table();
  const int nx = volume.nx(), ny = volume.ny(), nz = volume.nz();
  TriMesh mesh;
  if (nx < 2 || ny < 2 || nz < 2) return mesh;

  // global edge id -> welded vertex index
  std::unordered_map<std::uint64_t, int> edge_vertex;
  auto global_edge = [&](int x, int y, int z, int axis) {
    return (static_cast<std::uint64_t>((static_cast<std::uint64_t>(z) * ny + y) * nx + x)) * 3 +
           axis;
  };

  std::vector<Vec3> grid_positions;  // voxel coords, parallel to mesh.vertices
  auto vertex_on_edge = [&](int cx, int cy, int cz, int edge,
                            const std::array<double, 8>& vals) {
    const int c0 = kEdges[edge][0], c1 = kEdges[edge][1];
    const int axis = edge < 4 ? 0 : (edge < 8 ? 1 : 2);
    const int bx = cx + ((c0 >> 0) & 1), by = cy + ((c0 >> 1) & 1), bz = cz + ((c0 >> 2) & 1);
    const auto key = global_edge(bx, by, bz, axis);
    if (const auto it = edge_vertex.find(key); it != edge_vertex.end()) return it->second;

    double t = (level - vals[c0]) / (vals[c1] - vals[c0]);
    t = std::clamp(t, 1e-6, 1.0 - 1e-6);  // keep vertices off the lattice corners
    const Vec3 p = Vec3(cx, cy, cz) + corner_pos(c0) + t * (corner_pos(c1) - corner_pos(c0));
    const int idx = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(volume.to_world(p));
    grid_positions.push_back(p);
    edge_vertex.emplace(key, idx);
    return idx;
  };

  std::array<double, 8> vals;
  for (int z = 0; z + 1 < nz; ++z)
    for (int y = 0; y + 1 < ny; ++y)
      for (int x = 0; x + 1 < nx; ++x) {
        int config = 0;
        for (int c = 0; c < 8; ++c) {
          vals[c] = volume.at(x + ((c >> 0) & 1), y + ((c >> 1) & 1), z + ((c >> 2) & 1));
          if (vals[c] >= level) config |= 1 << c;
        }
        for (const auto& tri : table.tris[config])
          mesh.triangles.push_back({vertex_on_edge(x, y, z, tri[0], vals),
                                    vertex_on_edge(x, y, z, tri[1], vals),
                                    vertex_on_edge(x, y, z, tri[2], vals)});
      }

  // normals: interpolated central-difference gradient; A increases toward
  // the interior, so the outward normal is the negated gradient
  mesh.normals.resize(mesh.vertices.size());
  auto value_at = [&](int x, int y, int z) {
    return volume.at(std::clamp(x, 0, nx - 1), std::clamp(y, 0, ny - 1), std::clamp(z, 0, nz - 1));
  };
  auto gradient_at_node = [&](int x, int y, int z) {
    return Vec3(value_at(x + 1, y, z) - value_at(x - 1, y, z),
                value_at(x, y + 1, z) - value_at(x, y - 1, z),
                value_at(x, y, z + 1) - value_at(x, y, z - 1)) * 0.5;
  };
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& p = grid_positions[i];
    const int x0 = std::clamp(static_cast<int>(p.x()), 0, nx - 2);
    const int y0 = std::clamp(static_cast<int>(p.y()), 0, ny - 2);
    const int z0 = std::clamp(static_cast<int>(p.z()), 0, nz - 2);
    const double tx = p.x() - x0, ty = p.y() - y0, tz = p.z() - z0;
    Vec3 g = Vec3::Zero();
    for (int dz = 0; dz <= 1; ++dz)
      for (int dy = 0; dy <= 1; ++dy)
        for (int dx = 0; dx <= 1; ++dx) {
          const double w = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) * (dz ? tz : 1 - tz);
          if (w > 0) g += w * gradient_at_node(x0 + dx, y0 + dy, z0 + dz);
        }
    const double len = g.norm();
    if (len > 1e-12) {
      mesh.normals[i] = -g / len;
    } else {
      mesh.normals[i] = Vec3(0, 0, 1);  // flat region; direction is arbitrary
    }
  }
  return mesh;
}

}  // namespace volcap::recon
