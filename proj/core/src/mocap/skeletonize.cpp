// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/volume_ops.hpp"

#include <array>
#include <vector>

namespace volcap::mocap {
namespace {

// The 3x3x3 neighborhood as 27 cells, center = 13. Cell index
// c = (dx+1) + 3*(dy+1) + 9*(dz+1).
struct NeighborhoodTables {
  // 26-adjacency among the 27 cells (center excluded from graphs)
  std::array<std::vector<int>, 27> adj26;
  // 6-adjacency restricted to the 18-neighborhood
  std::array<std::vector<int>, 27> adj6;
  std::array<bool, 27> in_n18{};
  std::array<bool, 27> is_face{};  // 6-neighbors of the center

  NeighborhoodTables() {
    auto coords = [](int c) {
      return std::array<int, 3>{c % 3 - 1, (c / 3) % 3 - 1, c / 9 - 1};
    };
    for (int c = 0; c < 27; ++c) {
      const auto [x, y, z] = coords(c);
      const int nz = std::abs(x) + std::abs(y) + std::abs(z);
      in_n18[c] = c != 13 && nz <= 2;
      is_face[c] = nz == 1;
      for (int d = 0; d < 27; ++d) {
        if (d == c) continue;
        const auto [ox, oy, oz] = coords(d);
        const int manhattan = std::abs(x - ox) + std::abs(y - oy) + std::abs(z - oz);
        const int cheby =
            std::max({std::abs(x - ox), std::abs(y - oy), std::abs(z - oz)});
        if (cheby == 1 && c != 13 && d != 13) adj26[c].push_back(d);
        if (manhattan == 1) adj6[c].push_back(d);
      }
    }
  }
};

const NeighborhoodTables& tables() {
  static const NeighborhoodTables t;
  return t;
}

// Simple-point test for (26, 6) connectivity: exactly one 26-component of
// object cells in N26*, and exactly one 6-component of background cells in
// N18 touching a face neighbor.
bool is_simple(const std::array<bool, 27>& object) {
  const auto& t = tables();

  int object_seen = 0, components26 = 0;
  std::array<bool, 27> visited{};
  for (int c = 0; c < 27; ++c)
    if (c != 13 && object[c]) ++object_seen;
  if (object_seen == 0) return false;

  for (int c = 0; c < 27 && components26 <= 1; ++c) {
    if (c == 13 || !object[c] || visited[c]) continue;
    ++components26;
    std::array<int, 27> stack;
    int top = 0;
    stack[top++] = c;
    visited[c] = true;
    while (top) {
      const int cur = stack[--top];
      for (int n : t.adj26[cur])
        if (n != 13 && object[n] && !visited[n]) {
          visited[n] = true;
          stack[top++] = n;
        }
    }
  }
  if (components26 != 1) return false;

  visited.fill(false);
  int components6 = 0;
  for (int c = 0; c < 27 && components6 <= 1; ++c) {
    if (!t.is_face[c] || object[c] || visited[c]) continue;
    ++components6;
    std::array<int, 27> stack;
    int top = 0;
    stack[top++] = c;
    visited[c] = true;
    while (top) {
      const int cur = stack[--top];
      for (int n : t.adj6[cur])
        if (t.in_n18[n] && !object[n] && !visited[n]) {
          visited[n] = true;
          stack[top++] = n;
        }
    }
  }
  return components6 == 1;
}

}  // namespace

std::vector<Eigen::Vector3i> skeletonize(const BinaryVolume& volume) {
  VolumeGrid<std::uint8_t> grid = volume.grid;  // working copy
  const int nx = grid.nx(), ny = grid.ny(), nz = grid.nz();

  auto object_at = [&](int x, int y, int z) {
    return grid.in_bounds(x, y, z) && grid.at(x, y, z) != 0;
  };
  auto fill_neighborhood = [&](const Eigen::Vector3i& p, std::array<bool, 27>& n) {
    int c = 0;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx, ++c)
          n[c] = object_at(p.x() + dx, p.y() + dy, p.z() + dz);
  };
  auto neighbor_count = [&](const Eigen::Vector3i& p) {
    int count = 0;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if ((dx | dy | dz) != 0 && object_at(p.x() + dx, p.y() + dy, p.z() + dz)) ++count;
    return count;
  };

  static constexpr int kDirections[6][3] = {{0, 1, 0},  {0, -1, 0}, {0, 0, 1},
                                            {0, 0, -1}, {1, 0, 0},  {-1, 0, 0}};

  std::vector<Eigen::Vector3i> active = volume.voxels;
  std::array<bool, 27> hood{};
  std::vector<Eigen::Vector3i> candidates;

  bool any_deleted = true;
  while (any_deleted) {
    any_deleted = false;
    for (const auto& dir : kDirections) {
      candidates.clear();
      for (const auto& p : active) {
        if (!grid.at(p.x(), p.y(), p.z())) continue;
        if (object_at(p.x() + dir[0], p.y() + dir[1], p.z() + dir[2])) continue;  // not a border
        const int n = neighbor_count(p);
        if (n <= 1) continue;  // endpoint or isolated voxel
        fill_neighborhood(p, hood);
        if (is_simple(hood)) candidates.push_back(p);
      }
      // sequential re-check keeps deletions topology-safe
      for (const auto& p : candidates) {
        if (neighbor_count(p) <= 1) continue;
        fill_neighborhood(p, hood);
        if (!is_simple(hood)) continue;
        grid.at(p.x(), p.y(), p.z()) = 0;
        any_deleted = true;
      }
    }
    if (any_deleted) {
      std::vector<Eigen::Vector3i> still;
      still.reserve(active.size());
      for (const auto& p : active)
        if (grid.at(p.x(), p.y(), p.z())) still.push_back(p);
      active.swap(still);
    }
  }
  return active;
}

int find_torso(const std::vector<Eigen::Vector3i>& q_h, const VolumeGrid<std::uint8_t>& grid,
               const std::vector<Vec3>& skeleton_nodes, int n_exact, int subsample) {
  if (q_h.empty() || skeleton_nodes.empty())
    throw std::invalid_argument("find_torso: empty voxel or skeleton set");

  std::vector<Vec3> positions(q_h.size());
  for (std::size_t i = 0; i < q_h.size(); ++i)
    positions[i] = grid.voxel_center(q_h[i].x(), q_h[i].y(), q_h[i].z());

  // reference set for the mean distance: exact, or a fixed-seed sample
  std::vector<const Vec3*> reference;
  if (static_cast<int>(positions.size()) <= n_exact) {
    reference.reserve(positions.size());
    for (const auto& p : positions) reference.push_back(&p);
  } else {
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    const std::size_t n = positions.size();
    std::vector<std::uint8_t> taken(n, 0);
    int picked = 0;
    while (picked < subsample) {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      const std::size_t i = state % n;
      if (taken[i]) continue;
      taken[i] = 1;
      reference.push_back(&positions[i]);
      ++picked;
    }
  }

  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    double sum = 0;
    for (const Vec3* r : reference) sum += (positions[i] - *r).norm();
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }

  const Vec3 center = positions[best];
  int nearest = 0;
  double nearest_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < skeleton_nodes.size(); ++i) {
    const double d2 = (skeleton_nodes[i] - center).squaredNorm();
    if (d2 < nearest_d2) {
      nearest_d2 = d2;
      nearest = static_cast<int>(i);
    }
  }
  return nearest;
}

}  // namespace volcap::mocap
