// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/volume_ops.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace volcap::mocap {

BinaryVolume binarize(const VolumeGrid<double>& volume, double level) {
  const int nx = volume.nx(), ny = volume.ny(), nz = volume.nz();
  double max_val = -std::numeric_limits<double>::infinity();
  for (const double v : volume.data()) max_val = std::max(max_val, v);
  const bool interior_above = max_val >= level;

  VolumeGrid<std::uint8_t> mask(nx, ny, nz, volume.origin(), volume.edge(), 0);
  for (std::size_t i = 0; i < volume.size(); ++i)
    mask.data()[i] = (interior_above ? volume.data()[i] >= level : volume.data()[i] < level) ? 1 : 0;

  // keep the largest 26-connected component
  VolumeGrid<std::int32_t> label(nx, ny, nz, volume.origin(), volume.edge(), 0);
  std::int32_t next_label = 0;
  std::size_t best_size = 0;
  std::int32_t best_label = 0;
  std::vector<Eigen::Vector3i> stack;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        if (!mask.at(x, y, z) || label.at(x, y, z) != 0) continue;
        const std::int32_t id = ++next_label;
        std::size_t size = 0;
        stack.push_back({x, y, z});
        label.at(x, y, z) = id;
        while (!stack.empty()) {
          const auto q = stack.back();
          stack.pop_back();
          ++size;
          for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
              for (int dx = -1; dx <= 1; ++dx) {
                const int qx = q.x() + dx, qy = q.y() + dy, qz = q.z() + dz;
                if (!mask.in_bounds(qx, qy, qz)) continue;
                if (!mask.at(qx, qy, qz) || label.at(qx, qy, qz) != 0) continue;
                label.at(qx, qy, qz) = id;
                stack.push_back({qx, qy, qz});
              }
        }
        if (size > best_size) {
          best_size = size;
          best_label = id;
        }
      }
  if (best_size == 0) throw std::runtime_error("binarize: empty interior");

  BinaryVolume out;
  out.grid = VolumeGrid<std::uint8_t>(nx, ny, nz, volume.origin(), volume.edge(), 0);
  out.voxels.reserve(best_size);
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x)
        if (label.at(x, y, z) == best_label) {
          out.grid.at(x, y, z) = 1;
          out.voxels.push_back({x, y, z});
        }
  return out;
}

std::vector<Vec3> boundary_voxels(const BinaryVolume& volume) {
  std::vector<Vec3> out;
  static constexpr int kFace[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                      {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (const auto& q : volume.voxels) {
    for (const auto& d : kFace) {
      const int x = q.x() + d[0], y = q.y() + d[1], z = q.z() + d[2];
      if (!volume.grid.in_bounds(x, y, z) || !volume.grid.at(x, y, z)) {
        out.push_back(volume.voxel_world(q));
        break;
      }
    }
  }
  return out;
}

}  // namespace volcap::mocap
