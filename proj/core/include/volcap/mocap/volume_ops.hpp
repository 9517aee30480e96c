// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/types.hpp"
#include "volcap/core/volume.hpp"

#include <cstdint>
#include <vector>

namespace volcap::mocap {

/// Binary human volume A_h with its occupied voxel list Q_h.
struct BinaryVolume {
  VolumeGrid<std::uint8_t> grid;
  std::vector<Eigen::Vector3i> voxels;  // Q_h

  Vec3 voxel_world(const Eigen::Vector3i& q) const {
    return grid.voxel_center(q.x(), q.y(), q.z());
  }
};

/// Thresholds A at L keeping the side that contains the volume's maximum
/// (the interior), then keeps only the largest 26-connected component.
/// Throws when the interior is empty.
BinaryVolume binarize(const VolumeGrid<double>& volume, double level);

/// Topology-preserving 3D thinning (26-connected object, 6-connected
/// background): six directional subiterations per pass, curve endpoints
/// preserved, candidates re-checked sequentially before deletion. Returns
/// the skeleton voxel set Q_s, a subset of Q_h.
std::vector<Eigen::Vector3i> skeletonize(const BinaryVolume& volume);

/// Most centralized voxel of Q_h: argmin of the mean distance to all
/// other voxels (exact up to n_exact voxels, beyond that the mean is taken
/// over a fixed-seed subsample), snapped to the nearest skeleton node.
/// Returns the index into `skeleton_nodes`.
int find_torso(const std::vector<Eigen::Vector3i>& q_h, const VolumeGrid<std::uint8_t>& grid,
               const std::vector<Vec3>& skeleton_nodes, int n_exact = 5000,
               int subsample = 2000);

/// Boundary voxels of A_h (those with a background 6-neighbor).
std::vector<Vec3> boundary_voxels(const BinaryVolume& volume);

}  // namespace volcap::mocap
