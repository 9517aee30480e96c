// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/mesh.hpp"
#include "volcap/recon/marching_cubes.hpp"
#include "volcap/recon/volume_recon.hpp"

#include <span>

namespace volcap::recon {

struct ReconConfig {
  int r = 7;  // voxel lattice 2^r x 2^(r+1) x 2^r
  SplatMode mode = SplatMode::kWeighted;
  double discontinuity_mm = 50.0;
  int padding_voxels = 8;  // bounding-box extension per side; kills FFT wraparound
  int silhouette_radius_px = 10;
};

struct StageTimings {
  double raw_ms = 0;         // point-normal reconstruction
  double weights_ms = 0;     // confidence weights
  double volumetric_ms = 0;  // splat + integration + iso level + marching cubes
};

struct FrameReconstruction {
  std::vector<OrientedCloud> clouds;  // one per participating sensor
  ImplicitVolume volume;              // A and its iso level L
  TriMesh mesh;                       // world mm
};

/// Full per-frame fusion: oriented clouds with confidence weights, padded
/// 2^r x 2^(r+1) x 2^r grid over the foreground bounding box, gradient
/// splatting, spectral integration, iso level, marching cubes. The
/// splatted field is negated before integration so that A behaves as an
/// interior indicator (maximum inside the body) while cloud normals stay
/// camera-facing.
FrameReconstruction reconstruct_frame(std::span<const RgbdFrame> frames, const CameraRig& rig,
                                      const ReconConfig& config, StageTimings* timings = nullptr);

/// The padded grid fitted around a set of world-space points.
GridSpec fit_grid(const Vec3& bbox_min, const Vec3& bbox_max, int r, int padding_voxels);

}  // namespace volcap::recon
