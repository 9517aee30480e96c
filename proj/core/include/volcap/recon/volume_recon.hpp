// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/volume.hpp"
#include "volcap/recon/cloud.hpp"

#include <span>

namespace volcap::recon {

/// Splatted gradient field V(q) with its kernel-density normalizer d(q).
struct GradientField {
  VolumeGrid<Vec3> field;
  VolumeGrid<double> density;
  double sigma1 = 0;  // splat kernel width; half the voxel diagonal
  double sigma2 = 0;  // density kernel width; sigma2^2 = 1.5 * sigma1^2
};

enum class SplatMode {
  kWeighted,  // Gaussian splatting with confidence/density weights
  kSimple,    // nearest-voxel binning normalized by sample count
};

struct GridSpec {
  int nx = 0, ny = 0, nz = 0;
  Vec3 origin = Vec3::Zero();
  double edge_mm = 1.0;
};

/// Distributes each point's normal over the 4^3 surrounding voxels with
/// g(x; s) = s^-1 exp(-x^2/s^2) of the point-to-voxel-center distance,
/// weighted by W/d(q). Voxels with negligible density get a zero vector.
GradientField splat(std::span<const OrientedCloud> clouds, const GridSpec& grid,
                    SplatMode mode = SplatMode::kWeighted);

/// Scalar volume whose isosurface carries the fused geometry.
struct ImplicitVolume {
  VolumeGrid<double> values;
  double iso_level = 0;
};

/// Spectral integration of the gradient field: per component, multiply the
/// forward DFT by the filter that exactly inverts the spectral gradient
/// (grid treated as unit-spaced), zero the DC bin, and sum the inverse
/// transforms. The result has zero mean; integrate(grad f) = f - mean(f).
VolumeGrid<double> integrate_fft(const GradientField& field);

/// Average of the trilinearly interpolated volume at the input samples.
double iso_level(const VolumeGrid<double>& volume, std::span<const OrientedCloud> clouds);

}  // namespace volcap::recon
