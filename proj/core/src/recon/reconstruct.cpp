// SPDX-License-Identifier: Apache-2.0
#include "volcap/recon/reconstruct.hpp"

#include <chrono>
#include <stdexcept>

namespace volcap::recon {
namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

GridSpec fit_grid(const Vec3& bbox_min, const Vec3& bbox_max, int r, int padding_voxels) {
  GridSpec grid;
  grid.nx = 1 << r;
  grid.ny = 1 << (r + 1);
  grid.nz = 1 << r;
  const Vec3 extent = bbox_max - bbox_min;
  double edge = 1e-9;
  const int dims[3] = {grid.nx, grid.ny, grid.nz};
  for (int a = 0; a < 3; ++a) {
    const int usable = dims[a] - 1 - 2 * padding_voxels;
    if (usable < 1) throw std::invalid_argument("fit_grid: padding leaves no usable voxels");
    edge = std::max(edge, extent(a) / usable);
  }
  grid.edge_mm = edge;
  const Vec3 center = 0.5 * (bbox_min + bbox_max);
  grid.origin = Vec3(center.x() - edge * (grid.nx - 1) / 2.0,
                     center.y() - edge * (grid.ny - 1) / 2.0,
                     center.z() - edge * (grid.nz - 1) / 2.0);
  return grid;
}

FrameReconstruction reconstruct_frame(std::span<const RgbdFrame> frames, const CameraRig& rig,
                                      const ReconConfig& config, StageTimings* timings) {
  if (frames.size() != static_cast<std::size_t>(rig.recon_count))
    throw std::invalid_argument("reconstruct_frame: one frame per reconstruction sensor required");

  FrameReconstruction out;
  auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < rig.recon_count; ++k)
    out.clouds.push_back(
        build_cloud(frames[k], rig.sensors[k].depth_camera(), k, config.discontinuity_mm));
  if (timings) timings->raw_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < rig.recon_count; ++k)
    confidence_weights(out.clouds[k], frames[k], rig.sensors[k].depth_camera(),
                       config.silhouette_radius_px);
  if (timings) timings->weights_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  std::size_t total_points = 0;
  for (const auto& cloud : out.clouds)
    for (const auto& p : cloud.points) {
      lo = lo.cwiseMin(p.position);
      hi = hi.cwiseMax(p.position);
      ++total_points;
    }
  if (total_points == 0)
    throw std::runtime_error("reconstruct_frame: empty foreground in all views");

  const GridSpec grid = fit_grid(lo, hi, config.r, config.padding_voxels);
  GradientField field = splat(out.clouds, grid, config.mode);
  // flip to the interior-pointing field so A comes out as an indicator
  for (auto& v : field.field.data()) v = -v;

  out.volume.values = integrate_fft(field);
  out.volume.iso_level = iso_level(out.volume.values, out.clouds);
  out.mesh = marching_cubes(out.volume.values, out.volume.iso_level);
  if (timings) timings->volumetric_ms = ms_since(t0);
  return out;
}

}  // namespace volcap::recon
