// SPDX-License-Identifier: Apache-2.0
#include "volcap/recon/volume_recon.hpp"

#include "volcap/util/threading.hpp"

#include <cmath>

namespace volcap::recon {
namespace {

inline double kernel(double dist, double sigma) {
  return std::exp(-dist * dist / (sigma * sigma)) / sigma;
}

struct Support {
  int x0, x1, y0, y1, z0, z1;  // inclusive voxel ranges
};

Support support_around(const Vec3& voxel_coords, int nx, int ny, int nz) {
  auto range = [](double c, int n, int& lo, int& hi) {
    lo = std::max(0, static_cast<int>(std::floor(c)) - 1);
    hi = std::min(n - 1, static_cast<int>(std::floor(c)) + 2);
  };
  Support s;
  range(voxel_coords.x(), nx, s.x0, s.x1);
  range(voxel_coords.y(), ny, s.y0, s.y1);
  range(voxel_coords.z(), nz, s.z0, s.z1);
  return s;
}

}  // namespace

GradientField splat(std::span<const OrientedCloud> clouds, const GridSpec& grid, SplatMode mode) {
  GradientField out;
  out.sigma1 = std::sqrt(3.0) / 2.0 * grid.edge_mm;  // voxel radius: half the diagonal
  out.sigma2 = std::sqrt(1.5) * out.sigma1;
  out.field = VolumeGrid<Vec3>(grid.nx, grid.ny, grid.nz, grid.origin, grid.edge_mm, Vec3::Zero());
  out.density = VolumeGrid<double>(grid.nx, grid.ny, grid.nz, grid.origin, grid.edge_mm, 0.0);

  if (mode == SplatMode::kSimple) {
    // nearest-voxel binning, normalized by the per-voxel sample count
    for (const auto& cloud : clouds)
      for (const auto& p : cloud.points) {
        const Vec3 c = out.field.to_voxel(p.position);
        const int x = static_cast<int>(std::lround(c.x()));
        const int y = static_cast<int>(std::lround(c.y()));
        const int z = static_cast<int>(std::lround(c.z()));
        if (!out.field.in_bounds(x, y, z)) continue;
        out.field.at(x, y, z) += p.normal;
        out.density.at(x, y, z) += 1.0;
      }
    for (std::size_t i = 0; i < out.field.size(); ++i)
      if (out.density.data()[i] > 0)
        out.field.data()[i] /= out.density.data()[i];
    return out;
  }

  const double eps_density = 1e-6 * kernel(0.0, out.sigma2);
  const int threads = hardware_threads();

  // two passes over z-slabs; each slab's voxels are written by one thread
  // only and points are visited in index order, so the accumulation is
  // bit-identical for any thread count
  auto for_each_slab = [&](auto&& accumulate) {
    parallel_chunks(grid.nz, threads, [&](std::size_t slab_z0, std::size_t slab_z1, int) {
      for (const auto& cloud : clouds)
        for (const auto& p : cloud.points) {
          const Vec3 c = out.field.to_voxel(p.position);
          const Support s = support_around(c, grid.nx, grid.ny, grid.nz);
          const int z0 = std::max(s.z0, static_cast<int>(slab_z0));
          const int z1 = std::min(s.z1, static_cast<int>(slab_z1) - 1);
          for (int z = z0; z <= z1; ++z)
            for (int y = s.y0; y <= s.y1; ++y)
              for (int x = s.x0; x <= s.x1; ++x)
                accumulate(p, (p.position - out.field.voxel_center(x, y, z)).norm(), x, y, z);
        }
    });
  };

  for_each_slab([&](const OrientedPoint& p, double dist, int x, int y, int z) {
    out.density.at(x, y, z) += kernel(dist, out.sigma2) * p.weight;
  });
  for_each_slab([&](const OrientedPoint& p, double dist, int x, int y, int z) {
    const double d = out.density.at(x, y, z);
    if (d < eps_density) return;
    out.field.at(x, y, z) += kernel(dist, out.sigma1) * (p.weight / d) * p.normal;
  });
  return out;
}

double iso_level(const VolumeGrid<double>& volume, std::span<const OrientedCloud> clouds) {
  double sum = 0;
  std::size_t count = 0;
  for (const auto& cloud : clouds)
    for (const auto& p : cloud.points) {
      sum += sample_trilinear(volume, volume.to_voxel(p.position));
      ++count;
    }
  if (count == 0) throw std::invalid_argument("iso_level: no input samples");
  return sum / static_cast<double>(count);
}

}  // namespace volcap::recon
