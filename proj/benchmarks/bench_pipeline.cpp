// SPDX-License-Identifier: Apache-2.0
#include "volcap/eval/metrics.hpp"
#include "volcap/mocap/volume_ops.hpp"
#include "volcap/recon/marching_cubes.hpp"
#include "volcap/recon/reconstruct.hpp"
#include "volcap/synth/scene.hpp"

#include <benchmark/benchmark.h>

using namespace volcap;

namespace {

const synth::SyntheticScene& scene() {
  static const synth::SyntheticScene s = synth::make_xpose_scene(1);
  return s;
}

std::vector<RgbdFrame> recon_frames() {
  std::vector<RgbdFrame> frames;
  for (int k = 0; k < scene().rig.recon_count; ++k)
    frames.push_back(synth::render_frame(scene(), k, 0));
  return frames;
}

std::vector<recon::OrientedCloud> clouds_fixture() {
  const auto frames = recon_frames();
  std::vector<recon::OrientedCloud> clouds;
  for (int k = 0; k < scene().rig.recon_count; ++k) {
    auto cloud = recon::build_cloud(frames[k], scene().rig.sensors[k].depth_camera(), k);
    recon::confidence_weights(cloud, frames[k], scene().rig.sensors[k].depth_camera());
    clouds.push_back(std::move(cloud));
  }
  return clouds;
}

}  // namespace

static void BM_BuildCloud(benchmark::State& state) {
  const auto frames = recon_frames();
  for (auto _ : state) {
    auto cloud = recon::build_cloud(frames[0], scene().rig.sensors[0].depth_camera(), 0);
    benchmark::DoNotOptimize(cloud.points.size());
  }
}
BENCHMARK(BM_BuildCloud)->Unit(benchmark::kMillisecond);

static void BM_Splat(benchmark::State& state) {
  const auto clouds = clouds_fixture();
  const int r = static_cast<int>(state.range(0));
  Vec3 lo = Vec3::Constant(1e30), hi = -lo;
  for (const auto& c : clouds)
    for (const auto& p : c.points) {
      lo = lo.cwiseMin(p.position);
      hi = hi.cwiseMax(p.position);
    }
  const auto grid = recon::fit_grid(lo, hi, r, 8);
  for (auto _ : state) {
    auto field = recon::splat(clouds, grid);
    benchmark::DoNotOptimize(field.density.data().data());
  }
}
BENCHMARK(BM_Splat)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_IntegrateFft(benchmark::State& state) {
  const auto clouds = clouds_fixture();
  const int r = static_cast<int>(state.range(0));
  Vec3 lo = Vec3::Constant(1e30), hi = -lo;
  for (const auto& c : clouds)
    for (const auto& p : c.points) {
      lo = lo.cwiseMin(p.position);
      hi = hi.cwiseMax(p.position);
    }
  const auto field = recon::splat(clouds, recon::fit_grid(lo, hi, r, 8));
  for (auto _ : state) {
    auto volume = recon::integrate_fft(field);
    benchmark::DoNotOptimize(volume.data().data());
  }
}
BENCHMARK(BM_IntegrateFft)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_MarchingCubes(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  VolumeGrid<double> vol(n, n, n, Vec3::Zero(), 1.0, 0.0);
  const Vec3 c((n - 1) / 2.0, (n - 1) / 2.0, (n - 1) / 2.0);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        vol.at(x, y, z) = 1.0 / (1.0 + (Vec3(x, y, z) - c).norm() / (n / 4.0));
  for (auto _ : state) {
    auto mesh = recon::marching_cubes(vol, 0.6);
    benchmark::DoNotOptimize(mesh.vertices.data());
  }
}
BENCHMARK(BM_MarchingCubes)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_ReconstructFrame(benchmark::State& state) {
  const auto frames = recon_frames();
  recon::ReconConfig config;
  config.r = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto result = recon::reconstruct_frame(frames, scene().rig, config);
    benchmark::DoNotOptimize(result.mesh.vertices.data());
  }
}
BENCHMARK(BM_ReconstructFrame)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_Skeletonize(benchmark::State& state) {
  const auto frames = recon_frames();
  recon::ReconConfig config;
  config.r = 6;
  const auto result = recon::reconstruct_frame(frames, scene().rig, config);
  const auto binary = mocap::binarize(result.volume.values, result.volume.iso_level);
  for (auto _ : state) {
    auto skeleton = mocap::skeletonize(binary);
    benchmark::DoNotOptimize(skeleton.data());
  }
}
BENCHMARK(BM_Skeletonize)->Unit(benchmark::kMillisecond);

static void BM_DistanceTransform(benchmark::State& state) {
  MaskImage mask(512, 424, 0);
  for (int y = 100; y < 320; ++y)
    for (int x = 150; x < 360; ++x) mask.at(x, y) = 1;
  for (auto _ : state) {
    auto dt = eval::distance_transform(mask);
    benchmark::DoNotOptimize(dt.data().data());
  }
}
BENCHMARK(BM_DistanceTransform)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
