// SPDX-License-Identifier: Apache-2.0
#include "volcap/synth/scene.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace volcap::synth {

Pose make_lookat(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 z = (target - eye).normalized();
  Vec3 x = (-up).cross(z);
  if (x.squaredNorm() < 1e-12) x = Vec3(1, 0, 0).cross(z);
  x.normalize();
  const Vec3 y = z.cross(x);
  Pose p;
  p.R.col(0) = x;
  p.R.col(1) = y;
  p.R.col(2) = z;
  p.t = eye;
  return p;
}

CameraRig make_circle_rig(int recon, int held_out, double radius_mm, double target_height_mm,
                          int width, int height, double focal_px) {
  CameraRig rig;
  rig.recon_count = recon;
  rig.up = Vec3(0, 1, 0);
  const Vec3 target(0, target_height_mm, 0);

  Intrinsics intr;
  intr.fx = intr.fy = focal_px;
  intr.cx = (width - 1) / 2.0;
  intr.cy = (height - 1) / 2.0;
  intr.width = width;
  intr.height = height;

  // reconstruction sensors at uniform spacing, held-out sensors interleaved
  std::vector<double> angles;
  for (int k = 0; k < recon; ++k)
    angles.push_back(2 * std::numbers::pi * k / recon);
  for (int k = 0; k < held_out; ++k)
    angles.push_back(2 * std::numbers::pi * (k + 0.5) / recon);

  for (double a : angles) {
    const Vec3 eye(radius_mm * std::sin(a), target_height_mm, radius_mm * std::cos(a));
    Sensor s;
    s.depth_intr = intr;
    s.pose = make_lookat(eye, target);
    s.rgb_intr = intr;
    s.rgb_relative = Pose{};  // color registered to the depth camera
    rig.sensors.push_back(s);
  }
  return rig;
}

double SyntheticScene::timestamp_ms(int camera, int frame) const {
  double t = frame * frame_interval_ms + clock_offset_ms[camera];
  if (noise.timestamp_jitter_ms > 0) {
    std::mt19937_64 rng(noise.seed * 1000003 + camera * 7919 + frame);
    std::uniform_real_distribution<double> jit(-noise.timestamp_jitter_ms, noise.timestamp_jitter_ms);
    t += jit(rng);
  }
  return t;
}

namespace {

SyntheticScene make_scene(std::vector<CapsuleBody> frames, int recon, int held_out,
                          double radius_mm, int width, int height, double focal_px) {
  SyntheticScene scene;
  scene.rig = make_circle_rig(recon, held_out, radius_mm, 1000, width, height, focal_px);
  scene.frames = std::move(frames);
  scene.clock_offset_ms.assign(scene.rig.count(), 0.0);
  return scene;
}

}  // namespace

SyntheticScene make_xpose_scene(int frames, int recon, int held_out, double radius_mm,
                                int width, int height, double focal_px) {
  return make_scene(std::vector<CapsuleBody>(frames, make_xpose_body()), recon, held_out,
                    radius_mm, width, height, focal_px);
}

SyntheticScene make_kick_scene(int frames, int recon, int held_out, double radius_mm,
                               int width, int height, double focal_px) {
  return make_scene(make_kick_sequence(frames), recon, held_out, radius_mm, width, height,
                    focal_px);
}

std::vector<std::vector<std::int16_t>> make_audio_tracks(const SyntheticScene& scene,
                                                         int sample_rate) {
  const double span_ms = scene.frame_count() * scene.frame_interval_ms;
  const double duration_ms = std::max(2000.0, span_ms + 1000.0);
  const int n = static_cast<int>(duration_ms / 1000.0 * sample_rate);

  // global track: low noise floor plus three decaying claps
  std::mt19937_64 rng(scene.noise.seed ^ 0x5f3759df);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> global(n);
  for (int i = 0; i < n; ++i) global[i] = 0.004 * gauss(rng);
  const double clap_times_ms[3] = {300.0, duration_ms * 0.5, duration_ms - 400.0};
  for (double tc : clap_times_ms) {
    const int start = static_cast<int>(tc / 1000.0 * sample_rate);
    const int len = sample_rate / 20;  // 50 ms burst
    for (int i = 0; i < len && start + i < n; ++i)
      global[start + i] += 0.8 * std::exp(-5.0 * i / len) * gauss(rng);
  }

  std::vector<std::vector<std::int16_t>> tracks(scene.camera_count());
  for (int k = 0; k < scene.camera_count(); ++k) {
    const int shift = static_cast<int>(std::lround(scene.clock_offset_ms[k] / 1000.0 * sample_rate));
    auto& t = tracks[k];
    t.resize(n, 0);
    for (int i = 0; i < n; ++i) {
      const int src = i - shift;
      if (src < 0 || src >= n) continue;
      t[i] = static_cast<std::int16_t>(std::clamp(global[src], -1.0, 1.0) * 32000.0);
    }
  }
  return tracks;
}

}  // namespace volcap::synth
