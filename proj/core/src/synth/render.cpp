// SPDX-License-Identifier: Apache-2.0
#include "volcap/synth/scene.hpp"

#include "volcap/core/camera.hpp"
#include "volcap/util/threading.hpp"

#include <cmath>
#include <random>

namespace volcap::synth {
namespace {

Rgb8 shade(const Rgb8& base, const Vec3& normal, const Vec3& ray_dir, double gain) {
  const double lambert = 0.35 + 0.65 * std::max(0.0, normal.dot(-ray_dir));
  auto ch = [&](std::uint8_t v) {
    return static_cast<std::uint8_t>(std::clamp(v * lambert * gain, 0.0, 255.0));
  };
  return {ch(base.r), ch(base.g), ch(base.b)};
}

}  // namespace

RgbdFrame render_frame(const SyntheticScene& scene, int camera, int frame) {
  const Sensor& sensor = scene.rig.sensors.at(camera);
  const CapsuleBody& body = scene.frames.at(frame);
  const double gain =
      scene.noise.color_gain.empty() ? 1.0 : scene.noise.color_gain.at(camera);

  RgbdFrame out;
  const Intrinsics& di = sensor.depth_intr;
  out.depth = DepthImage(di.width, di.height, 0);
  out.foreground = MaskImage(di.width, di.height, 0);
  const CameraView depth_cam = sensor.depth_camera();

  parallel_chunks(di.height, hardware_threads(), [&](std::size_t y0, std::size_t y1, int) {
    for (std::size_t y = y0; y < y1; ++y) {
      for (int x = 0; x < di.width; ++x) {
        const Vec3 dir_local((x - di.cx) / di.fx, (static_cast<double>(y) - di.cy) / di.fy, 1.0);
        const Vec3 dir = (depth_cam.pose.R * dir_local).normalized();
        const auto hit = intersect(body, depth_cam.pose.t, dir);
        if (!hit) continue;
        const double z = depth_cam.pose.apply_inverse(hit->point).z();
        out.depth.at(x, static_cast<int>(y)) =
            static_cast<std::uint16_t>(std::clamp(std::lround(z), 1L, 65535L));
        out.foreground.at(x, static_cast<int>(y)) = 1;
      }
    }
  });

  // depth noise after the exact render; silhouette stays exact
  if (scene.noise.depth_sigma_mm_at_2m > 0) {
    std::mt19937_64 rng(scene.noise.seed * 46337 + camera * 131 + frame);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int y = 0; y < di.height; ++y)
      for (int x = 0; x < di.width; ++x) {
        auto& d = out.depth.at(x, y);
        if (d == 0) continue;
        const double sigma = scene.noise.depth_sigma_mm_at_2m * d / 2000.0;
        d = static_cast<std::uint16_t>(std::clamp(std::lround(d + sigma * gauss(rng)), 1L, 65535L));
      }
  }

  const Intrinsics& ci = sensor.rgb_intr;
  out.color = ColorImage(ci.width, ci.height, Rgb8{0, 0, 0});
  const CameraView rgb_cam = sensor.rgb_camera();
  parallel_chunks(ci.height, hardware_threads(), [&](std::size_t y0, std::size_t y1, int) {
    for (std::size_t y = y0; y < y1; ++y) {
      for (int x = 0; x < ci.width; ++x) {
        const Vec3 dir_local((x - ci.cx) / ci.fx, (static_cast<double>(y) - ci.cy) / ci.fy, 1.0);
        const Vec3 dir = (rgb_cam.pose.R * dir_local).normalized();
        const auto hit = intersect(body, rgb_cam.pose.t, dir);
        if (!hit) continue;
        out.color.at(x, static_cast<int>(y)) = shade(body.colors[hit->bone], hit->normal, dir, gain);
      }
    }
  });

  out.timestamp_ms = scene.timestamp_ms(camera, frame);
  return out;
}

}  // namespace volcap::synth
