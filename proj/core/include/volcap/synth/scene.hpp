// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/image.hpp"
#include "volcap/core/types.hpp"
#include "volcap/synth/capsule.hpp"

#include <cstdint>
#include <vector>

namespace volcap::synth {

struct NoiseModel {
  double depth_sigma_mm_at_2m = 0;   // additive Gaussian; sigma grows linearly with depth
  double timestamp_jitter_ms = 0;    // uniform in [-j, +j]
  std::vector<double> color_gain;    // per camera multiplicative gain on RGB; empty = all 1
  std::uint64_t seed = 1;
};

/// A complete virtual capture: body trajectory, camera circle of K
/// reconstruction sensors plus K' held-out ground-truth sensors, per-camera
/// clock offsets and the noise model.
struct SyntheticScene {
  CameraRig rig;
  std::vector<CapsuleBody> frames;
  double frame_interval_ms = 33.0;
  std::vector<double> clock_offset_ms;   // per camera; local time = global + offset
  NoiseModel noise;

  int camera_count() const { return rig.count(); }
  int frame_count() const { return static_cast<int>(frames.size()); }

  /// Local (sensor-clock) timestamp of a frame, jitter included.
  double timestamp_ms(int camera, int frame) const;
};

/// Cameras on a circle around the capture center, all pointing inward.
/// The first `recon` sensors reconstruct; `held_out` extra sensors are
/// interleaved between them as ground-truth views.
CameraRig make_circle_rig(int recon, int held_out, double radius_mm, double target_height_mm,
                          int width, int height, double focal_px);

/// Camera-to-world pose looking from `eye` toward `target` (CV convention:
/// +z forward, +y down the image).
Pose make_lookat(const Vec3& eye, const Vec3& target, const Vec3& up = Vec3(0, 1, 0));

SyntheticScene make_xpose_scene(int frames, int recon = 4, int held_out = 2,
                                double radius_mm = 2500, int width = 320, int height = 288,
                                double focal_px = 300);
SyntheticScene make_kick_scene(int frames, int recon = 4, int held_out = 2,
                               double radius_mm = 2500, int width = 320, int height = 288,
                               double focal_px = 300);

/// Renders one sensor's RGB-D frame: analytic ray-capsule depth in
/// millimeters, bone colors with headlight shading, exact foreground mask.
/// Depth noise and per-camera color gain are applied afterwards; the mask
/// is never noisy.
RgbdFrame render_frame(const SyntheticScene& scene, int camera, int frame);

/// Mono 16-bit PCM at `sample_rate`: a shared global clap track shifted by
/// each camera's clock offset (rounded to whole samples).
std::vector<std::vector<std::int16_t>> make_audio_tracks(const SyntheticScene& scene,
                                                         int sample_rate);

}  // namespace volcap::synth
