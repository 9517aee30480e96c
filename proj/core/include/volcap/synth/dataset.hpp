// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/image.hpp"
#include "volcap/core/types.hpp"
#include "volcap/synth/scene.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace volcap::synth {

struct ExportOptions {
  bool write_audio = true;
  int audio_sample_rate = 16000;
  int surface_samples = 20000;
  std::uint64_t surface_seed = 7;
};

/// Writes the on-disk capture layout:
///   rig.json
///   frames/cam<k>/<n>_depth.png  (16-bit, mm)
///   frames/cam<k>/<n>_color.png
///   frames/cam<k>/timestamps.csv
///   audio/cam<k>.wav
///   gt/joints.json               (15 joints per frame)
///   gt/surface_samples.ply       (sampled from frame 0)
/// The same layout is the ingestion format for recorded data.
void export_dataset(const SyntheticScene& scene, const std::filesystem::path& out_dir,
                    const ExportOptions& options = {});

/// A dataset directory opened for reading. Foreground masks are implied by
/// valid (nonzero) depth.
struct Dataset {
  std::filesystem::path root;
  CameraRig rig;
  std::vector<std::vector<double>> timestamps;  // [camera][frame], sensor-local ms

  // ground truth, when present
  std::vector<CapsuleBody> gt_bodies;           // per frame
  std::vector<Vec3> gt_surface_samples;

  int camera_count() const { return rig.count(); }
  int frame_count(int camera) const { return static_cast<int>(timestamps.at(camera).size()); }
  bool has_ground_truth() const { return !gt_bodies.empty(); }

  RgbdFrame load_frame(int camera, int frame) const;
  std::filesystem::path audio_path(int camera) const;
};

Dataset open_dataset(const std::filesystem::path& root);

}  // namespace volcap::synth
