// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/appearance/color.hpp"
#include "volcap/appearance/texture.hpp"
#include "volcap/eval/metrics.hpp"
#include "volcap/eval/rasterize.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace volcap::eval {

struct MetricSelection {
  bool vre = true;
  bool hausdorff = true;
  bool cp_rmse = true;
  bool wms3im = true;
};

struct FrameSensorMetrics {
  int frame = 0;
  int sensor = 0;
  bool gap = false;  // mesh or capture missing for this frame
  std::optional<double> vre;
  std::optional<double> hausdorff_px;
  std::optional<double> cp_rmse_mm;
  std::optional<double> wms3im;
};

struct MetricsReport {
  std::vector<FrameSensorMetrics> rows;

  // per-metric means over the rows of the given sensors
  std::optional<double> mean_vre(std::span<const int> sensors) const;
  std::optional<double> mean_hausdorff(std::span<const int> sensors) const;
  std::optional<double> mean_cp_rmse(std::span<const int> sensors) const;
  std::optional<double> mean_wms3im(std::span<const int> sensors) const;
};

/// Rasterizes each frame's mesh into all K + K' views and scores it
/// against the captured frames. frames[f][k] must cover every sensor of
/// the rig; meshes[f] may be empty (reported as a gap).
MetricsReport evaluate_sequence(std::span<const appearance::TexturedMesh> meshes,
                                std::span<const std::vector<RgbdFrame>> frames,
                                const CameraRig& rig, RenderMode mode,
                                const appearance::ColorCorrection& color_correction,
                                const MetricSelection& select = {});

void write_metrics_csv(const std::filesystem::path& path, const MetricsReport& report);
void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report,
                        const CameraRig& rig);

}  // namespace volcap::eval
