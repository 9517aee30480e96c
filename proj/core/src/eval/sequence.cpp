// SPDX-License-Identifier: Apache-2.0
#include "volcap/eval/sequence.hpp"

#include "volcap/core/camera.hpp"

#include <json.hpp>

#include <fstream>

namespace volcap::eval {
namespace {

std::vector<Vec3> backproject_depth(const Image<float>& depth, const CameraView& camera) {
  std::vector<Vec3> points;
  for (int y = 0; y < depth.height(); ++y)
    for (int x = 0; x < depth.width(); ++x) {
      const float d = depth.at(x, y);
      if (d > 0) points.push_back(backproject(camera, Vec2(x, y), d));
    }
  return points;
}

std::vector<Vec3> backproject_foreground(const RgbdFrame& frame, const CameraView& camera) {
  std::vector<Vec3> points;
  for (int y = 0; y < frame.depth.height(); ++y)
    for (int x = 0; x < frame.depth.width(); ++x)
      if (frame.foreground.at(x, y) && frame.depth.at(x, y) > 0)
        points.push_back(backproject(camera, Vec2(x, y), frame.depth.at(x, y)));
  return points;
}

std::optional<double> mean_of(std::span<const FrameSensorMetrics> rows,
                              std::span<const int> sensors,
                              std::optional<double> FrameSensorMetrics::* member) {
  double sum = 0;
  int n = 0;
  for (const auto& row : rows) {
    bool wanted = false;
    for (int s : sensors) wanted = wanted || s == row.sensor;
    if (!wanted || !(row.*member)) continue;
    sum += *(row.*member);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

std::optional<double> MetricsReport::mean_vre(std::span<const int> sensors) const {
  return mean_of(rows, sensors, &FrameSensorMetrics::vre);
}
std::optional<double> MetricsReport::mean_hausdorff(std::span<const int> sensors) const {
  return mean_of(rows, sensors, &FrameSensorMetrics::hausdorff_px);
}
std::optional<double> MetricsReport::mean_cp_rmse(std::span<const int> sensors) const {
  return mean_of(rows, sensors, &FrameSensorMetrics::cp_rmse_mm);
}
std::optional<double> MetricsReport::mean_wms3im(std::span<const int> sensors) const {
  return mean_of(rows, sensors, &FrameSensorMetrics::wms3im);
}

MetricsReport evaluate_sequence(std::span<const appearance::TexturedMesh> meshes,
                                std::span<const std::vector<RgbdFrame>> frames,
                                const CameraRig& rig, RenderMode mode,
                                const appearance::ColorCorrection& color_correction,
                                const MetricSelection& select) {
  MetricsReport report;
  for (std::size_t f = 0; f < meshes.size(); ++f) {
    // textures come from the reconstruction sensors, color-corrected
    std::vector<ColorImage> corrected;
    for (int k = 0; k < rig.recon_count; ++k)
      corrected.push_back(color_correction.apply(k, frames[f][k].color));

    for (int k = 0; k < rig.count(); ++k) {
      FrameSensorMetrics row;
      row.frame = static_cast<int>(f);
      row.sensor = k;
      if (meshes[f].mesh.empty()) {
        row.gap = true;
        report.rows.push_back(row);
        continue;
      }
      const CameraView cam = rig.sensors[k].depth_camera();
      const RenderedView view = rasterize(meshes[f], cam, corrected, mode);
      const RgbdFrame& captured = frames[f][k];

      if (select.vre) row.vre = vre(view.silhouette, captured.foreground);
      if (select.hausdorff) row.hausdorff_px = hausdorff2d(view.silhouette, captured.foreground);
      if (select.cp_rmse) {
        const auto ground = backproject_foreground(captured, cam);
        const auto recon = backproject_depth(view.depth, cam);
        if (!ground.empty() && !recon.empty()) row.cp_rmse_mm = cp_rmse(ground, recon);
      }
      if (select.wms3im) row.wms3im = wms3im(view.color, captured.color, view.silhouette);
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_metrics_csv(const std::filesystem::path& path, const MetricsReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics: " + path.string());
  out << "frame,sensor,VRE,H_px,CPRMSE_mm,WMS3IM\n";
  out.precision(9);
  auto cell = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << *v;
  };
  for (const auto& row : report.rows) {
    out << row.frame << ',' << row.sensor;
    cell(row.vre);
    cell(row.hausdorff_px);
    cell(row.cp_rmse_mm);
    cell(row.wms3im);
    out << '\n';
  }
}

void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report,
                        const CameraRig& rig) {
  std::vector<int> participating, held_out, all;
  for (int k = 0; k < rig.count(); ++k) {
    all.push_back(k);
    (k < rig.recon_count ? participating : held_out).push_back(k);
  }
  auto aggregate = [&](std::span<const int> sensors) {
    nlohmann::json j;
    if (const auto v = report.mean_vre(sensors)) j["VRE"] = *v;
    if (const auto v = report.mean_hausdorff(sensors)) j["H_px"] = *v;
    if (const auto v = report.mean_cp_rmse(sensors)) j["CPRMSE_mm"] = *v;
    if (const auto v = report.mean_wms3im(sensors)) j["WMS3IM"] = *v;
    return j;
  };
  nlohmann::json j;
  j["mean"] = aggregate(all);
  j["mean_participating"] = aggregate(participating);
  if (!held_out.empty()) j["mean_held_out"] = aggregate(held_out);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics: " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace volcap::eval
