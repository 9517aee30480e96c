// SPDX-License-Identifier: Apache-2.0
#include "volcap/synth/dataset.hpp"

#include "volcap/core/image_io.hpp"
#include "volcap/core/mesh_io.hpp"
#include "volcap/core/rig_io.hpp"
#include "volcap/sync/wav.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace volcap::synth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const fs::path& path, const std::string& what) {
  throw std::runtime_error(what + ": " + path.string());
}

fs::path cam_dir(const fs::path& root, int camera) {
  return root / "frames" / ("cam" + std::to_string(camera));
}

void write_joints_json(const fs::path& path, const SyntheticScene& scene) {
  json j;
  j["joint_names"] = kJointNames;
  const CapsuleBody& first = scene.frames.front();
  j["radii"] = first.radii;
  json colors = json::array();
  for (const auto& c : first.colors) colors.push_back({c.r, c.g, c.b});
  j["colors"] = colors;
  j["frames"] = json::array();
  for (int n = 0; n < scene.frame_count(); ++n) {
    json jf;
    jf["index"] = n;
    jf["time_ms"] = n * scene.frame_interval_ms;
    json joints = json::array();
    for (const auto& p : scene.frames[n].joints) joints.push_back({p.x(), p.y(), p.z()});
    jf["joints"] = joints;
    j["frames"].push_back(jf);
  }
  std::ofstream out(path);
  if (!out) fail(path, "cannot write ground-truth joints");
  out << j.dump(1) << '\n';
}

}  // namespace

void export_dataset(const SyntheticScene& scene, const fs::path& out_dir,
                    const ExportOptions& options) {
  if (scene.frames.empty()) throw std::invalid_argument("export_dataset: empty scene");
  std::error_code ec;
  fs::create_directories(out_dir / "gt", ec);
  if (ec) fail(out_dir, "cannot create dataset directory");

  write_rig(out_dir / "rig.json", scene.rig);

  for (int k = 0; k < scene.camera_count(); ++k) {
    const fs::path dir = cam_dir(out_dir, k);
    fs::create_directories(dir, ec);
    if (ec) fail(dir, "cannot create camera directory");
    std::ofstream ts(dir / "timestamps.csv");
    if (!ts) fail(dir / "timestamps.csv", "cannot write timestamps");
    ts << "frame,ms\n";
    ts.precision(6);
    ts << std::fixed;
    for (int n = 0; n < scene.frame_count(); ++n) {
      const RgbdFrame frame = render_frame(scene, k, n);
      write_png(dir / (std::to_string(n) + "_depth.png"), frame.depth);
      write_png(dir / (std::to_string(n) + "_color.png"), frame.color);
      ts << n << ',' << frame.timestamp_ms << '\n';
    }
  }

  if (options.write_audio) {
    fs::create_directories(out_dir / "audio", ec);
    const auto tracks = make_audio_tracks(scene, options.audio_sample_rate);
    for (int k = 0; k < scene.camera_count(); ++k)
      sync::write_wav(out_dir / "audio" / ("cam" + std::to_string(k) + ".wav"),
                      {options.audio_sample_rate, tracks[k]});
  }

  write_joints_json(out_dir / "gt" / "joints.json", scene);
  write_ply_points(out_dir / "gt" / "surface_samples.ply",
                   sample_surface(scene.frames.front(), options.surface_samples,
                                  options.surface_seed));
}

RgbdFrame Dataset::load_frame(int camera, int frame) const {
  const fs::path dir = cam_dir(root, camera);
  RgbdFrame f;
  f.depth = read_depth_png(dir / (std::to_string(frame) + "_depth.png"));
  f.color = read_color_png(dir / (std::to_string(frame) + "_color.png"));
  f.foreground = MaskImage(f.depth.width(), f.depth.height(), 0);
  for (int y = 0; y < f.depth.height(); ++y)
    for (int x = 0; x < f.depth.width(); ++x)
      if (f.depth.at(x, y) > 0) f.foreground.at(x, y) = 1;
  f.timestamp_ms = timestamps.at(camera).at(frame);
  return f;
}

fs::path Dataset::audio_path(int camera) const {
  return root / "audio" / ("cam" + std::to_string(camera) + ".wav");
}

Dataset open_dataset(const fs::path& root) {
  Dataset ds;
  ds.root = root;
  ds.rig = read_rig(root / "rig.json");
  ds.timestamps.resize(ds.rig.count());
  for (int k = 0; k < ds.rig.count(); ++k) {
    const fs::path csv = cam_dir(root, k) / "timestamps.csv";
    std::ifstream in(csv);
    if (!in) fail(csv, "cannot read timestamps");
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) continue;
      ds.timestamps[k].push_back(std::stod(line.substr(comma + 1)));
    }
  }

  const fs::path joints_path = root / "gt" / "joints.json";
  if (fs::exists(joints_path)) {
    std::ifstream in(joints_path);
    json j = json::parse(in);
    CapsuleBody proto;
    for (int b = 0; b < kBoneCount; ++b) {
      proto.radii[b] = j.at("radii").at(b);
      const auto& c = j.at("colors").at(b);
      proto.colors[b] = Rgb8{c.at(0), c.at(1), c.at(2)};
    }
    for (const auto& jf : j.at("frames")) {
      CapsuleBody body = proto;
      for (int i = 0; i < kJointCount; ++i) {
        const auto& p = jf.at("joints").at(i);
        body.joints[i] = Vec3(p.at(0), p.at(1), p.at(2));
      }
      ds.gt_bodies.push_back(body);
    }
  }
  const fs::path samples_path = root / "gt" / "surface_samples.ply";
  if (fs::exists(samples_path)) ds.gt_surface_samples = read_ply_points(samples_path);
  return ds;
}

}  // namespace volcap::synth
