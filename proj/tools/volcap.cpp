// SPDX-License-Identifier: Apache-2.0
// volcap: dataset generation, calibration, synchronization, reconstruction,
// evaluation and skeleton tracking as composable subcommands.

#include "volcap/appearance/color.hpp"
#include "volcap/appearance/texture.hpp"
#include "volcap/calib/calib.hpp"
#include "volcap/core/camera.hpp"
#include "volcap/core/mesh_io.hpp"
#include "volcap/core/rig_io.hpp"
#include "volcap/eval/sequence.hpp"
#include "volcap/mocap/pose_io.hpp"
#include "volcap/mocap/track.hpp"
#include "volcap/recon/reconstruct.hpp"
#include "volcap/sync/sync.hpp"
#include "volcap/sync/wav.hpp"
#include "volcap/synth/dataset.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace volcap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// --config FILE: JSON object of flag values, overridable by explicit CLI
// flags. Keys match the long option names; a dotted module prefix (e.g.
// "recon.r") is accepted and stripped.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot read config: " + config_path);
  const auto j = nlohmann::json::parse(in);
  std::vector<std::string> expanded;
  if (!args.empty()) expanded.push_back(args.front());  // subcommand stays first
  for (const auto& [key, value] : j.items()) {
    std::string name = key;
    if (const auto dot = name.rfind('.'); dot != std::string::npos) name = name.substr(dot + 1);
    expanded.push_back("--" + name);
    if (value.is_string())
      expanded.push_back(value.get<std::string>());
    else if (value.is_boolean()) {
      if (!value.get<bool>()) expanded.pop_back();
    } else {
      expanded.push_back(value.dump());
    }
  }
  // explicit flags come last so they win
  if (!args.empty()) expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

recon::SplatMode parse_mode(const std::string& mode) {
  if (mode == "simple") return recon::SplatMode::kSimple;
  if (mode == "weighted") return recon::SplatMode::kWeighted;
  throw std::runtime_error("unknown splat mode: " + mode);
}

std::vector<sync::GoF> load_gofs(const fs::path& path, const synth::Dataset& dataset) {
  if (!path.empty()) {
    if (!fs::exists(path)) throw std::runtime_error("gof file not found: " + path.string());
    return sync::read_gof_csv(path);
  }
  // no gof stream given: align frames by index
  int frames = dataset.frame_count(0);
  for (int k = 1; k < dataset.camera_count(); ++k)
    frames = std::min(frames, dataset.frame_count(k));
  std::vector<sync::GoF> gofs;
  for (int n = 0; n < frames; ++n) {
    sync::GoF g;
    g.indices.assign(dataset.camera_count(), n);
    gofs.push_back(g);
  }
  return gofs;
}

std::vector<RgbdFrame> load_gof_frames(const synth::Dataset& dataset, const sync::GoF& gof) {
  std::vector<RgbdFrame> frames;
  for (int k = 0; k < dataset.camera_count(); ++k)
    frames.push_back(dataset.load_frame(k, gof.indices.at(k)));
  return frames;
}

int run_synth(const std::string& preset, const fs::path& out, int frames, int cameras,
              int gt_cameras, double radius, int width, int height, double focal,
              double noise_sigma, double jitter, const std::vector<double>& clock_offsets,
              const std::vector<double>& color_gains, std::uint64_t seed, bool no_audio,
              int surface_samples) {
  synth::SyntheticScene scene;
  if (preset == "xpose")
    scene = synth::make_xpose_scene(frames, cameras, gt_cameras, radius, width, height, focal);
  else if (preset == "kick")
    scene = synth::make_kick_scene(frames, cameras, gt_cameras, radius, width, height, focal);
  else
    throw std::runtime_error("unknown preset: " + preset);

  scene.noise.seed = seed;
  scene.noise.depth_sigma_mm_at_2m = noise_sigma;
  scene.noise.timestamp_jitter_ms = jitter;
  if (!color_gains.empty()) {
    if (static_cast<int>(color_gains.size()) != scene.camera_count())
      throw std::runtime_error("need one color gain per camera");
    scene.noise.color_gain = color_gains;
  }
  if (!clock_offsets.empty()) {
    if (static_cast<int>(clock_offsets.size()) != scene.camera_count())
      throw std::runtime_error("need one clock offset per camera");
    scene.clock_offset_ms = clock_offsets;
  }

  synth::ExportOptions options;
  options.write_audio = !no_audio;
  options.surface_samples = surface_samples;
  options.surface_seed = seed + 1;
  synth::export_dataset(scene, out, options);
  std::cout << "wrote " << scene.camera_count() << " cameras x " << scene.frame_count()
            << " frames to " << out.string() << "\n";
  return kExitOk;
}

int run_calibrate(const fs::path& dataset_dir, const fs::path& matches_path, const fs::path& out,
                  bool demo, const Vec3& box_size, int box_grid, std::uint64_t seed) {
  using namespace volcap::calib;
  const AnchorModel model = make_box_model(box_size, box_grid, seed);

  if (demo) {
    // self-contained round trip: a known rig observes the anchor box,
    // feature matches are synthesized, every pose is recovered from scratch
    const CameraRig truth = synth::make_circle_rig(4, 0, 2500, 0, 320, 288, 300);
    const Pose box_pose;  // anchor at the world origin
    CameraRig recovered = truth;
    double worst_t_err = 0;
    for (int k = 0; k < truth.count(); ++k) {
      std::vector<DepthImage> depths;
      for (int n = 0; n < 5; ++n)
        depths.push_back(render_target(model, box_pose, truth.sensors[k]).depth);
      const DepthImage accumulated = accumulate_depth(depths);
      const MatchList matches = synthesize_matches(
          model, box_pose, truth.sensors[k].depth_camera(), 120, 0.3, 0.15, seed + 31 * k);
      const auto corr = lift_matches(matches, accumulated, truth.sensors[k].depth_intr, model);
      const RigidFit fit = solve_procrustes_ransac(corr, RansacOptions{30.0, 500, seed + k});
      recovered.sensors[k].pose = fit.pose;
      const double t_err = (fit.pose.t - truth.sensors[k].pose.t).norm();
      worst_t_err = std::max(worst_t_err, t_err);
      std::cout << "sensor " << k << ": procrustes rms " << fit.rms_mm << " mm, pose error "
                << t_err << " mm\n";

      // internal calibration: fixed-KRT fit over the dense working-volume grid
      Correspondences3D2D grid;
      const CameraView rgb = truth.sensors[k].rgb_camera();
      for (int ix = 0; ix < 10; ++ix)
        for (int iy = 0; iy < 10; ++iy)
          for (int iz = 0; iz < 10; ++iz) {
            const Vec3 local(-800 + 1600.0 * ix / 9, -800 + 1600.0 * iy / 9,
                             500 + 4000.0 * iz / 9);
            const Vec3 world = rgb.pose.apply(local);
            const auto u = project(rgb, world);
            if (!u || !rgb.intr.contains(*u)) continue;
            grid.points.push_back(world);
            grid.pixels.push_back(*u);
          }
      const auto krt = fit_projection(grid, rgb.intr.width, rgb.intr.height);
      std::cout << "sensor " << k << ": krt reprojection rms " << krt.reprojection_rms_px
                << " px\n";
    }
    write_rig(out, recovered);
    std::cout << "worst recovered-pose translation error " << worst_t_err << " mm\n";
    return kExitOk;
  }

  if (matches_path.empty()) throw std::runtime_error("calibrate needs --matches or --demo");
  const synth::Dataset dataset = synth::open_dataset(dataset_dir);
  const MatchFile matches = read_matches(matches_path, dataset.camera_count());
  CameraRig rig = dataset.rig;
  for (int k = 0; k < dataset.camera_count(); ++k) {
    std::vector<DepthImage> depths;
    for (int n = 0; n < dataset.frame_count(k); ++n)
      depths.push_back(dataset.load_frame(k, n).depth);
    const DepthImage accumulated = accumulate_depth(depths);
    const auto corr =
        lift_matches(matches.per_sensor[k], accumulated, rig.sensors[k].depth_intr, model);
    const RigidFit fit = corr.size() >= 10
                             ? solve_procrustes_ransac(corr, RansacOptions{30.0, 500, seed + k})
                             : solve_procrustes(corr);
    rig.sensors[k].pose = fit.pose;
    std::cout << "sensor " << k << ": " << corr.size() << " correspondences, rms " << fit.rms_mm
              << " mm\n";
  }
  write_rig(out, rig);
  return kExitOk;
}

int run_sync(const fs::path& dataset_dir, const fs::path& out, int reference, int window) {
  const synth::Dataset dataset = synth::open_dataset(dataset_dir);
  sync::Timeline timeline;
  timeline.times = dataset.timestamps;

  std::vector<double> offsets(dataset.camera_count(), 0.0);
  const fs::path ref_audio = dataset.audio_path(reference);
  if (fs::exists(ref_audio)) {
    const auto ref_clip = sync::read_wav(ref_audio);
    for (int k = 0; k < dataset.camera_count(); ++k) {
      if (k == reference) continue;
      const auto clip = sync::read_wav(dataset.audio_path(k));
      offsets[k] = sync::audio_offset_ms(clip.samples, ref_clip.samples, clip.sample_rate);
      std::cout << "sensor " << k << ": audio offset " << offsets[k] << " ms\n";
    }
  } else {
    std::cout << "no audio tracks; assuming aligned clocks\n";
  }

  const sync::Timeline aligned = sync::align_timelines(timeline, offsets);
  const auto gofs = sync::gof_sequence(aligned, window);
  sync::write_gof_csv(out, gofs);

  double worst = 0;
  for (const auto& g : gofs) worst = std::max(worst, g.inconsistency_ms);
  std::cout << gofs.size() << " groups, worst inconsistency " << worst << " ms\n";
  return kExitOk;
}

appearance::ColorCorrection fit_color_correction(const synth::Dataset& dataset,
                                                 const std::vector<sync::GoF>& gofs,
                                                 const recon::ReconConfig& config,
                                                 int max_frames) {
  const int k_recon = dataset.rig.recon_count;
  std::vector<std::vector<appearance::ColorPair>> ring_pairs(k_recon);

  const int use = std::min<int>(max_frames, static_cast<int>(gofs.size()));
  for (int m = 0; m < use; ++m) {
    const auto frames = load_gof_frames(dataset, gofs[m]);
    std::vector<recon::OrientedCloud> clouds;
    for (int k = 0; k < k_recon; ++k)
      clouds.push_back(recon::build_cloud(frames[k], dataset.rig.sensors[k].depth_camera(), k,
                                          config.discontinuity_mm));
    for (int k = 0; k < k_recon; ++k) {
      const int next = (k + 1) % k_recon;
      appearance::accumulate_color_pairs(clouds[k], frames[k].color, clouds[next],
                                         frames[next].color, ring_pairs[k]);
    }
  }

  std::vector<appearance::PairwiseValueMap> edges;
  for (int k = 0; k < k_recon; ++k) {
    const int next = (k + 1) % k_recon;
    if (ring_pairs[k].size() < 10) continue;  // adjacent views may not overlap
    try {
      edges.push_back({k, next, appearance::fit_value_map(ring_pairs[k])});
    } catch (const std::runtime_error& e) {
      std::cerr << "color pair " << k << "-" << next << ": " << e.what() << "\n";
    }
  }
  return appearance::chain_to_reference(edges, 0, k_recon);
}

int run_reconstruct(const fs::path& dataset_dir, const fs::path& gof_path, const fs::path& out,
                    int r, const std::string& mode, double discontinuity, int padding,
                    bool color_correct, int color_frames) {
  const synth::Dataset dataset = synth::open_dataset(dataset_dir);
  const auto gofs = load_gofs(gof_path, dataset);
  fs::create_directories(out);

  recon::ReconConfig config;
  config.r = r;
  config.mode = parse_mode(mode);
  config.discontinuity_mm = discontinuity;
  config.padding_voxels = padding;

  if (color_correct) {
    const auto cc = fit_color_correction(dataset, gofs, config, color_frames);
    appearance::write_color_correction(out / "color_correction.json", cc);
    std::cout << "wrote color_correction.json (reference sensor " << cc.reference << ")\n";
  }

  int failures = 0;
  for (std::size_t m = 0; m < gofs.size(); ++m) {
    try {
      const auto frames = load_gof_frames(dataset, gofs[m]);
      std::vector<RgbdFrame> recon_frames(frames.begin(),
                                          frames.begin() + dataset.rig.recon_count);
      const auto result = recon::reconstruct_frame(recon_frames, dataset.rig, config);
      const auto visibility =
          appearance::vertex_visibility(result.mesh, dataset.rig, recon_frames);
      const auto textured = appearance::assign_texture(result.mesh, dataset.rig, recon_frames,
                                                       result.clouds, visibility);
      write_ply(out / ("mesh_" + std::to_string(m) + ".ply"), textured.with_channels());
    } catch (const std::exception& e) {
      // partial failures are logged and the pipeline continues
      std::cerr << "frame " << m << ": " << e.what() << "\n";
      ++failures;
    }
  }
  std::cout << "reconstructed " << (gofs.size() - failures) << "/" << gofs.size()
            << " frames into " << out.string() << "\n";
  return kExitOk;
}

int run_evaluate(const fs::path& dataset_dir, const fs::path& meshes_dir,
                 const fs::path& gof_path, const std::string& out_prefix,
                 const std::string& mode, const std::string& metrics_list,
                 const fs::path& color_correction_path) {
  const synth::Dataset dataset = synth::open_dataset(dataset_dir);
  const auto gofs = load_gofs(gof_path, dataset);

  eval::MetricSelection select;
  if (!metrics_list.empty()) {
    select = eval::MetricSelection{false, false, false, false};
    std::stringstream ss(metrics_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "vre") select.vre = true;
      else if (item == "hausdorff") select.hausdorff = true;
      else if (item == "cp-rmse") select.cp_rmse = true;
      else if (item == "wms3im") select.wms3im = true;
      else throw std::runtime_error("unknown metric: " + item);
    }
  }

  auto cc = appearance::ColorCorrection::identity(dataset.rig.recon_count);
  if (!color_correction_path.empty())
    cc = appearance::read_color_correction(color_correction_path);

  std::vector<appearance::TexturedMesh> meshes;
  std::vector<std::vector<RgbdFrame>> frames;
  for (std::size_t m = 0; m < gofs.size(); ++m) {
    const fs::path mesh_path = meshes_dir / ("mesh_" + std::to_string(m) + ".ply");
    if (fs::exists(mesh_path))
      meshes.push_back(appearance::TexturedMesh::from_mesh_channels(read_ply(mesh_path)));
    else
      meshes.emplace_back();  // reported as a gap
    frames.push_back(load_gof_frames(dataset, gofs[m]));
  }

  const auto render_mode =
      mode == "color-per-vertex" ? eval::RenderMode::kColorPerVertex : eval::RenderMode::kUvBlend;
  const auto report =
      eval::evaluate_sequence(meshes, frames, dataset.rig, render_mode, cc, select);
  eval::write_metrics_csv(out_prefix + ".csv", report);
  eval::write_metrics_json(out_prefix + ".json", report, dataset.rig);

  std::vector<int> all;
  for (int k = 0; k < dataset.rig.count(); ++k) all.push_back(k);
  std::cout << "evaluated " << meshes.size() << " frames x " << dataset.rig.count()
            << " views\n";
  if (const auto v = report.mean_vre(all)) std::cout << "mean VRE      " << *v << "\n";
  if (const auto v = report.mean_hausdorff(all)) std::cout << "mean H        " << *v << " px\n";
  if (const auto v = report.mean_cp_rmse(all)) std::cout << "mean CP-RMSE  " << *v << " mm\n";
  if (const auto v = report.mean_wms3im(all)) std::cout << "mean WMS3IM   " << *v << "\n";
  return kExitOk;
}

int run_calibrate_user(const fs::path& dataset_dir, const fs::path& gof_path,
                       const fs::path& out, int r) {
  const synth::Dataset dataset = synth::open_dataset(dataset_dir);
  const auto gofs = load_gofs(gof_path, dataset);
  recon::ReconConfig config;
  config.r = r;
  const mocap::MocapConfig mocap_config;

  std::vector<mocap::FrameAnalysis> analyses;
  for (std::size_t m = 0; m < gofs.size(); ++m) {
    const auto frames = load_gof_frames(dataset, gofs[m]);
    std::vector<RgbdFrame> recon_frames(frames.begin(),
                                        frames.begin() + dataset.rig.recon_count);
    const auto result = recon::reconstruct_frame(recon_frames, dataset.rig, config);
    analyses.push_back(
        mocap::analyze_volume(result.volume.values, result.volume.iso_level, mocap_config));
  }
  const auto calibration = mocap::calibrate_user(analyses, dataset.rig.up, mocap_config);
  mocap::write_calibration(out, calibration);
  std::cout << "calibration written to " << out.string() << "\n";
  return kExitOk;
}

int run_track(const fs::path& dataset_dir, const fs::path& gof_path,
              const fs::path& calibration_path, const fs::path& out_dir, int r) {
  if (!fs::exists(calibration_path))
    throw std::runtime_error("missing user calibration file: " + calibration_path.string() +
                             " (run calibrate-user first)");
  const synth::Dataset dataset = synth::open_dataset(dataset_dir);
  const auto gofs = load_gofs(gof_path, dataset);
  const auto calibration = mocap::read_calibration(calibration_path);
  recon::ReconConfig config;
  config.r = r;
  const mocap::MocapConfig mocap_config;
  fs::create_directories(out_dir);

  std::vector<mocap::SkeletonPose> poses;
  mocap::TrackerState state;
  for (std::size_t m = 0; m < gofs.size(); ++m) {
    double time_ms = 0;
    for (int k = 0; k < dataset.camera_count(); ++k)
      time_ms += dataset.timestamps[k][gofs[m].indices[k]] / dataset.camera_count();
    try {
      const auto frames = load_gof_frames(dataset, gofs[m]);
      std::vector<RgbdFrame> recon_frames(frames.begin(),
                                          frames.begin() + dataset.rig.recon_count);
      const auto result = recon::reconstruct_frame(recon_frames, dataset.rig, config);
      poses.push_back(mocap::track_frame(result.volume.values, result.volume.iso_level, time_ms,
                                         static_cast<int>(m), dataset.rig.up, calibration, state,
                                         mocap_config));
    } catch (const std::exception& e) {
      std::cerr << "frame " << m << ": " << e.what() << "\n";
      mocap::SkeletonPose invalid;
      invalid.frame_index = static_cast<int>(m);
      invalid.time_ms = time_ms;
      poses.push_back(invalid);
    }
  }
  mocap::write_skeleton_stream(out_dir / "skeleton.jsonl", poses);
  mocap::write_angles_csv(out_dir / "angles.csv", poses);
  int valid = 0;
  for (const auto& p : poses) valid += p.valid;
  std::cout << "tracked " << valid << "/" << poses.size() << " frames\n";
  return kExitOk;
}

int run_bench(const fs::path& dataset_dir, const fs::path& gof_path, const std::string& r_list,
              int frames, const fs::path& out_csv) {
  const synth::Dataset dataset = synth::open_dataset(dataset_dir);
  const auto gofs = load_gofs(gof_path, dataset);
  const int use = std::min<int>(frames, static_cast<int>(gofs.size()));
  if (use == 0) throw std::runtime_error("bench: no frames");

  std::vector<int> rs;
  {
    std::stringstream ss(r_list);
    std::string item;
    while (std::getline(ss, item, ',')) rs.push_back(std::stoi(item));
  }

  struct Row {
    double raw = 0, weights = 0, volumetric = 0, other = 0;
    double total() const { return raw + weights + volumetric + other; }
  };
  std::vector<Row> rows(rs.size());

  for (std::size_t ri = 0; ri < rs.size(); ++ri) {
    recon::ReconConfig config;
    config.r = rs[ri];
    for (int m = 0; m < use; ++m) {
      const auto frames_data = load_gof_frames(dataset, gofs[m]);
      std::vector<RgbdFrame> recon_frames(frames_data.begin(),
                                          frames_data.begin() + dataset.rig.recon_count);
      recon::StageTimings timings;
      const auto result = recon::reconstruct_frame(recon_frames, dataset.rig, config, &timings);
      const double t0 = now_ms();
      const auto visibility =
          appearance::vertex_visibility(result.mesh, dataset.rig, recon_frames);
      const auto textured = appearance::assign_texture(result.mesh, dataset.rig, recon_frames,
                                                       result.clouds, visibility);
      (void)textured;
      const double other = now_ms() - t0;
      rows[ri].raw += timings.raw_ms / use;
      rows[ri].weights += timings.weights_ms / use;
      rows[ri].volumetric += timings.volumetric_ms / use;
      rows[ri].other += other / use;
    }
  }

  // five-stage table; wall-clock values are machine-dependent
  auto print_row = [&](const char* label, auto getter) {
    std::printf("%-34s", label);
    for (std::size_t ri = 0; ri < rs.size(); ++ri) std::printf("%12.1f", getter(rows[ri]));
    std::printf("\n");
  };
  std::printf("average per-frame time (ms), %d frame(s)\n", use);
  std::printf("%-34s", "stage \\ r");
  for (const int r : rs) std::printf("%12d", r);
  std::printf("\n");
  print_row("Raw point-normal reconstruction", [](const Row& r) { return r.raw; });
  print_row("Confidence weights", [](const Row& r) { return r.weights; });
  print_row("Volumetric FT reconstruction", [](const Row& r) { return r.volumetric; });
  print_row("Other (texture mapping)", [](const Row& r) { return r.other; });
  print_row("Total", [](const Row& r) { return r.total(); });

  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    out << "stage";
    for (const int r : rs) out << ",r" << r;
    out << "\n";
    auto csv_row = [&](const char* label, auto getter) {
      out << label;
      for (std::size_t ri = 0; ri < rs.size(); ++ri) out << ',' << getter(rows[ri]);
      out << "\n";
    };
    csv_row("raw_point_normal_reconstruction", [](const Row& r) { return r.raw; });
    csv_row("confidence_weights", [](const Row& r) { return r.weights; });
    csv_row("volumetric_ft_reconstruction", [](const Row& r) { return r.volumetric; });
    csv_row("other_texture_mapping", [](const Row& r) { return r.other; });
    csv_row("total", [](const Row& r) { return r.total(); });
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"volcap: volumetric human reconstruction and motion capture pipeline"};
  app.require_subcommand(1);

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic multi-view dataset");
  std::string preset = "xpose";
  fs::path synth_out;
  int frames = 12, cameras = 4, gt_cameras = 2;
  double radius = 2500, focal = 300, noise_sigma = 0, jitter = 0;
  int width = 320, height = 288, surface_samples = 20000;
  std::uint64_t seed = 1;
  bool no_audio = false;
  std::vector<double> clock_offsets, color_gains;
  synth_cmd->add_option("--preset", preset, "xpose | kick");
  synth_cmd->add_option("--out", synth_out, "output dataset directory")->required();
  synth_cmd->add_option("--frames", frames);
  synth_cmd->add_option("--cameras", cameras, "reconstruction sensors K");
  synth_cmd->add_option("--gt-cameras", gt_cameras, "held-out ground-truth sensors K'");
  synth_cmd->add_option("--radius", radius, "camera circle radius (mm)");
  synth_cmd->add_option("--width", width);
  synth_cmd->add_option("--height", height);
  synth_cmd->add_option("--focal", focal, "focal length (px)");
  synth_cmd->add_option("--noise-sigma", noise_sigma, "depth noise sigma at 2 m (mm)");
  synth_cmd->add_option("--jitter", jitter, "timestamp jitter (ms)");
  synth_cmd->add_option("--clock-offsets", clock_offsets)->delimiter(',');
  synth_cmd->add_option("--color-gains", color_gains)->delimiter(',');
  synth_cmd->add_option("--seed", seed);
  synth_cmd->add_option("--surface-samples", surface_samples);
  synth_cmd->add_flag("--no-audio", no_audio);

  auto* calib_cmd = app.add_subcommand("calibrate", "external calibration from matches");
  fs::path calib_dataset, calib_matches, calib_out = "rig_calibrated.json";
  bool calib_demo = false;
  std::vector<double> box_size = {560, 330, 410};
  int box_grid = 8;
  std::uint64_t calib_seed = 12;
  calib_cmd->add_option("--dataset", calib_dataset, "dataset of calibration-target captures");
  calib_cmd->add_option("--matches", calib_matches, "match csv: k,u_x,u_y,um_x,um_y");
  calib_cmd->add_option("--out", calib_out);
  calib_cmd->add_flag("--demo", calib_demo, "self-contained synthetic calibration round trip");
  calib_cmd->add_option("--box-size", box_size, "anchor box dimensions (mm)")->expected(3);
  calib_cmd->add_option("--box-grid", box_grid, "grid vertices per box face edge");
  calib_cmd->add_option("--seed", calib_seed);

  auto* sync_cmd = app.add_subcommand("sync", "audio alignment and GoF selection");
  fs::path sync_dataset, sync_out = "gof.csv";
  int reference = 0, window = 5;
  sync_cmd->add_option("--dataset", sync_dataset)->required();
  sync_cmd->add_option("--out", sync_out);
  sync_cmd->add_option("--reference", reference, "reference sensor index");
  sync_cmd->add_option("--window", window, "initial GoF search window");

  auto* recon_cmd = app.add_subcommand("reconstruct", "per-GoF fused textured meshes");
  fs::path recon_dataset, recon_gof, recon_out = "meshes";
  int r = 7, padding = 8, color_frames = 5;
  std::string mode = "weighted";
  double discontinuity = 50.0;
  bool color_correct = false;
  recon_cmd->add_option("--dataset", recon_dataset)->required();
  recon_cmd->add_option("--gof", recon_gof, "gof.csv from sync (default: index-aligned)");
  recon_cmd->add_option("--out", recon_out);
  recon_cmd->add_option("-r,--r", r, "grid resolution exponent (5/6/7/8)");
  recon_cmd->add_option("--mode", mode, "simple | weighted");
  recon_cmd->add_option("--discontinuity-mm", discontinuity);
  recon_cmd->add_option("--padding-voxels", padding);
  recon_cmd->add_flag("--color-correct", color_correct, "fit and store color correction");
  recon_cmd->add_option("--color-frames", color_frames, "frames used for color pairs");

  auto* eval_cmd = app.add_subcommand("evaluate", "objective evaluation of reconstructions");
  fs::path eval_dataset, eval_meshes, eval_gof, eval_cc;
  std::string eval_prefix = "metrics", eval_mode = "uv-blend", metric_list;
  eval_cmd->add_option("--dataset", eval_dataset)->required();
  eval_cmd->add_option("--meshes", eval_meshes)->required();
  eval_cmd->add_option("--gof", eval_gof);
  eval_cmd->add_option("--out-prefix", eval_prefix);
  eval_cmd->add_option("--mode", eval_mode, "uv-blend | color-per-vertex");
  eval_cmd->add_option("--metrics", metric_list, "subset of vre,hausdorff,cp-rmse,wms3im");
  eval_cmd->add_option("--color-correction", eval_cc);

  auto* cuser_cmd = app.add_subcommand("calibrate-user", "X-pose body structure calibration");
  fs::path cuser_dataset, cuser_gof, cuser_out = "calibration.json";
  int cuser_r = 6;
  cuser_cmd->add_option("--dataset", cuser_dataset)->required();
  cuser_cmd->add_option("--gof", cuser_gof);
  cuser_cmd->add_option("--out", cuser_out);
  cuser_cmd->add_option("-r,--r", cuser_r);

  auto* track_cmd = app.add_subcommand("track", "volume-based skeleton tracking");
  fs::path track_dataset, track_gof, track_calib = "calibration.json", track_out = "tracking";
  int track_r = 6;
  track_cmd->add_option("--dataset", track_dataset)->required();
  track_cmd->add_option("--gof", track_gof);
  track_cmd->add_option("--calibration", track_calib);
  track_cmd->add_option("--out", track_out);
  track_cmd->add_option("-r,--r", track_r);

  auto* bench_cmd = app.add_subcommand("bench", "per-stage timing table");
  fs::path bench_dataset, bench_gof, bench_csv;
  std::string bench_r = "5,6,7";
  int bench_frames = 1;
  bench_cmd->add_option("--dataset", bench_dataset)->required();
  bench_cmd->add_option("--gof", bench_gof);
  bench_cmd->add_option("-r,--r", bench_r, "comma-separated resolutions");
  bench_cmd->add_option("--frames", bench_frames);
  bench_cmd->add_option("--out", bench_csv, "also write the table as csv");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  try {
    std::vector<const char*> argv2;
    argv2.push_back(argv[0]);
    for (const auto& a : args) argv2.push_back(a.c_str());
    app.parse(static_cast<int>(argv2.size()), const_cast<char**>(argv2.data()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth_cmd->parsed())
      return run_synth(preset, synth_out, frames, cameras, gt_cameras, radius, width, height,
                       focal, noise_sigma, jitter, clock_offsets, color_gains, seed, no_audio,
                       surface_samples);
    if (calib_cmd->parsed())
      return run_calibrate(calib_dataset, calib_matches, calib_out, calib_demo,
                           Vec3(box_size[0], box_size[1], box_size[2]), box_grid, calib_seed);
    if (sync_cmd->parsed()) return run_sync(sync_dataset, sync_out, reference, window);
    if (recon_cmd->parsed())
      return run_reconstruct(recon_dataset, recon_gof, recon_out, r, mode, discontinuity,
                             padding, color_correct, color_frames);
    if (eval_cmd->parsed())
      return run_evaluate(eval_dataset, eval_meshes, eval_gof, eval_prefix, eval_mode,
                          metric_list, eval_cc);
    if (cuser_cmd->parsed())
      return run_calibrate_user(cuser_dataset, cuser_gof, cuser_out, cuser_r);
    if (track_cmd->parsed())
      return run_track(track_dataset, track_gof, track_calib, track_out, track_r);
    if (bench_cmd->parsed())
      return run_bench(bench_dataset, bench_gof, bench_r, bench_frames, bench_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
