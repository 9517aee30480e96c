// SPDX-License-Identifier: Apache-2.0
#include "volcap/calib/calib.hpp"

#include "volcap/core/camera.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace volcap::calib {

void write_matches(const std::filesystem::path& path, const MatchFile& matches) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matches: " + path.string());
  out << "k,u_x,u_y,um_x,um_y\n";
  out.precision(9);
  for (std::size_t k = 0; k < matches.per_sensor.size(); ++k)
    for (const auto& m : matches.per_sensor[k])
      out << k << ',' << m.image_px.x() << ',' << m.image_px.y() << ','
          << m.texture_px.x() << ',' << m.texture_px.y() << '\n';
}

MatchFile read_matches(const std::filesystem::path& path, int sensor_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read matches: " + path.string());
  MatchFile mf;
  mf.per_sensor.resize(sensor_count);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    double v[5];
    for (int i = 0; i < 5; ++i) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("bad match row: " + line);
      v[i] = std::stod(cell);
    }
    const int k = static_cast<int>(v[0]);
    if (k < 0 || k >= sensor_count) throw std::runtime_error("match row with bad sensor index");
    mf.per_sensor[k].push_back({Vec2(v[1], v[2]), Vec2(v[3], v[4])});
  }
  return mf;
}

Correspondences3D3D lift_matches(const MatchList& matches, const DepthImage& accumulated_depth,
                                 const Intrinsics& depth_intrinsics, const AnchorModel& model) {
  if (model.vertices.empty() || model.vertices.size() != model.texcoords.size())
    throw std::invalid_argument("lift_matches: model needs vertices with texture coordinates");

  Correspondences3D3D corr;
  for (const auto& m : matches) {
    const int px = static_cast<int>(std::lround(m.image_px.x()));
    const int py = static_cast<int>(std::lround(m.image_px.y()));
    if (!accumulated_depth.in_bounds(px, py)) continue;
    const auto depth = accumulated_depth.at(px, py);
    if (depth == 0) continue;

    // nearest texture-coordinate neighbor gives the model-side vertex
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.texcoords.size(); ++i) {
      const double d2 = (model.texcoords[i] - m.texture_px).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    corr.sensor.push_back(backproject_local(depth_intrinsics, m.image_px, depth));
    corr.model.push_back(model.vertices[best]);
  }
  if (corr.size() < 3)
    throw std::runtime_error("lift_matches: insufficient correspondences after depth filtering");
  return corr;
}

namespace {

// face order: +x, -x, +y, -y, +z, -z; atlas of 3x2 tiles
struct Face {
  Vec3 normal, u_axis, v_axis;
  int tile_x, tile_y;
};

const Face kFaces[6] = {
    {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, 0, 0},
    {{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}, 1, 0},
    {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}, 2, 0},
    {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}, 0, 1},
    {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}, 1, 1},
    {{0, 0, -1}, {1, 0, 0}, {0, 1, 0}, 2, 1},
};
constexpr int kTile = 128;

Vec2 face_texcoord(int face, double a, double b) {
  // a, b in [0,1] on the face; small inset keeps texels inside the tile
  const double inset = 1.0;
  return Vec2(kFaces[face].tile_x * kTile + inset + a * (kTile - 2 * inset),
              kFaces[face].tile_y * kTile + inset + b * (kTile - 2 * inset));
}

}  // namespace

AnchorModel make_box_model(const Vec3& size_mm, int grid_per_face, std::uint64_t seed) {
  AnchorModel model;
  model.half_extent = size_mm / 2.0;
  model.texture = ColorImage(3 * kTile, 2 * kTile);

  // block-noise texture, deterministic
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> channel(30, 235);
  constexpr int kBlock = 8;
  for (int by = 0; by < 2 * kTile / kBlock; ++by)
    for (int bx = 0; bx < 3 * kTile / kBlock; ++bx) {
      const Rgb8 c{static_cast<std::uint8_t>(channel(rng)),
                   static_cast<std::uint8_t>(channel(rng)),
                   static_cast<std::uint8_t>(channel(rng))};
      for (int y = 0; y < kBlock; ++y)
        for (int x = 0; x < kBlock; ++x) model.texture.at(bx * kBlock + x, by * kBlock + y) = c;
    }

  for (int f = 0; f < 6; ++f) {
    const Face& face = kFaces[f];
    const Vec3 center = face.normal.cwiseProduct(model.half_extent);
    const Vec3 u_span = 2.0 * face.u_axis.cwiseProduct(model.half_extent);
    const Vec3 v_span = 2.0 * face.v_axis.cwiseProduct(model.half_extent);
    for (int i = 0; i <= grid_per_face; ++i)
      for (int j = 0; j <= grid_per_face; ++j) {
        const double a = static_cast<double>(i) / grid_per_face;
        const double b = static_cast<double>(j) / grid_per_face;
        model.vertices.push_back(center + (a - 0.5) * u_span + (b - 0.5) * v_span);
        model.texcoords.push_back(face_texcoord(f, a, b));
      }
  }
  return model;
}

std::optional<double> intersect_box(const Vec3& half_extent, const Vec3& origin, const Vec3& dir) {
  double t0 = 0, t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(dir(a)) < 1e-15) {
      if (std::abs(origin(a)) > half_extent(a)) return std::nullopt;
      continue;
    }
    double lo = (-half_extent(a) - origin(a)) / dir(a);
    double hi = (half_extent(a) - origin(a)) / dir(a);
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
    if (t0 > t1) return std::nullopt;
  }
  if (t0 <= 0) return std::nullopt;  // camera inside the box
  return t0;
}

namespace {

// surface point (model frame) -> (face index, a, b)
void box_surface_param(const Vec3& half_extent, const Vec3& p, int& face, double& a, double& b) {
  int axis = 0;
  double best = -1;
  for (int i = 0; i < 3; ++i) {
    const double rel = std::abs(p(i)) / half_extent(i);
    if (rel > best) {
      best = rel;
      axis = i;
    }
  }
  const bool positive = p(axis) >= 0;
  face = axis * 2 + (positive ? 0 : 1);
  const Face& f = kFaces[face];
  const double du = f.u_axis.dot(p), dv = f.v_axis.dot(p);
  const double su = f.u_axis.cwiseProduct(half_extent).sum();
  const double sv = f.v_axis.cwiseProduct(half_extent).sum();
  a = std::clamp(du / (2 * su) + 0.5, 0.0, 1.0);
  b = std::clamp(dv / (2 * sv) + 0.5, 0.0, 1.0);
}

}  // namespace

RgbdFrame render_target(const AnchorModel& model, const Pose& model_to_world,
                        const Sensor& sensor) {
  RgbdFrame out;
  const Intrinsics& di = sensor.depth_intr;
  out.depth = DepthImage(di.width, di.height, 0);
  out.foreground = MaskImage(di.width, di.height, 0);
  out.color = ColorImage(sensor.rgb_intr.width, sensor.rgb_intr.height, Rgb8{0, 0, 0});

  const Pose world_to_model = model_to_world.inverse();
  auto cast = [&](const CameraView& cam, int x, int y) -> std::optional<Vec3> {
    const Vec3 dir_local((x - cam.intr.cx) / cam.intr.fx, (y - cam.intr.cy) / cam.intr.fy, 1.0);
    const Vec3 o = world_to_model.apply(cam.pose.t);
    const Vec3 d = (world_to_model.R * cam.pose.R * dir_local).normalized();
    const auto t = intersect_box(model.half_extent, o, d);
    if (!t) return std::nullopt;
    return o + *t * d;  // model frame
  };

  const CameraView depth_cam = sensor.depth_camera();
  for (int y = 0; y < di.height; ++y)
    for (int x = 0; x < di.width; ++x) {
      const auto hit = cast(depth_cam, x, y);
      if (!hit) continue;
      const double z = depth_cam.pose.apply_inverse(model_to_world.apply(*hit)).z();
      out.depth.at(x, y) = static_cast<std::uint16_t>(std::clamp(std::lround(z), 1L, 65535L));
      out.foreground.at(x, y) = 1;
    }

  const CameraView rgb_cam = sensor.rgb_camera();
  for (int y = 0; y < out.color.height(); ++y)
    for (int x = 0; x < out.color.width(); ++x) {
      const auto hit = cast(rgb_cam, x, y);
      if (!hit) continue;
      int face;
      double a, b;
      box_surface_param(model.half_extent, *hit, face, a, b);
      const Vec2 uv = face_texcoord(face, a, b);
      out.color.at(x, y) = model.texture.at(static_cast<int>(uv.x()), static_cast<int>(uv.y()));
    }
  return out;
}

MatchList synthesize_matches(const AnchorModel& model, const Pose& model_to_world,
                             const CameraView& camera, int count, double pixel_noise,
                             double outlier_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, model.vertices.size() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  const Pose world_to_model = model_to_world.inverse();
  const Vec3 eye_model = world_to_model.apply(camera.pose.t);

  MatchList matches;
  int guard = 0;
  while (static_cast<int>(matches.size()) < count && ++guard < count * 400) {
    const std::size_t i = pick(rng);
    const Vec3& v = model.vertices[i];
    // convex body: a surface vertex is visible iff its face turns toward the eye
    int face;
    double a, b;
    box_surface_param(model.half_extent, v, face, a, b);
    if (kFaces[face].normal.dot(eye_model - v) <= 1e-6) continue;
    const auto u = project(camera, model_to_world.apply(v));
    if (!u || !camera.intr.contains(*u)) continue;

    Match m;
    m.image_px = *u + pixel_noise * Vec2(gauss(rng), gauss(rng));
    m.texture_px = uni(rng) < outlier_fraction ? model.texcoords[pick(rng)] : model.texcoords[i];
    matches.push_back(m);
  }
  return matches;
}

}  // namespace volcap::calib
