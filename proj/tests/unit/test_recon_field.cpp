// SPDX-License-Identifier: Apache-2.0
#include "volcap/recon/cloud.hpp"
#include "volcap/recon/volume_recon.hpp"

#include "volcap/core/camera.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace volcap;
using namespace volcap::recon;

namespace {

RgbdFrame plane_frame(const Intrinsics& intr, double depth_mm) {
  RgbdFrame f;
  f.depth = DepthImage(intr.width, intr.height, 0);
  f.foreground = MaskImage(intr.width, intr.height, 0);
  f.color = ColorImage(intr.width, intr.height);
  for (int y = 0; y < intr.height; ++y)
    for (int x = 0; x < intr.width; ++x) {
      f.depth.at(x, y) = static_cast<std::uint16_t>(depth_mm);
      f.foreground.at(x, y) = 1;
    }
  return f;
}

CameraView identity_camera(int w = 64, int h = 48, double f = 60) {
  CameraView cam;
  cam.intr = Intrinsics{f, f, (w - 1) / 2.0, (h - 1) / 2.0, w, h};
  return cam;
}

OrientedCloud single_point_cloud(const Vec3& pos, const Vec3& normal, double weight) {
  OrientedCloud cloud;
  cloud.weight_map = Image<float>(1, 1, static_cast<float>(weight));
  OrientedPoint p;
  p.position = pos;
  p.normal = normal;
  p.weight = weight;
  cloud.points.push_back(p);
  return cloud;
}

}  // namespace

TEST_CASE("build_cloud: fronto-parallel plane has camera-facing normals") {
  const auto cam = identity_camera();
  const auto frame = plane_frame(cam.intr, 2000);
  const auto cloud = build_cloud(frame, cam, 0);
  REQUIRE(cloud.points.size() > 1000);
  for (const auto& p : cloud.points) CHECK((p.normal - Vec3(0, 0, -1)).norm() < 1e-6);
}

TEST_CASE("build_cloud: no triangle spans a 200 mm step at threshold 50") {
  const auto cam = identity_camera();
  auto frame = plane_frame(cam.intr, 2000);
  for (int y = 0; y < cam.intr.height; ++y)
    for (int x = cam.intr.width / 2; x < cam.intr.width; ++x) frame.depth.at(x, y) = 2200;

  const auto cloud = build_cloud(frame, cam, 0, 50.0);
  // normals on both sides stay fronto-parallel: the step created no
  // slanted bridging triangles
  for (const auto& p : cloud.points) CHECK((p.normal - Vec3(0, 0, -1)).norm() < 1e-6);
}

TEST_CASE("build_cloud: 45-degree slanted plane normals match the analytic normal") {
  const auto cam = identity_camera(96, 64, 120);
  RgbdFrame f;
  f.depth = DepthImage(cam.intr.width, cam.intr.height, 0);
  f.foreground = MaskImage(cam.intr.width, cam.intr.height, 0);
  f.color = ColorImage(cam.intr.width, cam.intr.height);
  // plane Z = 2000 + X in camera coordinates (45 degrees about the y axis)
  for (int y = 0; y < cam.intr.height; ++y)
    for (int x = 0; x < cam.intr.width; ++x) {
      // Z = 2000 + X with X = (u - cx) * Z / fx  ->  Z = 2000 / (1 - (u - cx)/fx)
      const double ratio = (x - cam.intr.cx) / cam.intr.fx;
      if (ratio >= 0.4) continue;
      const double z = 2000.0 / (1.0 - ratio);
      f.depth.at(x, y) = static_cast<std::uint16_t>(std::lround(z));
      f.foreground.at(x, y) = 1;
    }
  const auto cloud = build_cloud(f, cam, 0, 200.0);
  const Vec3 expected = Vec3(1, 0, -1).normalized();
  REQUIRE(cloud.points.size() > 500);
  double worst = 0;
  for (const auto& p : cloud.points) worst = std::max(worst, (p.normal - expected).norm());
  // depth quantization to integer millimeters dominates the error
  CHECK(worst < 2e-2);
  double mean_err = 0;
  for (const auto& p : cloud.points) mean_err += (p.normal - expected).norm();
  CHECK(mean_err / cloud.points.size() < 1e-3);
}

TEST_CASE("confidence: head-on deep-inside pixel has W = 1") {
  const auto cam = identity_camera();
  const auto frame = plane_frame(cam.intr, 2000);
  auto cloud = build_cloud(frame, cam, 0);
  confidence_weights(cloud, frame, cam);
  // principal-axis pixel: viewing angle 0, full silhouette window
  for (const auto& p : cloud.points) {
    if (p.px == cam.intr.width / 2 && p.py == cam.intr.height / 2) {
      CHECK(p.weight == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("confidence: grazing surface gets zero W1") {
  // synthetic cloud with a normal perpendicular to the view direction
  const auto cam = identity_camera();
  const auto frame = plane_frame(cam.intr, 2000);
  auto cloud = build_cloud(frame, cam, 0);
  for (auto& p : cloud.points) p.normal = Vec3(0, 1, 0);  // orthogonal to every ray, nearly
  confidence_weights(cloud, frame, cam);
  for (const auto& p : cloud.points) {
    if (p.px == cam.intr.width / 2 && p.py == cam.intr.height / 2)
      CHECK(p.weight < 1e-6);  // clamped cosine at 90 degrees
  }
}

TEST_CASE("confidence: long straight silhouette edge pools to about one half") {
  const auto cam = identity_camera(128, 96, 100);
  auto frame = plane_frame(cam.intr, 2000);
  // right half background
  for (int y = 0; y < cam.intr.height; ++y)
    for (int x = cam.intr.width / 2; x < cam.intr.width; ++x) {
      frame.depth.at(x, y) = 0;
      frame.foreground.at(x, y) = 0;
    }
  auto cloud = build_cloud(frame, cam, 0);
  confidence_weights(cloud, frame, cam);
  const int edge_x = cam.intr.width / 2 - 1;  // last foreground column
  for (const auto& p : cloud.points)
    if (p.px == edge_x && p.py == cam.intr.height / 2) {
      // W1 is ~1 here; W2 counts 10 of 21 columns foreground
      CHECK(p.weight == doctest::Approx(0.5).epsilon(0.06));
      const double w2 = 10.0 * 21 / (21.0 * 21);
      CHECK(p.weight == doctest::Approx(w2).epsilon(0.03));
    }
}

TEST_CASE("splat: single point at a voxel center yields sqrt(1.5) * normal") {
  GridSpec grid{16, 32, 16, Vec3(0, 0, 0), 10.0};
  const Vec3 center = Vec3(0, 0, 0) + 10.0 * Vec3(8, 16, 8);
  const Vec3 n = Vec3(1, 2, -2).normalized();
  const auto cloud = single_point_cloud(center, n, 1.0);
  const auto field = splat({&cloud, 1}, grid);
  const Vec3 v = field.field.at(8, 16, 8);
  CHECK((v - std::sqrt(1.5) * n).norm() < 1e-9);
  CHECK(field.sigma2 * field.sigma2 == doctest::Approx(1.5 * field.sigma1 * field.sigma1));
}

TEST_CASE("splat: zero-weight point contributes nothing") {
  GridSpec grid{8, 16, 8, Vec3::Zero(), 10.0};
  const auto cloud = single_point_cloud(Vec3(40, 80, 40), Vec3(0, 0, 1), 0.0);
  const auto field = splat({&cloud, 1}, grid);
  for (const auto& v : field.field.data()) CHECK(v.norm() == 0.0);
}

TEST_CASE("splat: empty input gives a zero field") {
  GridSpec grid{8, 16, 8, Vec3::Zero(), 10.0};
  const auto field = splat({}, grid);
  for (const auto& v : field.field.data()) CHECK(v.norm() == 0.0);
  for (const auto d : field.density.data()) CHECK(d == 0.0);
}

TEST_CASE("splat: invariant to cloud concatenation order") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> coord(20, 120);
  std::normal_distribution<double> gauss(0, 1);
  auto random_cloud = [&](int n, int sensor) {
    OrientedCloud c;
    c.sensor = sensor;
    c.weight_map = Image<float>(1, 1, 1.f);
    for (int i = 0; i < n; ++i) {
      OrientedPoint p;
      p.position = Vec3(coord(rng), coord(rng), coord(rng));
      p.normal = Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
      p.weight = 0.25 + 0.75 * std::abs(gauss(rng)) / 3.0;
      c.points.push_back(p);
    }
    return c;
  };
  const auto a = random_cloud(200, 0), b = random_cloud(150, 1);
  GridSpec grid{16, 32, 16, Vec3::Zero(), 10.0};
  std::vector<OrientedCloud> ab = {a, b}, ba = {b, a};
  const auto fab = splat(ab, grid);
  const auto fba = splat(ba, grid);
  double worst = 0;
  for (std::size_t i = 0; i < fab.field.size(); ++i)
    worst = std::max(worst, (fab.field.data()[i] - fba.field.data()[i]).norm());
  CHECK(worst < 1e-9);
}

TEST_CASE("splat: scaling all weights cancels in the normalization") {
  std::mt19937_64 rng(56);
  std::uniform_real_distribution<double> coord(30, 110);
  std::normal_distribution<double> gauss(0, 1);
  OrientedCloud cloud;
  cloud.weight_map = Image<float>(1, 1, 1.f);
  for (int i = 0; i < 300; ++i) {
    OrientedPoint p;
    p.position = Vec3(coord(rng), coord(rng), coord(rng));
    p.normal = Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
    p.weight = 0.1 + 0.9 * (i % 7) / 7.0;
    cloud.points.push_back(p);
  }
  OrientedCloud scaled = cloud;
  for (auto& p : scaled.points) p.weight *= 3.7;

  GridSpec grid{16, 32, 16, Vec3::Zero(), 10.0};
  const auto base = splat({&cloud, 1}, grid);
  const auto more = splat({&scaled, 1}, grid);
  const double eps_density = 1e-6 / base.sigma2;
  double worst = 0;
  for (std::size_t i = 0; i < base.field.size(); ++i)
    if (base.density.data()[i] > eps_density && more.density.data()[i] > eps_density)
      worst = std::max(worst, (base.field.data()[i] - more.field.data()[i]).norm());
  CHECK(worst < 1e-9);
}

TEST_CASE("splat: simple mode agrees with weighted on a single point up to sqrt(1.5)") {
  GridSpec grid{16, 32, 16, Vec3::Zero(), 10.0};
  const Vec3 center = 10.0 * Vec3(8, 16, 8);
  const Vec3 n = Vec3(0.5, -0.5, std::sqrt(0.5)).normalized();
  const auto cloud = single_point_cloud(center, n, 1.0);
  const auto weighted = splat({&cloud, 1}, grid, SplatMode::kWeighted);
  const auto simple = splat({&cloud, 1}, grid, SplatMode::kSimple);
  CHECK((simple.field.at(8, 16, 8) - n).norm() < 1e-12);
  CHECK((weighted.field.at(8, 16, 8) - std::sqrt(1.5) * simple.field.at(8, 16, 8)).norm() < 1e-9);
}

namespace {

// analytic Gaussian blob and its gradient, sampled in voxel units
double blob(const Vec3& p, const Vec3& c, double s) {
  return std::exp(-(p - c).squaredNorm() / (2 * s * s));
}
Vec3 blob_gradient(const Vec3& p, const Vec3& c, double s) {
  return -(p - c) / (s * s) * blob(p, c, s);
}

}  // namespace

TEST_CASE("integrate_fft: recovers the Gaussian blob from its gradient") {
  const int nx = 64, ny = 128, nz = 64;
  GradientField field;
  field.field = VolumeGrid<Vec3>(nx, ny, nz, Vec3::Zero(), 1.0, Vec3::Zero());
  field.density = VolumeGrid<double>(nx, ny, nz, Vec3::Zero(), 1.0, 1.0);
  const Vec3 center(31.5, 63.5, 31.5);
  const double s = 6.0;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x)
        field.field.at(x, y, z) = blob_gradient(Vec3(x, y, z), center, s);

  const auto a = integrate_fft(field);

  double mean_f = 0;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) mean_f += blob(Vec3(x, y, z), center, s);
  mean_f /= static_cast<double>(a.size());

  double sq_err = 0, max_f = 0;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        const double expected = blob(Vec3(x, y, z), center, s) - mean_f;
        sq_err += (a.at(x, y, z) - expected) * (a.at(x, y, z) - expected);
        max_f = std::max(max_f, std::abs(blob(Vec3(x, y, z), center, s)));
      }
  const double rmse = std::sqrt(sq_err / static_cast<double>(a.size()));
  CHECK(rmse < 0.01 * max_f);

  double mean_a = 0;
  for (const double v : a.data()) mean_a += v;
  CHECK(std::abs(mean_a / static_cast<double>(a.size())) < 1e-9);
}

TEST_CASE("integrate_fft: zero field integrates to zero") {
  GradientField field;
  field.field = VolumeGrid<Vec3>(16, 32, 16, Vec3::Zero(), 1.0, Vec3::Zero());
  field.density = VolumeGrid<double>(16, 32, 16, Vec3::Zero(), 1.0, 0.0);
  const auto a = integrate_fft(field);
  for (const double v : a.data()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("integrate_fft: linearity") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0, 1);
  auto random_field = [&]() {
    GradientField f;
    f.field = VolumeGrid<Vec3>(16, 32, 16, Vec3::Zero(), 1.0, Vec3::Zero());
    f.density = VolumeGrid<double>(16, 32, 16, Vec3::Zero(), 1.0, 1.0);
    for (auto& v : f.field.data()) v = Vec3(gauss(rng), gauss(rng), gauss(rng));
    return f;
  };
  const auto f1 = random_field(), f2 = random_field();
  const double a = 2.25, b = -0.75;
  GradientField combo = f1;
  for (std::size_t i = 0; i < combo.field.size(); ++i)
    combo.field.data()[i] = a * f1.field.data()[i] + b * f2.field.data()[i];

  const auto int1 = integrate_fft(f1), int2 = integrate_fft(f2), intc = integrate_fft(combo);
  double worst = 0;
  for (std::size_t i = 0; i < intc.size(); ++i)
    worst = std::max(worst,
                     std::abs(intc.data()[i] - (a * int1.data()[i] + b * int2.data()[i])));
  CHECK(worst < 1e-9);
}

TEST_CASE("iso_level: constant volume returns the constant") {
  VolumeGrid<double> a(8, 16, 8, Vec3::Zero(), 5.0, 3.25);
  const auto cloud = single_point_cloud(Vec3(17, 33, 12), Vec3(0, 0, 1), 1.0);
  CHECK(iso_level(a, {&cloud, 1}) == doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("iso_level: single point at a voxel center samples that voxel") {
  VolumeGrid<double> a(8, 16, 8, Vec3::Zero(), 5.0, 0.0);
  a.at(3, 7, 2) = 42.0;
  const auto cloud = single_point_cloud(Vec3(15, 35, 10), Vec3(0, 0, 1), 1.0);
  CHECK(iso_level(a, {&cloud, 1}) == doctest::Approx(42.0).epsilon(1e-12));
}

TEST_CASE("iso_level: no input points is an error") {
  VolumeGrid<double> a(8, 16, 8, Vec3::Zero(), 5.0, 0.0);
  CHECK_THROWS(iso_level(a, {}));
}
