// SPDX-License-Identifier: Apache-2.0
#include "volcap/calib/calib.hpp"

#include "volcap/core/camera.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace volcap;
using namespace volcap::calib;

namespace {

Pose rotz_pose(double degrees, const Vec3& t) {
  Pose p;
  p.R = Eigen::AngleAxisd(degrees * std::numbers::pi / 180.0, Vec3(0, 0, 1)).toRotationMatrix();
  p.t = t;
  return p;
}

Pose random_pose(std::mt19937_64& rng, double t_scale = 1000) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  Pose p;
  p.R = Eigen::AngleAxisd(angle(rng), Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized())
            .toRotationMatrix();
  p.t = Vec3(gauss(rng), gauss(rng), gauss(rng)) * t_scale;
  return p;
}

}  // namespace

TEST_CASE("accumulate_depth: pixelwise median over valid samples") {
  DepthImage a(2, 1), b(2, 1), c(2, 1);
  a.at(0, 0) = 1000;
  b.at(0, 0) = 1002;
  c.at(0, 0) = 5000;
  a.at(1, 0) = 0;
  b.at(1, 0) = 0;
  c.at(1, 0) = 1500;
  const auto median = accumulate_depth({a, b, c});
  CHECK(median.at(0, 0) == 1002);
  CHECK(median.at(1, 0) == 1500);  // invalids excluded
}

TEST_CASE("accumulate_depth: single frame is returned unchanged") {
  DepthImage a(3, 2);
  a.at(1, 1) = 777;
  const auto median = accumulate_depth({a});
  CHECK(median == a);
}

TEST_CASE("accumulate_depth: empty input or mismatched sizes fail") {
  CHECK_THROWS(accumulate_depth({}));
  CHECK_THROWS(accumulate_depth({DepthImage(2, 2), DepthImage(3, 2)}));
}

TEST_CASE("accumulate_depth: frame order does not matter") {
  std::mt19937_64 rng(31);
  std::vector<DepthImage> frames(5, DepthImage(8, 8));
  for (auto& f : frames)
    for (auto& d : f.data()) d = static_cast<std::uint16_t>(rng() % 3000);
  auto shuffled = frames;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(accumulate_depth(frames) == accumulate_depth(shuffled));
}

TEST_CASE("procrustes: identity on identical point sets") {
  Correspondences3D3D corr;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(0.0, 500.0);
  for (int i = 0; i < 8; ++i) {
    const Vec3 p(gauss(rng), gauss(rng), gauss(rng));
    corr.sensor.push_back(p);
    corr.model.push_back(p);
  }
  const auto fit = solve_procrustes(corr);
  CHECK((fit.pose.R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fit.pose.t.norm() < 1e-9);
  CHECK(fit.rms_mm < 1e-9);
}

TEST_CASE("procrustes: exact recovery of a constructed rigid transform") {
  const Pose truth = rotz_pose(90, Vec3(1000, 0, 0));
  Correspondences3D3D corr;
  const Vec3 pts[4] = {{0, 0, 0}, {500, 0, 0}, {0, 400, 0}, {0, 0, 300}};
  for (const auto& p : pts) {
    corr.sensor.push_back(p);
    corr.model.push_back(truth.apply(p));
  }
  const auto fit = solve_procrustes(corr);
  CHECK((fit.pose.R - truth.R).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((fit.pose.t - truth.t).norm() < 1e-9);
  CHECK(fit.rms_mm < 1e-9);
}

TEST_CASE("procrustes: reflection-favoring input still yields det(R) = +1") {
  // model = mirrored sensor points; the best orthogonal map is a pure
  // reflection, which the solver must not return
  Correspondences3D3D corr;
  const Vec3 pts[4] = {{0, 0, 0}, {500, 0, 0}, {0, 400, 0}, {0, 0, 300}};
  for (const auto& p : pts) {
    corr.sensor.push_back(p);
    corr.model.push_back(Vec3(-p.x(), p.y(), p.z()));
  }
  const auto fit = solve_procrustes(corr);
  CHECK(fit.pose.R.determinant() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.rms_mm > 1.0);  // the reflected optimum is unreachable
}

TEST_CASE("procrustes: collinear points are rejected") {
  Correspondences3D3D corr;
  for (int i = 0; i < 5; ++i) {
    corr.sensor.push_back(Vec3(i * 100.0, 0, 0));
    corr.model.push_back(Vec3(i * 100.0, 0, 0));
  }
  CHECK_THROWS_AS(solve_procrustes(corr), std::runtime_error);
}

TEST_CASE("procrustes: residual invariant to a common rigid transform") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 300.0);
  Correspondences3D3D corr;
  for (int i = 0; i < 12; ++i) {
    corr.sensor.push_back(Vec3(gauss(rng), gauss(rng), gauss(rng)));
    corr.model.push_back(Vec3(gauss(rng), gauss(rng), gauss(rng)));
  }
  const double base = solve_procrustes(corr).rms_mm;
  for (int trial = 0; trial < 10; ++trial) {
    const Pose common = random_pose(rng);
    Correspondences3D3D moved;
    for (std::size_t i = 0; i < corr.size(); ++i) {
      moved.sensor.push_back(common.apply(corr.sensor[i]));
      moved.model.push_back(common.apply(corr.model[i]));
    }
    CHECK(solve_procrustes(moved).rms_mm == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("procrustes ransac: outliers rejected") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 400.0);
  std::uniform_real_distribution<double> uni(-2000, 2000);
  const Pose truth = random_pose(rng);
  Correspondences3D3D corr;
  for (int i = 0; i < 40; ++i) {
    const Vec3 p(gauss(rng), gauss(rng), gauss(rng));
    corr.sensor.push_back(p);
    if (i % 4 == 3)  // 25% gross outliers
      corr.model.push_back(Vec3(uni(rng), uni(rng), uni(rng)));
    else
      corr.model.push_back(truth.apply(p));
  }
  std::vector<int> inliers;
  const auto fit = solve_procrustes_ransac(corr, RansacOptions{30.0, 500, 5}, &inliers);
  CHECK(inliers.size() == 30);
  CHECK((fit.pose.R - truth.R).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((fit.pose.t - truth.t).norm() < 1e-6);
}

namespace {

Correspondences3D2D grid_correspondences(const CameraView& cam, int per_axis = 4) {
  Correspondences3D2D corr;
  for (int ix = 0; ix < per_axis; ++ix)
    for (int iy = 0; iy < per_axis; ++iy)
      for (int iz = 0; iz < per_axis; ++iz) {
        // grid spans the camera's working volume; world point via the pose
        const Vec3 local(-600 + 400.0 * ix, -600 + 400.0 * iy, 1500 + 700.0 * iz);
        const Vec3 p = cam.pose.apply(local);
        const auto u = project(cam, p);
        if (!u || !cam.intr.contains(*u)) continue;
        corr.points.push_back(p);
        corr.pixels.push_back(*u);
      }
  return corr;
}

}  // namespace

TEST_CASE("fit_projection: exact pinhole correspondences recovered") {
  CameraView cam;
  cam.intr = Intrinsics{500, 500, 320, 240, 640, 480};
  const auto corr = grid_correspondences(cam);
  REQUIRE(corr.size() >= 20);
  const auto fit = fit_projection(corr, 640, 480);
  CHECK(fit.reprojection_rms_px < 1e-6);
  CHECK(fit.intrinsics.fx == doctest::Approx(500).epsilon(1e-6));
  CHECK(fit.intrinsics.fy == doctest::Approx(500).epsilon(1e-6));
  CHECK(fit.intrinsics.cx == doctest::Approx(320).epsilon(1e-6));
  CHECK(fit.intrinsics.cy == doctest::Approx(240).epsilon(1e-6));
}

TEST_CASE("fit_projection: 0.5 px pixel noise stays under 1 px RMS") {
  CameraView cam;
  cam.intr = Intrinsics{520, 515, 310, 250, 640, 480};
  std::mt19937_64 rng(101);
  cam.pose = random_pose(rng, 200);
  auto corr = grid_correspondences(cam);
  REQUIRE(corr.size() >= 20);
  std::normal_distribution<double> noise(0.0, 0.5);
  for (auto& u : corr.pixels) u += Vec2(noise(rng), noise(rng));
  const auto fit = fit_projection(corr, 640, 480);
  CHECK(fit.reprojection_rms_px <= 1.0);
}

TEST_CASE("fit_projection: coplanar points are a resection degeneracy") {
  CameraView cam;
  cam.intr = Intrinsics{500, 500, 320, 240, 640, 480};
  Correspondences3D2D corr;
  for (int ix = 0; ix < 4; ++ix)
    for (int iy = 0; iy < 4; ++iy) {
      const Vec3 p(-450 + 300.0 * ix, -450 + 300.0 * iy, 2000);
      corr.points.push_back(p);
      corr.pixels.push_back(*project(cam, p));
    }
  CHECK_THROWS_AS(fit_projection(corr, 640, 480), std::runtime_error);
}

TEST_CASE("lift_matches: invalid depth dropped, texture vertices exact") {
  const AnchorModel model = make_box_model(Vec3(560, 330, 410), 8, 12);
  const Intrinsics intr{400, 400, 160, 120, 320, 240};
  DepthImage depth(320, 240, 0);

  // matches right at model texture vertices; pose the box in front of an
  // identity sensor placed so every chosen vertex is distinct
  const Pose model_to_sensor = rotz_pose(25, Vec3(50, -30, 2000));
  MatchList matches;
  int placed = 0;
  for (std::size_t i = 0; i < model.vertices.size() && placed < 10; i += 37) {
    const Vec3 local = model_to_sensor.apply(model.vertices[i]);
    const auto u = project_local(intr, local);
    if (!u || !intr.contains(*u)) continue;
    const int px = static_cast<int>(std::lround(u->x()));
    const int py = static_cast<int>(std::lround(u->y()));
    if (depth.at(px, py) != 0) continue;
    depth.at(px, py) = static_cast<std::uint16_t>(std::lround(local.z()));
    matches.push_back({*u, model.texcoords[i]});
    ++placed;
  }
  REQUIRE(placed == 10);
  // one extra match on a pixel with no depth: must be dropped
  matches.push_back({Vec2(5, 5), model.texcoords[0]});

  const auto corr = lift_matches(matches, depth, intr, model);
  CHECK(corr.size() == 10);

  // every lifted sensor point must map onto its model point under the
  // known pose (depth quantization is the only error source)
  const Pose sensor_to_model = model_to_sensor.inverse();
  for (std::size_t j = 0; j < corr.size(); ++j) {
    const Vec3 predicted = sensor_to_model.apply(corr.sensor[j]);
    CHECK((predicted - corr.model[j]).norm() < 1.0);
  }
}

TEST_CASE("lift_matches: fewer than 3 surviving pairs is an error") {
  const AnchorModel model = make_box_model(Vec3(560, 330, 410), 4, 12);
  const Intrinsics intr{400, 400, 160, 120, 320, 240};
  DepthImage depth(320, 240, 0);  // all invalid
  MatchList matches = {{Vec2(10, 10), model.texcoords[0]},
                       {Vec2(20, 20), model.texcoords[1]}};
  CHECK_THROWS_AS(lift_matches(matches, depth, intr, model), std::runtime_error);
}

TEST_CASE("match csv round trip") {
  MatchFile mf;
  mf.per_sensor.resize(2);
  mf.per_sensor[0].push_back({Vec2(1.5, 2.25), Vec2(100.125, 7)});
  mf.per_sensor[1].push_back({Vec2(9, 8), Vec2(6, 5)});
  const auto path = std::filesystem::temp_directory_path() / "volcap_matches.csv";
  write_matches(path, mf);
  const auto loaded = read_matches(path, 2);
  REQUIRE(loaded.per_sensor.size() == 2);
  CHECK(loaded.per_sensor[0][0].image_px == Vec2(1.5, 2.25));
  CHECK(loaded.per_sensor[1][0].texture_px == Vec2(6, 5));
}
