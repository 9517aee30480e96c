// SPDX-License-Identifier: Apache-2.0
#include "volcap/calib/calib.hpp"

#include <Eigen/SVD>

#include <random>
#include <stdexcept>

namespace volcap::calib {
namespace {

double fit_rms(const Correspondences3D3D& corr, const Pose& pose) {
  double sum = 0;
  for (std::size_t j = 0; j < corr.size(); ++j)
    sum += (pose.apply(corr.sensor[j]) - corr.model[j]).squaredNorm();
  return std::sqrt(sum / corr.size());
}

Correspondences3D3D subset(const Correspondences3D3D& corr, const std::vector<int>& idx) {
  Correspondences3D3D out;
  out.sensor.reserve(idx.size());
  out.model.reserve(idx.size());
  for (int i : idx) {
    out.sensor.push_back(corr.sensor[i]);
    out.model.push_back(corr.model[i]);
  }
  return out;
}

}  // namespace

RigidFit solve_procrustes(const Correspondences3D3D& corr) {
  if (corr.size() < 3 || corr.sensor.size() != corr.model.size())
    throw std::invalid_argument("solve_procrustes: needs >= 3 paired points");

  Vec3 c_s = Vec3::Zero(), c_m = Vec3::Zero();
  for (std::size_t j = 0; j < corr.size(); ++j) {
    c_s += corr.sensor[j];
    c_m += corr.model[j];
  }
  c_s /= static_cast<double>(corr.size());
  c_m /= static_cast<double>(corr.size());

  Mat3 cross = Mat3::Zero();
  for (std::size_t j = 0; j < corr.size(); ++j)
    cross += (corr.model[j] - c_m) * (corr.sensor[j] - c_s).transpose();

  Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // collinear input: the cross-covariance loses rank and the rotation
  // about the common axis is unobservable
  if (sv(1) <= 1e-12 * std::max(sv(0), 1.0))
    throw std::runtime_error("solve_procrustes: rank-deficient (collinear) correspondences");

  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  RigidFit fit;
  fit.pose.R = svd.matrixU() * d * svd.matrixV().transpose();
  fit.pose.t = c_m - fit.pose.R * c_s;
  fit.rms_mm = fit_rms(corr, fit.pose);
  return fit;
}

RigidFit solve_procrustes_ransac(const Correspondences3D3D& corr, const RansacOptions& options,
                                 std::vector<int>* inliers_out) {
  const int n = static_cast<int>(corr.size());
  if (n < 3) throw std::invalid_argument("solve_procrustes_ransac: needs >= 3 paired points");

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> best_inliers;

  for (int it = 0; it < options.iterations; ++it) {
    int a = pick(rng), b = pick(rng), c = pick(rng);
    if (a == b || b == c || a == c) continue;
    RigidFit candidate;
    try {
      candidate = solve_procrustes(subset(corr, {a, b, c}));
    } catch (const std::runtime_error&) {
      continue;  // collinear sample
    }
    std::vector<int> inliers;
    for (int j = 0; j < n; ++j)
      if ((candidate.pose.apply(corr.sensor[j]) - corr.model[j]).norm() <
          options.inlier_threshold_mm)
        inliers.push_back(j);
    if (inliers.size() > best_inliers.size()) best_inliers = std::move(inliers);
  }

  if (best_inliers.size() < 3)
    throw std::runtime_error("solve_procrustes_ransac: no consensus set found");
  if (inliers_out) *inliers_out = best_inliers;
  return solve_procrustes(subset(corr, best_inliers));
}

}  // namespace volcap::calib
