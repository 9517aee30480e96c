// SPDX-License-Identifier: Apache-2.0
#include "volcap/calib/calib.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <stdexcept>

namespace volcap::calib {
namespace {

using Mat34 = Eigen::Matrix<double, 3, 4>;

void check_not_coplanar(const Correspondences3D2D& corr) {
  Vec3 mean = Vec3::Zero();
  for (const auto& p : corr.points) mean += p;
  mean /= static_cast<double>(corr.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : corr.points) cov += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  if (eig.eigenvalues()(0) <= 1e-8 * std::max(eig.eigenvalues()(2), 1.0))
    throw std::runtime_error("fit_projection: degenerate (coplanar) 3D points");
}

Mat34 dlt(const Correspondences3D2D& corr) {
  const int n = static_cast<int>(corr.size());

  // Hartley normalization of both sides
  Vec2 mu2 = Vec2::Zero();
  Vec3 mu3 = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    mu2 += corr.pixels[i];
    mu3 += corr.points[i];
  }
  mu2 /= n;
  mu3 /= n;
  double s2 = 0, s3 = 0;
  for (int i = 0; i < n; ++i) {
    s2 += (corr.pixels[i] - mu2).norm();
    s3 += (corr.points[i] - mu3).norm();
  }
  s2 = std::sqrt(2.0) / std::max(s2 / n, 1e-12);
  s3 = std::sqrt(3.0) / std::max(s3 / n, 1e-12);

  Mat3 T = Mat3::Identity();
  T(0, 0) = T(1, 1) = s2;
  T(0, 2) = -s2 * mu2.x();
  T(1, 2) = -s2 * mu2.y();
  Eigen::Matrix4d U = Eigen::Matrix4d::Identity();
  U(0, 0) = U(1, 1) = U(2, 2) = s3;
  U.block<3, 1>(0, 3) = -s3 * mu3;

  Eigen::MatrixXd A(2 * n, 12);
  for (int i = 0; i < n; ++i) {
    const Vec3 X = s3 * (corr.points[i] - mu3);
    const Vec2 u = s2 * (corr.pixels[i] - mu2);
    Eigen::RowVector4d Xh;
    Xh << X.x(), X.y(), X.z(), 1.0;
    A.row(2 * i).setZero();
    A.block<1, 4>(2 * i, 0) = Xh;
    A.block<1, 4>(2 * i, 8) = -u.x() * Xh;
    A.row(2 * i + 1).setZero();
    A.block<1, 4>(2 * i + 1, 4) = Xh;
    A.block<1, 4>(2 * i + 1, 8) = -u.y() * Xh;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  const Eigen::VectorXd p = svd.matrixV().col(11);
  Mat34 P;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) P(r, c) = p(4 * r + c);
  P = T.inverse() * P * U;

  // fix the sign so points have positive depth
  double w_sum = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector4d Xh(corr.points[i].x(), corr.points[i].y(), corr.points[i].z(), 1.0);
    w_sum += (P.row(2) * Xh).value();
  }
  if (w_sum < 0) P = -P;
  return P;
}

// RQ decomposition of the leading 3x3 by Givens rotations: M = K * R.
void rq3(const Mat3& m, Mat3& k, Mat3& r) {
  Mat3 a = m;
  Mat3 q = Mat3::Identity();
  auto givens = [&](int i0, int i1, double x, double y) {
    const double n = std::hypot(x, y);
    if (n < 1e-300) return;
    const double c = x / n, s = y / n;
    Mat3 g = Mat3::Identity();
    g(i0, i0) = c;
    g(i1, i1) = c;
    g(i0, i1) = s;
    g(i1, i0) = -s;
    a = a * g;
    q = g.transpose() * q;
  };
  // zero a(2,1), a(2,0), a(1,0)
  givens(1, 2, a(2, 2), a(2, 1));
  givens(0, 2, a(2, 2), a(2, 0));
  givens(0, 1, a(1, 1), a(1, 0));
  k = a;
  r = q;
  // positive K diagonal
  Mat3 s = Mat3::Identity();
  for (int i = 0; i < 3; ++i)
    if (k(i, i) < 0) s(i, i) = -1;
  k = k * s;
  r = s * r;
}

struct Params {
  double fx, fy, cx, cy;
  Mat3 R;   // world-to-camera
  Vec3 t;   // world-to-camera
};

double rms_of(const Params& p, const Correspondences3D2D& corr) {
  double sum = 0;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    const Vec3 xc = p.R * corr.points[i] + p.t;
    const Vec2 proj(p.fx * xc.x() / xc.z() + p.cx, p.fy * xc.y() / xc.z() + p.cy);
    sum += (proj - corr.pixels[i]).squaredNorm();
  }
  return std::sqrt(sum / corr.size());
}

Mat3 rodrigues(const Vec3& w) {
  const double angle = w.norm();
  if (angle < 1e-14) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

// Levenberg-Marquardt on (fx, fy, cx, cy, axis-angle delta, t).
Params refine(Params p, const Correspondences3D2D& corr) {
  const int n = static_cast<int>(corr.size());
  double lambda = 1e-3;
  auto residuals = [&](const Params& q) {
    Eigen::VectorXd r(2 * n);
    for (int i = 0; i < n; ++i) {
      const Vec3 xc = q.R * corr.points[i] + q.t;
      r(2 * i) = q.fx * xc.x() / xc.z() + q.cx - corr.pixels[i].x();
      r(2 * i + 1) = q.fy * xc.y() / xc.z() + q.cy - corr.pixels[i].y();
    }
    return r;
  };
  auto apply = [](const Params& q, const Eigen::VectorXd& d) {
    Params out = q;
    out.fx += d(0);
    out.fy += d(1);
    out.cx += d(2);
    out.cy += d(3);
    out.R = rodrigues(Vec3(d(4), d(5), d(6))) * q.R;
    out.t += Vec3(d(7), d(8), d(9));
    return out;
  };

  Eigen::VectorXd r = residuals(p);
  for (int iter = 0; iter < 60; ++iter) {
    Eigen::MatrixXd J(2 * n, 10);
    for (int c = 0; c < 10; ++c) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(10);
      const double h = (c < 4 ? 1e-4 : (c < 7 ? 1e-7 : 1e-4));
      d(c) = h;
      J.col(c) = (residuals(apply(p, d)) - r) / h;
    }
    const Eigen::MatrixXd jtj = J.transpose() * J;
    const Eigen::VectorXd jtr = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 8; ++tries) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-9);
      const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
      const Params cand = apply(p, step);
      const Eigen::VectorXd rc = residuals(cand);
      if (rc.squaredNorm() < r.squaredNorm()) {
        p = cand;
        r = rc;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10;
    }
    if (!improved || r.norm() < 1e-14) break;
  }
  return p;
}

}  // namespace

ProjectionFit fit_projection(const Correspondences3D2D& corr, int width, int height) {
  if (corr.size() < 6 || corr.points.size() != corr.pixels.size())
    throw std::invalid_argument("fit_projection: needs >= 6 paired points");
  check_not_coplanar(corr);

  const Mat34 P = dlt(corr);
  Mat3 K, Rwc;
  rq3(P.leftCols<3>(), K, Rwc);
  Vec3 twc = K.inverse() * P.col(3);
  if (Rwc.determinant() < 0) {
    Rwc = -Rwc;
    twc = -twc;
  }
  K /= K(2, 2);

  Params p{K(0, 0), K(1, 1), K(0, 2), K(1, 2), Rwc, twc};
  p = refine(p, corr);

  ProjectionFit fit;
  fit.intrinsics.fx = p.fx;
  fit.intrinsics.fy = p.fy;
  fit.intrinsics.cx = p.cx;
  fit.intrinsics.cy = p.cy;
  fit.intrinsics.width = width;
  fit.intrinsics.height = height;
  fit.pose.R = p.R.transpose();
  fit.pose.t = -(p.R.transpose() * p.t);
  fit.reprojection_rms_px = rms_of(p, corr);
  return fit;
}

}  // namespace volcap::calib
