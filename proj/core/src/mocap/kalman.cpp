// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/track.hpp"

namespace volcap::mocap {

Vec3 JointFilter::step(const std::optional<Vec3>& measurement, double dt_s, double sigma_a,
                       double sigma_z) {
  if (!initialized) {
    if (!measurement) return position;
    position = *measurement;
    velocity = Vec3::Zero();
    covariance << sigma_z * sigma_z, 0, 0, 1e6;
    initialized = true;
    return position;
  }

  const double dt = std::max(dt_s, 1e-6);
  Eigen::Matrix2d f;
  f << 1, dt, 0, 1;
  // discrete white-noise acceleration model
  Eigen::Matrix2d q;
  const double s2 = sigma_a * sigma_a;
  q << 0.25 * dt * dt * dt * dt * s2, 0.5 * dt * dt * dt * s2,
       0.5 * dt * dt * dt * s2, dt * dt * s2;

  position += dt * velocity;
  covariance = f * covariance * f.transpose() + q;

  if (measurement) {
    const double innovation_var = covariance(0, 0) + sigma_z * sigma_z;
    const Eigen::Vector2d gain = covariance.col(0) / innovation_var;
    const Vec3 innovation = *measurement - position;
    position += gain(0) * innovation;
    velocity += gain(1) * innovation;
    Eigen::Matrix2d identity_minus;
    identity_minus << 1 - gain(0), 0, -gain(1), 1;
    covariance = identity_minus * covariance;
  }
  return position;
}

}  // namespace volcap::mocap
