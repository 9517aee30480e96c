// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/image.hpp"
#include "volcap/core/types.hpp"

#include <vector>

namespace volcap::recon {

/// One view's raw surface samples: world-space point, unit camera-facing
/// normal, confidence weight, and the source pixel.
struct OrientedPoint {
  Vec3 position;      // world mm
  Vec3 normal;        // unit, oriented toward the camera
  double weight = 1;  // in [0, 1]
  int px = 0, py = 0;
  int sensor = 0;
};

struct OrientedCloud {
  std::vector<OrientedPoint> points;
  /// Dense per-pixel confidence map W_k(u); zero outside the foreground.
  Image<float> weight_map;
  int sensor = 0;
};

/// Backprojects the foreground, triangulates each pixel against its
/// 8-neighborhood discarding triangles that span a depth discontinuity,
/// and assigns each vertex the normalized mean of its incident triangle
/// normals. Pixels left without any triangle are dropped.
OrientedCloud build_cloud(const RgbdFrame& frame, const CameraView& camera, int sensor_index,
                          double discontinuity_mm = 50.0);

/// W = W1 * W2: local viewing-angle cosine (clamped at zero) times the
/// box-filtered foreground fraction (window half-width 10 px).
void confidence_weights(OrientedCloud& cloud, const RgbdFrame& frame, const CameraView& camera,
                        int silhouette_radius_px = 10);

}  // namespace volcap::recon
