// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/image.hpp"
#include "volcap/core/types.hpp"

#include <optional>
#include <span>

namespace volcap::eval {

/// Exact Euclidean distance (pixels, center-to-center) from every pixel to
/// the nearest foreground pixel; infinity when the mask is empty.
Image<float> distance_transform(const MaskImage& mask);

/// Silhouette disagreement |xor| / |or|; zero when both masks are empty.
double vre(const MaskImage& rendered, const MaskImage& ground);

/// Symmetric 2D Hausdorff distance between the two pixel sets, computed
/// exactly from two distance transforms. Empty input -> no value.
std::optional<double> hausdorff2d(const MaskImage& rendered, const MaskImage& ground);

/// Closest-point RMSE (mm): mean over ground points of the squared
/// distance to the nearest reconstructed point. Deliberately asymmetric.
double cp_rmse(std::span<const Vec3> ground, std::span<const Vec3> reconstructed);

/// Rec.601 luma in [0, 255].
Image<double> to_gray(const ColorImage& img);

struct Wms3imOptions {
  int scales = 3;
  // pooled-term exponents per scale
  double alpha[3] = {0.0, 0.0, 0.1333};
  double beta[3] = {0.0448, 0.3001, 0.1333};
  double gamma[3] = {0.0448, 0.3001, 0.1333};
  double c1 = (0.01 * 255) * (0.01 * 255);
  double c2 = (0.03 * 255) * (0.03 * 255);
  double c3 = (0.03 * 255) * (0.03 * 255) / 2.0;
  int window = 11;       // Gaussian window and the pooling neighborhood N(u)
  double sigma = 1.5;
};

/// Weighted multiscale structural similarity pooled over the rendered
/// silhouette: per-scale luminance/contrast/structure terms weighted by
/// w(u) = sum of S_r over N(u), images downsampled 2x (low-pass +
/// decimate) between scales, masks by logical OR. No value when the
/// silhouette is empty.
std::optional<double> wms3im(const ColorImage& rendered, const ColorImage& ground,
                             const MaskImage& silhouette, const Wms3imOptions& options = {});

}  // namespace volcap::eval
