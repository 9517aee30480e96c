// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/image.hpp"
#include "volcap/core/types.hpp"
#include "volcap/recon/cloud.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace volcap::appearance {

struct Hsv {
  double h = 0;  // degrees, [0, 360)
  double s = 0;  // [0, 1]
  double v = 0;  // [0, 1]
};

Hsv rgb_to_hsv(const Rgb8& c);
Rgb8 hsv_to_rgb(const Hsv& c);

/// Mutually-closest point pairs (i from a, j from b) with distance
/// strictly below max_dist.
std::vector<std::pair<int, int>> mutual_closest_pairs(std::span<const Vec3> a,
                                                      std::span<const Vec3> b,
                                                      double max_dist_mm = 20.0);

/// One correspondence's colors in the two views.
struct ColorPair {
  Rgb8 first, second;
};

/// Finds mutual closest points between two views' clouds and appends their
/// source-pixel colors; call per frame to accumulate correspondences.
void accumulate_color_pairs(const recon::OrientedCloud& cloud_a, const ColorImage& image_a,
                            const recon::OrientedCloud& cloud_b, const ColorImage& image_b,
                            std::vector<ColorPair>& pairs, double max_dist_mm = 20.0);

/// Affine map on the HSV value channel; H and S always pass through.
struct ValueMap {
  double gain = 1.0;
  double offset = 0.0;
  double apply(double v) const { return std::clamp(gain * v + offset, 0.0, 1.0); }
  ValueMap then(const ValueMap& outer) const {  // outer(this(v))
    return {outer.gain * gain, outer.gain * offset + outer.offset};
  }
  ValueMap inverse() const { return {1.0 / gain, -offset / gain}; }
};

struct ValueFitOptions {
  int ransac_iterations = 1000;
  double inlier_threshold = 0.05;
  std::uint64_t seed = 1;
};

/// RANSAC line fit V_b = gain * V_a + offset on the value channel, final
/// least squares over the inliers. Throws when there are fewer than 10
/// pairs or the value spread is degenerate.
ValueMap fit_value_map(std::span<const ColorPair> pairs, const ValueFitOptions& options = {});

/// A fitted map between one adjacent sensor pair.
struct PairwiseValueMap {
  int from = 0, to = 0;
  ValueMap map;  // V_to ~ map(V_from)
};

/// Per-sensor correction toward the reference sensor.
struct ColorCorrection {
  std::vector<ValueMap> maps;
  int reference = 0;

  Rgb8 apply(int sensor, const Rgb8& c) const;
  ColorImage apply(int sensor, const ColorImage& image) const;
  static ColorCorrection identity(int sensor_count, int reference = 0);
};

/// Composes pairwise maps along the connectivity path from every sensor to
/// the reference. Throws if some sensor is not connected.
ColorCorrection chain_to_reference(std::span<const PairwiseValueMap> edges, int reference,
                                   int sensor_count);

void write_color_correction(const std::filesystem::path& path, const ColorCorrection& cc);
ColorCorrection read_color_correction(const std::filesystem::path& path);

}  // namespace volcap::appearance
