// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/types.hpp"

#include <cassert>
#include <cstdint>
#include <vector>

namespace volcap {

/// Row-major 2D array.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  T& at(int x, int y) {
    assert(in_bounds(x, y));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& at(int x, int y) const {
    assert(in_bounds(x, y));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0, height_ = 0;
  std::vector<T> data_;
};

using DepthImage = Image<std::uint16_t>;  // millimeters, 0 = invalid
using ColorImage = Image<Rgb8>;
using MaskImage = Image<std::uint8_t>;    // nonzero = foreground

/// One sensor's synchronized depth+color+mask with its local timestamp.
struct RgbdFrame {
  DepthImage depth;
  ColorImage color;
  MaskImage foreground;
  double timestamp_ms = 0;

  void validate() const {
    if (depth.width() != foreground.width() || depth.height() != foreground.height())
      throw std::invalid_argument("RgbdFrame: depth/foreground size mismatch");
    for (int y = 0; y < depth.height(); ++y)
      for (int x = 0; x < depth.width(); ++x)
        if (foreground.at(x, y) && depth.at(x, y) == 0)
          throw std::invalid_argument("RgbdFrame: foreground pixel with invalid depth");
  }
};

}  // namespace volcap
