// SPDX-License-Identifier: Apache-2.0
#include "volcap/calib/calib.hpp"

#include <algorithm>
#include <stdexcept>

namespace volcap::calib {

DepthImage accumulate_depth(const std::vector<DepthImage>& frames) {
  if (frames.empty()) throw std::invalid_argument("accumulate_depth: no frames");
  const int w = frames.front().width(), h = frames.front().height();
  for (const auto& f : frames)
    if (f.width() != w || f.height() != h)
      throw std::invalid_argument("accumulate_depth: frame dimensions differ");

  DepthImage out(w, h, 0);
  std::vector<std::uint16_t> vals;
  vals.reserve(frames.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      vals.clear();
      for (const auto& f : frames)
        if (const auto d = f.at(x, y); d > 0) vals.push_back(d);
      if (vals.empty()) continue;
      const std::size_t mid = vals.size() / 2;
      std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
      if (vals.size() % 2 == 1) {
        out.at(x, y) = vals[mid];
      } else {
        const auto upper = vals[mid];
        const auto lower = *std::max_element(vals.begin(), vals.begin() + mid);
        out.at(x, y) = static_cast<std::uint16_t>((static_cast<int>(lower) + upper) / 2);
      }
    }
  }
  return out;
}

}  // namespace volcap::calib
