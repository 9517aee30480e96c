// SPDX-License-Identifier: Apache-2.0
#include "volcap/appearance/color.hpp"

#include <cmath>

namespace volcap::appearance {

Hsv rgb_to_hsv(const Rgb8& c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double chroma = hi - lo;
  Hsv out;
  out.v = hi;
  out.s = hi > 0 ? chroma / hi : 0.0;
  if (chroma > 0) {
    double h;
    if (hi == r)
      h = std::fmod((g - b) / chroma, 6.0);
    else if (hi == g)
      h = (b - r) / chroma + 2.0;
    else
      h = (r - g) / chroma + 4.0;
    out.h = 60.0 * h;
    if (out.h < 0) out.h += 360.0;
  }
  return out;
}

Rgb8 hsv_to_rgb(const Hsv& c) {
  const double chroma = c.v * c.s;
  const double hp = c.h / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1)      { r = chroma; g = x; }
  else if (hp < 2) { r = x; g = chroma; }
  else if (hp < 3) { g = chroma; b = x; }
  else if (hp < 4) { g = x; b = chroma; }
  else if (hp < 5) { r = x; b = chroma; }
  else             { r = chroma; b = x; }
  const double m = c.v - chroma;
  auto to8 = [&](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround((v + m) * 255.0), 0L, 255L));
  };
  return {to8(r), to8(g), to8(b)};
}

}  // namespace volcap::appearance
