// SPDX-License-Identifier: Apache-2.0
#include "volcap/eval/metrics.hpp"

#include <cmath>
#include <vector>

namespace volcap::eval {

Image<double> to_gray(const ColorImage& img) {
  Image<double> out(img.width(), img.height(), 0.0);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const Rgb8 c = img.at(x, y);
      out.at(x, y) = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
    }
  return out;
}

namespace {

std::vector<double> gaussian_kernel(int window, double sigma) {
  std::vector<double> k(window);
  const int r = window / 2;
  double sum = 0;
  for (int i = 0; i < window; ++i) {
    k[i] = std::exp(-0.5 * (i - r) * (i - r) / (sigma * sigma));
    sum += k[i];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// separable Gaussian with per-pixel renormalization over the in-bounds
// taps; the border behavior is shared with the naive reference evaluation
Image<double> gaussian_filter(const Image<double>& img, const std::vector<double>& k) {
  const int w = img.width(), h = img.height(), r = static_cast<int>(k.size()) / 2;
  Image<double> tmp(w, h, 0.0), out(w, h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0, norm = 0;
      for (int i = -r; i <= r; ++i) {
        const int xx = x + i;
        if (xx < 0 || xx >= w) continue;
        acc += k[i + r] * img.at(xx, y);
        norm += k[i + r];
      }
      tmp.at(x, y) = acc / norm;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0, norm = 0;
      for (int i = -r; i <= r; ++i) {
        const int yy = y + i;
        if (yy < 0 || yy >= h) continue;
        acc += k[i + r] * tmp.at(x, yy);
        norm += k[i + r];
      }
      out.at(x, y) = acc / norm;
    }
  return out;
}

Image<double> multiply(const Image<double>& a, const Image<double>& b) {
  Image<double> out(a.width(), a.height(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

struct PooledTerms {
  double l = 0, c = 0, s = 0;
};

// pooled per Eq-style silhouette weighting: w(u) = box sum of the mask
// over the window around u
PooledTerms pooled_ssim_terms(const Image<double>& x, const Image<double>& y,
                              const MaskImage& mask, const Wms3imOptions& opt) {
  const auto k = gaussian_kernel(opt.window, opt.sigma);
  const auto mu_x = gaussian_filter(x, k);
  const auto mu_y = gaussian_filter(y, k);
  const auto xx = gaussian_filter(multiply(x, x), k);
  const auto yy = gaussian_filter(multiply(y, y), k);
  const auto xy = gaussian_filter(multiply(x, y), k);

  const int w = x.width(), h = x.height(), r = opt.window / 2;
  double sum_l = 0, sum_c = 0, sum_s = 0, sum_w = 0;
  for (int py = 0; py < h; ++py)
    for (int px = 0; px < w; ++px) {
      if (!mask.at(px, py)) continue;
      double weight = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int qx = px + dx, qy = py + dy;
          if (qx < 0 || qx >= w || qy < 0 || qy >= h) continue;
          weight += mask.at(qx, qy) ? 1.0 : 0.0;
        }
      const double mx = mu_x.at(px, py), my = mu_y.at(px, py);
      const double vx = std::max(0.0, xx.at(px, py) - mx * mx);
      const double vy = std::max(0.0, yy.at(px, py) - my * my);
      const double cov = xy.at(px, py) - mx * my;
      const double sx = std::sqrt(vx), sy = std::sqrt(vy);
      const double l = (2 * mx * my + opt.c1) / (mx * mx + my * my + opt.c1);
      const double c = (2 * sx * sy + opt.c2) / (vx + vy + opt.c2);
      const double s = (cov + opt.c3) / (sx * sy + opt.c3);
      sum_l += weight * l;
      sum_c += weight * c;
      sum_s += weight * s;
      sum_w += weight;
    }
  if (sum_w <= 0) return {1, 1, 1};  // silhouette present but weightless; neutral terms
  return {sum_l / sum_w, sum_c / sum_w, sum_s / sum_w};
}

Image<double> downsample2(const Image<double>& img) {
  const int w = std::max(1, img.width() / 2), h = std::max(1, img.height() / 2);
  Image<double> out(w, h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      int n = 0;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const int sx = 2 * x + dx, sy = 2 * y + dy;
          if (sx < img.width() && sy < img.height()) {
            acc += img.at(sx, sy);
            ++n;
          }
        }
      out.at(x, y) = acc / n;
    }
  return out;
}

MaskImage downsample2_or(const MaskImage& mask) {
  const int w = std::max(1, mask.width() / 2), h = std::max(1, mask.height() / 2);
  MaskImage out(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t any = 0;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const int sx = 2 * x + dx, sy = 2 * y + dy;
          if (sx < mask.width() && sy < mask.height() && mask.at(sx, sy)) any = 1;
        }
      out.at(x, y) = any;
    }
  return out;
}

}  // namespace

std::optional<double> wms3im(const ColorImage& rendered, const ColorImage& ground,
                             const MaskImage& silhouette, const Wms3imOptions& opt) {
  if (rendered.width() != ground.width() || rendered.height() != ground.height() ||
      rendered.width() != silhouette.width() || rendered.height() != silhouette.height())
    throw std::invalid_argument("wms3im: image dimensions differ");
  bool any = false;
  for (const auto v : silhouette.data()) any = any || v;
  if (!any) return std::nullopt;

  Image<double> x = to_gray(rendered), y = to_gray(ground);
  MaskImage mask = silhouette;
  double score = 1.0;
  for (int j = 0; j < opt.scales; ++j) {
    if (j > 0) {
      x = downsample2(x);
      y = downsample2(y);
      mask = downsample2_or(mask);
    }
    const PooledTerms t = pooled_ssim_terms(x, y, mask, opt);
    const double l = std::max(t.l, 1e-12), c = std::max(t.c, 1e-12), s = std::max(t.s, 1e-12);
    score *= std::pow(l, opt.alpha[j]) * std::pow(c, opt.beta[j]) * std::pow(s, opt.gamma[j]);
  }
  return score;
}

}  // namespace volcap::eval
