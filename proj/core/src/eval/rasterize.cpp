// SPDX-License-Identifier: Apache-2.0
#include "volcap/eval/rasterize.hpp"

#include <cmath>

namespace volcap::eval {
namespace {

constexpr double kNearMm = 1.0;
constexpr Rgb8 kUntexturedGray{200, 200, 200};

Rgb8 sample_bilinear(const ColorImage& img, const Vec2& uv_norm) {
  const Vec2 p = appearance::denormalize_uv(uv_norm, img.width(), img.height());
  const int x0 = std::clamp(static_cast<int>(std::floor(p.x())), 0, img.width() - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(p.y())), 0, img.height() - 1);
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double tx = std::clamp(p.x() - x0, 0.0, 1.0), ty = std::clamp(p.y() - y0, 0.0, 1.0);
  auto mix = [&](auto get) {
    const double a = get(img.at(x0, y0)) * (1 - tx) + get(img.at(x1, y0)) * tx;
    const double b = get(img.at(x0, y1)) * (1 - tx) + get(img.at(x1, y1)) * tx;
    return a * (1 - ty) + b * ty;
  };
  return {static_cast<std::uint8_t>(std::lround(mix([](Rgb8 c) { return double(c.r); }))),
          static_cast<std::uint8_t>(std::lround(mix([](Rgb8 c) { return double(c.g); }))),
          static_cast<std::uint8_t>(std::lround(mix([](Rgb8 c) { return double(c.b); })))};
}

struct Vec3d01 {
  double r = 0, g = 0, b = 0;
};

}  // namespace

RenderedView rasterize(const appearance::TexturedMesh& tm, const CameraView& camera,
                       const std::vector<ColorImage>& view_images, RenderMode mode) {
  const int w = camera.intr.width, h = camera.intr.height;
  RenderedView out;
  out.depth = Image<float>(w, h, 0.f);
  out.color = ColorImage(w, h, Rgb8{0, 0, 0});
  out.silhouette = MaskImage(w, h, 0);
  const TriMesh& mesh = tm.mesh;
  if (mesh.empty()) return out;

  const int k_count = tm.sensor_count;
  const Pose world_to_cam = camera.pose.inverse();

  // vertex colors for the color-per-vertex mode: equal-weight average of
  // the visible views' texture samples
  std::vector<Vec3d01> vertex_colors;
  if (mode == RenderMode::kColorPerVertex) {
    vertex_colors.resize(mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      double r = 0, g = 0, b = 0;
      int n = 0;
      for (int k = 0; k < k_count; ++k) {
        if (!tm.visible[k][v]) continue;
        const Rgb8 c = sample_bilinear(view_images[k], tm.uv[k][v]);
        r += c.r;
        g += c.g;
        b += c.b;
        ++n;
      }
      if (n > 0)
        vertex_colors[v] = {r / n, g / n, b / n};
      else
        vertex_colors[v] = {double(kUntexturedGray.r), double(kUntexturedGray.g),
                            double(kUntexturedGray.b)};
    }
  }

  std::vector<Vec3> cam_pos(mesh.vertex_count());
  std::vector<Vec2> screen(mesh.vertex_count());
  std::vector<bool> in_front(mesh.vertex_count());
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    cam_pos[v] = world_to_cam.apply(mesh.vertices[v]);
    in_front[v] = cam_pos[v].z() > kNearMm;
    if (in_front[v])
      screen[v] = Vec2(camera.intr.fx * cam_pos[v].x() / cam_pos[v].z() + camera.intr.cx,
                       camera.intr.fy * cam_pos[v].y() / cam_pos[v].z() + camera.intr.cy);
  }

  for (const auto& tri : mesh.triangles) {
    const int a = tri[0], b = tri[1], c = tri[2];
    if (!in_front[a] || !in_front[b] || !in_front[c]) continue;
    const Vec2 &pa = screen[a], &pb = screen[b], &pc = screen[c];
    const double area = (pb - pa).x() * (pc - pa).y() - (pb - pa).y() * (pc - pa).x();
    if (std::abs(area) < 1e-12) continue;

    // which views texture this triangle (visible at all three corners)
    std::uint32_t tri_views = 0;
    if (mode == RenderMode::kUvBlend)
      for (int k = 0; k < k_count; ++k)
        if (tm.visible[k][a] && tm.visible[k][b] && tm.visible[k][c]) tri_views |= 1u << k;

    const int x0 = std::max(0, static_cast<int>(std::ceil(std::min({pa.x(), pb.x(), pc.x()}))));
    const int x1 = std::min(w - 1, static_cast<int>(std::floor(std::max({pa.x(), pb.x(), pc.x()}))));
    const int y0 = std::max(0, static_cast<int>(std::ceil(std::min({pa.y(), pb.y(), pc.y()}))));
    const int y1 = std::min(h - 1, static_cast<int>(std::floor(std::max({pa.y(), pb.y(), pc.y()}))));

    const double iza = 1.0 / cam_pos[a].z(), izb = 1.0 / cam_pos[b].z(), izc = 1.0 / cam_pos[c].z();
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const Vec2 p(x, y);
        double la = (pb - p).x() * (pc - p).y() - (pb - p).y() * (pc - p).x();
        double lb = (pc - p).x() * (pa - p).y() - (pc - p).y() * (pa - p).x();
        double lc = (pa - p).x() * (pb - p).y() - (pa - p).y() * (pb - p).x();
        if (area < 0) {
          la = -la;
          lb = -lb;
          lc = -lc;
        }
        if (la < 0 || lb < 0 || lc < 0) continue;
        const double denom = la + lb + lc;
        if (denom <= 0) continue;
        la /= denom;
        lb /= denom;
        lc /= denom;

        const double inv_z = la * iza + lb * izb + lc * izc;
        const double z = 1.0 / inv_z;
        auto& zbuf = out.depth.at(x, y);
        if (zbuf != 0.f && z >= zbuf) continue;
        zbuf = static_cast<float>(z);
        out.silhouette.at(x, y) = 1;

        if (mode == RenderMode::kColorPerVertex) {
          auto interp = [&](auto get) {
            return z * (la * get(vertex_colors[a]) * iza + lb * get(vertex_colors[b]) * izb +
                        lc * get(vertex_colors[c]) * izc);
          };
          out.color.at(x, y) = {
              static_cast<std::uint8_t>(std::clamp(interp([](auto& v) { return v.r; }), 0.0, 255.0)),
              static_cast<std::uint8_t>(std::clamp(interp([](auto& v) { return v.g; }), 0.0, 255.0)),
              static_cast<std::uint8_t>(std::clamp(interp([](auto& v) { return v.b; }), 0.0, 255.0))};
        } else {
          double r = 0, g = 0, bl = 0, wsum = 0;
          for (int k = 0; k < k_count; ++k) {
            if (!(tri_views & (1u << k))) continue;
            const double wk = z * (la * tm.weight[k][a] * iza + lb * tm.weight[k][b] * izb +
                                   lc * tm.weight[k][c] * izc);
            if (wk <= 1e-9) continue;
            const Vec2 uv =
                z * (la * tm.uv[k][a] * iza + lb * tm.uv[k][b] * izb + lc * tm.uv[k][c] * izc);
            const Rgb8 s = sample_bilinear(view_images[k], uv);
            r += wk * s.r;
            g += wk * s.g;
            bl += wk * s.b;
            wsum += wk;
          }
          if (wsum > 1e-9)
            out.color.at(x, y) = {static_cast<std::uint8_t>(std::clamp(r / wsum, 0.0, 255.0)),
                                  static_cast<std::uint8_t>(std::clamp(g / wsum, 0.0, 255.0)),
                                  static_cast<std::uint8_t>(std::clamp(bl / wsum, 0.0, 255.0))};
          else
            out.color.at(x, y) = kUntexturedGray;
        }
      }
  }
  return out;
}

}  // namespace volcap::eval
