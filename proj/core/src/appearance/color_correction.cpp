// SPDX-License-Identifier: Apache-2.0
#include "volcap/appearance/color.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace volcap::appearance {
namespace {

// uniform grid over one cloud for radius-bounded nearest neighbors
class GridIndex {
 public:
  GridIndex(std::span<const Vec3> points, double cell) : points_(points), cell_(cell) {
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
      cells_[key(points[i])].push_back(i);
  }

  // nearest neighbor within the cell radius; ties broken by smaller index
  int nearest(const Vec3& q, double max_dist) const {
    int best = -1;
    double best_d2 = max_dist * max_dist;
    const auto [cx, cy, cz] = coords(q);
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const auto it = cells_.find(pack(cx + dx, cy + dy, cz + dz));
          if (it == cells_.end()) continue;
          for (int i : it->second) {
            const double d2 = (points_[i] - q).squaredNorm();
            if (d2 < best_d2 || (d2 == best_d2 && best >= 0 && i < best)) {
              best_d2 = d2;
              best = i;
            }
          }
        }
    // strict inequality on the threshold
    if (best >= 0 && (points_[best] - q).norm() < max_dist) return best;
    return -1;
  }

 private:
  std::tuple<long, long, long> coords(const Vec3& p) const {
    return {static_cast<long>(std::floor(p.x() / cell_)),
            static_cast<long>(std::floor(p.y() / cell_)),
            static_cast<long>(std::floor(p.z() / cell_))};
  }
  static std::uint64_t pack(long x, long y, long z) {
    auto u = [](long v) { return static_cast<std::uint64_t>(v + (1L << 20)) & 0x1FFFFF; };
    return (u(x) << 42) | (u(y) << 21) | u(z);
  }
  std::uint64_t key(const Vec3& p) const {
    const auto [x, y, z] = coords(p);
    return pack(x, y, z);
  }

  std::span<const Vec3> points_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace

std::vector<std::pair<int, int>> mutual_closest_pairs(std::span<const Vec3> a,
                                                      std::span<const Vec3> b,
                                                      double max_dist_mm) {
  std::vector<std::pair<int, int>> pairs;
  if (a.empty() || b.empty()) return pairs;
  const GridIndex index_a(a, max_dist_mm);
  const GridIndex index_b(b, max_dist_mm);
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    const int j = index_b.nearest(a[i], max_dist_mm);
    if (j < 0) continue;
    if (index_a.nearest(b[j], max_dist_mm) == i) pairs.emplace_back(i, j);
  }
  return pairs;
}

void accumulate_color_pairs(const recon::OrientedCloud& cloud_a, const ColorImage& image_a,
                            const recon::OrientedCloud& cloud_b, const ColorImage& image_b,
                            std::vector<ColorPair>& pairs, double max_dist_mm) {
  std::vector<Vec3> pa(cloud_a.points.size()), pb(cloud_b.points.size());
  for (std::size_t i = 0; i < pa.size(); ++i) pa[i] = cloud_a.points[i].position;
  for (std::size_t i = 0; i < pb.size(); ++i) pb[i] = cloud_b.points[i].position;
  for (const auto& [i, j] : mutual_closest_pairs(pa, pb, max_dist_mm)) {
    const auto& qa = cloud_a.points[i];
    const auto& qb = cloud_b.points[j];
    pairs.push_back({image_a.at(qa.px, qa.py), image_b.at(qb.px, qb.py)});
  }
}

ValueMap fit_value_map(std::span<const ColorPair> pairs, const ValueFitOptions& options) {
  const int n = static_cast<int>(pairs.size());
  if (n < 10) throw std::runtime_error("fit_value_map: insufficient color diversity (< 10 pairs)");

  std::vector<double> va(n), vb(n);
  double lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    va[i] = rgb_to_hsv(pairs[i].first).v;
    vb[i] = rgb_to_hsv(pairs[i].second).v;
    lo = std::min(lo, va[i]);
    hi = std::max(hi, va[i]);
  }
  if (hi - lo < 1e-6)
    throw std::runtime_error("fit_value_map: insufficient color diversity (constant value)");

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  int best_count = -1;
  std::vector<int> best_inliers;
  for (int it = 0; it < options.ransac_iterations; ++it) {
    const int i = pick(rng), j = pick(rng);
    if (std::abs(va[i] - va[j]) < 1e-6) continue;
    const double a = (vb[j] - vb[i]) / (va[j] - va[i]);
    const double b = vb[i] - a * va[i];
    std::vector<int> inliers;
    for (int m = 0; m < n; ++m)
      if (std::abs(a * va[m] + b - vb[m]) < options.inlier_threshold) inliers.push_back(m);
    if (static_cast<int>(inliers.size()) > best_count) {
      best_count = static_cast<int>(inliers.size());
      best_inliers = std::move(inliers);
    }
  }
  if (best_count < 2) throw std::runtime_error("fit_value_map: no consensus line");

  // least squares on the inliers
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int m : best_inliers) {
    sx += va[m];
    sy += vb[m];
    sxx += va[m] * va[m];
    sxy += va[m] * vb[m];
  }
  const double k = static_cast<double>(best_inliers.size());
  const double denom = k * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw std::runtime_error("fit_value_map: degenerate inlier set");
  ValueMap map;
  map.gain = (k * sxy - sx * sy) / denom;
  map.offset = (sy - map.gain * sx) / k;
  return map;
}

Rgb8 ColorCorrection::apply(int sensor, const Rgb8& c) const {
  const ValueMap& m = maps.at(sensor);
  Hsv hsv = rgb_to_hsv(c);
  hsv.v = m.apply(hsv.v);
  return hsv_to_rgb(hsv);
}

ColorImage ColorCorrection::apply(int sensor, const ColorImage& image) const {
  ColorImage out = image;
  const ValueMap& m = maps.at(sensor);
  if (m.gain == 1.0 && m.offset == 0.0) return out;
  for (auto& c : out.data()) {
    Hsv hsv = rgb_to_hsv(c);
    hsv.v = m.apply(hsv.v);
    c = hsv_to_rgb(hsv);
  }
  return out;
}

ColorCorrection ColorCorrection::identity(int sensor_count, int reference) {
  ColorCorrection cc;
  cc.maps.assign(sensor_count, ValueMap{});
  cc.reference = reference;
  return cc;
}

ColorCorrection chain_to_reference(std::span<const PairwiseValueMap> edges, int reference,
                                   int sensor_count) {
  ColorCorrection cc;
  cc.maps.assign(sensor_count, ValueMap{});
  cc.reference = reference;
  std::vector<char> known(sensor_count, 0);
  known.at(reference) = 1;

  std::queue<int> frontier;
  frontier.push(reference);
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop();
    for (const auto& e : edges) {
      if (known[e.from] && !known[e.to]) {
        if (e.from != cur) continue;
        // V_to = map(V_from): correcting 'to' toward 'from' uses the inverse
        cc.maps[e.to] = e.map.inverse().then(cc.maps[e.from]);
        known[e.to] = 1;
        frontier.push(e.to);
      } else if (known[e.to] && !known[e.from]) {
        if (e.to != cur) continue;
        cc.maps[e.from] = e.map.then(cc.maps[e.to]);
        known[e.from] = 1;
        frontier.push(e.from);
      }
    }
  }
  for (int k = 0; k < sensor_count; ++k)
    if (!known[k])
      throw std::runtime_error("chain_to_reference: sensor " + std::to_string(k) +
                               " not connected to the reference");
  return cc;
}

void write_color_correction(const std::filesystem::path& path, const ColorCorrection& cc) {
  nlohmann::json j;
  j["reference"] = cc.reference;
  j["sensors"] = nlohmann::json::array();
  for (const auto& m : cc.maps) j["sensors"].push_back({{"a", m.gain}, {"b", m.offset}});
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write color correction: " + path.string());
  out << j.dump(2) << '\n';
}

ColorCorrection read_color_correction(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read color correction: " + path.string());
  const auto j = nlohmann::json::parse(in);
  ColorCorrection cc;
  cc.reference = j.at("reference");
  for (const auto& jm : j.at("sensors")) cc.maps.push_back({jm.at("a"), jm.at("b")});
  return cc;
}

}  // namespace volcap::appearance
