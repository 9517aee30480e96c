// SPDX-License-Identifier: Apache-2.0
#include "volcap/synth/capsule.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace volcap::synth {
namespace {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

Vec3 closest_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  return a + std::clamp(t, 0.0, 1.0) * ab;
}

// Smallest positive root of the ray/capsule intersection, or nothing.
std::optional<double> ray_capsule(const Vec3& ro, const Vec3& rd, const Vec3& pa, const Vec3& pb,
                                  double ra) {
  const Vec3 ba = pb - pa;
  const Vec3 oa = ro - pa;
  const double baba = ba.dot(ba);
  const double bard = ba.dot(rd);
  const double baoa = ba.dot(oa);
  const double rdoa = rd.dot(oa);
  const double oaoa = oa.dot(oa);
  const double a = baba - bard * bard;
  const double b = baba * rdoa - baoa * bard;
  const double c = baba * oaoa - baoa * baoa - ra * ra * baba;
  if (a > 1e-12) {
    const double h = b * b - a * c;
    if (h >= 0) {
      const double t = (-b - std::sqrt(h)) / a;
      const double y = baoa + t * bard;
      if (t > 0 && y > 0 && y < baba) return t;
    }
  }
  // end caps
  std::optional<double> best;
  for (const Vec3& center : {pa, pb}) {
    const Vec3 oc = ro - center;
    const double cb = rd.dot(oc);
    const double cc = oc.dot(oc) - ra * ra;
    const double h = cb * cb - cc;
    if (h < 0) continue;
    const double t = -cb - std::sqrt(h);
    if (t > 0 && (!best || t < *best)) best = t;
  }
  return best;
}

}  // namespace

double sdf(const CapsuleBody& body, const Vec3& x) {
  double d = std::numeric_limits<double>::infinity();
  for (int b = 0; b < kBoneCount; ++b)
    d = std::min(d, point_segment_distance(x, body.joints[kBones[b][0]], body.joints[kBones[b][1]]) -
                        body.radii[b]);
  return d;
}

std::optional<RayHit> intersect(const CapsuleBody& body, const Vec3& origin, const Vec3& dir) {
  std::optional<RayHit> best;
  for (int b = 0; b < kBoneCount; ++b) {
    const Vec3& a = body.joints[kBones[b][0]];
    const Vec3& c = body.joints[kBones[b][1]];
    const auto t = ray_capsule(origin, dir, a, c, body.radii[b]);
    if (t && (!best || *t < best->t)) {
      RayHit hit;
      hit.t = *t;
      hit.bone = b;
      hit.point = origin + *t * dir;
      hit.normal = (hit.point - closest_on_segment(hit.point, a, c)).normalized();
      best = hit;
    }
  }
  return best;
}

std::array<double, 5> CapsuleBody::extremity_geodesics() const {
  auto bone_len = [&](int b) { return bone_length(b); };
  const double to_neck = bone_len(0);
  return {
      to_neck + bone_len(1),                              // head
      to_neck + bone_len(2) + bone_len(3) + bone_len(4),  // wrist L
      to_neck + bone_len(5) + bone_len(6) + bone_len(7),  // wrist R
      bone_len(8) + bone_len(9) + bone_len(10),           // ankle L
      bone_len(11) + bone_len(12) + bone_len(13),         // ankle R
  };
}

std::vector<Vec3> sample_surface(const CapsuleBody& body, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  std::array<double, kBoneCount> area{};
  double total = 0;
  for (int b = 0; b < kBoneCount; ++b) {
    const double r = body.radii[b];
    const double len = body.bone_length(b);
    area[b] = 2 * std::numbers::pi * r * len + 4 * std::numbers::pi * r * r;
    total += area[b];
  }

  std::vector<Vec3> points;
  points.reserve(count);
  int guard = 0;
  while (static_cast<int>(points.size()) < count && guard < count * 200) {
    ++guard;
    double pick = uni(rng) * total;
    int b = 0;
    while (b + 1 < kBoneCount && pick > area[b]) pick -= area[b], ++b;

    const Vec3& a = body.joints[kBones[b][0]];
    const Vec3& c = body.joints[kBones[b][1]];
    const double r = body.radii[b];
    const double len = body.bone_length(b);
    const double cyl_area = 2 * std::numbers::pi * r * len;

    Vec3 p;
    if (uni(rng) * area[b] < cyl_area) {
      // lateral surface
      const Vec3 axis = (c - a).normalized();
      Vec3 u = axis.cross(Vec3(0, 0, 1));
      if (u.squaredNorm() < 1e-12) u = axis.cross(Vec3(1, 0, 0));
      u.normalize();
      const Vec3 v = axis.cross(u);
      const double phi = 2 * std::numbers::pi * uni(rng);
      p = a + uni(rng) * len * axis + r * (std::cos(phi) * u + std::sin(phi) * v);
    } else {
      // spherical caps: sample the full sphere around a random end
      const Vec3& center = uni(rng) < 0.5 ? a : c;
      std::normal_distribution<double> gauss(0.0, 1.0);
      Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
      if (dir.squaredNorm() < 1e-12) continue;
      p = center + r * dir.normalized();
    }
    // keep only points on the union boundary
    if (sdf(body, p) > -1e-6) points.push_back(p);
  }
  return points;
}

CapsuleBody make_xpose_body() {
  CapsuleBody b;
  auto& j = b.joints;
  j[kTorso] = {0, 1150, 0};
  j[kNeck] = {0, 1390, 0};
  j[kHead] = {0, 1660, 0};

  // arms spread up-and-out, elbows bent ~155 deg; right side 3% shorter
  j[kShoulderL] = {-190, 1352, 0};
  j[kShoulderR] = {190, 1355, 0};
  const Vec3 up_out_l(-std::cos(0.62), std::sin(0.62), 0);   // ~35.5 deg above horizontal
  const Vec3 up_out_r(std::cos(0.60), std::sin(0.60), 0);
  const Vec3 fore_l(-std::cos(0.18), std::sin(0.18), 0);     // ~10 deg
  const Vec3 fore_r(std::cos(0.16), std::sin(0.16), 0);
  j[kElbowL] = j[kShoulderL] + 285.0 * up_out_l;
  j[kWristL] = j[kElbowL] + 255.0 * fore_l;
  j[kElbowR] = j[kShoulderR] + 276.0 * up_out_r;
  j[kWristR] = j[kElbowR] + 247.0 * fore_r;

  // legs spread, knees bent ~160 deg; right side 2% shorter
  j[kHipL] = {-105, 925, 0};
  j[kHipR] = {105, 925, 0};
  const Vec3 thigh_l(-std::sin(0.38), -std::cos(0.38), 0);   // ~22 deg from vertical
  const Vec3 thigh_r(std::sin(0.36), -std::cos(0.36), 0);
  const Vec3 shank_l(-std::sin(0.12), -std::cos(0.12), 0);
  const Vec3 shank_r(std::sin(0.10), -std::cos(0.10), 0);
  j[kKneeL] = j[kHipL] + 400.0 * thigh_l;
  j[kAnkleL] = j[kKneeL] + 390.0 * shank_l;
  j[kKneeR] = j[kHipR] + 392.0 * thigh_r;
  j[kAnkleR] = j[kKneeR] + 382.0 * shank_r;

  b.radii = {125, 82,
             52, 45, 38,
             52, 45, 38,
             72, 64, 50,
             72, 64, 50};
  b.colors = {{Rgb8{200, 60, 60}, Rgb8{240, 200, 160},
               Rgb8{60, 120, 200}, Rgb8{70, 150, 210}, Rgb8{90, 180, 220},
               Rgb8{190, 120, 40}, Rgb8{210, 140, 60}, Rgb8{230, 170, 90},
               Rgb8{60, 160, 80}, Rgb8{80, 180, 90}, Rgb8{110, 200, 110},
               Rgb8{140, 70, 170}, Rgb8{160, 90, 190}, Rgb8{180, 120, 210}}};
  return b;
}

std::vector<CapsuleBody> make_kick_sequence(int frames) {
  std::vector<CapsuleBody> seq;
  seq.reserve(frames);
  const CapsuleBody base = make_xpose_body();
  const double thigh_len = (base.joints[kKneeR] - base.joints[kHipR]).norm();
  const double shank_len = (base.joints[kAnkleR] - base.joints[kKneeR]).norm();
  for (int f = 0; f < frames; ++f) {
    CapsuleBody b = base;
    const double s = frames > 1 ? static_cast<double>(f) / (frames - 1) : 0.0;
    // one flex-extend cycle: thigh swings forward while the knee flexes
    const double swing = std::sin(std::numbers::pi * s);                 // 0..1..0
    const double thigh_pitch = swing * 1.05;                             // rad, forward (+z)
    const double knee_flex = swing * 1.45;                               // rad of flexion
    const Vec3 thigh_dir(0.12, -std::cos(thigh_pitch), std::sin(thigh_pitch));
    b.joints[kKneeR] = b.joints[kHipR] + thigh_len * thigh_dir.normalized();
    // shank direction: thigh direction rotated back by the flexion angle (sagittal plane)
    const double shank_pitch = thigh_pitch - knee_flex;
    const Vec3 shank_dir(0.12, -std::cos(shank_pitch), std::sin(shank_pitch));
    b.joints[kAnkleR] = b.joints[kKneeR] + shank_len * shank_dir.normalized();
    seq.push_back(b);
  }
  return seq;
}

double knee_angle_deg(const CapsuleBody& body, bool right) {
  const int hip = right ? kHipR : kHipL;
  const int knee = right ? kKneeR : kKneeL;
  const int ankle = right ? kAnkleR : kAnkleL;
  const Vec3 u = (body.joints[hip] - body.joints[knee]).normalized();
  const Vec3 v = (body.joints[ankle] - body.joints[knee]).normalized();
  return std::acos(std::clamp(u.dot(v), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

}  // namespace volcap::synth
