#pragma once

// Independent reference implementations used as test oracles. These stay
// deliberately naive (exhaustive scans, textbook formulas) and must not call
// into the accelerated paths they check.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hoifit/bvh.hpp"
#include "hoifit/mesh.hpp"

namespace hoifit::oracles {

/// Classic Moller-Trumbore intersection, no acceleration structure.
inline bool moller_trumbore(const Vec3& org, const Vec3& dir, const Vec3& a,
                            const Vec3& b, const Vec3& c, double& t_out) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 pvec = dir.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < 1e-14) return false;
  const double inv_det = 1.0 / det;
  const Vec3 tvec = org - a;
  const double u = tvec.dot(pvec) * inv_det;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 qvec = tvec.cross(e1);
  const double v = dir.dot(qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) return false;
  t_out = e2.dot(qvec) * inv_det;
  return t_out > 1e-9;
}

/// Exhaustive per-triangle scan with the same watertight predicate the BVH
/// uses, so hit lists can be compared exactly.
inline std::vector<RayHit> brute_force_hits(const TriMesh& mesh, const Vec3& org,
                                            const Vec3& dir) {
  std::vector<RayHit> hits;
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    double t;
    if (ray_triangle_watertight(org, dir, mesh.vertices[face[0]], mesh.vertices[face[1]],
                                mesh.vertices[face[2]], t)) {
      RayHit hit;
      hit.t = t;
      hit.face = static_cast<int>(f);
      hit.point = org + t * dir;
      hits.push_back(hit);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.face < b.face;
  });
  std::vector<RayHit> merged;
  for (const auto& h : hits) {
    if (!merged.empty() && h.t - merged.back().t <= kHitMergeEpsilon) continue;
    merged.push_back(h);
  }
  return merged;
}

/// Exhaustive closest-distance scan over every triangle.
inline double brute_force_distance(const TriMesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::max();
  for (const auto& f : mesh.faces) {
    Vec3 q = closest_point_on_triangle(p, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                       mesh.vertices[f[2]]);
    best = std::min(best, (q - p).norm());
  }
  return best;
}

inline double analytic_sphere_sdf(const Vec3& p, const Vec3& center, double radius) {
  return (p - center).norm() - radius;
}

inline Vec3 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(gauss(rng), gauss(rng), gauss(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Vec3 random_point_in_box(std::mt19937_64& rng, const Vec3& lo, const Vec3& hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return Vec3(lo.x() + u(rng) * (hi.x() - lo.x()), lo.y() + u(rng) * (hi.y() - lo.y()),
              lo.z() + u(rng) * (hi.z() - lo.z()));
}

}  // namespace hoifit::oracles
