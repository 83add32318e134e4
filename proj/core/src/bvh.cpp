#include "hoifit/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hoifit {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Ericson, Real-Time Collision Detection, section 5.1.5.
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  Vec3 bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double v = d1 / (d1 - d3);
    return a + v * ab;
  }

  Vec3 cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double w = d2 / (d2 - d6);
    return a + w * ac;
  }

  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + w * (c - b);
  }

  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom;
  double w = vc * denom;
  return a + ab * v + ac * w;
}

bool ray_triangle_watertight(const Vec3& org, const Vec3& dir,
                             const Vec3& a, const Vec3& b, const Vec3& c,
                             double& t_out) {
  // Woop/Benthin/Wald shear-and-scale test. The edge functions U, V, W for a
  // shared edge are computed from the same two transformed vertices in both
  // triangles, so boundary cases resolve the same way on both sides.
  int kz = 0;
  Vec3 ad = dir.cwiseAbs();
  if (ad.y() > ad.x()) kz = 1;
  if (ad.z() > ad[kz]) kz = 2;
  int kx = (kz + 1) % 3;
  int ky = (kz + 2) % 3;
  if (dir[kz] < 0.0) std::swap(kx, ky);

  const double sx = dir[kx] / dir[kz];
  const double sy = dir[ky] / dir[kz];
  const double sz = 1.0 / dir[kz];

  const Vec3 A = a - org, B = b - org, C = c - org;
  const double ax = A[kx] - sx * A[kz];
  const double ay = A[ky] - sy * A[kz];
  const double bx = B[kx] - sx * B[kz];
  const double by = B[ky] - sy * B[kz];
  const double cx = C[kx] - sx * C[kz];
  const double cy = C[ky] - sy * C[kz];

  const double u = cx * by - cy * bx;
  const double v = ax * cy - ay * cx;
  const double w = bx * ay - by * ax;

  if ((u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0)) return false;

  const double det = u + v + w;
  if (det == 0.0) return false;

  const double az = sz * A[kz];
  const double bz = sz * B[kz];
  const double cz = sz * C[kz];
  const double t = (u * az + v * bz + w * cz) / det;
  if (!(t > kRayEpsilon)) return false;

  t_out = t;
  return true;
}

namespace {

inline double box_distance_sq(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    double d = 0.0;
    if (p[k] < lo[k]) d = lo[k] - p[k];
    else if (p[k] > hi[k]) d = p[k] - hi[k];
    d2 += d * d;
  }
  return d2;
}

inline bool ray_box(const Vec3& org, const Vec3& inv_dir, const Vec3& lo, const Vec3& hi) {
  double tmin = 0.0;
  double tmax = std::numeric_limits<double>::max();
  for (int k = 0; k < 3; ++k) {
    double t0 = (lo[k] - org[k]) * inv_dir[k];
    double t1 = (hi[k] - org[k]) * inv_dir[k];
    if (inv_dir[k] < 0.0) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmax < tmin) return false;
  }
  return true;
}

constexpr int kLeafSize = 4;

}  // namespace

TriangleBvh::TriangleBvh(const TriMesh& mesh)
    : mesh_(std::make_shared<TriMesh>(mesh)) {
  const int n = static_cast<int>(mesh.faces.size());
  if (n == 0) return;
  tri_order_.resize(n);
  std::vector<Vec3> centroids(n);
  for (int i = 0; i < n; ++i) {
    tri_order_[i] = i;
    const auto& f = mesh.faces[i];
    centroids[i] = (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
  }
  nodes_.reserve(2 * n);
  nodes_.emplace_back();
  build(0, 0, n, tri_order_, centroids);
}

void TriangleBvh::build(int node, int begin, int end, std::vector<int>& order,
                        std::vector<Vec3>& centroids) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  const auto& mesh = *mesh_;
  for (int i = begin; i < end; ++i) {
    const auto& f = mesh.faces[order[i]];
    for (int k = 0; k < 3; ++k) {
      lo = lo.cwiseMin(mesh.vertices[f[k]]);
      hi = hi.cwiseMax(mesh.vertices[f[k]]);
    }
  }
  nodes_[node].lo = lo;
  nodes_[node].hi = hi;

  const int count = end - begin;
  if (count <= kLeafSize) {
    nodes_[node].left = begin;
    nodes_[node].right = -1;
    nodes_[node].count = count;
    return;
  }

  Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y() > extent.x()) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;

  int mid = begin + count / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](int ia, int ib) {
                     if (centroids[ia][axis] != centroids[ib][axis]) {
                       return centroids[ia][axis] < centroids[ib][axis];
                     }
                     return ia < ib;  // deterministic tie break
                   });

  int left = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  nodes_.emplace_back();
  nodes_[node].left = left;
  nodes_[node].right = left + 1;
  nodes_[node].count = 0;
  build(left, begin, mid, order, centroids);
  build(left + 1, mid, end, order, centroids);
}

void TriangleBvh::gather_hits(const Vec3& org, const Vec3& dir,
                              std::vector<RayHit>& hits) const {
  if (nodes_.empty()) return;
  const auto& mesh = *mesh_;
  const Vec3 inv_dir = dir.cwiseInverse();  // +/-inf on zero components is fine

  int stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!ray_box(org, inv_dir, node.lo, node.hi)) continue;
    if (node.count > 0) {
      for (int i = 0; i < node.count; ++i) {
        int face = tri_order_[node.left + i];
        const auto& f = mesh.faces[face];
        double t;
        if (ray_triangle_watertight(org, dir, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                    mesh.vertices[f[2]], t)) {
          RayHit hit;
          hit.t = t;
          hit.face = face;
          hit.point = org + t * dir;
          hit.entering = dir.dot(mesh.face_normal(face)) < 0.0;
          hits.push_back(hit);
        }
      }
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
}

std::vector<RayHit> TriangleBvh::all_hits(const Vec3& org, const Vec3& dir) const {
  std::vector<RayHit> hits;
  gather_hits(org, dir, hits);
  std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.face < b.face;
  });
  // Merge duplicates: a ray through a shared edge reports both faces.
  std::vector<RayHit> merged;
  merged.reserve(hits.size());
  for (const auto& h : hits) {
    if (!merged.empty() && h.t - merged.back().t <= kHitMergeEpsilon) continue;
    merged.push_back(h);
  }
  return merged;
}

int TriangleBvh::count_hits(const Vec3& org, const Vec3& dir) const {
  return static_cast<int>(all_hits(org, dir).size());
}

ClosestPointResult TriangleBvh::closest_point(const Vec3& p) const {
  ClosestPointResult best;
  best.distance = std::numeric_limits<double>::max();
  if (nodes_.empty()) return best;
  const auto& mesh = *mesh_;
  double best_sq = std::numeric_limits<double>::max();

  struct Entry {
    double dist_sq;
    int node;
  };
  Entry stack[64];
  int top = 0;
  stack[top++] = {box_distance_sq(p, nodes_[0].lo, nodes_[0].hi), 0};
  while (top > 0) {
    Entry e = stack[--top];
    if (e.dist_sq >= best_sq) continue;
    const Node& node = nodes_[e.node];
    if (node.count > 0) {
      for (int i = 0; i < node.count; ++i) {
        int face = tri_order_[node.left + i];
        const auto& f = mesh.faces[face];
        Vec3 q = closest_point_on_triangle(p, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                           mesh.vertices[f[2]]);
        double d2 = (q - p).squaredNorm();
        if (d2 < best_sq) {
          best_sq = d2;
          best.point = q;
          best.face = face;
        }
      }
    } else {
      double dl = box_distance_sq(p, nodes_[node.left].lo, nodes_[node.left].hi);
      double dr = box_distance_sq(p, nodes_[node.right].lo, nodes_[node.right].hi);
      // Push the farther child first so the nearer one is explored next.
      if (dl < dr) {
        if (dr < best_sq) stack[top++] = {dr, node.right};
        if (dl < best_sq) stack[top++] = {dl, node.left};
      } else {
        if (dl < best_sq) stack[top++] = {dl, node.left};
        if (dr < best_sq) stack[top++] = {dr, node.right};
      }
    }
  }
  best.distance = std::sqrt(best_sq);
  return best;
}

}  // namespace hoifit
