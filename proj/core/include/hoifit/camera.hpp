#pragma once

#include <optional>
#include <vector>

#include "hoifit/types.hpp"

namespace hoifit {

/// Pinhole camera with world-to-camera extrinsics. The camera looks down its
/// local +z axis; points in front of the camera have positive camera-frame z.
struct CameraModel {
  Mat3 K = Mat3::Identity();      // intrinsics, pixels
  Mat3 R = Mat3::Identity();      // world -> camera rotation
  Vec3 t = Vec3::Zero();          // world -> camera translation, meters
  int width = 0;
  int height = 0;

  Vec3 to_camera(const Vec3& p_world) const { return R * p_world + t; }
  Vec3 to_world(const Vec3& p_cam) const { return R.transpose() * (p_cam - t); }
  Vec3 center() const { return -(R.transpose() * t); }

  /// Viewing direction of the optical axis in world coordinates.
  Vec3 view_direction() const { return R.row(2).transpose(); }

  /// World-space ray direction through the continuous image point (u, v),
  /// normalized. Pixel index (i, j) has its center at (i + 0.5, j + 0.5).
  Vec3 ray_direction(double u, double v) const;

  /// True when K is upper triangular with positive focals and R is a proper
  /// rotation; used by manifest validation.
  bool is_valid(double tol = 1e-6) const;

  /// Build from an eye point looking at a target, with a world up hint.
  static CameraModel look_at(const Vec3& eye, const Vec3& target, const Vec3& up,
                             double fx, double fy, double cx, double cy,
                             int width, int height);
};

struct ProjectedPoint {
  Vec2 pixel = Vec2::Zero();
  bool valid = false;  // false when camera-frame z <= 0
};

/// Pinhole projection of world points; points at or behind the camera plane
/// are flagged invalid rather than projected.
std::vector<ProjectedPoint> project_points(const CameraModel& camera,
                                           const std::vector<Vec3>& points_world);

/// Per-frame depth map in meters. Entries that are zero, negative, or NaN are
/// invalid; this encodes the valid-pixel set.
struct DepthFrame {
  int width = 0;
  int height = 0;
  std::vector<float> depth;  // row-major, height*width, meters

  float at(int u, int v) const { return depth[static_cast<size_t>(v) * width + u]; }
  float& at(int u, int v) { return depth[static_cast<size_t>(v) * width + u]; }
  bool valid(int u, int v) const {
    float d = at(u, v);
    return std::isfinite(d) && d > 0.0f;
  }
  size_t valid_count() const;

  static DepthFrame zeros(int width, int height);
};

/// Back-projects every valid pixel to a world point:
///   R^T (D(u,v) * K^{-1} [u, v, 1]^T - t)
/// Output is in raster order (rows of v, then u). An empty valid set yields
/// an empty cloud.
std::vector<Vec3> backproject_depth(const DepthFrame& depth, const CameraModel& camera);

}  // namespace hoifit
