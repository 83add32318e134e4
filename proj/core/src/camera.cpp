#include "hoifit/camera.hpp"

#include <cmath>

namespace hoifit {

Vec3 CameraModel::ray_direction(double u, double v) const {
  Vec3 dir_cam = K.inverse() * Vec3(u, v, 1.0);
  Vec3 dir_world = R.transpose() * dir_cam;
  return dir_world.normalized();
}

bool CameraModel::is_valid(double tol) const {
  if (K(1, 0) != 0.0 || K(2, 0) != 0.0 || K(2, 1) != 0.0) return false;
  if (K(0, 0) <= 0.0 || K(1, 1) <= 0.0) return false;
  if (std::abs(K(2, 2) - 1.0) > tol) return false;
  Mat3 should_be_identity = R * R.transpose();
  if ((should_be_identity - Mat3::Identity()).norm() > tol) return false;
  if (std::abs(R.determinant() - 1.0) > tol) return false;
  return width > 0 && height > 0;
}

CameraModel CameraModel::look_at(const Vec3& eye, const Vec3& target, const Vec3& up,
                                 double fx, double fy, double cx, double cy,
                                 int width, int height) {
  Vec3 z = (target - eye).normalized();
  Vec3 x = z.cross(up).normalized();
  if (!x.allFinite() || x.norm() < 0.5) {
    // Looking straight along the up axis; pick an arbitrary right vector.
    x = z.cross(Vec3(1, 0, 0)).normalized();
  }
  Vec3 y = z.cross(x);

  CameraModel cam;
  cam.K << fx, 0, cx, 0, fy, cy, 0, 0, 1;
  cam.R.row(0) = x.transpose();
  cam.R.row(1) = y.transpose();
  cam.R.row(2) = z.transpose();
  cam.t = -(cam.R * eye);
  cam.width = width;
  cam.height = height;
  return cam;
}

std::vector<ProjectedPoint> project_points(const CameraModel& camera,
                                           const std::vector<Vec3>& points_world) {
  std::vector<ProjectedPoint> out(points_world.size());
  for (size_t i = 0; i < points_world.size(); ++i) {
    Vec3 p_cam = camera.to_camera(points_world[i]);
    if (p_cam.z() <= 0.0) {
      out[i].valid = false;
      continue;
    }
    Vec3 h = camera.K * p_cam;
    out[i].pixel = Vec2(h.x() / h.z(), h.y() / h.z());
    out[i].valid = true;
  }
  return out;
}

size_t DepthFrame::valid_count() const {
  size_t n = 0;
  for (float d : depth) {
    if (std::isfinite(d) && d > 0.0f) ++n;
  }
  return n;
}

DepthFrame DepthFrame::zeros(int width, int height) {
  DepthFrame f;
  f.width = width;
  f.height = height;
  f.depth.assign(static_cast<size_t>(width) * height, 0.0f);
  return f;
}

std::vector<Vec3> backproject_depth(const DepthFrame& depth, const CameraModel& camera) {
  std::vector<Vec3> cloud;
  cloud.reserve(depth.valid_count());
  const Mat3 K_inv = camera.K.inverse();
  const Mat3 R_t = camera.R.transpose();
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      if (!depth.valid(u, v)) continue;
      double d = depth.at(u, v);
      Vec3 p_cam = d * (K_inv * Vec3(u, v, 1.0));
      cloud.push_back(R_t * (p_cam - camera.t));
    }
  }
  return cloud;
}

}  // namespace hoifit
