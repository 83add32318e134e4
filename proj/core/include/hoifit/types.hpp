#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <vector>

namespace hoifit {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using VecX = Eigen::VectorXd;

using FaceIndices = std::array<int, 3>;

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Rigid body transform, kept as an explicit rotation/translation pair so
/// chain-rule derivatives stay cheap to write down.
struct Rigid {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 operator*(const Vec3& p) const { return R * p + t; }

  Rigid operator*(const Rigid& other) const {
    return Rigid{R * other.R, R * other.t + t};
  }

  Rigid inverse() const {
    Mat3 Rt = R.transpose();
    return Rigid{Rt, -(Rt * t)};
  }

  static Rigid identity() { return Rigid{}; }
};

}  // namespace hoifit
