#pragma once

#include "hoifit/types.hpp"

namespace hoifit {

/// Rigid 6-DoF pose: unit quaternion plus translation in meters. Quaternions
/// are kept normalized with canonical sign (w >= 0).
struct Pose6D {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  Pose6D() = default;
  Pose6D(const Quat& q, const Vec3& t) : rotation(q), translation(t) { canonicalize(); }

  void canonicalize();

  Rigid to_rigid() const { return Rigid{rotation.toRotationMatrix(), translation}; }
  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Pose6D inverse() const;
  Pose6D compose(const Pose6D& other) const;  // this * other

  static Pose6D identity() { return Pose6D{}; }
};

/// Geodesic angle of the relative rotation a^{-1} b, in [0, pi].
double rotation_delta(const Pose6D& a, const Pose6D& b);
double rotation_angle(const Quat& a, const Quat& b);

/// Rotation vector (axis * angle) of q, angle in [0, pi].
Vec3 quat_log(const Quat& q);
/// Inverse of quat_log.
Quat quat_exp(const Vec3& rotvec);

/// Axis-angle rotation matrix (Rodrigues).
Mat3 rotation_matrix(const Vec3& rotvec);
/// Partial derivative of rotation_matrix(w) with respect to w[axis].
Mat3 rotation_matrix_derivative(const Vec3& rotvec, int axis);

Mat3 skew(const Vec3& v);

/// Spherical interpolation between two rotation vectors (shortest arc),
/// s in [0, 1].
Vec3 slerp_rotvec(const Vec3& a, const Vec3& b, double s);

/// Normalized average of sign-aligned quaternions (chordal L2 mean).
Quat chordal_mean(const std::vector<Quat>& rotations);

/// Wrap an angle to (-pi, pi].
double wrap_angle(double radians);

}  // namespace hoifit
