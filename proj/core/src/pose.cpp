#include "hoifit/pose.hpp"

#include <cmath>

namespace hoifit {

void Pose6D::canonicalize() {
  rotation.normalize();
  if (rotation.w() < 0.0) rotation.coeffs() = -rotation.coeffs();
}

Pose6D Pose6D::inverse() const {
  Quat q_inv = rotation.conjugate();
  return Pose6D(q_inv, -(q_inv * translation));
}

Pose6D Pose6D::compose(const Pose6D& other) const {
  return Pose6D(rotation * other.rotation, rotation * other.translation + translation);
}

double rotation_angle(const Quat& a, const Quat& b) {
  double d = std::abs(a.dot(b));
  d = std::min(d, 1.0);
  return 2.0 * std::acos(d);
}

double rotation_delta(const Pose6D& a, const Pose6D& b) {
  return rotation_angle(a.rotation, b.rotation);
}

Vec3 quat_log(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  double sin_half = q.vec().norm();
  double cos_half = q.w();
  if (sin_half < 1e-12) return 2.0 * q.vec();  // small-angle limit
  double angle = 2.0 * std::atan2(sin_half, cos_half);
  return (angle / sin_half) * q.vec();
}

Quat quat_exp(const Vec3& rotvec) {
  double angle = rotvec.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(), 0.5 * rotvec.z());
    q.normalize();
    return q;
  }
  double half = 0.5 * angle;
  Vec3 axis = rotvec / angle;
  double s = std::sin(half);
  return Quat(std::cos(half), axis.x() * s, axis.y() * s, axis.z() * s);
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Mat3 rotation_matrix(const Vec3& w) {
  double angle = w.norm();
  if (angle < 1e-12) {
    return Mat3::Identity() + skew(w);
  }
  Vec3 axis = w / angle;
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

Mat3 rotation_matrix_derivative(const Vec3& w, int axis) {
  // Gallego & Yezzi, "A compact formula for the derivative of a 3-D rotation
  // in exponential coordinates".
  double theta_sq = w.squaredNorm();
  Vec3 e = Vec3::Zero();
  e[axis] = 1.0;
  if (theta_sq < 1e-16) {
    // Second-order expansion of exp([w]x) differentiated in w[axis].
    return skew(e) + 0.5 * (skew(e) * skew(w) + skew(w) * skew(e));
  }
  Mat3 R = rotation_matrix(w);
  Vec3 v = w[axis] * w + w.cross((Mat3::Identity() - R) * e);
  return (skew(v) * R) / theta_sq;
}

Vec3 slerp_rotvec(const Vec3& a, const Vec3& b, double s) {
  Quat qa = quat_exp(a);
  Quat qb = quat_exp(b);
  return quat_log(qa.slerp(s, qb));
}

Quat chordal_mean(const std::vector<Quat>& rotations) {
  if (rotations.empty()) return Quat::Identity();
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  Eigen::Vector4d first = rotations.front().coeffs();
  for (const auto& q : rotations) {
    Eigen::Vector4d c = q.coeffs();
    if (c.dot(first) < 0.0) c = -c;  // sign-align within one hemisphere
    acc += c;
  }
  Quat mean;
  mean.coeffs() = acc;
  double n = mean.norm();
  if (n < 1e-12) return Quat::Identity();  // antipodal degenerate set
  mean.coeffs() /= n;
  if (mean.w() < 0.0) mean.coeffs() = -mean.coeffs();
  return mean;
}

double wrap_angle(double radians) {
  double a = std::fmod(radians + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

}  // namespace hoifit
