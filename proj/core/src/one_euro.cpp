#include "hoifit/one_euro.hpp"

#include <stdexcept>

namespace hoifit {

void OneEuroParams::validate() const {
  if (!(f_min > 0.0) || !(f_d > 0.0) || !(speed_coeff > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("one euro filter: all parameters must be positive");
  }
}

double one_euro_alpha(double frequency, double dt) {
  return dt / (dt + 1.0 / (2.0 * kPi * frequency));
}

std::vector<VecX> one_euro_filter(const std::vector<VecX>& signal,
                                  const OneEuroParams& params) {
  params.validate();
  if (signal.empty()) throw std::invalid_argument("one euro filter: empty signal");

  std::vector<VecX> out;
  out.reserve(signal.size());
  VecX o_hat = signal.front();
  VecX g_hat = VecX::Zero(signal.front().size());
  out.push_back(o_hat);

  const double alpha_d = one_euro_alpha(params.f_d, params.dt);
  for (size_t k = 1; k < signal.size(); ++k) {
    VecX g = (signal[k] - o_hat) / params.dt;
    // Incremental form of a x + (1 - a) prev: exactly stationary on
    // constant signals.
    g_hat += alpha_d * (g - g_hat);
    double f_c = params.f_min + params.speed_coeff * g_hat.norm();
    double alpha_c = one_euro_alpha(f_c, params.dt);
    o_hat += alpha_c * (signal[k] - o_hat);
    out.push_back(o_hat);
  }
  return out;
}

std::vector<double> one_euro_filter(const std::vector<double>& signal,
                                    const OneEuroParams& params) {
  std::vector<VecX> wrapped(signal.size());
  for (size_t i = 0; i < signal.size(); ++i) {
    wrapped[i] = VecX::Constant(1, signal[i]);
  }
  auto filtered = one_euro_filter(wrapped, params);
  std::vector<double> out(filtered.size());
  for (size_t i = 0; i < filtered.size(); ++i) out[i] = filtered[i][0];
  return out;
}

std::vector<Pose6D> one_euro_filter_poses(const std::vector<Pose6D>& poses,
                                          const OneEuroParams& params) {
  if (poses.empty()) throw std::invalid_argument("one euro filter: empty pose sequence");

  // Lift rotations to rotation vectors relative to the first frame, keeping
  // quaternion signs continuous so the tangent signal has no branch jumps.
  const Quat q0_inv = poses.front().rotation.conjugate();
  std::vector<VecX> signal(poses.size());
  Quat prev_rel = Quat::Identity();
  for (size_t k = 0; k < poses.size(); ++k) {
    Quat rel = q0_inv * poses[k].rotation;
    if (rel.coeffs().dot(prev_rel.coeffs()) < 0.0) rel.coeffs() = -rel.coeffs();
    prev_rel = rel;
    Vec3 rotvec = quat_log(rel);
    VecX x(6);
    x << poses[k].translation, rotvec;
    signal[k] = x;
  }

  auto filtered = one_euro_filter(signal, params);
  std::vector<Pose6D> out(poses.size());
  for (size_t k = 0; k < poses.size(); ++k) {
    Vec3 trans = filtered[k].head<3>();
    Quat q = poses.front().rotation * quat_exp(filtered[k].tail<3>());
    out[k] = Pose6D(q, trans);
  }
  return out;
}

ObjectTrajectory smooth_interaction_poses(const ObjectTrajectory& traj, int t_star,
                                          const OneEuroParams& params) {
  traj.validate();
  const int T = traj.frame_count();
  if (t_star < 0 || t_star >= T) {
    throw std::invalid_argument("smooth_interaction_poses: t_star out of range");
  }

  ObjectTrajectory out;
  out.fps = traj.fps;
  out.poses.resize(T);

  const Pose6D rest = stationary_pose(traj, t_star);
  for (int i = 0; i <= t_star; ++i) out.poses[i] = rest;

  if (t_star + 1 < T) {
    // Seed the filter at the raw grasp-frame pose; outputs cover t_star+1..T.
    std::vector<Pose6D> tail(traj.poses.begin() + t_star, traj.poses.end());
    auto filtered = one_euro_filter_poses(tail, params);
    for (int i = t_star + 1; i < T; ++i) out.poses[i] = filtered[i - t_star];
  }
  return out;
}

}  // namespace hoifit
