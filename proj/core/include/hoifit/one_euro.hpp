#pragma once

#include <vector>

#include "hoifit/trajectory.hpp"

namespace hoifit {

/// One-Euro filter parameters. The sampling interval defaults to the
/// literal constant 15 used as the recurrence's interval; override per
/// sequence if a physical interval is preferred.
struct OneEuroParams {
  double f_min = 1.5;        // minimum cutoff frequency, Hz
  double f_d = 1.0;          // derivative cutoff frequency, Hz
  double speed_coeff = 0.01; // cutoff growth per unit derivative norm
  double dt = 15.0;          // sampling interval constant

  void validate() const;  // all strictly positive
};

/// Smoothing factor alpha(f, dt) = dt / (dt + 1 / (2 pi f)).
double one_euro_alpha(double frequency, double dt);

/// Adaptive first-order low-pass, applied to a vector signal:
///   o_hat_0 = x_0, g_hat_0 = 0
///   g_k     = (x_k - o_hat_{k-1}) / dt
///   g_hat_k = alpha(f_d, dt) g_k + (1 - alpha(f_d, dt)) g_hat_{k-1}
///   f_c     = f_min + speed_coeff * |g_hat_k|
///   o_hat_k = alpha(f_c, dt) x_k + (1 - alpha(f_c, dt)) o_hat_{k-1}
/// Output index k depends only on inputs 0..k. Constant signals are exact
/// fixed points.
std::vector<VecX> one_euro_filter(const std::vector<VecX>& signal,
                                  const OneEuroParams& params);
std::vector<double> one_euro_filter(const std::vector<double>& signal,
                                    const OneEuroParams& params);

/// Filters a pose sequence: translations channel-wise as a 3-vector signal;
/// rotations lifted to rotation-vector increments relative to the first
/// frame (sign-continuous), filtered in that tangent parameterization, and
/// mapped back to unit quaternions.
std::vector<Pose6D> one_euro_filter_poses(const std::vector<Pose6D>& poses,
                                          const OneEuroParams& params);

/// Stage-aware smoothing: frames [0, t_star] are replaced by the stationary
/// pose, frames [t_star + 1, T] by the One-Euro filtered trajectory seeded
/// at frame t_star.
ObjectTrajectory smooth_interaction_poses(const ObjectTrajectory& traj, int t_star,
                                          const OneEuroParams& params = {});

}  // namespace hoifit
