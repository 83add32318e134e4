#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "hoifit/pose.hpp"

namespace hoifit {

/// 6-DoF object pose sequence at a fixed frame rate.
struct ObjectTrajectory {
  std::vector<Pose6D> poses;
  double fps = 30.0;

  int frame_count() const { return static_cast<int>(poses.size()); }
  void validate() const;  // throws on empty sequence or fps <= 0
};

/// Stage split at the grasp frame: frames [0, t_star] are the grasping
/// stage, [t_star + 1, T] the interaction stage.
struct GraspSegmentation {
  int t_star = -1;
  std::optional<int> t_star_translation;
  std::optional<int> t_star_rotation;

  bool detected() const { return t_star >= 0; }
};

struct GraspThresholds {
  double eps_translation = 0.003;          // meters per frame
  double eps_rotation = deg_to_rad(2.0);   // radians per frame
  int window = 3;                          // consecutive frames m (at 30 fps)
  double reference_fps = 30.0;             // window scales with trajectory fps
};

/// First frame t >= m whose last m per-frame deltas all exceed the
/// threshold, independently for translation and rotation; the grasp frame
/// is the earlier of the two. The window m is rescaled by fps relative to
/// thresholds.reference_fps. Throws std::runtime_error("no grasp detected")
/// if neither channel has an onset.
GraspSegmentation detect_grasp_frame(const ObjectTrajectory& traj,
                                     const GraspThresholds& thresholds = {});

/// Mean pose over frames [0, t_star]: arithmetic translation mean, chordal
/// rotation mean.
Pose6D stationary_pose(const ObjectTrajectory& traj, int t_star);

/// Trajectory JSON: {"fps": F, "poses": [{"t": i, "quat": [w,x,y,z],
/// "trans": [x,y,z]}, ...]}. Identical schema for raw and filtered output.
void save_trajectory_json(const ObjectTrajectory& traj, const std::filesystem::path& path);
ObjectTrajectory load_trajectory_json(const std::filesystem::path& path);

}  // namespace hoifit
