#include "hoifit/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hoifit {

void ObjectTrajectory::validate() const {
  if (poses.empty()) throw std::invalid_argument("trajectory: empty pose sequence");
  if (!(fps > 0.0)) throw std::invalid_argument("trajectory: fps must be positive");
}

GraspSegmentation detect_grasp_frame(const ObjectTrajectory& traj,
                                     const GraspThresholds& thresholds) {
  traj.validate();
  const int T = traj.frame_count();
  int m = std::max(1, static_cast<int>(std::lround(
                      thresholds.window * traj.fps / thresholds.reference_fps)));
  if (T <= m) throw std::invalid_argument("detect_grasp_frame: trajectory shorter than window");

  // Per-frame deltas, defined for k >= 1.
  std::vector<double> d_trans(T, 0.0), d_rot(T, 0.0);
  for (int k = 1; k < T; ++k) {
    d_trans[k] = (traj.poses[k].translation - traj.poses[k - 1].translation).norm();
    d_rot[k] = rotation_delta(traj.poses[k - 1], traj.poses[k]);
  }

  auto first_onset = [&](const std::vector<double>& delta, double eps) -> std::optional<int> {
    for (int t = m; t < T; ++t) {
      bool all_exceed = true;
      for (int k = t - m + 1; k <= t; ++k) {
        if (!(delta[k] > eps)) {
          all_exceed = false;
          break;
        }
      }
      if (all_exceed) return t;
    }
    return std::nullopt;
  };

  GraspSegmentation seg;
  seg.t_star_translation = first_onset(d_trans, thresholds.eps_translation);
  seg.t_star_rotation = first_onset(d_rot, thresholds.eps_rotation);
  if (!seg.t_star_translation && !seg.t_star_rotation) {
    throw std::runtime_error("no grasp detected");
  }
  int t_o = seg.t_star_translation.value_or(T);
  int t_r = seg.t_star_rotation.value_or(T);
  seg.t_star = std::min(t_o, t_r);
  return seg;
}

Pose6D stationary_pose(const ObjectTrajectory& traj, int t_star) {
  traj.validate();
  if (t_star < 0 || t_star >= traj.frame_count()) {
    throw std::invalid_argument("stationary_pose: t_star out of range");
  }
  Vec3 mean_t = Vec3::Zero();
  std::vector<Quat> rotations;
  rotations.reserve(t_star + 1);
  for (int i = 0; i <= t_star; ++i) {
    mean_t += traj.poses[i].translation;
    rotations.push_back(traj.poses[i].rotation);
  }
  mean_t /= static_cast<double>(t_star + 1);
  return Pose6D(chordal_mean(rotations), mean_t);
}

void save_trajectory_json(const ObjectTrajectory& traj, const std::filesystem::path& path) {
  nlohmann::json j;
  j["fps"] = traj.fps;
  auto& poses = j["poses"] = nlohmann::json::array();
  for (int i = 0; i < traj.frame_count(); ++i) {
    const Pose6D& p = traj.poses[i];
    poses.push_back({{"t", i},
                     {"quat", {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()}},
                     {"trans", {p.translation.x(), p.translation.y(), p.translation.z()}}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

ObjectTrajectory load_trajectory_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  nlohmann::json j = nlohmann::json::parse(in);
  ObjectTrajectory traj;
  traj.fps = j.at("fps").get<double>();
  for (const auto& e : j.at("poses")) {
    const auto& q = e.at("quat");
    const auto& t = e.at("trans");
    traj.poses.emplace_back(Quat(q[0], q[1], q[2], q[3]), Vec3(t[0], t[1], t[2]));
  }
  traj.validate();
  return traj;
}

}  // namespace hoifit
