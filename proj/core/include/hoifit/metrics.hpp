#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "hoifit/mesh.hpp"
#include "hoifit/pose.hpp"
#include "hoifit/sdf.hpp"

namespace hoifit {

/// Evaluation summary in the reporting units: millimeters for the position
/// and depth errors, cubic centimeters for volume, mm/s^3 for jerk.
struct MetricsReport {
  double mpjpe_mm = 0.0;       // root-aligned (headline value)
  double mpjpe_abs_mm = 0.0;   // without root alignment, reported alongside
  double mrpe_mm = 0.0;
  double iv_mean_cm3 = 0.0;
  double iv_max_cm3 = 0.0;
  double id_mean_mm = 0.0;
  double id_max_mm = 0.0;
  double jm_mm_s3 = 0.0;

  std::vector<double> per_frame_mpjpe_mm;   // visible frames, in order
  std::vector<double> per_frame_iv_cm3;     // interaction frames, in order
  std::vector<double> per_frame_id_mm;
  double iv_voxel_mm = 2.0;  // voxel edge used for the volume estimate
};

/// Mean per-joint position error over the visible frames, root-aligned
/// (wrist-relative) per frame. Joints in meters, result in millimeters.
/// joints_* are [frame][joint]; visible_frames indexes into them.
double mpjpe(const std::vector<std::vector<Vec3>>& pred_joints,
             const std::vector<std::vector<Vec3>>& gt_joints,
             const std::vector<int>& visible_frames, int root_joint = 0,
             std::vector<double>* per_frame_mm = nullptr);

/// Same error without root alignment.
double mpjpe_absolute(const std::vector<std::vector<Vec3>>& pred_joints,
                      const std::vector<std::vector<Vec3>>& gt_joints,
                      const std::vector<int>& visible_frames);

/// Mean wrist distance over visible frames after translating both
/// trajectories so the first visible wrists coincide. Millimeters.
double mrpe(const std::vector<Vec3>& pred_wrist, const std::vector<Vec3>& gt_wrist,
            const std::vector<int>& visible_frames);

struct MeanMax {
  double mean = 0.0;
  double max = 0.0;
};

/// Intersection volume of two watertight meshes per frame, estimated by
/// voxelizing the AABB overlap at edge `voxel_m` and counting voxel centers
/// inside both. hand_per_frame are posed hand shells; the object is posed
/// per frame. Result in cm^3 over the given frames.
MeanMax interpenetration_volume(const std::vector<TriMesh>& hand_per_frame,
                                const MeshSdf& object,
                                const std::vector<Pose6D>& object_poses,
                                double voxel_m = 0.002,
                                std::vector<double>* per_frame_cm3 = nullptr);

/// Per-frame maximum hand-vertex penetration depth max(0, -d(v)); the
/// aggregate is the mean/max of that per-frame value. Millimeters.
MeanMax interpenetration_depth(const std::vector<std::vector<Vec3>>& hand_vertices,
                               const MeshSdf& object,
                               const std::vector<Pose6D>& object_poses,
                               std::vector<double>* per_frame_mm = nullptr);

/// Mean L2 jerk of joint trajectories via central third differences scaled
/// by fps^3, averaged over joints and valid frames. Requires >= 4 frames
/// (5 for the central stencil; 4-frame sequences use the one-sided stencil).
/// Millimeters per second cubed.
double jerk_magnitude(const std::vector<std::vector<Vec3>>& joints, double fps);

/// CSV: one row per sequence under the fixed header
/// mpjpe_mm,mrpe_mm,iv_mean_cm3,iv_max_cm3,id_mean_mm,id_max_mm,jm_mm_s3.
void save_metrics_csv(const std::vector<MetricsReport>& reports,
                      const std::filesystem::path& path);
void save_metrics_json(const MetricsReport& report, const std::filesystem::path& path);

}  // namespace hoifit
