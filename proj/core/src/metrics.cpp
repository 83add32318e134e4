#include "hoifit/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hoifit {

namespace {

constexpr double kMeterToMm = 1000.0;

void check_visible(const std::vector<int>& visible, size_t frames) {
  if (visible.empty()) throw std::invalid_argument("metrics: no visible frames");
  for (int f : visible) {
    if (f < 0 || f >= static_cast<int>(frames)) {
      throw std::invalid_argument("metrics: visible frame out of range");
    }
  }
}

}  // namespace

double mpjpe(const std::vector<std::vector<Vec3>>& pred_joints,
             const std::vector<std::vector<Vec3>>& gt_joints,
             const std::vector<int>& visible_frames, int root_joint,
             std::vector<double>* per_frame_mm) {
  if (pred_joints.size() != gt_joints.size()) {
    throw std::invalid_argument("mpjpe: frame count mismatch");
  }
  check_visible(visible_frames, pred_joints.size());
  double total = 0.0;
  if (per_frame_mm) per_frame_mm->clear();
  for (int f : visible_frames) {
    const auto& p = pred_joints[f];
    const auto& g = gt_joints[f];
    if (p.size() != g.size()) throw std::invalid_argument("mpjpe: joint count mismatch");
    const Vec3 root_offset = g[root_joint] - p[root_joint];
    double frame_err = 0.0;
    for (size_t j = 0; j < p.size(); ++j) {
      frame_err += (p[j] + root_offset - g[j]).norm();
    }
    frame_err = frame_err / static_cast<double>(p.size()) * kMeterToMm;
    total += frame_err;
    if (per_frame_mm) per_frame_mm->push_back(frame_err);
  }
  return total / static_cast<double>(visible_frames.size());
}

double mpjpe_absolute(const std::vector<std::vector<Vec3>>& pred_joints,
                      const std::vector<std::vector<Vec3>>& gt_joints,
                      const std::vector<int>& visible_frames) {
  if (pred_joints.size() != gt_joints.size()) {
    throw std::invalid_argument("mpjpe: frame count mismatch");
  }
  check_visible(visible_frames, pred_joints.size());
  double total = 0.0;
  for (int f : visible_frames) {
    const auto& p = pred_joints[f];
    const auto& g = gt_joints[f];
    if (p.size() != g.size()) throw std::invalid_argument("mpjpe: joint count mismatch");
    double frame_err = 0.0;
    for (size_t j = 0; j < p.size(); ++j) frame_err += (p[j] - g[j]).norm();
    total += frame_err / static_cast<double>(p.size());
  }
  return total / static_cast<double>(visible_frames.size()) * kMeterToMm;
}

double mrpe(const std::vector<Vec3>& pred_wrist, const std::vector<Vec3>& gt_wrist,
            const std::vector<int>& visible_frames) {
  if (pred_wrist.size() != gt_wrist.size()) {
    throw std::invalid_argument("mrpe: frame count mismatch");
  }
  check_visible(visible_frames, pred_wrist.size());
  const int first = visible_frames.front();
  const Vec3 align = gt_wrist[first] - pred_wrist[first];
  double total = 0.0;
  for (int f : visible_frames) {
    total += (pred_wrist[f] + align - gt_wrist[f]).norm();
  }
  return total / static_cast<double>(visible_frames.size()) * kMeterToMm;
}

MeanMax interpenetration_volume(const std::vector<TriMesh>& hand_per_frame,
                                const MeshSdf& object,
                                const std::vector<Pose6D>& object_poses,
                                double voxel_m,
                                std::vector<double>* per_frame_cm3) {
  if (hand_per_frame.size() != object_poses.size()) {
    throw std::invalid_argument("interpenetration_volume: frame count mismatch");
  }
  if (per_frame_cm3) per_frame_cm3->clear();
  MeanMax out;
  if (hand_per_frame.empty()) return out;

  Vec3 obj_lo, obj_hi;
  object.bvh().mesh().bounds(obj_lo, obj_hi);

  double sum = 0.0;
  for (size_t f = 0; f < hand_per_frame.size(); ++f) {
    MeshSdf hand_sdf(hand_per_frame[f]);
    const Rigid world_from_obj = object_poses[f].to_rigid();
    const Rigid obj_from_world = world_from_obj.inverse();

    // Overlap AABB in world space: the posed object bounds against the hand.
    Vec3 hand_lo, hand_hi;
    hand_per_frame[f].bounds(hand_lo, hand_hi);
    Vec3 obj_world_lo = Vec3::Constant(std::numeric_limits<double>::max());
    Vec3 obj_world_hi = Vec3::Constant(std::numeric_limits<double>::lowest());
    for (int corner = 0; corner < 8; ++corner) {
      Vec3 c(corner & 1 ? obj_hi.x() : obj_lo.x(), corner & 2 ? obj_hi.y() : obj_lo.y(),
             corner & 4 ? obj_hi.z() : obj_lo.z());
      Vec3 w = world_from_obj * c;
      obj_world_lo = obj_world_lo.cwiseMin(w);
      obj_world_hi = obj_world_hi.cwiseMax(w);
    }
    const Vec3 lo = hand_lo.cwiseMax(obj_world_lo);
    const Vec3 hi = hand_hi.cwiseMin(obj_world_hi);

    double volume_m3 = 0.0;
    if ((hi - lo).minCoeff() > 0.0) {
      const int nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / voxel_m)));
      const int ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / voxel_m)));
      const int nz = std::max(1, static_cast<int>(std::ceil((hi.z() - lo.z()) / voxel_m)));
      size_t inside_count = 0;
      for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
          for (int iz = 0; iz < nz; ++iz) {
            const Vec3 center = lo + voxel_m * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
            if (!hand_sdf.inside(center)) continue;
            if (object.inside(obj_from_world * center)) ++inside_count;
          }
        }
      }
      volume_m3 = static_cast<double>(inside_count) * voxel_m * voxel_m * voxel_m;
    }
    const double cm3 = volume_m3 * 1e6;
    sum += cm3;
    out.max = std::max(out.max, cm3);
    if (per_frame_cm3) per_frame_cm3->push_back(cm3);
  }
  out.mean = sum / static_cast<double>(hand_per_frame.size());
  return out;
}

MeanMax interpenetration_depth(const std::vector<std::vector<Vec3>>& hand_vertices,
                               const MeshSdf& object,
                               const std::vector<Pose6D>& object_poses,
                               std::vector<double>* per_frame_mm) {
  if (hand_vertices.size() != object_poses.size()) {
    throw std::invalid_argument("interpenetration_depth: frame count mismatch");
  }
  if (per_frame_mm) per_frame_mm->clear();
  MeanMax out;
  if (hand_vertices.empty()) return out;
  double sum = 0.0;
  for (size_t f = 0; f < hand_vertices.size(); ++f) {
    const Rigid obj_from_world = object_poses[f].to_rigid().inverse();
    double depth = 0.0;
    for (const auto& v : hand_vertices[f]) {
      const Vec3 local = obj_from_world * v;
      if (object.certainly_outside(local)) continue;
      depth = std::max(depth, -object.signed_distance(local));
    }
    const double mm = depth * kMeterToMm;
    sum += mm;
    out.max = std::max(out.max, mm);
    if (per_frame_mm) per_frame_mm->push_back(mm);
  }
  out.mean = sum / static_cast<double>(hand_vertices.size());
  return out;
}

double jerk_magnitude(const std::vector<std::vector<Vec3>>& joints, double fps) {
  const int T = static_cast<int>(joints.size());
  if (T < 4) throw std::invalid_argument("jerk_magnitude: need at least 4 frames");
  const size_t J = joints.front().size();
  const double h = 1.0 / fps;
  const double inv_2h3 = 1.0 / (2.0 * h * h * h);
  const double inv_h3 = 1.0 / (h * h * h);

  double total = 0.0;
  size_t samples = 0;
  if (T >= 5) {
    // Central stencil: (f[t+2] - 2 f[t+1] + 2 f[t-1] - f[t-2]) / (2 h^3).
    for (int t = 2; t + 2 < T; ++t) {
      for (size_t j = 0; j < J; ++j) {
        Vec3 jerk = (joints[t + 2][j] - 2.0 * joints[t + 1][j] + 2.0 * joints[t - 1][j] -
                     joints[t - 2][j]) *
                    inv_2h3;
        total += jerk.norm();
        ++samples;
      }
    }
  } else {
    // Exactly 4 frames: one forward stencil.
    for (size_t j = 0; j < J; ++j) {
      Vec3 jerk =
          (joints[3][j] - 3.0 * joints[2][j] + 3.0 * joints[1][j] - joints[0][j]) * inv_h3;
      total += jerk.norm();
      ++samples;
    }
  }
  return total / static_cast<double>(samples) * kMeterToMm;
}

void save_metrics_csv(const std::vector<MetricsReport>& reports,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "mpjpe_mm,mrpe_mm,iv_mean_cm3,iv_max_cm3,id_mean_mm,id_max_mm,jm_mm_s3\n";
  out.precision(17);
  for (const auto& r : reports) {
    out << r.mpjpe_mm << "," << r.mrpe_mm << "," << r.iv_mean_cm3 << "," << r.iv_max_cm3
        << "," << r.id_mean_mm << "," << r.id_max_mm << "," << r.jm_mm_s3 << "\n";
  }
}

void save_metrics_json(const MetricsReport& report, const std::filesystem::path& path) {
  nlohmann::json j{{"mpjpe_mm", report.mpjpe_mm},
                   {"mpjpe_abs_mm", report.mpjpe_abs_mm},
                   {"mrpe_mm", report.mrpe_mm},
                   {"iv_mean_cm3", report.iv_mean_cm3},
                   {"iv_max_cm3", report.iv_max_cm3},
                   {"id_mean_mm", report.id_mean_mm},
                   {"id_max_mm", report.id_max_mm},
                   {"jm_mm_s3", report.jm_mm_s3},
                   {"iv_voxel_mm", report.iv_voxel_mm},
                   {"per_frame", {{"mpjpe_mm", report.per_frame_mpjpe_mm},
                                  {"iv_cm3", report.per_frame_iv_cm3},
                                  {"id_mm", report.per_frame_id_mm}}}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

}  // namespace hoifit
