#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hoifit/camera.hpp"
#include "hoifit/hand_model.hpp"
#include "hoifit/optimizer.hpp"
#include "hoifit/trajectory.hpp"

namespace hoifit {

/// Schema violation in a manifest or related JSON input; the message names
/// the offending field. CLI maps this to exit code 2.
class ManifestError : public std::runtime_error {
 public:
  explicit ManifestError(const std::string& what) : std::runtime_error(what) {}
};

/// Everything configurable about one pipeline run; every field has a CLI
/// flag mirror.
struct PipelineConfig {
  GraspThresholds segmentation;
  OneEuroParams filter;
  OptimConfig optim;
  double iv_voxel_m = 0.002;
  double completion_tolerance = 1e-3;
  std::optional<std::string> completion_file;  // external motion completion
};

struct FrameRecord {
  CameraModel camera;
  Pose6D object_pose;
  bool hand_visible = false;
  VecX hand_theta;  // size kThetaDim when visible
  Vec3 hand_tau = Vec3::Zero();
  std::optional<std::string> depth_file;
  std::optional<std::string> mask_file;
};

/// On-disk description of one sequence: per-frame detector outputs, the
/// object mesh and hand model files, the optional precomputed stage split,
/// and the optimization config. File references are relative to the
/// manifest's directory.
struct SequenceManifest {
  static constexpr int kSchemaVersion = 1;

  double fps = 30.0;
  std::string object_mesh_file;
  std::string hand_model_file;
  VecX beta = VecX::Zero(kShapeDim);
  std::optional<int> grasp_frame;
  PipelineConfig config;
  std::vector<FrameRecord> frames;

  std::filesystem::path base_dir;  // set on load; resolves relative paths

  int frame_count() const { return static_cast<int>(frames.size()); }
  std::vector<int> visible_frames() const;
  ObjectTrajectory object_trajectory() const;
  std::filesystem::path resolve(const std::string& relative) const;

  /// Structural checks; with check_files also verifies referenced files
  /// exist. Throws ManifestError naming the field.
  void validate(bool check_files = true) const;
};

SequenceManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const SequenceManifest& manifest, const std::filesystem::path& path);

nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const PipelineConfig& config, const std::filesystem::path& path);

/// Hand parameter sequences (detector outputs, ground truth, results):
/// {"beta": [...10], "frames": [{"t": i, "visible": bool, "theta": [...48],
/// "tau": [x,y,z]}, ...]}. Invisible frames omit theta/tau.
struct HandSequence {
  VecX beta = VecX::Zero(kShapeDim);
  std::vector<bool> visible;
  std::vector<VecX> theta;  // zero-sized where invisible
  std::vector<Vec3> tau;

  int frame_count() const { return static_cast<int>(visible.size()); }
};

void save_hand_sequence_json(const HandSequence& seq, const std::filesystem::path& path);
HandSequence load_hand_sequence_json(const std::filesystem::path& path);

/// Ground-truth bundle emitted by the synthetic generator.
struct GroundTruth {
  HandSequence hand;           // fully visible
  ObjectTrajectory object;
  int t_star = -1;             // clean-signal grasp frame
};

void save_ground_truth_json(const GroundTruth& gt, const std::filesystem::path& path);
GroundTruth load_ground_truth_json(const std::filesystem::path& path);

}  // namespace hoifit
