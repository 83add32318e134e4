#pragma once

#include <filesystem>
#include <optional>

#include "hoifit/contact.hpp"
#include "hoifit/manifest.hpp"
#include "hoifit/metrics.hpp"
#include "hoifit/motion_completion.hpp"
#include "hoifit/synth.hpp"

namespace hoifit {

/// A stage of the pipeline failed; artifacts of completed stages are already
/// on disk. CLI maps this to exit code 3.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("stage '" + stage + "' failed: " + what),
        stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  GraspSegmentation segmentation;
  ObjectTrajectory filtered;            // stationary head + filtered tail
  std::vector<ContactSet> contacts;     // interaction frames, initial matching
  StageResult interaction;
  MotionCompletion completion;
  StageResult grasp;
  HandSequence final_hand;              // merged grasp + interaction result
  std::optional<MetricsReport> metrics; // when ground truth was supplied
};

/// Full two-stage run: segment (unless the manifest pins t_star), filter,
/// match contacts, optimize the interaction stage, re-anchor and complete
/// the approach, optimize the grasp stage, then evaluate when ground truth
/// is available. Artifacts land in out_dir as each stage finishes, so a
/// failure leaves the completed stages' outputs plus a stage_error.txt.
PipelineResult run_pipeline(const SequenceManifest& manifest,
                            const std::filesystem::path& out_dir,
                            const GroundTruth* gt = nullptr);

/// Evaluation of a finished hand sequence against ground truth; joints and
/// shells come from the manifest's hand model. Interaction frames are
/// (t_star, T]; visible frames gate MPJPE/MRPE.
MetricsReport evaluate_sequence(const SequenceManifest& manifest,
                                const HandModelDef& model, const HandSequence& prediction,
                                const GroundTruth& gt, int t_star);

}  // namespace hoifit
