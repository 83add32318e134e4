#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hoifit/hand_model.hpp"

namespace hoifit {

struct MotionCompletion {
  std::vector<VecX> theta;  // full range [0, frame_count)
  std::vector<Vec3> tau;
  enum class Source { Interpolation, External } source = Source::Interpolation;
};

/// Fills invisible frames from the visible guidance: linear interpolation of
/// tau, per-joint spherical interpolation of theta, constant extrapolation
/// outside the visible span. Visible frames are copied through unchanged.
/// `visible_frames` must be sorted, nonempty, and within [0, frame_count).
MotionCompletion complete_motion_interpolate(const std::vector<int>& visible_frames,
                                             const std::vector<VecX>& theta_visible,
                                             const std::vector<Vec3>& tau_visible,
                                             int frame_count);

struct CompletionMismatch {
  int frame = -1;
  double theta_deviation = 0.0;  // max-abs over the 48 entries
  double tau_deviation = 0.0;    // max-abs over xyz
};

/// Validates an externally produced completion against the guidance on the
/// visible frames. Throws std::runtime_error with a per-frame report when
/// any deviation exceeds the tolerance.
void validate_external_completion(const MotionCompletion& completion,
                                  const std::vector<int>& visible_frames,
                                  const std::vector<VecX>& theta_visible,
                                  const std::vector<Vec3>& tau_visible,
                                  double tolerance = 1e-3,
                                  std::vector<CompletionMismatch>* report = nullptr);

/// Completion file: same JSON schema as detector hand params — an array of
/// {"t": i, "theta": [...48], "tau": [x, y, z]}.
MotionCompletion load_completion_json(const std::filesystem::path& path);
void save_completion_json(const MotionCompletion& completion,
                          const std::filesystem::path& path);

}  // namespace hoifit
