#pragma once

#include <filesystem>

#include "hoifit/manifest.hpp"

namespace hoifit {

/// Deterministic desk-scale grasp benchmark: a synthetic hand approaches a
/// fitted primitive, grasps it, and moves it rigidly. Emits noisy
/// detector-style inputs plus the clean ground truth. The seed fixes every
/// output bit.
struct SynthSpec {
  uint64_t seed = 1;

  enum class Primitive { Sphere, Box, Composite };
  Primitive primitive = Primitive::Sphere;

  int approach_frames = 14;
  int interaction_frames = 20;

  enum class Motion { Lift, Rotate, Both };
  Motion motion = Motion::Lift;

  // Detector-style noise.
  double pose_jitter_m = 0.0005;          // object pose translation jitter
  double pose_jitter_rad = deg_to_rad(0.1);
  double theta_jitter_rad = 0.01;         // per-entry hand pose jitter
  double depth_offset_min_m = 0.04;       // per-frame wrist depth error band,
  double depth_offset_max_m = 0.08;       // applied along the viewing ray

  double fps = 30.0;
  int image_size = 128;
};

struct SynthResult {
  SequenceManifest manifest;  // in-memory; file references unset
  GroundTruth gt;
  TriMesh object;
  HandModelDef hand;
  int grasp_attained_frame = -1;  // frame where the hand reaches the grasp pose
};

SynthResult generate_synthetic_sequence(const SynthSpec& spec);

/// Writes the full sequence bundle to a directory: manifest.json,
/// object.obj, hand_model.json/.bin, gt.json, and rendered depth (16-bit
/// millimeter PNG) and mask (8-bit PNG) frames.
std::filesystem::path write_synthetic_sequence(const SynthSpec& spec,
                                               const std::filesystem::path& dir);

}  // namespace hoifit
