#pragma once

#include "hoifit/hand_model.hpp"

namespace hoifit {

/// Deterministic low-poly five-finger hand used as the bundled MANO
/// stand-in: ~790 vertices, 16 joints (wrist + 5 fingers x 3, depth-first),
/// 115 fingertip contact candidates (23 per finger). Fingers point +y in the
/// rest pose with the palm facing -z; wrist at the origin. Identical bytes
/// on every call.
HandModelDef make_synthetic_hand();

/// Joint index of the first (proximal) joint of each finger, thumb first.
const std::vector<int>& synthetic_finger_roots();

/// Template vertex at the very end of each fingertip, thumb first.
const std::array<int, 5>& synthetic_tip_apices();

/// Curl sign convention: positive angles bend fingertips toward the palm
/// (-z). Returns the 48-dim theta with every articulated joint set to
/// per-finger curl angles (proximal, middle, distal), global rotation zero.
VecX synthetic_curl_theta(const std::array<Vec3, 5>& per_finger_curl);

}  // namespace hoifit
