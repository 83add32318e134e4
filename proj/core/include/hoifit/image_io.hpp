#pragma once

#include <filesystem>

#include "hoifit/camera.hpp"
#include "hoifit/raycast.hpp"

namespace hoifit {

/// Depth I/O. PNG depth is 16-bit grayscale in millimeters, 0 = invalid.
/// Raw depth is row-major 32-bit little-endian float meters with a JSON
/// sidecar (same stem, .json) giving {"width": W, "height": H}.
DepthFrame load_depth_png(const std::filesystem::path& path);
void save_depth_png(const DepthFrame& depth, const std::filesystem::path& path);

DepthFrame load_depth_raw(const std::filesystem::path& path);
void save_depth_raw(const DepthFrame& depth, const std::filesystem::path& path);

/// Dispatch on extension (.png / .raw).
DepthFrame load_depth(const std::filesystem::path& path);

/// Masks: 8-bit grayscale PNG, nonzero = object.
BinaryMask load_mask_png(const std::filesystem::path& path);
void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

}  // namespace hoifit
