#pragma once

#include <filesystem>

#include "hoifit/hand_model.hpp"

namespace hoifit {

/// Hand model serialization: a JSON header (skeleton, candidate indices,
/// array layout) plus one little-endian binary sidecar holding the large
/// arrays. Layout per array: {"dtype": "float64"|"int32", "shape": [...],
/// "byte_offset": N}, data row-major, tightly packed, in file order. The
/// sidecar path in the header is relative to the header's directory.
void save_hand_model(const HandModelDef& model, const std::filesystem::path& json_path);
HandModelDef load_hand_model(const std::filesystem::path& json_path);

}  // namespace hoifit
