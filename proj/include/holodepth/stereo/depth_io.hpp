#pragma once

#include <filesystem>

#include "holodepth/stereo/disparity.hpp"

namespace holodepth::stereo {

/// Raw maps go to PFM, normalised maps to 16-bit PGM over [0, 1] with a
/// `.range` sidecar; both get a `.grid` sidecar. The extension tells them
/// apart on load.
void save_depth_map(const std::filesystem::path& path, const DepthMap& map);
DepthMap load_depth_map(const std::filesystem::path& path);

}  // namespace holodepth::stereo
