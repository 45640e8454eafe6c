#pragma once

#include <utility>

#include "holodepth/holo/grid.hpp"

namespace holodepth::stereo {

enum class SplitDirection { kHorizontal };
enum class SplitProfile { kLinearRamp, kSharp };

struct SplitConfig {
  SplitDirection direction = SplitDirection::kHorizontal;
  SplitProfile profile = SplitProfile::kLinearRamp;
};

/// Left-aperture weight of column `col` in a `width`-column image:
/// 1 - col/(width-1) for the ramp, 1 for col < width/2 else 0 for the step.
/// The right weight is 1 minus this.
double left_weight(int col, int width, SplitProfile profile);

/// Two full-size aperture holograms. left = w_L * h and right = h - left, so
/// left + right reproduces h to within one rounding of the subtraction.
///
/// Throws InvalidArgument when width < 2.
std::pair<holo::RealImage, holo::RealImage> gradual_split(const holo::RealImage& hologram, const SplitConfig& config);

/// Hologram with its mean subtracted (suppresses the zero-order term).
holo::RealImage remove_mean(const holo::RealImage& hologram);

struct StereoPair {
  holo::RealImage left;
  holo::RealImage right;
};

/// Back-propagates each aperture by `distance` and rescales each intensity
/// image to [0, 1] by its own min and max. An image with max == min is set to 0.
StereoPair render_stereo_pair(const holo::RealImage& left, const holo::RealImage& right, double distance);

/// (x - min) / (max - min); constant images map to 0.
holo::RealImage normalize_contrast(const holo::RealImage& image);

}  // namespace holodepth::stereo
