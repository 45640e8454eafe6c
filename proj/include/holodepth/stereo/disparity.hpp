#pragma once

#include <span>
#include <string>
#include <vector>

#include "holodepth/holo/grid.hpp"
#include "holodepth/stereo/split.hpp"

namespace holodepth::stereo {

/// Candidate blocks are taken from the right image at column x - delta for
/// delta = 0, 1, ..., max_shift.
enum class ShiftDirection { kRightImageShiftsPositive };

struct DisparityConfig {
  int block_size = 23;
  int max_shift = -1;  ///< negative means floor(width / 2)
  ShiftDirection direction = ShiftDirection::kRightImageShiftsPositive;
  int workers = 1;  ///< threads; output does not depend on it

  int resolved_max_shift(int width) const { return max_shift < 0 ? width / 2 : max_shift; }
  /// Throws InvalidArgument unless block_size is odd, >= 3 and fits the
  /// image, and 1 <= max_shift < width.
  void validate(int width, int height) const;
};

struct DepthMap {
  holo::RealImage values;
  bool normalized = false;
};

/// Normalised cross-correlation of two equally sized blocks:
/// sum(Rc * Cc) / sqrt(sum(Rc^2) * sum(Cc^2)) with Rc, Cc the mean-subtracted
/// blocks. Returns 0 when either block is constant.
double ncc_score(std::span<const double> reference, std::span<const double> candidate);

/// Winning shift per pixel. For every pixel whose k x k block fits inside the
/// left image, scores candidate blocks in the right image at column
/// x - delta, skipping shifts whose block leaves the image, and keeps the
/// smallest delta among equal maxima. Pixels without a full block copy the
/// nearest pixel that has one.
DepthMap disparity_map(const StereoPair& pair, const DisparityConfig& config);

/// Affine rescale to [0, 1] by the global min and max; a constant map
/// becomes 0.5 everywhere.
DepthMap normalize_depth(const DepthMap& map);

/// Row `row` of the map. Throws InvalidArgument when out of range.
std::vector<double> extract_profile(const DepthMap& map, int row);

/// "column,value" CSV with a header line.
std::string format_profile_csv(std::span<const double> profile);
std::vector<double> parse_profile_csv(const std::string& text);

/// Pearson correlation; 0 when either input is constant.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace holodepth::stereo
