#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "holodepth/holo/grid.hpp"
#include "holodepth/stereo/disparity.hpp"

namespace holodepth::stereo {

using Rgb = std::array<std::uint8_t, 3>;

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  ///< row-major RGB triplets

  Rgb at(int row, int col) const {
    const std::size_t k = 3 * (static_cast<std::size_t>(row) * width + col);
    return {pixels[k], pixels[k + 1], pixels[k + 2]};
  }
};

/// Depth colormap stops, evenly spaced over [0, 1]: dark blue (distant)
/// through teal and amber to pale yellow (near). Linear interpolation
/// between stops.
inline constexpr std::array<Rgb, 5> kDepthColormap{{
    {16, 16, 96},
    {32, 96, 192},
    {48, 168, 128},
    {232, 168, 32},
    {255, 240, 160},
}};

std::array<double, 3> colormap(double depth);

/// Colour from the normalised depth, brightness from the contrast-normalised
/// reconstruction: rgb = colormap(depth) * (0.25 + 0.75 * r). A flat
/// reconstruction counts as r = 1.
///
/// Throws InvalidArgument on size mismatch or an unnormalised map.
RgbImage overlay(const holo::RealImage& reconstruction, const DepthMap& map);

/// 8-bit RGB PNG. No time or text chunks, so equal images give equal bytes.
std::string encode_png(const RgbImage& image);

}  // namespace holodepth::stereo
