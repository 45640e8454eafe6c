#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "holodepth/common/kv.hpp"
#include "holodepth/holo/grid.hpp"

namespace holodepth::holo {

/// Raw single-channel float map.
struct FloatMap {
  int width = 0;
  int height = 0;
  std::vector<double> samples;  ///< row-major, row 0 at the top
};

/// Portable float map: "Pf\n<w> <h>\n-1.0\n" followed by little-endian
/// float32 samples, bottom row first. Samples are rounded to float32.
std::string encode_pfm(const FloatMap& map);
FloatMap decode_pfm(const std::string& bytes);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples) of the values
/// mapped linearly from [lo, hi] to [0, 65535]; lo == hi maps everything to 0.
std::string encode_pgm16(const FloatMap& map, double lo, double hi);
/// Inverse of encode_pgm16 given the same range.
FloatMap decode_pgm16(const std::string& bytes, double lo, double hi);

KeyValues grid_key_values(const OpticalGrid& grid);
OpticalGrid parse_grid(const std::string& text, const std::string& file);

/// `<path>` is the .pfm; grid metadata goes to `<path without .pfm>.grid`.
void save_real_image(const std::filesystem::path& path, const RealImage& image);
RealImage load_real_image(const std::filesystem::path& path);
std::filesystem::path grid_sidecar(const std::filesystem::path& pfm_path);

/// Complex field as `<stem>.hdr` (grid key=value) plus `<stem>.re.pfm` and
/// `<stem>.im.pfm`. Returns the written paths in that order.
std::vector<std::filesystem::path> save_complex_field(const std::filesystem::path& stem, const ComplexField& field);
ComplexField load_complex_field(const std::filesystem::path& stem);

/// 16-bit PGM visualisation of an image over its own min/max, plus a
/// `<path>.range` sidecar with `min=` and `max=`.
void save_pgm16_with_range(const std::filesystem::path& path, const FloatMap& map, double lo, double hi);

}  // namespace holodepth::holo
