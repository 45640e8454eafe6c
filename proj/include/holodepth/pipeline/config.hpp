#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holodepth/cs/recover.hpp"
#include "holodepth/holo/grid.hpp"
#include "holodepth/holo/scene.hpp"
#include "holodepth/stereo/disparity.hpp"
#include "holodepth/stereo/split.hpp"

namespace holodepth::pipeline {

/// Bad configuration: unknown key, bad value or unresolvable path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `section.key` -> value map. File syntax is `key = value` lines
/// under `[section]` headers, with '#' comments.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
/// Applies a `section.key=value` override; unknown keys are rejected.
void apply_override(ConfigMap& config, const std::string& assignment);
std::string format_config(const ConfigMap& config);

/// Built-in defaults for every recognised key.
const ConfigMap& default_config();

struct PipelineConfig {
  // Input: a scene (preset or file) synthesised on `grid`, or a hologram file.
  std::string scene_preset;  ///< "staircase" or empty
  std::filesystem::path scene_file;
  std::filesystem::path hologram_file;
  double reference_amplitude = 1.0;
  double aperture_offset = 0.0;  ///< staircase beam aim [m]
  holo::OpticalGrid grid;

  int compression_factor = 10;
  std::vector<double> sampling_rates;
  std::uint64_t pattern_seed = 1;
  std::uint64_t noise_seed = 2;
  double noise_sigma = 0.0;
  cs::SolverConfig solver;

  double distance = 0.0;
  stereo::SplitConfig split;
  bool remove_mean = true;
  stereo::DisparityConfig disparity;
  std::optional<int> profile_row;  ///< unset: height / 2

  std::filesystem::path output_dir;
  ConfigMap source;  ///< resolved key/value snapshot
};

/// Merges defaults < file < overrides and validates the result.
/// Throws ConfigError.
PipelineConfig resolve_config(const ConfigMap& file_values, const std::vector<std::string>& overrides);
PipelineConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

/// The bundled three-patch staircase at 0.25, 0.35 and 0.45 m. Each patch
/// sends two beams aimed at x = +-aperture_offset on the hologram plane.
holo::PointScene staircase_scene(double wavelength, double aperture_offset);

}  // namespace holodepth::pipeline
