#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holodepth/common/kv.hpp"
#include "holodepth/cs/recover.hpp"
#include "holodepth/pipeline/config.hpp"

namespace holodepth::pipeline {

inline constexpr const char* kVersion = "holodepth 0.1.0";

/// A stage failed; what() is prefixed with the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

using Paths = std::vector<std::filesystem::path>;

// File-based stages. Each reads the previous stage's files and returns every
// path it wrote. run_full chains exactly these, so running them by hand gives
// the same bytes.

/// Hologram from the configured source (preset, scene file or hologram file).
Paths synth_stage(const PipelineConfig& config, const std::filesystem::path& out_pfm);
/// Factor 1 copies the input unchanged.
Paths compress_stage(const std::filesystem::path& in_pfm, int factor, const std::filesystem::path& out_pfm);
/// Writes patterns.bin, measurements.csv and measurements.meta into `out_dir`.
Paths sample_stage(const std::filesystem::path& in_pfm, double rate, const PipelineConfig& config,
                   const std::filesystem::path& out_dir);
/// Reads a sample_stage directory, writes recovered.pfm and recovery.meta.
Paths recover_stage(const std::filesystem::path& sample_dir, const cs::SolverConfig& solver,
                    const std::filesystem::path& out_dir, cs::RecoveryResult* result = nullptr);
/// Writes the two aperture holograms and the left, right and full
/// reconstructions (view_left.pfm, view_right.pfm, view_center.pfm).
Paths split_stage(const std::filesystem::path& in_pfm, const PipelineConfig& config,
                  const std::filesystem::path& out_dir);
/// Reads view_left.pfm and view_right.pfm, writes depth_raw.pfm and depth.pgm.
Paths depth_stage(const std::filesystem::path& split_dir, const stereo::DisparityConfig& disparity,
                  const std::filesystem::path& out_dir);
Paths profile_stage(const std::filesystem::path& depth_pgm, std::optional<int> row,
                    const std::filesystem::path& out_csv);
Paths overlay_stage(const std::filesystem::path& reconstruction_pfm, const std::filesystem::path& depth_pgm,
                    const std::filesystem::path& out_png);

struct BranchSummary {
  std::string name;  ///< "reference" or "rate_<r>"
  double sampling_rate = 0.0;  ///< 0 for the reference branch
  std::optional<cs::RecoveryResult> recovery;
  double profile_correlation = 1.0;  ///< against the reference profile
};

struct RunManifest {
  KeyValues entries;
  std::vector<BranchSummary> branches;

  /// sha256.* entries only.
  KeyValues checksums() const;
  bool all_converged() const;
};

/// Full pipeline into config.output_dir: hologram, compression, the reference
/// branch and one branch per sampling rate, then manifest.txt.
/// On failure every file written so far gets a ".partial" suffix and a
/// StageError naming the stage is thrown.
RunManifest run_full(const PipelineConfig& config);

std::string sha256_hex(const std::string& bytes);
std::string branch_name(double rate);

}  // namespace holodepth::pipeline
