#include "holodepth/pipeline/run.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <functional>

#include "holodepth/common/error.hpp"
#include "holodepth/cs/patterns.hpp"
#include "holodepth/cs/sensing.hpp"
#include "holodepth/holo/bandlimit.hpp"
#include "holodepth/holo/fresnel.hpp"
#include "holodepth/holo/image_io.hpp"
#include "holodepth/holo/scene.hpp"
#include "holodepth/stereo/depth_io.hpp"
#include "holodepth/stereo/disparity.hpp"
#include "holodepth/stereo/overlay.hpp"
#include "holodepth/stereo/split.hpp"

namespace holodepth::pipeline {
namespace fs = std::filesystem;

namespace {

Paths saved_image(const fs::path& pfm, const holo::RealImage& image) {
  holo::save_real_image(pfm, image);
  return {pfm, holo::grid_sidecar(pfm)};
}

fs::path with_suffix(fs::path p, const char* suffix) {
  p += suffix;
  return p;
}

void append(Paths& into, const Paths& more) { into.insert(into.end(), more.begin(), more.end()); }

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string branch_name(double rate) { return "rate_" + format_double(rate); }

Paths synth_stage(const PipelineConfig& config, const fs::path& out_pfm) {
  if (!config.hologram_file.empty()) return saved_image(out_pfm, holo::load_real_image(config.hologram_file));
  const holo::PointScene scene = config.scene_file.empty()
                                     ? staircase_scene(config.grid.wavelength, config.aperture_offset)
                                     : holo::parse_scene(read_text_file(config.scene_file));
  return saved_image(out_pfm, holo::synthesize_hologram(scene, config.grid, config.reference_amplitude));
}

Paths compress_stage(const fs::path& in_pfm, int factor, const fs::path& out_pfm) {
  const holo::RealImage h = holo::load_real_image(in_pfm);
  return saved_image(out_pfm, factor == 1 ? h : holo::bandlimit_compress(h, factor));
}

Paths sample_stage(const fs::path& in_pfm, double rate, const PipelineConfig& config, const fs::path& out_dir) {
  const holo::RealImage h = holo::load_real_image(in_pfm);
  const cs::BinaryPatternEnsemble patterns = cs::generate_patterns(h.size(), rate, config.pattern_seed);
  const cs::Measurements m = cs::measure(h, patterns, config.noise_sigma, config.noise_seed);
  KeyValues meta = holo::grid_key_values(h.grid());
  meta.emplace_back("epsilon", format_double(m.epsilon));
  meta.emplace_back("sampling_rate", format_double(rate));
  meta.emplace_back("noise_sigma", format_double(config.noise_sigma));
  meta.emplace_back("noise_seed", std::to_string(config.noise_seed));
  const Paths out{out_dir / "patterns.bin", out_dir / "measurements.csv", out_dir / "measurements.meta"};
  write_file_atomic(out[0], cs::serialize_patterns(patterns));
  write_file_atomic(out[1], cs::format_measurements_csv(m));
  write_file_atomic(out[2], format_key_values(meta));
  return out;
}

Paths recover_stage(const fs::path& sample_dir, const cs::SolverConfig& solver, const fs::path& out_dir,
                    cs::RecoveryResult* result) {
  const fs::path meta_path = sample_dir / "measurements.meta";
  const std::string meta_text = read_text_file(meta_path);
  const auto meta = parse_key_values(meta_text);
  const holo::OpticalGrid grid = holo::parse_grid(meta_text, meta_path.string());
  cs::Measurements m;
  m.values = cs::parse_measurements_csv(read_text_file(sample_dir / "measurements.csv"));
  m.epsilon = parse_double(require_key(meta, "epsilon", meta_path.string()), "epsilon");
  m.sampling_rate = parse_double(require_key(meta, "sampling_rate", meta_path.string()), "sampling_rate");
  const cs::BinaryPatternEnsemble patterns = cs::deserialize_patterns(read_text_file(sample_dir / "patterns.bin"));
  if (patterns.n_pixels != grid.pixel_count() || patterns.n_measurements != m.values.size())
    throw InvalidArgument("patterns, measurements and grid disagree in size");

  cs::RecoveryResult r = cs::recover(m, patterns, grid, solver);
  Paths out = saved_image(out_dir / "recovered.pfm", r.image);
  const KeyValues info{{"converged", r.converged ? "true" : "false"},
                       {"residual_norm", format_double(r.residual_norm)},
                       {"residual_target", format_double(cs::residual_target(m, solver))},
                       {"iterations", std::to_string(r.iterations)},
                       {"stages", std::to_string(r.stages)},
                       {"final_lambda", format_double(r.final_lambda)}};
  out.push_back(out_dir / "recovery.meta");
  write_file_atomic(out.back(), format_key_values(info));
  if (result) *result = std::move(r);
  return out;
}

Paths split_stage(const fs::path& in_pfm, const PipelineConfig& config, const fs::path& out_dir) {
  holo::RealImage h = holo::load_real_image(in_pfm);
  if (config.remove_mean) h = stereo::remove_mean(h);
  const auto [left, right] = stereo::gradual_split(h, config.split);
  const stereo::StereoPair views = stereo::render_stereo_pair(left, right, config.distance);
  const holo::RealImage center =
      stereo::normalize_contrast(holo::back_propagate_reconstruct(h, config.distance));
  Paths out;
  append(out, saved_image(out_dir / "aperture_left.pfm", left));
  append(out, saved_image(out_dir / "aperture_right.pfm", right));
  append(out, saved_image(out_dir / "view_left.pfm", views.left));
  append(out, saved_image(out_dir / "view_right.pfm", views.right));
  append(out, saved_image(out_dir / "view_center.pfm", center));
  return out;
}

Paths depth_stage(const fs::path& split_dir, const stereo::DisparityConfig& disparity, const fs::path& out_dir) {
  const stereo::StereoPair pair{holo::load_real_image(split_dir / "view_left.pfm"),
                                holo::load_real_image(split_dir / "view_right.pfm")};
  const stereo::DepthMap raw = stereo::disparity_map(pair, disparity);
  const fs::path raw_path = out_dir / "depth_raw.pfm";
  const fs::path norm_path = out_dir / "depth.pgm";
  stereo::save_depth_map(raw_path, raw);
  stereo::save_depth_map(norm_path, stereo::normalize_depth(raw));
  return {raw_path, holo::grid_sidecar(raw_path), norm_path, with_suffix(norm_path, ".range"),
          holo::grid_sidecar(norm_path)};
}

Paths profile_stage(const fs::path& depth_pgm, std::optional<int> row, const fs::path& out_csv) {
  const stereo::DepthMap map = stereo::load_depth_map(depth_pgm);
  const auto profile = stereo::extract_profile(map, row.value_or(map.values.height() / 2));
  write_file_atomic(out_csv, stereo::format_profile_csv(profile));
  return {out_csv};
}

Paths overlay_stage(const fs::path& reconstruction_pfm, const fs::path& depth_pgm, const fs::path& out_png) {
  const holo::RealImage recon = holo::load_real_image(reconstruction_pfm);
  const stereo::DepthMap map = stereo::load_depth_map(depth_pgm);
  write_file_atomic(out_png, stereo::encode_png(stereo::overlay(recon, map)));
  return {out_png};
}

KeyValues RunManifest::checksums() const {
  KeyValues out;
  for (const auto& [k, v] : entries)
    if (k.starts_with("sha256.")) out.emplace_back(k, v);
  return out;
}

bool RunManifest::all_converged() const {
  for (const auto& b : branches)
    if (b.recovery && !b.recovery->converged) return false;
  return true;
}

RunManifest run_full(const PipelineConfig& config) {
  const fs::path root = config.output_dir;
  fs::create_directories(root);
  RunManifest manifest;
  KeyValues times;
  Paths written;

  const auto stage = [&](const std::string& name, const std::function<Paths()>& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
      append(written, body());
    } catch (const std::exception& e) {
      for (const auto& p : written)
        if (fs::exists(p)) fs::rename(p, with_suffix(p, ".partial"));
      throw StageError(name, e.what());
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    times.emplace_back("time." + name, format_double(std::round(dt.count() * 1000.0) / 1000.0));
  };

  const fs::path hologram = root / "hologram.pfm";
  const fs::path compressed = root / "compressed.pfm";
  stage("synth", [&] { return synth_stage(config, hologram); });
  stage("compress", [&] { return compress_stage(hologram, config.compression_factor, compressed); });

  std::vector<double> rates{0.0};
  rates.insert(rates.end(), config.sampling_rates.begin(), config.sampling_rates.end());
  std::vector<double> reference_profile;
  for (double rate : rates) {
    BranchSummary branch;
    branch.name = rate == 0.0 ? "reference" : branch_name(rate);
    branch.sampling_rate = rate;
    const fs::path dir = root / branch.name;
    fs::path source = compressed;
    if (rate != 0.0) {
      stage("sample." + branch.name, [&] { return sample_stage(compressed, rate, config, dir); });
      cs::RecoveryResult result;
      stage("recover." + branch.name, [&] { return recover_stage(dir, config.solver, dir, &result); });
      branch.recovery = std::move(result);
      source = dir / "recovered.pfm";
    }
    stage("split." + branch.name, [&] { return split_stage(source, config, dir); });
    stage("depth." + branch.name, [&] { return depth_stage(dir, config.disparity, dir); });
    stage("profile." + branch.name, [&] { return profile_stage(dir / "depth.pgm", config.profile_row, dir / "profile.csv"); });
    stage("overlay." + branch.name,
          [&] { return overlay_stage(dir / "view_center.pfm", dir / "depth.pgm", dir / "overlay.png"); });

    const auto profile = stereo::parse_profile_csv(read_text_file(dir / "profile.csv"));
    if (rate == 0.0) reference_profile = profile;
    branch.profile_correlation = stereo::pearson_correlation(profile, reference_profile);
    manifest.branches.push_back(std::move(branch));
  }

  KeyValues& e = manifest.entries;
  e.emplace_back("version", kVersion);
  for (const auto& [k, v] : config.source) e.emplace_back("config." + k, v);
  e.insert(e.end(), times.begin(), times.end());
  for (const auto& b : manifest.branches) {
    if (b.recovery) {
      e.emplace_back("recovery." + b.name + ".converged", b.recovery->converged ? "true" : "false");
      e.emplace_back("recovery." + b.name + ".residual_norm", format_double(b.recovery->residual_norm));
      e.emplace_back("recovery." + b.name + ".iterations", std::to_string(b.recovery->iterations));
    }
    if (b.sampling_rate != 0.0) e.emplace_back("correlation." + b.name, format_double(b.profile_correlation));
  }
  for (const auto& p : written) {
    const std::string rel = fs::relative(p, root).generic_string();
    e.emplace_back("sha256." + rel, sha256_hex(read_text_file(p)));
  }
  write_file_atomic(root / "manifest.txt", format_key_values(e));
  return manifest;
}

}  // namespace holodepth::pipeline
