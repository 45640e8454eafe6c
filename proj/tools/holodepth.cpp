#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "holodepth/common/error.hpp"
#include "holodepth/pipeline/config.hpp"
#include "holodepth/pipeline/run.hpp"

namespace fs = std::filesystem;
using namespace holodepth;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  bool strict = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Configuration file");
  cmd->add_option("--set", c.overrides, "Override, section.key=value (repeatable)")->allow_extra_args(false);
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_flag("--strict", c.strict, "Exit with code 3 if the solver does not converge");
}

pipeline::PipelineConfig resolve(const Common& c) {
  std::vector<std::string> overrides = c.overrides;
  if (!c.out.empty()) overrides.push_back("output.dir=" + c.out);
  return pipeline::load_config(c.config, overrides);
}

void report(const pipeline::Paths& paths) {
  for (const auto& p : paths) std::cout << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive holography depth pipeline"};
  app.require_subcommand(1);
  Common common;
  std::string in, depth_in;
  std::optional<int> factor, row;
  std::optional<double> rate;

  auto* synth = app.add_subcommand("synth", "Synthesise (or load) the hologram -> hologram.pfm");
  auto* compress = app.add_subcommand("compress", "Bandlimit-compress a hologram -> compressed.pfm");
  auto* sample = app.add_subcommand("sample", "Simulate single-pixel measurements -> patterns.bin, measurements.*");
  auto* recover = app.add_subcommand("recover", "Recover a hologram from measurements -> recovered.pfm");
  auto* split = app.add_subcommand("split", "Split into apertures and reconstruct both views");
  auto* depth = app.add_subcommand("depth", "Disparity map from a split directory -> depth_raw.pfm, depth.pgm");
  auto* profile = app.add_subcommand("profile", "Row profile of a normalised depth map -> profile.csv");
  auto* overlay = app.add_subcommand("overlay", "Colour depth over a reconstruction -> overlay.png");
  auto* run = app.add_subcommand("run", "Whole pipeline with reference and CS branches -> manifest.txt");
  for (auto* cmd : {synth, compress, sample, recover, split, depth, profile, overlay, run}) add_common(cmd, common);
  compress->add_option("--in", in, "Input hologram (.pfm)")->required();
  compress->add_option("--factor", factor, "Compression factor (default compress.factor)");
  sample->add_option("--in", in, "Input hologram (.pfm)")->required();
  sample->add_option("--rate", rate, "Sampling rate in (0, 1] (default: first of sample.rates)");
  recover->add_option("--in", in, "Directory written by sample")->required();
  split->add_option("--in", in, "Hologram (.pfm)")->required();
  depth->add_option("--in", in, "Directory written by split")->required();
  profile->add_option("--in", in, "Normalised depth map (.pgm)")->required();
  profile->add_option("--row", row, "Row index (default profile.row)");
  overlay->add_option("--in", in, "Reconstruction (.pfm)")->required();
  overlay->add_option("--depth", depth_in, "Normalised depth map (.pgm)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    pipeline::PipelineConfig config = resolve(common);
    const fs::path out = config.output_dir;
    if (synth->parsed()) {
      report(pipeline::synth_stage(config, out / "hologram.pfm"));
    } else if (compress->parsed()) {
      const int f = factor.value_or(config.compression_factor);
      if (f < 1) throw pipeline::ConfigError("--factor must be >= 1");
      report(pipeline::compress_stage(in, f, out / "compressed.pfm"));
    } else if (sample->parsed()) {
      if (!rate && config.sampling_rates.empty()) throw pipeline::ConfigError("no sampling rate given");
      const double r = rate.value_or(config.sampling_rates.front());
      if (!(r > 0.0 && r <= 1.0)) throw pipeline::ConfigError("--rate must be in (0, 1]");
      report(pipeline::sample_stage(in, r, config, out));
    } else if (recover->parsed()) {
      cs::RecoveryResult result;
      report(pipeline::recover_stage(in, config.solver, out, &result));
      if (!result.converged) {
        std::cerr << "warning: solver did not reach the residual target (residual "
                  << result.residual_norm << ")\n";
        if (common.strict) return kExitNumeric;
      }
    } else if (split->parsed()) {
      report(pipeline::split_stage(in, config, out));
    } else if (depth->parsed()) {
      report(pipeline::depth_stage(in, config.disparity, out));
    } else if (profile->parsed()) {
      report(pipeline::profile_stage(in, row ? row : config.profile_row, out / "profile.csv"));
    } else if (overlay->parsed()) {
      report(pipeline::overlay_stage(in, depth_in, out / "overlay.png"));
    } else if (run->parsed()) {
      const pipeline::RunManifest manifest = pipeline::run_full(config);
      for (const auto& b : manifest.branches) {
        std::cout << b.name;
        if (b.recovery) {
          std::cout << " converged=" << (b.recovery->converged ? "true" : "false")
                    << " correlation=" << b.profile_correlation;
        }
        std::cout << "\n";
      }
      std::cout << (out / "manifest.txt").string() << "\n";
      if (common.strict && !manifest.all_converged()) return kExitNumeric;
    }
  } catch (const pipeline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pipeline::StageError& e) {
    std::cerr << "error in stage " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
