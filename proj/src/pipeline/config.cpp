#include "holodepth/pipeline/config.hpp"

#include <charconv>
#include <cmath>
#include <thread>

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"

namespace holodepth::pipeline {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Reader {
 public:
  explicit Reader(const ConfigMap& values) : values_(values) {}

  const std::string& text(const std::string& key) const { return values_.at(key); }

  double real(const std::string& key) const {
    try {
      return parse_double(text(key), key);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }

  long long integer(const std::string& key) const {
    try {
      return parse_int(text(key), key);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }

  std::uint64_t seed(const std::string& key) const {
    const std::string& v = text(key);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return out;
  }

  bool flag(const std::string& key) const {
    const std::string& v = text(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
  }

  bool is_auto(const std::string& key) const { return text(key) == "auto"; }

 private:
  const ConfigMap& values_;
};

std::vector<double> parse_rates(const std::string& key, const std::string& text) {
  std::vector<double> rates;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = trim(text.substr(start, comma - start));
    if (!item.empty()) {
      try {
        rates.push_back(parse_double(item, key));
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
    start = comma + 1;
  }
  return rates;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::string section;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(offset, end - offset);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) {
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) throw ParseError("malformed section header", offset);
        section = trim(line.substr(1, line.size() - 2));
      } else {
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("expected 'key = value'", offset);
        const std::string key = trim(line.substr(0, eq));
        out[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
      }
    }
    offset = end + 1;
  }
  return out;
}

void apply_override(ConfigMap& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must be section.key=value, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  if (!default_config().contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
  config[key] = trim(assignment.substr(eq + 1));
}

std::string format_config(const ConfigMap& config) {
  std::string out;
  std::string section;
  for (const auto& [key, value] : config) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      out += (out.empty() ? "[" : "\n[") + s + "]\n";
      section = s;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

const ConfigMap& default_config() {
  static const ConfigMap defaults{
      {"scene.preset", "staircase"},
      {"scene.file", ""},
      {"scene.hologram", ""},
      {"scene.reference_amplitude", "1"},
      {"scene.aperture_offset", "1.8e-3"},
      {"grid.width", "1920"},
      {"grid.height", "1080"},
      {"grid.pitch", "8e-6"},
      {"grid.wavelength", "3.5e-6"},
      {"compress.factor", "10"},
      {"sample.rates", "0.5, 0.25, 0.02"},
      {"sample.pattern_seed", "1"},
      {"sample.noise_seed", "2"},
      {"sample.noise_sigma", "0"},
      {"solver.lambda_init", "auto"},
      {"solver.continuation_factor", "0.5"},
      {"solver.max_outer", "40"},
      {"solver.max_inner", "300"},
      {"solver.step_tolerance", "1e-6"},
      {"solver.residual_slack", "1.05"},
      {"reconstruct.distance", "0.7"},
      {"split.profile", "sharp"},
      {"split.remove_mean", "true"},
      {"disparity.block_size", "23"},
      {"disparity.max_shift", "auto"},
      {"disparity.workers", "auto"},
      {"profile.row", "auto"},
      {"output.dir", "out"},
  };
  return defaults;
}

PipelineConfig resolve_config(const ConfigMap& file_values, const std::vector<std::string>& overrides) {
  ConfigMap merged = default_config();
  for (const auto& [key, value] : file_values) {
    if (!merged.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
    merged[key] = value;
  }
  for (const auto& o : overrides) apply_override(merged, o);

  const Reader r(merged);
  PipelineConfig c;
  c.source = merged;
  c.scene_preset = r.text("scene.preset");
  c.scene_file = r.text("scene.file");
  c.hologram_file = r.text("scene.hologram");
  const int sources = !c.scene_preset.empty() + !c.scene_file.empty() + !c.hologram_file.empty();
  if (!c.hologram_file.empty() || !c.scene_file.empty()) {
    // An explicit file replaces the default preset.
    if (c.source.at("scene.preset") == default_config().at("scene.preset") &&
        !file_values.contains("scene.preset")) {
      c.scene_preset.clear();
    }
  }
  if ((!c.scene_preset.empty()) + !c.scene_file.empty() + !c.hologram_file.empty() != 1)
    throw ConfigError("exactly one of scene.preset, scene.file and scene.hologram must be set (got " +
                      std::to_string(sources) + ")");
  if (!c.scene_preset.empty() && c.scene_preset != "staircase")
    throw ConfigError("unknown scene preset '" + c.scene_preset + "'");
  for (const auto* p : {&c.scene_file, &c.hologram_file})
    if (!p->empty() && !std::filesystem::exists(*p)) throw ConfigError("input file not found: " + p->string());

  c.reference_amplitude = r.real("scene.reference_amplitude");
  if (!(c.reference_amplitude > 0.0)) throw ConfigError("scene.reference_amplitude must be positive");
  c.aperture_offset = r.real("scene.aperture_offset");
  if (!(c.aperture_offset > 0.0)) throw ConfigError("scene.aperture_offset must be positive");

  c.grid.width = static_cast<int>(r.integer("grid.width"));
  c.grid.height = static_cast<int>(r.integer("grid.height"));
  c.grid.pitch = r.real("grid.pitch");
  c.grid.wavelength = r.real("grid.wavelength");
  try {
    c.grid.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  c.compression_factor = static_cast<int>(r.integer("compress.factor"));
  if (c.compression_factor < 1) throw ConfigError("compress.factor must be >= 1 (1 disables compression)");
  c.sampling_rates = parse_rates("sample.rates", r.text("sample.rates"));
  for (double rate : c.sampling_rates)
    if (!(rate > 0.0 && rate <= 1.0)) throw ConfigError("sample.rates: every rate must be in (0, 1]");
  c.pattern_seed = r.seed("sample.pattern_seed");
  c.noise_seed = r.seed("sample.noise_seed");
  c.noise_sigma = r.real("sample.noise_sigma");
  if (!(c.noise_sigma >= 0.0)) throw ConfigError("sample.noise_sigma must be >= 0");

  if (!r.is_auto("solver.lambda_init")) c.solver.lambda_init = r.real("solver.lambda_init");
  c.solver.continuation_factor = r.real("solver.continuation_factor");
  c.solver.max_outer = static_cast<int>(r.integer("solver.max_outer"));
  c.solver.max_inner = static_cast<int>(r.integer("solver.max_inner"));
  c.solver.step_tolerance = r.real("solver.step_tolerance");
  c.solver.residual_slack = r.real("solver.residual_slack");
  try {
    c.solver.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }

  c.distance = r.real("reconstruct.distance");
  if (!(c.distance > 0.0)) throw ConfigError("reconstruct.distance must be positive");

  const std::string& profile = r.text("split.profile");
  if (profile == "linear-ramp") {
    c.split.profile = stereo::SplitProfile::kLinearRamp;
  } else if (profile == "sharp") {
    c.split.profile = stereo::SplitProfile::kSharp;
  } else {
    throw ConfigError("split.profile must be linear-ramp or sharp, got '" + profile + "'");
  }
  c.remove_mean = r.flag("split.remove_mean");

  c.disparity.block_size = static_cast<int>(r.integer("disparity.block_size"));
  c.disparity.max_shift = r.is_auto("disparity.max_shift") ? -1 : static_cast<int>(r.integer("disparity.max_shift"));
  c.disparity.workers = r.is_auto("disparity.workers")
                            ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))
                            : static_cast<int>(r.integer("disparity.workers"));
  if (c.disparity.workers < 1) throw ConfigError("disparity.workers must be >= 1");
  if (!r.is_auto("profile.row")) c.profile_row = static_cast<int>(r.integer("profile.row"));

  c.output_dir = r.text("output.dir");
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  ConfigMap values;
  if (!path.empty()) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    try {
      values = parse_config_text(read_text_file(path));
    } catch (const ParseError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
  return resolve_config(values, overrides);
}

holo::PointScene staircase_scene(double wavelength, double aperture_offset) {
  holo::PointScene scene;
  constexpr double kCenters[3] = {0.0, 2.7e-3, -2.7e-3};
  constexpr double kDepths[3] = {0.25, 0.35, 0.45};
  for (int i = 0; i < 3; ++i) {
    holo::ScenePatch p;
    p.center_x = kCenters[i];
    p.center_y = 0.0;
    p.half_width = 0.9e-3;
    p.half_height = 4.0e-3;
    p.z = kDepths[i];
    p.amplitude = 0.2;
    p.texture_seed = static_cast<std::uint64_t>(i + 1);
    p.beams = holo::aimed_beams(p.center_x, p.z, aperture_offset, wavelength);
    scene.patches.push_back(p);
  }
  return scene;
}

}  // namespace holodepth::pipeline
