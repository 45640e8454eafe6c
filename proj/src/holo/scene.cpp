#include "holodepth/holo/scene.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"
#include "holodepth/common/philox.hpp"
#include "holodepth/holo/fresnel.hpp"

namespace holodepth::holo {
namespace {

constexpr std::uint64_t kTextureStream = 0x7465787475726531ull;  // "texture1"

bool finite_all(std::initializer_list<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

std::string element_name(std::size_t index, const char* kind, std::size_t kind_index) {
  return "scene element " + std::to_string(index) + " (" + kind + " " + std::to_string(kind_index) + ")";
}

// Pixel-centre tolerance for rectangle membership.
constexpr double kEdgeTol = 1e-9;

}  // namespace

void PointScene::validate() const {
  if (points.empty() && patches.empty()) throw InvalidArgument("scene must contain at least one point or patch");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!finite_all({p.x, p.y, p.z, p.amplitude}))
      throw InvalidArgument(element_name(i, "point", i) + " has non-finite fields");
    if (p.z <= 0.0) throw InvalidArgument(element_name(i, "point", i) + " must have z > 0");
    if (p.amplitude < 0.0) throw InvalidArgument(element_name(i, "point", i) + " has negative amplitude");
  }
  for (std::size_t j = 0; j < patches.size(); ++j) {
    const auto& p = patches[j];
    const std::size_t idx = points.size() + j;
    bool beams_finite = true;
    for (double f : p.beams) beams_finite = beams_finite && std::isfinite(f);
    if (!beams_finite || !finite_all({p.center_x, p.center_y, p.half_width, p.half_height, p.z, p.amplitude}))
      throw InvalidArgument(element_name(idx, "patch", j) + " has non-finite fields");
    if (p.z <= 0.0) throw InvalidArgument(element_name(idx, "patch", j) + " must have z > 0");
    if (p.amplitude < 0.0) throw InvalidArgument(element_name(idx, "patch", j) + " has negative amplitude");
    if (p.half_width < 0.0 || p.half_height < 0.0)
      throw InvalidArgument(element_name(idx, "patch", j) + " has negative half-extent");
  }
}

ComplexField object_field(const PointScene& scene, const OpticalGrid& grid) {
  scene.validate();
  grid.validate();

  const double x_min = grid.x_of(0), x_max = grid.x_of(grid.width - 1);
  const double y_min = grid.y_of(0), y_max = grid.y_of(grid.height - 1);
  const double tol = kEdgeTol * grid.pitch;

  // Source planes keyed by depth; std::map keeps summation order fixed.
  std::map<double, ComplexField> planes;
  auto plane_at = [&](double z) -> ComplexField& {
    auto it = planes.find(z);
    if (it == planes.end()) it = planes.emplace(z, ComplexField(grid)).first;
    return it->second;
  };

  for (std::size_t i = 0; i < scene.points.size(); ++i) {
    const auto& p = scene.points[i];
    const long col = grid.width / 2 + std::lround(p.x / grid.pitch);
    const long row = grid.height / 2 + std::lround(p.y / grid.pitch);
    if (col < 0 || col >= grid.width || row < 0 || row >= grid.height)
      throw InvalidArgument(element_name(i, "point", i) + " lies outside the grid");
    plane_at(p.z).at(static_cast<int>(row), static_cast<int>(col)) += p.amplitude;
  }

  for (std::size_t j = 0; j < scene.patches.size(); ++j) {
    const auto& p = scene.patches[j];
    const std::size_t idx = scene.points.size() + j;
    if (p.center_x - p.half_width < x_min - tol || p.center_x + p.half_width > x_max + tol ||
        p.center_y - p.half_height < y_min - tol || p.center_y + p.half_height > y_max + tol)
      throw InvalidArgument(element_name(idx, "patch", j) + " does not fit inside the grid");

    const CounterRng texture(p.texture_seed, kTextureStream);
    ComplexField& plane = plane_at(p.z);
    for (int r = 0; r < grid.height; ++r) {
      if (std::abs(grid.y_of(r) - p.center_y) > p.half_height + tol) continue;
      for (int c = 0; c < grid.width; ++c) {
        const double dx = grid.x_of(c) - p.center_x;
        if (std::abs(dx) > p.half_width + tol) continue;
        const auto pixel = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(grid.width) +
                           static_cast<std::uint64_t>(c);
        const double value = p.amplitude * (0.5 + 0.5 * texture.uniform(pixel));
        if (p.beams.empty()) {
          plane.at(r, c) += value;
        } else {
          std::complex<double> tilt = 0.0;
          for (double f : p.beams) tilt += std::polar(1.0, 2.0 * std::numbers::pi * f * dx);
          plane.at(r, c) += value * tilt;
        }
      }
    }
  }

  ComplexField total(grid);
  for (const auto& [z, source] : planes) {
    const ComplexField propagated = fresnel_propagate(source, z);
    auto dst = total.samples();
    auto src = propagated.samples();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
  return total;
}

RealImage synthesize_hologram(const PointScene& scene, const OpticalGrid& grid, double reference_amplitude) {
  if (!(std::isfinite(reference_amplitude) && reference_amplitude > 0.0))
    throw InvalidArgument("reference amplitude must be positive and finite");
  const ComplexField object = object_field(scene, grid);
  RealImage hologram(grid);
  auto dst = hologram.samples();
  auto src = object.samples();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::norm(reference_amplitude + src[k]);
  return hologram;
}

namespace {

double parse_number(const std::string& token, std::size_t offset) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) throw ParseError("scene: bad number '" + token + "'", offset);
  return value;
}

std::uint64_t parse_seed(const std::string& token, std::size_t offset) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError("scene: bad texture seed '" + token + "'", offset);
  return value;
}

}  // namespace

PointScene parse_scene(const std::string& text) {
  PointScene scene;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(offset, end - offset);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string kind;
    if (fields >> kind) {
      std::vector<std::string> tokens;
      for (std::string t; fields >> t;) tokens.push_back(t);
      if (kind == "point") {
        if (tokens.size() != 4) throw ParseError("scene: point needs x y z amplitude", offset);
        scene.points.push_back({parse_number(tokens[0], offset), parse_number(tokens[1], offset),
                                parse_number(tokens[2], offset), parse_number(tokens[3], offset)});
      } else if (kind == "patch") {
        if (tokens.size() < 7) throw ParseError("scene: patch needs cx cy half_w half_h z amplitude seed", offset);
        ScenePatch p;
        p.center_x = parse_number(tokens[0], offset);
        p.center_y = parse_number(tokens[1], offset);
        p.half_width = parse_number(tokens[2], offset);
        p.half_height = parse_number(tokens[3], offset);
        p.z = parse_number(tokens[4], offset);
        p.amplitude = parse_number(tokens[5], offset);
        p.texture_seed = parse_seed(tokens[6], offset);
        for (std::size_t k = 7; k < tokens.size(); ++k) p.beams.push_back(parse_number(tokens[k], offset));
        scene.patches.push_back(p);
      } else {
        throw ParseError("scene: unknown element '" + kind + "'", offset);
      }
    }
    offset = end + 1;
  }
  scene.validate();
  return scene;
}

std::string format_scene(const PointScene& scene) {
  std::string out;
  for (const auto& p : scene.points)
    out += "point " + format_double(p.x) + ' ' + format_double(p.y) + ' ' + format_double(p.z) + ' ' +
           format_double(p.amplitude) + '\n';
  for (const auto& p : scene.patches) {
    out += "patch " + format_double(p.center_x) + ' ' + format_double(p.center_y) + ' ' +
           format_double(p.half_width) + ' ' + format_double(p.half_height) + ' ' + format_double(p.z) + ' ' +
           format_double(p.amplitude) + ' ' + std::to_string(p.texture_seed);
    for (double f : p.beams) out += ' ' + format_double(f);
    out += '\n';
  }
  return out;
}

std::vector<double> aimed_beams(double center_x, double z, double aperture_offset, double wavelength) {
  if (!(z > 0.0) || !(wavelength > 0.0) || !(aperture_offset > 0.0))
    throw InvalidArgument("aimed_beams: z, wavelength and aperture offset must be positive");
  return {(-aperture_offset - center_x) / (wavelength * z), (aperture_offset - center_x) / (wavelength * z)};
}

}  // namespace holodepth::holo
