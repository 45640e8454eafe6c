#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holodepth/holo/grid.hpp"

namespace holodepth::holo {

/// Point emitter, rendered as a single-pixel impulse in its own plane.
struct ScenePoint {
  double x = 0.0;  ///< lateral position [m], 0 on axis
  double y = 0.0;
  double z = 0.0;  ///< distance from the hologram plane [m], > 0
  double amplitude = 1.0;
};

/// Axis-aligned textured rectangle. Each covered pixel gets amplitude
/// `amplitude * t` with t ~ U[0.5, 1] drawn from `texture_seed`.
///
/// `beams` lists spatial frequencies f_k [cycles/m]; when non-empty the patch
/// is multiplied by sum_k exp(2 pi i f_k (x - center_x)), so its light leaves
/// as tilted beams at angles lambda*f_k. Empty leaves the patch untilted.
struct ScenePatch {
  double center_x = 0.0;
  double center_y = 0.0;
  double half_width = 0.0;   ///< half-extent along x [m]
  double half_height = 0.0;  ///< half-extent along y [m]
  double z = 0.0;
  double amplitude = 1.0;
  std::uint64_t texture_seed = 0;
  std::vector<double> beams;
};

struct PointScene {
  std::vector<ScenePoint> points;
  std::vector<ScenePatch> patches;

  /// Throws InvalidArgument when empty, or when any z <= 0, any amplitude < 0
  /// or any value is non-finite.
  void validate() const;
};

/// In-line hologram |R + O|^2 of a scene on `grid` with a constant on-axis
/// plane reference R = reference_amplitude. O is the sum of every element's
/// field propagated forward by its z (elements sharing a z are propagated
/// together). Deterministic for a given scene.
///
/// Throws InvalidArgument naming the offending element when an element does
/// not fit laterally inside the grid.
RealImage synthesize_hologram(const PointScene& scene, const OpticalGrid& grid, double reference_amplitude);

/// Complex object field in the hologram plane (O above).
ComplexField object_field(const PointScene& scene, const OpticalGrid& grid);

/// Scene text format, one element per line, '#' comments:
///   point <x> <y> <z> <amplitude>
///   patch <cx> <cy> <half_w> <half_h> <z> <amplitude> <texture_seed> [beam_frequency ...]
/// Throws ParseError with the byte offset of the offending line.
PointScene parse_scene(const std::string& text);
std::string format_scene(const PointScene& scene);

/// Two beam frequencies that send a patch centred at `center_x`, depth `z`,
/// onto the hologram-plane points x = -aperture_offset and x = +aperture_offset.
std::vector<double> aimed_beams(double center_x, double z, double aperture_offset, double wavelength);

}  // namespace holodepth::holo
