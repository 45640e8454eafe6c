#include "holodepth/holo/fresnel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "holodepth/holo/fft.hpp"

namespace holodepth::holo {

ComplexField fresnel_propagate(const ComplexField& field, double distance) {
  if (!std::isfinite(distance)) throw InvalidArgument("fresnel_propagate: distance must be finite");
  require_finite(field, "fresnel_propagate input");

  ComplexField out = field;
  if (distance == 0.0) return out;

  const OpticalGrid& g = field.grid();
  const double lambda = g.wavelength;
  fft2_unitary(out.samples(), g.height, g.width, FftDirection::kForward);

  constexpr double pi = std::numbers::pi;
  const std::complex<double> carrier = std::polar(1.0, std::fmod(2.0 * pi * distance / lambda, 2.0 * pi));
  std::vector<double> fx2(static_cast<std::size_t>(g.width));
  for (int c = 0; c < g.width; ++c) {
    const double f = fft_frequency(c, g.width, g.pitch);
    fx2[static_cast<std::size_t>(c)] = f * f;
  }
  for (int r = 0; r < g.height; ++r) {
    const double fy = fft_frequency(r, g.height, g.pitch);
    const double fy2 = fy * fy;
    for (int c = 0; c < g.width; ++c) {
      const double phase = -pi * lambda * distance * (fx2[static_cast<std::size_t>(c)] + fy2);
      out.at(r, c) *= carrier * std::polar(1.0, phase);
    }
  }

  fft2_unitary(out.samples(), g.height, g.width, FftDirection::kInverse);
  return out;
}

RealImage back_propagate_reconstruct(const RealImage& hologram, double distance) {
  if (!(std::isfinite(distance) && distance > 0.0))
    throw InvalidArgument("back_propagate_reconstruct: distance must be positive and finite");
  return intensity(fresnel_propagate(to_complex(hologram), -distance));
}

}  // namespace holodepth::holo
