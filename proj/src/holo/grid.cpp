#include "holodepth/holo/grid.hpp"

#include <cmath>
#include <string>

namespace holodepth::holo {

void OpticalGrid::validate() const {
  if (width < 1 || height < 1)
    throw InvalidArgument("grid dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  if (!(std::isfinite(pitch) && pitch > 0.0)) throw InvalidArgument("grid pitch must be positive and finite");
  if (!(std::isfinite(wavelength) && wavelength > 0.0))
    throw InvalidArgument("grid wavelength must be positive and finite");
}

void require_finite(const RealImage& image, const char* what) {
  for (double v : image.samples())
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " contains non-finite samples");
}

void require_finite(const ComplexField& field, const char* what) {
  for (const auto& v : field.samples())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument(std::string(what) + " contains non-finite samples");
}

ComplexField to_complex(const RealImage& image) {
  ComplexField out(image.grid());
  auto dst = out.samples();
  auto src = image.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = {src[i], 0.0};
  return out;
}

RealImage intensity(const ComplexField& field) {
  RealImage out(field.grid());
  auto dst = out.samples();
  auto src = field.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::norm(src[i]);
  return out;
}

}  // namespace holodepth::holo
