#include "holodepth/holo/bandlimit.hpp"

#include <cmath>
#include <string>

#include "holodepth/holo/fft.hpp"

namespace holodepth::holo {

RealImage bandlimit_compress(const RealImage& hologram, int factor) {
  if (factor < 2) throw InvalidArgument("bandlimit_compress: factor must be >= 2");
  const OpticalGrid& in = hologram.grid();
  if (in.width % factor != 0 || in.height % factor != 0)
    throw InvalidArgument("bandlimit_compress: width and height (" + std::to_string(in.width) + "x" +
                          std::to_string(in.height) + ") must both be divisible by the factor " +
                          std::to_string(factor));
  require_finite(hologram, "bandlimit_compress input");

  OpticalGrid out_grid = in;
  out_grid.width = in.width / factor;
  out_grid.height = in.height / factor;
  out_grid.pitch = in.pitch * factor;

  ComplexField spectrum = to_complex(hologram);
  fft2_unitary(spectrum.samples(), in.height, in.width, FftDirection::kForward);

  ComplexField cropped(out_grid);
  const int half_w = out_grid.width / 2, half_h = out_grid.height / 2;
  for (int r = 0; r < out_grid.height; ++r) {
    const int kr = r < out_grid.height - half_h ? r : r - out_grid.height;  // signed index
    const int src_r = (kr + in.height) % in.height;
    for (int c = 0; c < out_grid.width; ++c) {
      const int kc = c < out_grid.width - half_w ? c : c - out_grid.width;
      const int src_c = (kc + in.width) % in.width;
      cropped.at(r, c) = spectrum.at(src_r, src_c);
    }
  }
  fft2_unitary(cropped.samples(), out_grid.height, out_grid.width, FftDirection::kInverse);

  // Unitary transforms scale the DC sample by sqrt(N_out / N_in) = 1/factor;
  // one more 1/factor restores the mean.
  RealImage out(out_grid);
  auto dst = out.samples();
  auto src = cropped.samples();
  const double scale = 1.0 / factor;
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = src[k].real() * scale;
  return out;
}

}  // namespace holodepth::holo
