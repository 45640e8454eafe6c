#include "holodepth/stereo/split.hpp"

#include <algorithm>

#include "holodepth/common/error.hpp"
#include "holodepth/holo/fresnel.hpp"

namespace holodepth::stereo {

double left_weight(int col, int width, SplitProfile profile) {
  if (profile == SplitProfile::kSharp) return col < width / 2 ? 1.0 : 0.0;
  return 1.0 - static_cast<double>(col) / static_cast<double>(width - 1);
}

std::pair<holo::RealImage, holo::RealImage> gradual_split(const holo::RealImage& hologram,
                                                          const SplitConfig& config) {
  const int w = hologram.width();
  if (w < 2) throw InvalidArgument("gradual_split: width must be >= 2, got " + std::to_string(w));
  holo::RealImage left(hologram.grid()), right(hologram.grid());
  for (int r = 0; r < hologram.height(); ++r)
    for (int c = 0; c < w; ++c) {
      const double h = hologram.at(r, c);
      const double l = left_weight(c, w, config.profile) * h;
      left.at(r, c) = l;
      right.at(r, c) = h - l;
    }
  return {std::move(left), std::move(right)};
}

holo::RealImage remove_mean(const holo::RealImage& hologram) {
  double sum = 0.0;
  for (double v : hologram.samples()) sum += v;
  const double mean = sum / static_cast<double>(hologram.size());
  holo::RealImage out = hologram;
  for (double& v : out.samples()) v -= mean;
  return out;
}

holo::RealImage normalize_contrast(const holo::RealImage& image) {
  const auto [lo, hi] = std::minmax_element(image.samples().begin(), image.samples().end());
  const double min = *lo, span = *hi - *lo;
  holo::RealImage out(image.grid());
  if (span > 0.0) {
    auto dst = out.samples();
    auto src = image.samples();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = (src[k] - min) / span;
  }
  return out;
}

StereoPair render_stereo_pair(const holo::RealImage& left, const holo::RealImage& right, double distance) {
  if (!(left.grid() == right.grid())) throw InvalidArgument("render_stereo_pair: apertures are on different grids");
  return {normalize_contrast(holo::back_propagate_reconstruct(left, distance)),
          normalize_contrast(holo::back_propagate_reconstruct(right, distance))};
}

}  // namespace holodepth::stereo
