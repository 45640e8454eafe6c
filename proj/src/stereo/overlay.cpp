#include "holodepth/stereo/overlay.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>

#include "holodepth/common/error.hpp"

namespace holodepth::stereo {

std::array<double, 3> colormap(double depth) {
  const double t = std::clamp(depth, 0.0, 1.0) * (kDepthColormap.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(t), kDepthColormap.size() - 2);
  const double f = t - static_cast<double>(i);
  std::array<double, 3> out{};
  for (int ch = 0; ch < 3; ++ch)
    out[ch] = (1.0 - f) * kDepthColormap[i][ch] + f * kDepthColormap[i + 1][ch];
  return out;
}

RgbImage overlay(const holo::RealImage& reconstruction, const DepthMap& map) {
  if (reconstruction.width() != map.values.width() || reconstruction.height() != map.values.height())
    throw InvalidArgument("overlay: reconstruction and depth map sizes differ");
  if (!map.normalized) throw InvalidArgument("overlay: depth map must be normalised");
  const holo::RealImage lum = normalize_contrast(reconstruction);
  bool flat = true;
  for (double v : lum.samples()) flat = flat && v == 0.0;

  RgbImage out{reconstruction.width(), reconstruction.height(), {}};
  out.pixels.resize(3 * reconstruction.size());
  for (std::size_t k = 0; k < reconstruction.size(); ++k) {
    const double brightness = 0.25 + 0.75 * (flat ? 1.0 : lum.data()[k]);
    const auto rgb = colormap(map.values.data()[k]);
    for (int ch = 0; ch < 3; ++ch)
      out.pixels[3 * k + ch] = static_cast<std::uint8_t>(std::lround(std::clamp(rgb[ch] * brightness, 0.0, 255.0)));
  }
  return out;
}

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void ignore_flush(png_structp) {}

}  // namespace

std::string encode_png(const RgbImage& image) {
  if (image.width < 1 || image.height < 1 ||
      image.pixels.size() != 3 * static_cast<std::size_t>(image.width) * image.height)
    throw InvalidArgument("encode_png: pixel buffer does not match dimensions");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::bad_alloc();
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::bad_alloc();
  }
  std::string out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed");
  }
  png_set_write_fn(png, &out, append_bytes, ignore_flush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  for (int r = 0; r < image.height; ++r) {
    auto* row = const_cast<png_bytep>(image.pixels.data() + 3 * static_cast<std::size_t>(r) * image.width);
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace holodepth::stereo
