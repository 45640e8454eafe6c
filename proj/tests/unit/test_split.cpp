#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "holodepth/common/error.hpp"
#include "holodepth/common/philox.hpp"
#include "holodepth/stereo/split.hpp"

using namespace holodepth;

namespace {

holo::RealImage random_image(int w, int h, std::uint64_t seed, double scale = 1.0) {
  const CounterRng rng(seed, 41);
  holo::RealImage img(holo::OpticalGrid{w, h, 8e-5, 3.5e-6});
  for (std::size_t k = 0; k < img.size(); ++k) img.data()[k] = scale * (1.0 + rng.uniform(k));
  return img;
}

}  // namespace

TEST_CASE("weights form a partition of unity") {
  for (auto profile : {stereo::SplitProfile::kLinearRamp, stereo::SplitProfile::kSharp}) {
    for (int w : {2, 3, 10, 192}) {
      CHECK(stereo::left_weight(0, w, profile) == 1.0);
      CHECK(stereo::left_weight(w - 1, w, profile) == 0.0);
      for (int c = 1; c < w; ++c) CHECK(stereo::left_weight(c, w, profile) <= stereo::left_weight(c - 1, w, profile));
    }
  }
  CHECK(stereo::left_weight(5, 11, stereo::SplitProfile::kLinearRamp) == 0.5);
  CHECK(stereo::left_weight(4, 10, stereo::SplitProfile::kSharp) == 1.0);
  CHECK(stereo::left_weight(5, 10, stereo::SplitProfile::kSharp) == 0.0);
}

TEST_CASE("left + right reproduces the hologram to one rounding") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const double scale = std::pow(10.0, static_cast<double>(seed % 7) - 3.0);
    const auto h = random_image(17 + static_cast<int>(seed), 9, seed, scale);
    for (auto profile : {stereo::SplitProfile::kLinearRamp, stereo::SplitProfile::kSharp}) {
      const auto [l, r] = stereo::gradual_split(h, {stereo::SplitDirection::kHorizontal, profile});
      for (std::size_t k = 0; k < h.size(); ++k) {
        const double sum = l.data()[k] + r.data()[k];
        CHECK(std::abs(sum - h.data()[k]) <= std::nextafter(std::abs(h.data()[k]), INFINITY) - std::abs(h.data()[k]));
      }
    }
  }
}

TEST_CASE("left aperture is the weighted hologram") {
  const auto h = random_image(8, 3, 2);
  const auto [l, r] = stereo::gradual_split(h, {});
  for (int row = 0; row < 3; ++row)
    for (int c = 0; c < 8; ++c) {
      CHECK(l.at(row, c) == (1.0 - c / 7.0) * h.at(row, c));
      CHECK(r.at(row, c) == h.at(row, c) - l.at(row, c));
    }
  CHECK_THROWS_AS(stereo::gradual_split(random_image(1, 3, 1), {}), InvalidArgument);
}

TEST_CASE("mean removal and contrast normalisation") {
  const auto h = random_image(13, 7, 4);
  const auto z = stereo::remove_mean(h);
  double s = 0;
  for (double v : z.data()) s += v;
  CHECK(std::abs(s) < 1e-12);
  const auto n = stereo::normalize_contrast(h);
  double lo = 1, hi = 0;
  for (double v : n.data()) lo = std::min(lo, v), hi = std::max(hi, v);
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);
  const auto flat = stereo::normalize_contrast(holo::RealImage(h.grid(), 2.0));
  for (double v : flat.data()) CHECK(v == 0.0);
}

TEST_CASE("stereo views are normalised and deterministic") {
  const auto h = random_image(64, 32, 6);
  const auto [l, r] = stereo::gradual_split(h, {});
  const auto pair = stereo::render_stereo_pair(l, r, 0.1);
  const auto again = stereo::render_stereo_pair(l, r, 0.1);
  CHECK(pair.left == again.left);
  CHECK(pair.right == again.right);
  for (double v : pair.left.data()) CHECK((v >= 0.0 && v <= 1.0));
  CHECK_THROWS_AS(stereo::render_stereo_pair(l, random_image(32, 32, 1), 0.1), InvalidArgument);
}
