#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "holodepth/common/error.hpp"
#include "holodepth/common/philox.hpp"
#include "holodepth/stereo/disparity.hpp"

using namespace holodepth;

namespace {

holo::RealImage random_image(int w, int h, std::uint64_t seed) {
  const CounterRng rng(seed, 31);
  holo::RealImage img(holo::OpticalGrid{w, h, 1e-5, 5e-7});
  for (std::size_t k = 0; k < img.size(); ++k) img.data()[k] = rng.uniform(k);
  return img;
}

std::vector<double> block(const holo::RealImage& img, int r0, int c0, int k) {
  std::vector<double> b;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) b.push_back(img.at(r0 + i, c0 + j));
  return b;
}

double ncc(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= a.size();
  mb /= b.size();
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    da += (a[i] - ma) * (a[i] - ma);
    db += (b[i] - mb) * (b[i] - mb);
  }
  return da == 0 || db == 0 ? 0.0 : num / std::sqrt(da * db);
}

// Direct evaluation: every valid pixel scores every admissible shift.
std::vector<int> brute_force(const holo::RealImage& left, const holo::RealImage& right, int k, int max_shift) {
  const int w = left.width(), h = left.height(), half = k / 2;
  std::vector<int> valid(w * h, 0);
  for (int r = half; r < h - half; ++r)
    for (int c = half; c < w - half; ++c) {
      const auto ref = block(left, r - half, c - half, k);
      double best = -INFINITY;
      int best_d = 0;
      for (int d = 0; d <= max_shift && c - d - half >= 0; ++d) {
        const double s = ncc(ref, block(right, r - half, c - d - half, k));
        if (s > best) best = s, best_d = d;
      }
      valid[r * w + c] = best_d;
    }
  std::vector<int> out(w * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      out[r * w + c] = valid[std::clamp(r, half, h - 1 - half) * w + std::clamp(c, half, w - 1 - half)];
  return out;
}

void check_equal(const stereo::DepthMap& map, const std::vector<int>& expected) {
  int mismatches = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) mismatches += map.values.data()[i] != expected[i];
  CHECK(mismatches == 0);
}

}  // namespace

TEST_CASE("map equals brute-force evaluation on random 32x32 pairs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto left = random_image(32, 32, seed);
    const auto right = random_image(32, 32, seed + 1000);
    stereo::DisparityConfig config;
    config.block_size = 7;
    config.max_shift = 12;
    check_equal(stereo::disparity_map({left, right}, config), brute_force(left, right, 7, 12));
  }
}

TEST_CASE("map equals brute force on 11x11 with the default shift range") {
  const auto left = random_image(11, 11, 5), right = random_image(11, 11, 6);
  stereo::DisparityConfig config;
  config.block_size = 5;
  check_equal(stereo::disparity_map({left, right}, config), brute_force(left, right, 5, 11 / 2));
}

TEST_CASE("planted 5-column shift is recovered exactly") {
  const int w = 48, h = 24, k = 9, shift = 5;
  const auto left = random_image(w, h, 42);
  holo::RealImage right(left.grid());
  // Right image content sits 5 columns to the left: right(x - 5) = left(x).
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) right.at(r, c) = c + shift < w ? left.at(r, c + shift) : 0.123;
  stereo::DisparityConfig config;
  config.block_size = k;
  config.max_shift = 10;
  const auto map = stereo::disparity_map({left, right}, config);
  for (int r = k / 2; r < h - k / 2; ++r)
    for (int c = k / 2 + shift; c < w - k / 2; ++c) CHECK(map.values.at(r, c) == shift);
}

TEST_CASE("identical pair gives a zero map") {
  const auto img = random_image(30, 20, 3);
  stereo::DisparityConfig config;
  config.block_size = 5;
  const auto map = stereo::disparity_map({img, img}, config);
  for (double v : map.values.data()) CHECK(v == 0.0);
}

TEST_CASE("NCC range, self-match and affine invariance") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto a = block(random_image(9, 9, seed), 0, 0, 9);
    const auto b = block(random_image(9, 9, seed + 50), 0, 0, 9);
    const double s = stereo::ncc_score(a, b);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    CHECK(stereo::ncc_score(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<double> t(a.size()), neg(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) t[i] = 3.7 * a[i] + 1.3, neg[i] = -a[i];
    CHECK(stereo::ncc_score(t, b) == doctest::Approx(s).epsilon(1e-12));
    CHECK(stereo::ncc_score(neg, a) == doctest::Approx(-1.0).epsilon(1e-14));
  }
  const std::vector<double> flat(25, 0.4), other(25, 0.1);
  CHECK(stereo::ncc_score(flat, other) == 0.0);
  CHECK_THROWS_AS(stereo::ncc_score(flat, std::vector<double>(24)), InvalidArgument);
}

TEST_CASE("map is invariant under positive affine intensity changes") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto left = random_image(32, 32, seed), right = random_image(32, 32, seed + 7);
    stereo::DisparityConfig config;
    config.block_size = 7;
    const auto base = stereo::disparity_map({left, right}, config);
    for (auto [a, b] : {std::pair{2.0, 0.0}, {0.37, 5.0}, {12.5, -3.25}}) {
      holo::RealImage l2 = left, r2 = right;
      for (double& v : l2.data()) v = a * v + b;
      for (double& v : r2.data()) v = 0.5 * a * v - b;
      CHECK(stereo::disparity_map({l2, r2}, config).values == base.values);
    }
  }
}

TEST_CASE("worker count does not change the map") {
  const auto left = random_image(40, 30, 9), right = random_image(40, 30, 10);
  stereo::DisparityConfig config;
  config.block_size = 7;
  const auto one = stereo::disparity_map({left, right}, config);
  config.workers = 3;
  CHECK(stereo::disparity_map({left, right}, config).values == one.values);
}

TEST_CASE("normalisation, profiles and correlation") {
  stereo::DepthMap map{holo::RealImage(holo::OpticalGrid{4, 2, 1e-5, 5e-7}), false};
  map.values.data() = {0, 2, 4, 8, 1, 1, 1, 1};
  const auto n = stereo::normalize_depth(map);
  CHECK(n.normalized);
  CHECK(n.values.data()[3] == 1.0);
  CHECK(n.values.data()[1] == 0.25);
  const stereo::DepthMap flat{holo::RealImage(map.values.grid(), 3.0), false};
  const auto flat_n = stereo::normalize_depth(flat);
  for (double v : flat_n.values.data()) CHECK(v == 0.5);
  const auto row = stereo::extract_profile(n, 0);
  CHECK(row == std::vector<double>{0, 0.25, 0.5, 1.0});
  CHECK_THROWS_AS(stereo::extract_profile(n, 2), InvalidArgument);
  CHECK(stereo::parse_profile_csv(stereo::format_profile_csv(row)) == row);
  CHECK_THROWS_AS(stereo::parse_profile_csv("column,value\n0,1\n0,2\n"), ParseError);
  const std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8.5}, c{4, 3, 2, 1};
  CHECK(stereo::pearson_correlation(a, a) == doctest::Approx(1.0));
  CHECK(stereo::pearson_correlation(a, c) == doctest::Approx(-1.0));
  CHECK(stereo::pearson_correlation(a, b) > 0.99);
  CHECK(stereo::pearson_correlation(a, std::vector<double>(4, 2.0)) == 0.0);
}

TEST_CASE("invalid configurations are rejected") {
  const auto img = random_image(20, 10, 1);
  stereo::DisparityConfig config;
  config.block_size = 4;
  CHECK_THROWS_AS(stereo::disparity_map({img, img}, config), InvalidArgument);
  config.block_size = 11;
  CHECK_THROWS_AS(stereo::disparity_map({img, img}, config), InvalidArgument);
  config.block_size = 5;
  config.max_shift = 20;
  CHECK_THROWS_AS(stereo::disparity_map({img, img}, config), InvalidArgument);
}
