#include <doctest.h>

#include <cstring>
#include <filesystem>

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"
#include "holodepth/common/philox.hpp"
#include "holodepth/holo/image_io.hpp"

using namespace holodepth;
namespace fs = std::filesystem;

namespace {

holo::FloatMap float_map(int w, int h, std::uint64_t seed) {
  const CounterRng rng(seed, 2);
  holo::FloatMap m{w, h, std::vector<double>(w * h)};
  for (std::size_t k = 0; k < m.samples.size(); ++k) m.samples[k] = static_cast<float>(rng.normal(k));
  return m;
}

fs::path scratch(const char* name) {
  const auto dir = fs::temp_directory_path() / "holodepth_test_io" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("PFM round-trips float32 values exactly") {
  const auto m = float_map(7, 5, 1);
  const std::string bytes = holo::encode_pfm(m);
  CHECK(bytes.rfind("Pf\n7 5\n-1.0\n", 0) == 0);
  CHECK(bytes.size() == 12 + 4 * 35);
  const auto back = holo::decode_pfm(bytes);
  CHECK(back.width == 7);
  CHECK(back.height == 5);
  CHECK(back.samples == m.samples);
}

TEST_CASE("PFM stores the bottom row first") {
  holo::FloatMap m{1, 2, {1.0, 2.0}};
  const std::string bytes = holo::encode_pfm(m);
  float first = 0;
  std::memcpy(&first, bytes.data() + bytes.size() - 8, 4);
  CHECK(first == 2.0f);
}

TEST_CASE("big-endian PFM decodes") {
  std::string bytes = "Pf\n2 1\n1.0\n";
  for (float v : {1.5f, -3.0f}) {
    unsigned char b[4];
    std::memcpy(b, &v, 4);
    for (int i = 3; i >= 0; --i) bytes += static_cast<char>(b[i]);
  }
  const auto m = holo::decode_pfm(bytes);
  CHECK(m.samples == std::vector<double>{1.5, -3.0});
}

TEST_CASE("malformed PFM reports byte offsets") {
  const std::string good = holo::encode_pfm(float_map(3, 3, 2));
  CHECK_THROWS_AS(holo::decode_pfm("PF\n3 3\n-1.0\n"), ParseError);
  CHECK_THROWS_AS(holo::decode_pfm("Pf\n3 x\n-1.0\n"), ParseError);
  try {
    holo::decode_pfm(good.substr(0, good.size() - 1));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 12);
  }
}

TEST_CASE("PGM16 quantises to within half a step") {
  const auto m = float_map(9, 4, 3);
  const double lo = -5, hi = 5;
  const std::string bytes = holo::encode_pgm16(m, lo, hi);
  CHECK(bytes.rfind("P5\n9 4\n65535\n", 0) == 0);
  const auto back = holo::decode_pgm16(bytes, lo, hi);
  for (std::size_t k = 0; k < m.samples.size(); ++k)
    CHECK(std::abs(back.samples[k] - m.samples[k]) <= 0.5 * (hi - lo) / 65535 + 1e-12);
  CHECK_THROWS_AS(holo::decode_pgm16("P5\n9 4\n255\n", lo, hi), ParseError);
  CHECK_THROWS_AS(holo::decode_pgm16(bytes.substr(0, bytes.size() - 2), lo, hi), ParseError);
}

TEST_CASE("real images keep their grid in a sidecar") {
  const auto dir = scratch("real");
  const holo::OpticalGrid grid{4, 3, 8e-5, 3.5e-6};
  holo::RealImage img(grid);
  for (std::size_t k = 0; k < img.size(); ++k) img.data()[k] = 0.25 * k;
  holo::save_real_image(dir / "a.pfm", img);
  CHECK(fs::exists(dir / "a.grid"));
  CHECK(holo::load_real_image(dir / "a.pfm") == img);
  write_file_atomic(dir / "a.grid", "width=5\nheight=3\npitch=1\nwavelength=1\n");
  CHECK_THROWS_AS(holo::load_real_image(dir / "a.pfm"), ParseError);
}

TEST_CASE("complex fields round-trip through two PFMs") {
  const auto dir = scratch("complex");
  const holo::OpticalGrid grid{3, 2, 1e-5, 5e-7};
  holo::ComplexField f(grid);
  for (std::size_t k = 0; k < f.size(); ++k) f.data()[k] = {0.5 * k, -1.0 * k};
  const auto paths = holo::save_complex_field(dir / "f", f);
  CHECK(paths.size() == 3);
  CHECK(holo::load_complex_field(dir / "f") == f);
}

TEST_CASE("grid metadata round-trips") {
  const holo::OpticalGrid grid{192, 108, 8e-5, 3.5e-6};
  CHECK(holo::parse_grid(format_key_values(holo::grid_key_values(grid)), "g") == grid);
  CHECK_THROWS(holo::parse_grid("width=1\n", "g"));
}
