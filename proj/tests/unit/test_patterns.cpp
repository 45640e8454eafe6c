#include <doctest.h>

#include <cmath>

#include "holodepth/common/error.hpp"
#include "holodepth/cs/patterns.hpp"

using namespace holodepth;

TEST_CASE("measurement count rounds rate * N") {
  CHECK(cs::measurement_count(20736, 0.5) == 10368);
  CHECK(cs::measurement_count(20736, 0.25) == 5184);
  CHECK(cs::measurement_count(20736, 0.02) == 415);
  CHECK(cs::measurement_count(10, 1.0) == 10);
  CHECK_THROWS_AS(cs::measurement_count(10, 0.0), InvalidArgument);
  CHECK_THROWS_AS(cs::measurement_count(10, 1.01), InvalidArgument);
  CHECK_THROWS_AS(cs::measurement_count(10, 0.01), InvalidArgument);
}

TEST_CASE("patterns are a pure function of N, rate and seed") {
  const auto a = cs::generate_patterns(1000, 0.3, 42);
  CHECK(a == cs::generate_patterns(1000, 0.3, 42));
  CHECK_FALSE(a.words == cs::generate_patterns(1000, 0.3, 43).words);
  CHECK(a.n_measurements == 300);
  CHECK(a.words.size() == 300 * 16);
}

TEST_CASE("tail bits are zero and density is near one half") {
  const auto p = cs::generate_patterns(1000, 0.5, 7);
  for (std::size_t m = 0; m < p.n_measurements; ++m) CHECK((p.row(m).back() >> (1000 % 64)) == 0);
  CHECK(std::abs(p.density() - 0.5) < 0.01);
  std::size_t total = 0;
  for (std::size_t m = 0; m < p.n_measurements; ++m) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < p.n_pixels; ++i) count += p.bit(m, i);
    CHECK(count == p.popcount(m));
    total += count;
  }
  CHECK(total == std::size_t(std::llround(p.density() * 1000 * 500)));
}

TEST_CASE("serialisation round-trips") {
  const auto p = cs::generate_patterns(130, 0.4, 5);
  const std::string bytes = cs::serialize_patterns(p);
  CHECK(cs::deserialize_patterns(bytes) == p);
  CHECK(bytes.rfind("holodepth-patterns 1\n", 0) == 0);
}

TEST_CASE("corrupt pattern files are rejected with an offset") {
  const auto p = cs::generate_patterns(130, 0.4, 5);
  const std::string bytes = cs::serialize_patterns(p);
  CHECK_THROWS_AS(cs::deserialize_patterns(bytes.substr(0, bytes.size() - 3)), ParseError);
  CHECK_THROWS_AS(cs::deserialize_patterns("garbage"), ParseError);
  std::string tail = bytes;
  tail.back() = static_cast<char>(0xff);  // sets bits past N in the last word
  try {
    cs::deserialize_patterns(tail);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() > bytes.find("end\n"));
  }
}
