#include <doctest.h>

#include <filesystem>
#include <limits>

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"

using namespace holodepth;

TEST_CASE("key=value lines round-trip") {
  const KeyValues kv{{"width", "192"}, {"pitch", "8e-05"}, {"name", "a b"}};
  const auto parsed = parse_key_values(format_key_values(kv));
  CHECK(parsed.size() == 3);
  CHECK(parsed.at("width") == "192");
  CHECK(parsed.at("name") == "a b");
}

TEST_CASE("comments and blank lines are skipped") {
  const auto parsed = parse_key_values("# header\n\n a = 1 # trailing\nb=2\n");
  CHECK(parsed.at("a") == "1");
  CHECK(parsed.at("b") == "2");
}

TEST_CASE("malformed line reports its byte offset") {
  try {
    parse_key_values("a=1\nbroken\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, std::numeric_limits<double>::denorm_min()})
    CHECK(parse_double(format_double(v), "v") == v);
}

TEST_CASE("number parsing rejects trailing junk") {
  CHECK_THROWS_AS(parse_double("1.5x", "v"), InvalidArgument);
  CHECK_THROWS_AS(parse_int("12.0", "v"), InvalidArgument);
  CHECK_THROWS_AS(parse_double("", "v"), InvalidArgument);
  CHECK(parse_int(" 42 ", "v") == 42);
}

TEST_CASE("atomic write leaves no temporary behind") {
  const auto dir = std::filesystem::temp_directory_path() / "holodepth_test_kv";
  std::filesystem::remove_all(dir);
  write_file_atomic(dir / "sub" / "f.txt", "hello");
  CHECK(read_text_file(dir / "sub" / "f.txt") == "hello");
  CHECK_FALSE(std::filesystem::exists(dir / "sub" / "f.txt.tmp"));
  CHECK_THROWS_AS(read_text_file(dir / "missing"), IoError);
  std::filesystem::remove_all(dir);
}
