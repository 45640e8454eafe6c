#include "holodepth/cs/patterns.hpp"

#include <bit>
#include <charconv>
#include <cmath>

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"
#include "holodepth/common/philox.hpp"

namespace holodepth::cs {
namespace {

constexpr std::uint64_t kPatternStream = 0x7061747465726e73;  // "patterns"
constexpr const char* kFormatTag = "holodepth-patterns 1";

}  // namespace

std::size_t BinaryPatternEnsemble::popcount(std::size_t m) const {
  std::size_t n = 0;
  for (std::uint64_t w : row(m)) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

double BinaryPatternEnsemble::density() const {
  if (words.empty() || n_pixels == 0) return 0.0;
  std::size_t n = 0;
  for (std::uint64_t w : words) n += static_cast<std::size_t>(std::popcount(w));
  return static_cast<double>(n) / (static_cast<double>(n_pixels) * static_cast<double>(n_measurements));
}

std::size_t measurement_count(std::size_t n_pixels, double sampling_rate) {
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0))
    throw InvalidArgument("sampling rate must be in (0, 1], got " + format_double(sampling_rate));
  if (n_pixels < 1) throw InvalidArgument("pattern ensemble needs at least one pixel");
  const auto m = static_cast<std::size_t>(std::llround(sampling_rate * static_cast<double>(n_pixels)));
  if (m < 1)
    throw InvalidArgument("sampling rate " + format_double(sampling_rate) + " yields no measurements for " +
                          std::to_string(n_pixels) + " pixels");
  return m;
}

BinaryPatternEnsemble generate_patterns(std::size_t n_pixels, double sampling_rate, std::uint64_t seed) {
  BinaryPatternEnsemble e;
  e.n_pixels = n_pixels;
  e.n_measurements = measurement_count(n_pixels, sampling_rate);
  e.seed = seed;
  const std::size_t wpr = e.words_per_row();
  const std::uint64_t tail_mask = (n_pixels % 64 == 0) ? ~0ull : ((1ull << (n_pixels % 64)) - 1);
  const CounterRng rng(seed, kPatternStream);
  e.words.resize(e.n_measurements * wpr);
  for (std::size_t k = 0; k < e.words.size(); ++k) e.words[k] = rng.word(k);
  for (std::size_t m = 0; m < e.n_measurements; ++m) e.words[m * wpr + wpr - 1] &= tail_mask;
  return e;
}

std::string serialize_patterns(const BinaryPatternEnsemble& ensemble) {
  std::string out = std::string(kFormatTag) + "\n" +
                    format_key_values({{"generator", kPhiloxName},
                                       {"N", std::to_string(ensemble.n_pixels)},
                                       {"M", std::to_string(ensemble.n_measurements)},
                                       {"seed", std::to_string(ensemble.seed)}}) +
                    "end\n";
  const std::size_t header = out.size();
  out.resize(header + ensemble.words.size() * 8);
  for (std::size_t k = 0; k < ensemble.words.size(); ++k)
    for (int b = 0; b < 8; ++b) out[header + 8 * k + b] = static_cast<char>((ensemble.words[k] >> (8 * b)) & 0xFF);
  return out;
}

BinaryPatternEnsemble deserialize_patterns(const std::string& bytes) {
  const std::string tag = std::string(kFormatTag) + "\n";
  if (bytes.compare(0, tag.size(), tag) != 0) throw ParseError("not a pattern ensemble file", 0);
  const std::size_t end = bytes.find("\nend\n", tag.size() - 1);
  if (end == std::string::npos) throw ParseError("pattern header is not terminated by 'end'", tag.size());
  const auto kv = parse_key_values(bytes.substr(tag.size(), end + 1 - tag.size()));
  const std::string where = "pattern header";
  const auto number = [&](const char* key) -> std::uint64_t {
    const std::string& v = require_key(kv, key, where);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw ParseError(where + ": bad value for '" + key + "'", tag.size());
    return out;
  };
  if (require_key(kv, "generator", where) != kPhiloxName)
    throw ParseError("unsupported pattern generator '" + kv.at("generator") + "'", tag.size());
  BinaryPatternEnsemble e;
  e.n_pixels = number("N");
  e.n_measurements = number("M");
  e.seed = number("seed");
  if (e.n_pixels < 1 || e.n_measurements < 1 || e.n_measurements > e.n_pixels)
    throw ParseError("pattern header requires 1 <= M <= N", tag.size());
  const std::size_t data = end + 5;
  const std::size_t count = e.n_measurements * e.words_per_row();
  if (bytes.size() - data != count * 8)
    throw ParseError("pattern data has " + std::to_string(bytes.size() - data) + " bytes, expected " +
                         std::to_string(count * 8),
                     data);
  e.words.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t w = 0;
    for (int b = 0; b < 8; ++b) w |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[data + 8 * k + b])) << (8 * b);
    e.words[k] = w;
  }
  if (e.n_pixels % 64 != 0) {
    const std::uint64_t tail_mask = (1ull << (e.n_pixels % 64)) - 1;
    for (std::size_t m = 0; m < e.n_measurements; ++m) {
      const std::size_t k = m * e.words_per_row() + e.words_per_row() - 1;
      if (e.words[k] & ~tail_mask) throw ParseError("pattern row has bits set beyond N", data + 8 * k);
    }
  }
  return e;
}

}  // namespace holodepth::cs
