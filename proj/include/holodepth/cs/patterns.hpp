#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace holodepth::cs {

/// M binary patterns over N pixels (row-major image flattening), i.i.d.
/// Bernoulli(1/2) bits packed 64 per word. Bit i of pattern m is bit (i % 64)
/// of word i / 64 of that pattern's row; unused tail bits are zero.
struct BinaryPatternEnsemble {
  std::size_t n_pixels = 0;
  std::size_t n_measurements = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> words;  ///< n_measurements rows of words_per_row()

  std::size_t words_per_row() const { return (n_pixels + 63) / 64; }
  std::span<const std::uint64_t> row(std::size_t m) const {
    return std::span<const std::uint64_t>(words).subspan(m * words_per_row(), words_per_row());
  }
  bool bit(std::size_t m, std::size_t i) const { return (row(m)[i / 64] >> (i % 64)) & 1u; }
  std::size_t popcount(std::size_t m) const;
  /// Fraction of set bits over the whole ensemble.
  double density() const;

  bool operator==(const BinaryPatternEnsemble&) const = default;
};

/// M = round(rate * N). Throws InvalidArgument unless rate is in (0, 1],
/// N >= 1 and M >= 1.
std::size_t measurement_count(std::size_t n_pixels, double sampling_rate);

/// Pattern words are Philox4x32-10 output keyed by `seed`, so the ensemble is
/// a pure function of (N, rate, seed).
BinaryPatternEnsemble generate_patterns(std::size_t n_pixels, double sampling_rate, std::uint64_t seed);

/// Text header (format tag, generator, N, M, seed) terminated by "end\n",
/// followed by the packed words as little-endian uint64.
std::string serialize_patterns(const BinaryPatternEnsemble& ensemble);
BinaryPatternEnsemble deserialize_patterns(const std::string& bytes);

}  // namespace holodepth::cs
