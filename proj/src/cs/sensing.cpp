#include "holodepth/cs/sensing.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"
#include "holodepth/common/philox.hpp"

namespace holodepth::cs {
namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f6973655f5f31;  // "noise__1"

// All 256 subset sums of v[0..7] (missing entries are zero).
void subset_sums(const double* v, std::size_t count, std::array<double, 256>& table) {
  std::array<double, 8> w{};
  for (std::size_t j = 0; j < count; ++j) w[j] = v[j];
  table[0] = 0.0;
  for (int b = 1; b < 256; ++b) {
    const int low = std::countr_zero(static_cast<unsigned>(b));
    table[b] = table[b & (b - 1)] + w[low];
  }
}

}  // namespace

SensingOperator::SensingOperator(const BinaryPatternEnsemble& ensemble, int rows, int cols)
    : n_(ensemble.n_pixels),
      m_(ensemble.n_measurements),
      dct_rows_(rows),
      dct_cols_(cols),
      pixel_groups_((ensemble.n_pixels + 7) / 8),
      pattern_groups_((ensemble.n_measurements + 7) / 8),
      dct_(rows, cols),
      scratch_(ensemble.n_pixels) {
  if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != n_)
    throw InvalidArgument("sensing operator: ensemble has " + std::to_string(n_) + " pixels, image has " +
                          std::to_string(static_cast<long long>(rows) * cols));
  if (ensemble.words.size() != m_ * ensemble.words_per_row())
    throw InvalidArgument("sensing operator: ensemble word count does not match N and M");

  by_pixel_group_.assign(pixel_groups_ * m_, 0);
  by_pattern_group_.assign(pattern_groups_ * n_, 0);
  popcounts_.resize(m_);
  for (std::size_t m = 0; m < m_; ++m) {
    const auto row = ensemble.row(m);
    for (std::size_t g = 0; g < pixel_groups_; ++g)
      by_pixel_group_[g * m_ + m] = static_cast<std::uint8_t>(row[g / 8] >> (8 * (g % 8)));
    popcounts_[m] = static_cast<double>(ensemble.popcount(m));
    const std::size_t pg = m / 8;
    const auto bit = static_cast<std::uint8_t>(1u << (m % 8));
    for (std::size_t i = 0; i < n_; ++i)
      if ((row[i / 64] >> (i % 64)) & 1u) by_pattern_group_[pg * n_ + i] |= bit;
  }
}

void SensingOperator::phi(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != m_) throw InvalidArgument("phi: shape mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  std::array<double, 256> table;
  for (std::size_t g = 0; g < pixel_groups_; ++g) {
    subset_sums(x.data() + 8 * g, std::min<std::size_t>(8, n_ - 8 * g), table);
    const std::uint8_t* bytes = by_pixel_group_.data() + g * m_;
    for (std::size_t m = 0; m < m_; ++m) y[m] += table[bytes[m]];
  }
}

void SensingOperator::phi_transpose(std::span<const double> v, std::span<double> x) const {
  if (v.size() != m_ || x.size() != n_) throw InvalidArgument("phi_transpose: shape mismatch");
  std::fill(x.begin(), x.end(), 0.0);
  std::array<double, 256> table;
  for (std::size_t g = 0; g < pattern_groups_; ++g) {
    subset_sums(v.data() + 8 * g, std::min<std::size_t>(8, m_ - 8 * g), table);
    const std::uint8_t* bytes = by_pattern_group_.data() + g * n_;
    for (std::size_t i = 0; i < n_; ++i) x[i] += table[bytes[i]];
  }
}

void SensingOperator::apply(std::span<const double> s, std::span<double> y) {
  if (s.size() != n_) throw InvalidArgument("apply_sensing: coefficient vector has wrong length");
  dct_.inverse(s, scratch_);
  phi(scratch_, y);
}

void SensingOperator::adjoint(std::span<const double> v, std::span<double> s) {
  if (s.size() != n_) throw InvalidArgument("apply_sensing_adjoint: coefficient vector has wrong length");
  phi_transpose(v, scratch_);
  dct_.forward(scratch_, s);
}

std::vector<double> apply_sensing(std::span<const double> coefficients, const BinaryPatternEnsemble& ensemble,
                                  int rows, int cols) {
  SensingOperator op(ensemble, rows, cols);
  std::vector<double> y(op.n_measurements());
  op.apply(coefficients, y);
  return y;
}

std::vector<double> apply_sensing_adjoint(std::span<const double> values, const BinaryPatternEnsemble& ensemble,
                                          int rows, int cols) {
  SensingOperator op(ensemble, rows, cols);
  std::vector<double> s(op.n_pixels());
  op.adjoint(values, s);
  return s;
}

double noise_bound(double noise_sigma, std::size_t n_measurements) {
  const double m = static_cast<double>(n_measurements);
  return noise_sigma * std::sqrt(m + 2.0 * std::sqrt(2.0 * m));
}

Measurements measure(const holo::RealImage& image, const BinaryPatternEnsemble& ensemble, double noise_sigma,
                     std::uint64_t seed) {
  if (image.size() != ensemble.n_pixels)
    throw InvalidArgument("measure: image has " + std::to_string(image.size()) + " pixels, patterns expect " +
                          std::to_string(ensemble.n_pixels));
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw InvalidArgument("measure: noise sigma must be finite and >= 0");
  holo::require_finite(image, "measure input");
  const SensingOperator op(ensemble, image.height(), image.width());
  Measurements out;
  out.values.resize(ensemble.n_measurements);
  op.phi(image.samples(), out.values);
  if (noise_sigma > 0.0) {
    const CounterRng rng(seed, kNoiseStream);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += noise_sigma * rng.normal(i);
  }
  out.epsilon = noise_bound(noise_sigma, ensemble.n_measurements);
  out.sampling_rate = static_cast<double>(ensemble.n_measurements) / static_cast<double>(ensemble.n_pixels);
  return out;
}

std::string format_measurements_csv(const Measurements& measurements) {
  std::string out = "index,value\n";
  for (std::size_t i = 0; i < measurements.values.size(); ++i)
    out += std::to_string(i) + "," + format_double(measurements.values[i]) + "\n";
  return out;
}

std::vector<double> parse_measurements_csv(const std::string& text) {
  std::vector<double> values;
  std::size_t offset = 0;
  bool header = true;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(offset, end - offset);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      if (line != "index,value") throw ParseError("measurements CSV must start with 'index,value'", offset);
      header = false;
    } else if (!line.empty()) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ParseError("expected 'index,value'", offset);
      try {
        const long long idx = parse_int(line.substr(0, comma), "index");
        if (idx != static_cast<long long>(values.size()))
          throw ParseError("measurement indices must be 0, 1, 2, ...", offset);
        values.push_back(parse_double(line.substr(comma + 1), "value"));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), offset);
      }
    }
    offset = end + 1;
  }
  if (header) throw ParseError("empty measurements file", 0);
  return values;
}

}  // namespace holodepth::cs
