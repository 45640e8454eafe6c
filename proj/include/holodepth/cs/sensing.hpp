#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "holodepth/cs/dct.hpp"
#include "holodepth/cs/patterns.hpp"
#include "holodepth/holo/grid.hpp"

namespace holodepth::cs {

/// Matrix-free Phi (the pattern ensemble) and A = Phi * Psi with Psi the
/// inverse orthonormal DCT on a rows x cols image. Never forms a dense matrix.
///
/// Both products use byte lookup tables: Phi x sums, for each group of 8
/// pixels, a precomputed subset sum selected by the pattern byte; Phi^T v does
/// the same over groups of 8 patterns. Summation order is fixed, so results
/// are deterministic.
class SensingOperator {
 public:
  SensingOperator(const BinaryPatternEnsemble& ensemble, int rows, int cols);

  std::size_t n_pixels() const { return n_; }
  std::size_t n_measurements() const { return m_; }
  int rows() const { return dct_rows_; }
  int cols() const { return dct_cols_; }

  /// y = Phi x, x a row-major image.
  void phi(std::span<const double> x, std::span<double> y) const;
  /// x = Phi^T v.
  void phi_transpose(std::span<const double> v, std::span<double> x) const;

  /// y = A s = Phi * dct2_inverse(s).
  void apply(std::span<const double> s, std::span<double> y);
  /// s = A^T v = dct2_forward(Phi^T v).
  void adjoint(std::span<const double> v, std::span<double> s);

  /// Number of ones in each pattern.
  const std::vector<double>& popcounts() const { return popcounts_; }

 private:
  std::size_t n_;
  std::size_t m_;
  int dct_rows_;
  int dct_cols_;
  std::size_t pixel_groups_;
  std::size_t pattern_groups_;
  std::vector<std::uint8_t> by_pixel_group_;    ///< [pixel group][pattern]
  std::vector<std::uint8_t> by_pattern_group_;  ///< [pattern group][pixel]
  std::vector<double> popcounts_;
  Dct2 dct_;
  std::vector<double> scratch_;
};

std::vector<double> apply_sensing(std::span<const double> coefficients, const BinaryPatternEnsemble& ensemble,
                                  int rows, int cols);
std::vector<double> apply_sensing_adjoint(std::span<const double> values, const BinaryPatternEnsemble& ensemble,
                                          int rows, int cols);

struct Measurements {
  std::vector<double> values;
  double epsilon = 0.0;
  double sampling_rate = 0.0;
};

/// y_i = <pattern_i, x> + n_i with x the row-major flattened image and
/// n_i ~ N(0, noise_sigma^2) drawn from `seed`. epsilon is
/// noise_sigma * sqrt(M + 2 sqrt(2M)).
Measurements measure(const holo::RealImage& image, const BinaryPatternEnsemble& ensemble, double noise_sigma,
                     std::uint64_t seed);

double noise_bound(double noise_sigma, std::size_t n_measurements);

/// CSV with header "index,value"; epsilon and sampling rate go to a separate
/// key=value sidecar.
std::string format_measurements_csv(const Measurements& measurements);
std::vector<double> parse_measurements_csv(const std::string& text);

}  // namespace holodepth::cs
