#pragma once

#include <memory>
#include <span>
#include <vector>

#include "holodepth/holo/grid.hpp"

namespace holodepth::cs {

/// Orthonormal 2D DCT-II (forward) and DCT-III (inverse) on a row-major
/// rows x cols array. Plans are created once; one instance must not be used
/// from two threads at the same time.
class Dct2 {
 public:
  Dct2(int rows, int cols);
  ~Dct2();
  Dct2(const Dct2&) = delete;
  Dct2& operator=(const Dct2&) = delete;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_); }

  void forward(std::span<const double> in, std::span<double> out);
  void inverse(std::span<const double> in, std::span<double> out);

 private:
  struct Plans;
  int rows_;
  int cols_;
  std::unique_ptr<Plans> plans_;
  std::vector<double> row_scale_;
  std::vector<double> col_scale_;
};

/// Coefficients in the same row-major layout as the image; index 0 is DC.
std::vector<double> dct2_forward(const holo::RealImage& image);
holo::RealImage dct2_inverse(std::span<const double> coefficients, const holo::OpticalGrid& grid);

}  // namespace holodepth::cs
