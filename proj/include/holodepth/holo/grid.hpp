#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "holodepth/common/error.hpp"

namespace holodepth::holo {

/// Sampling geometry shared by every field and image: pixel counts, pixel
/// pitch [m] and wavelength [m].
struct OpticalGrid {
  int width = 0;
  int height = 0;
  double pitch = 0.0;
  double wavelength = 0.0;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  /// Throws InvalidArgument unless all fields are positive and finite.
  void validate() const;

  /// Lateral coordinate [m] of a pixel column / row. Pixel (height/2, width/2)
  /// sits on the optical axis.
  double x_of(int col) const { return (col - width / 2) * pitch; }
  double y_of(int row) const { return (row - height / 2) * pitch; }

  bool operator==(const OpticalGrid&) const = default;
};

/// Row-major 2D array of samples living on an OpticalGrid.
template <class T>
class GridImage {
 public:
  using value_type = T;

  GridImage() = default;
  explicit GridImage(const OpticalGrid& grid, T fill = T{})
      : grid_(grid), samples_(checked_count(grid), fill) {}
  GridImage(const OpticalGrid& grid, std::vector<T> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != checked_count(grid))
      throw InvalidArgument("sample count does not match grid dimensions");
  }

  const OpticalGrid& grid() const { return grid_; }
  int width() const { return grid_.width; }
  int height() const { return grid_.height; }
  std::size_t size() const { return samples_.size(); }

  T& at(int row, int col) { return samples_[index(row, col)]; }
  const T& at(int row, int col) const { return samples_[index(row, col)]; }

  std::span<T> samples() { return samples_; }
  std::span<const T> samples() const { return samples_; }
  std::vector<T>& data() { return samples_; }
  const std::vector<T>& data() const { return samples_; }

  /// Same samples on a relabelled grid (pixel counts must match).
  void set_grid(const OpticalGrid& grid) {
    if (checked_count(grid) != samples_.size()) throw InvalidArgument("grid size mismatch");
    grid_ = grid;
  }

  bool operator==(const GridImage&) const = default;

 private:
  static std::size_t checked_count(const OpticalGrid& grid) {
    grid.validate();
    return grid.pixel_count();
  }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(grid_.width) +
           static_cast<std::size_t>(col);
  }

  OpticalGrid grid_{};
  std::vector<T> samples_;
};

using RealImage = GridImage<double>;
using ComplexField = GridImage<std::complex<double>>;

/// Throws InvalidArgument if any sample is NaN or infinite.
void require_finite(const RealImage& image, const char* what);
void require_finite(const ComplexField& field, const char* what);

ComplexField to_complex(const RealImage& image);
RealImage intensity(const ComplexField& field);

}  // namespace holodepth::holo
