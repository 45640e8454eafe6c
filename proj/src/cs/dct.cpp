#include "holodepth/cs/dct.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "holodepth/common/error.hpp"
#include "holodepth/holo/detail/fftw_lock.hpp"

namespace holodepth::cs {

struct Dct2::Plans {
  double* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

Dct2::Dct2(int rows, int cols) : rows_(rows), cols_(cols), plans_(std::make_unique<Plans>()) {
  if (rows < 1 || cols < 1) throw InvalidArgument("Dct2: dimensions must be positive");
  std::lock_guard lock(holo::fftw_planner_mutex());
  plans_->buf = static_cast<double*>(fftw_malloc(sizeof(double) * size()));
  if (!plans_->buf) throw std::bad_alloc();
  plans_->fwd = fftw_plan_r2r_2d(rows, cols, plans_->buf, plans_->buf, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_r2r_2d(rows, cols, plans_->buf, plans_->buf, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);

  // FFTW's REDFT10 is 2x the unnormalised DCT-II per axis.
  const auto axis_scale = [](int n) {
    std::vector<double> s(static_cast<std::size_t>(n), std::sqrt(1.0 / (2.0 * n)));
    s[0] = std::sqrt(1.0 / (4.0 * n));
    return s;
  };
  row_scale_ = axis_scale(rows);
  col_scale_ = axis_scale(cols);
}

Dct2::~Dct2() {
  std::lock_guard lock(holo::fftw_planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
  fftw_free(plans_->buf);
}

void Dct2::forward(std::span<const double> in, std::span<double> out) {
  if (in.size() != size() || out.size() != size()) throw InvalidArgument("Dct2::forward: size mismatch");
  std::copy(in.begin(), in.end(), plans_->buf);
  fftw_execute(plans_->fwd);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      const std::size_t k = static_cast<std::size_t>(r) * cols_ + c;
      out[k] = plans_->buf[k] * row_scale_[r] * col_scale_[c];
    }
}

void Dct2::inverse(std::span<const double> in, std::span<double> out) {
  if (in.size() != size() || out.size() != size()) throw InvalidArgument("Dct2::inverse: size mismatch");
  // REDFT01 computes X0 + 2 sum_k Xk cos(...); pre-scale so the result is the
  // orthonormal DCT-III.
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      const std::size_t k = static_cast<std::size_t>(r) * cols_ + c;
      plans_->buf[k] = in[k] * row_scale_[r] * col_scale_[c] * (r == 0 ? 2.0 : 1.0) * (c == 0 ? 2.0 : 1.0);
    }
  fftw_execute(plans_->inv);
  std::copy(plans_->buf, plans_->buf + size(), out.begin());
}

std::vector<double> dct2_forward(const holo::RealImage& image) {
  Dct2 dct(image.height(), image.width());
  std::vector<double> out(image.size());
  dct.forward(image.samples(), out);
  return out;
}

holo::RealImage dct2_inverse(std::span<const double> coefficients, const holo::OpticalGrid& grid) {
  holo::RealImage image(grid);
  if (coefficients.size() != image.size())
    throw InvalidArgument("dct2_inverse: " + std::to_string(coefficients.size()) + " coefficients for a " +
                          std::to_string(grid.width) + "x" + std::to_string(grid.height) + " grid");
  Dct2 dct(grid.height, grid.width);
  dct.inverse(coefficients, image.samples());
  return image;
}

}  // namespace holodepth::cs
