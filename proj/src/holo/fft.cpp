#include "holodepth/holo/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "holodepth/common/error.hpp"
#include "holodepth/holo/detail/fftw_lock.hpp"

namespace holodepth::holo {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void fft2_unitary(std::span<std::complex<double>> data, int rows, int cols, FftDirection dir) {
  if (rows < 1 || cols < 1 || data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw InvalidArgument("fft2_unitary: buffer does not match rows x cols");
  // FFTW picks SIMD codelets by buffer alignment, so always run on an
  // fftw_malloc'd buffer to keep results bit-identical between calls.
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * data.size())), &fftw_free);
  if (!buf) throw std::bad_alloc();
  fftw_plan plan;
  {
    // FFTW's planner is not re-entrant; execution is.
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(rows, cols, buf.get(), buf.get(),
                            dir == FftDirection::kForward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  std::copy(data.begin(), data.end(), reinterpret_cast<std::complex<double>*>(buf.get()));
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
  const auto* out = reinterpret_cast<const std::complex<double>*>(buf.get());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = out[k] * scale;
}

}  // namespace holodepth::holo
