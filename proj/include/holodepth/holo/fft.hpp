#pragma once

#include <complex>
#include <span>

namespace holodepth::holo {

enum class FftDirection { kForward, kInverse };

/// In-place 2D DFT of a row-major rows x cols array with the unitary
/// 1/sqrt(rows*cols) normalisation, so forward followed by inverse is the
/// identity and Parseval holds literally. Forward uses exp(-2 pi i k n / N).
void fft2_unitary(std::span<std::complex<double>> data, int rows, int cols, FftDirection dir);

/// Signed DFT frequency [cycles / unit] of FFT bin `k` for an axis of `n`
/// samples spaced `spacing` apart. Bins at or above n/2 map to negative
/// frequencies, so an even axis covers [-n/2, n/2).
inline double fft_frequency(int k, int n, double spacing) {
  const int signed_k = (k < (n + 1) / 2) ? k : k - n;
  return signed_k / (n * spacing);
}

}  // namespace holodepth::holo
