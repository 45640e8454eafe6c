#pragma once

#include "holodepth/holo/grid.hpp"

namespace holodepth::holo {

/// Keeps the centred low-frequency (width/factor x height/factor) block of the
/// hologram's spectrum and transforms it back, producing a smaller image of
/// the same physical extent (pitch multiplied by `factor`).
///
/// Per axis of output length n the retained DFT indices are
/// [-floor(n/2), n - floor(n/2)), i.e. [-n/2, n/2) for even n. The output is
/// the real part of the inverse transform, rescaled so the image mean is
/// preserved.
///
/// Throws InvalidArgument when factor < 2 or a dimension is not divisible by it.
RealImage bandlimit_compress(const RealImage& hologram, int factor);

}  // namespace holodepth::holo
