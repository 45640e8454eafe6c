#pragma once

#include "holodepth/holo/grid.hpp"

namespace holodepth::holo {

/// Propagates a complex field by `distance` metres with the Fresnel
/// transfer-function (convolution) method:
///
///   U_z = IFFT{ FFT{U_0} * exp(i 2 pi z / lambda) * exp(-i pi lambda z (fx^2 + fy^2)) }
///
/// evaluated on the FFT frequency grid of the input. The output lives on the
/// same grid as the input and the operator is unitary, so sum |U|^2 is
/// preserved. Negative distances back-propagate.
///
/// Throws InvalidArgument for a non-finite distance or non-finite samples.
ComplexField fresnel_propagate(const ComplexField& field, double distance);

/// Numerical reconstruction of a real hologram: the hologram is taken as a
/// complex field with zero imaginary part, back-propagated by `distance`
/// (> 0) and returned as the intensity |U|^2.
RealImage back_propagate_reconstruct(const RealImage& hologram, double distance);

}  // namespace holodepth::holo
