#pragma once

#include <complex>
#include <span>

namespace mctrack::detail {

/// In-place unnormalised 2-D complex DFT backed by FFTW. `sign` is -1 for
/// the forward and +1 for the inverse transform.
void dft2d(std::span<std::complex<double>> data, int width, int height, int sign);

}  // namespace mctrack::detail
