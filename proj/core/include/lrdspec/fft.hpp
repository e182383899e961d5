#pragma once

#include <complex>
#include <vector>

namespace lrdspec {

/// In-place complex DFT, FFTW conventions (forward = e^{-i 2 pi jk / n},
/// inverse unnormalized). Plans are cached per length behind a mutex and
/// built with FFTW_ESTIMATE so results are reproducible across runs; the
/// execute step is safe to call concurrently.
void fft_forward(std::vector<std::complex<double>>& data);
void fft_inverse(std::vector<std::complex<double>>& data);

}  // namespace lrdspec
