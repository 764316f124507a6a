#pragma once

#include <complex>
#include <span>

namespace nld::detail {

// In-order complex DFT wrappers around FFTW (plans cached per size).
// forward: out[k] = sum_j in[j] e^{-2 pi i jk/n}; inverse applies +i sign
// and the 1/n normalization.
void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
void fft_inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

} // namespace nld::detail
