#pragma once

#include <complex>
#include <vector>

namespace longwave::detail {

// In-place complex FFT via FFTW. sign = -1: forward (e^{-i...}); sign = +1:
// backward, unnormalized. Thread-safe (plan creation is serialized).
void fft_inplace(std::vector<std::complex<double>>& a, int sign);

}  // namespace longwave::detail
