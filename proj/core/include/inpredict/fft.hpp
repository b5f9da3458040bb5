#pragma once

// Thin FFTW wrapper: inverse real FFT of a half spectrum (n/2+1 bins)
// into n time samples, unnormalized (FFTW convention). Plans are cached
// per length behind a mutex; execution is thread-safe.

#include <complex>
#include <cstddef>
#include <vector>

namespace inpredict {

std::vector<double> inverse_real_fft(const std::vector<std::complex<double>>& half_spectrum,
                                     std::size_t n);

}  // namespace inpredict
