#include "inpredict/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace inpredict {

namespace {

std::mutex plan_mutex;

fftw_plan plan_for_length(std::size_t n) {
    // Guarded cache: FFTW planning is not thread-safe; new-array
    // execution on fftw_malloc'd buffers is.
    static std::unordered_map<std::size_t, fftw_plan>* cache =
        new std::unordered_map<std::size_t, fftw_plan>();
    std::lock_guard lock(plan_mutex);
    auto it = cache->find(n);
    if (it != cache->end()) return it->second;

    fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
    double* out = fftw_alloc_real(n);
    fftw_plan plan = fftw_plan_dft_c2r_1d(int(n), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    if (!plan) throw std::runtime_error("fftw planning failed");
    (*cache)[n] = plan;
    return plan;
}

}  // namespace

std::vector<double> inverse_real_fft(const std::vector<std::complex<double>>& half_spectrum,
                                     std::size_t n) {
    if (half_spectrum.size() != n / 2 + 1) {
        throw std::invalid_argument("inverse_real_fft: expected n/2+1 spectrum bins");
    }
    fftw_plan plan = plan_for_length(n);

    fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
    double* out = fftw_alloc_real(n);
    for (std::size_t k = 0; k < half_spectrum.size(); ++k) {
        in[k][0] = half_spectrum[k].real();
        in[k][1] = half_spectrum[k].imag();
    }
    fftw_execute_dft_c2r(plan, in, out);
    std::vector<double> result(out, out + n);
    fftw_free(in);
    fftw_free(out);
    return result;
}

}  // namespace inpredict
