#pragma once

// Butterworth bandpass design and zero-phase (forward-backward) IIR
// filtering. Filters are designed as analog lowpass prototypes, band
// transformed, bilinear mapped, and evaluated as a cascade of biquad
// sections; the expanded numerator/denominator polynomials are kept as
// printable metadata.

#include <span>
#include <string>
#include <vector>

namespace inpredict {

// One second-order section, a0 normalized to 1.
struct Biquad {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

struct FilterCoefficients {
    std::vector<Biquad> sections;
    std::vector<double> numerator;    // expanded transfer function, b[0..2N]
    std::vector<double> denominator;  // a[0] == 1
    int order = 0;                    // prototype order N (2N poles total)
    double low_hz = 0.0;
    double high_hz = 0.0;
    double rate_hz = 0.0;

    // Reflection pad used by the zero-phase pass: 3 * (2N).
    std::size_t pad_length() const { return 3 * std::size_t(2 * order); }
};

// Designs an order-N Butterworth bandpass (band transform of the analog
// prototype, so unity gain at the warped band centre and -3 dB at each
// cutoff). Throws std::invalid_argument if the cutoffs are not inside
// (0, rate/2) in increasing order, or order < 1. Every designed section
// is verified stable (poles strictly inside the unit circle).
FilterCoefficients design_butterworth_bandpass(double low_hz, double high_hz, int order,
                                               double rate_hz);

// Forward-backward filtering: zero phase, DC removed by the highpass edge.
// Edges are handled by odd-symmetric reflection padding of pad_length()
// samples plus steady-state initial conditions per section. Output length
// equals input length. Throws if the signal is not longer than the pad.
std::vector<double> apply_zero_phase(const FilterCoefficients& filter,
                                     std::span<const double> signal);

// Single forward pass from zero state (used for impulse-response probes).
std::vector<double> apply_forward(const FilterCoefficients& filter,
                                  std::span<const double> signal);

// Coefficient lists in a debug-friendly form.
std::string describe(const FilterCoefficients& filter);

}  // namespace inpredict
