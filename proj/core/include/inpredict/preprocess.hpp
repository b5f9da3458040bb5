#pragma once

// Artifact-removal chain: zero-phase Butterworth bandpass over the
// concatenated continuous trial signal, then average re-referencing,
// re-sliced into the original 800 ms segment boundaries.

#include "inpredict/filter.hpp"
#include "inpredict/types.hpp"

namespace inpredict {

struct PreprocessOptions {
    double low_hz = 0.5;
    double high_hz = 50.0;
    // Order 6 rather than the common order 4: at 500 Hz an order-4
    // zero-phase pass attenuates 60 Hz by only ~15.5 dB; order 6 clears
    // 20 dB while leaving the 0.5-50 passband flat.
    int order = 6;
    int jobs = 0;  // 0 = hardware concurrency
};

// Subtracts the instantaneous cross-channel mean from every channel.
// Throws std::invalid_argument for fewer than 2 channels (the projection
// would zero a single-channel recording).
Matrix average_rereference(const Matrix& samples);

// Concatenates the trial's segments, bandpasses each channel (zero
// phase), re-references, and slices back. Segment kinds and label pass
// through unchanged.
Trial preprocess_trial(const Trial& trial, const FilterCoefficients& filter);

Recording preprocess_recording(const Recording& rec, const PreprocessOptions& opts = {});

}  // namespace inpredict
