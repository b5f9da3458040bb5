#pragma once

// Synthetic EEG cohort generator emulating the acquisition protocol:
// 1/f background noise plus band-limited oscillations per canonical
// band, with a tunable multiplicative class effect planted on the
// response (and optionally last-word) segments of NeedToSearch trials.

#include <array>
#include <cstdint>
#include <vector>

#include "inpredict/types.hpp"

namespace inpredict {

struct SynthProfile {
    int n_subjects = 14;
    int n_trials = 120;
    int channels = 40;
    double rate_hz = 500.0;
    // words per question; segments = words + 1 response, so [4, 16]
    int min_words = 3;
    int max_words = 15;
    double need_fraction = 0.15;
    // per-band oscillation amplitude multiplier on affected segments of
    // NeedToSearch trials (canonical band order Delta..Gamma)
    std::array<double, kNumCanonicalBands> effect_multipliers{1, 1, 1, 1, 1};
    bool affect_last_word = false;
    // per-subject factor u ~ U[0.5, 1.5] rescales the effect:
    // multiplier -> 1 + (multiplier - 1) * u
    bool subject_jitter = true;
    double noise_sigma_uv = 10.0;
    double noise_exponent = 1.0;  // power ~ 1/f^alpha; 1 = pink
    std::array<double, kNumCanonicalBands> osc_amplitudes_uv{8, 7, 6, 5, 4};
    double osc_amplitude_jitter = 0.3;  // amplitude scaled by U[1-j, 1+j]
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

// Deterministic per (profile.seed, subject_index). The result always
// passes validate_recording.
Recording generate_recording(const SynthProfile& profile, int subject_index);

std::vector<Recording> generate_cohort(const SynthProfile& profile);

}  // namespace inpredict
