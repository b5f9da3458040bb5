#include "inpredict/synth.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "inpredict/fft.hpp"
#include "inpredict/rng.hpp"
#include "inpredict/thread_pool.hpp"

namespace inpredict {

void SynthProfile::validate() const {
    if (n_subjects < 1) throw std::invalid_argument("synth: n_subjects must be >= 1");
    if (n_trials < 1) throw std::invalid_argument("synth: n_trials must be >= 1");
    if (channels < 2) throw std::invalid_argument("synth: need >= 2 channels");
    if (!(rate_hz > 0.0)) throw std::invalid_argument("synth: rate must be positive");
    if (min_words < kMinSegmentsPerTrial - 1 || max_words > kMaxSegmentsPerTrial - 1 ||
        min_words > max_words) {
        throw std::invalid_argument("synth: word-count range must keep segments within [4, 16]");
    }
    if (!(need_fraction > 0.0) || !(need_fraction < 1.0)) {
        throw std::invalid_argument("synth: need_fraction must be in (0, 1)");
    }
    const int n_pos = int(std::llround(need_fraction * n_trials));
    if (n_pos < 1 || n_pos > n_trials - 1) {
        throw std::invalid_argument("synth: need_fraction leaves no room for both classes");
    }
    for (double m : effect_multipliers) {
        if (!(m > 0.0)) throw std::invalid_argument("synth: effect multipliers must be > 0");
    }
    if (noise_sigma_uv < 0.0 || osc_amplitude_jitter < 0.0 || osc_amplitude_jitter >= 1.0) {
        throw std::invalid_argument("synth: bad noise/jitter parameters");
    }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Spectrally shaped noise: amplitude ~ f^(-alpha/2) (power ~ 1/f^alpha),
// random phases, inverse transform, rescaled to the target RMS.
std::vector<double> pink_noise(std::size_t length, double rate_hz, double alpha,
                               double sigma, Rng& rng) {
    std::vector<std::complex<double>> spectrum(length / 2 + 1, 0.0);
    const double f_floor = 0.25;  // keeps near-DC bins bounded
    for (std::size_t k = 1; k < spectrum.size(); ++k) {
        const bool nyquist = (length % 2 == 0) && (k == length / 2);
        if (nyquist) break;
        const double f = double(k) * rate_hz / double(length);
        const double amp = std::pow(std::max(f, f_floor), -alpha / 2.0);
        spectrum[k] = std::polar(amp, rng.uniform(0.0, kTwoPi));
    }
    std::vector<double> x = inverse_real_fft(spectrum, length);
    double rms = 0.0;
    for (double v : x) rms += v * v;
    rms = std::sqrt(rms / double(length));
    const double scale = rms > 0.0 ? sigma / rms : 0.0;
    for (double& v : x) v *= scale;
    return x;
}

}  // namespace

Recording generate_recording(const SynthProfile& profile, int subject_index) {
    profile.validate();

    const std::uint64_t subject_seed =
        derive_seed(profile.seed, "subject", std::uint64_t(subject_index));

    double effect_scale = 1.0;
    if (profile.subject_jitter) {
        Rng jitter_rng(derive_seed(profile.seed, "subject-jitter", std::uint64_t(subject_index)));
        effect_scale = jitter_rng.uniform(0.5, 1.5);
    }
    std::array<double, kNumCanonicalBands> band_mult{};
    for (std::size_t b = 0; b < kNumCanonicalBands; ++b) {
        band_mult[b] = 1.0 + (profile.effect_multipliers[b] - 1.0) * effect_scale;
    }

    Recording rec;
    {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "S%02d", subject_index + 1);
        rec.subject_id = buf;
    }
    rec.sampling_rate_hz = profile.rate_hz;
    for (int c = 0; c < profile.channels; ++c) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "ch%02d", c + 1);
        rec.channel_names.push_back(buf);
    }

    // Exact label counts at shuffled positions: the realized NeedToSearch
    // fraction equals need_fraction up to rounding on every subject.
    Rng structure_rng(derive_seed(subject_seed, "structure"));
    const int n_pos = int(std::llround(profile.need_fraction * profile.n_trials));
    std::vector<Label> labels(std::size_t(profile.n_trials), Label::NoNeedToSearch);
    for (int i = 0; i < n_pos; ++i) labels[std::size_t(i)] = Label::NeedToSearch;
    structure_rng.shuffle(labels);

    std::vector<int> question_ids(std::size_t(profile.n_trials));
    for (int i = 0; i < profile.n_trials; ++i) question_ids[std::size_t(i)] = i + 1;
    structure_rng.shuffle(question_ids);

    // Word counts are down-weighted quadratically toward the long end, so
    // questions average about seven segments instead of the range midpoint.
    std::vector<std::uint64_t> word_weight_cdf;
    std::uint64_t weight_total = 0;
    for (int w = profile.min_words; w <= profile.max_words; ++w) {
        const std::uint64_t weight =
            std::uint64_t(profile.max_words + 1 - w) * std::uint64_t(profile.max_words + 1 - w);
        weight_total += weight;
        word_weight_cdf.push_back(weight_total);
    }
    std::vector<int> word_counts(std::size_t(profile.n_trials));
    for (auto& w : word_counts) {
        const std::uint64_t r = structure_rng.below(weight_total);
        std::size_t bucket = 0;
        while (word_weight_cdf[bucket] <= r) ++bucket;
        w = profile.min_words + int(bucket);
    }

    const std::size_t seg_len = samples_per_segment(profile.rate_hz);
    const auto& bands = canonical_bands();

    rec.trials.resize(std::size_t(profile.n_trials));
    for (int t = 0; t < profile.n_trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(subject_seed, "trial", std::uint64_t(t));
        Trial& trial = rec.trials[std::size_t(t)];
        trial.trial_id = t + 1;
        trial.question_id = question_ids[std::size_t(t)];
        trial.label = labels[std::size_t(t)];

        const int n_segments = word_counts[std::size_t(t)] + 1;
        const std::size_t total_len = std::size_t(n_segments) * seg_len;

        trial.segments.resize(std::size_t(n_segments));
        for (int s = 0; s < n_segments; ++s) {
            trial.segments[std::size_t(s)].kind =
                s == n_segments - 1 ? SegmentKind::Response : SegmentKind::Word;
            trial.segments[std::size_t(s)].samples =
                Matrix(std::size_t(profile.channels), seg_len);
        }

        for (int c = 0; c < profile.channels; ++c) {
            Rng chan_rng(derive_seed(trial_seed, "chan", std::uint64_t(c)));
            std::vector<double> series =
                pink_noise(total_len, profile.rate_hz, profile.noise_exponent,
                           profile.noise_sigma_uv, chan_rng);

            for (std::size_t b = 0; b < bands.size(); ++b) {
                const double f_center = 0.5 * (bands[b].low_hz + bands[b].high_hz);
                const double amp = profile.osc_amplitudes_uv[b] *
                                   chan_rng.uniform(1.0 - profile.osc_amplitude_jitter,
                                                    1.0 + profile.osc_amplitude_jitter);
                const double phase = chan_rng.uniform(0.0, kTwoPi);
                const double omega = kTwoPi * f_center / profile.rate_hz;

                for (int s = 0; s < n_segments; ++s) {
                    const bool affected =
                        trial.label == Label::NeedToSearch &&
                        (s == n_segments - 1 ||
                         (profile.affect_last_word && s == n_segments - 2));
                    const double a = amp * (affected ? band_mult[b] : 1.0);
                    const std::size_t base = std::size_t(s) * seg_len;
                    for (std::size_t i = 0; i < seg_len; ++i) {
                        series[base + i] += a * std::sin(omega * double(base + i) + phase);
                    }
                }
            }

            for (int s = 0; s < n_segments; ++s) {
                auto row = trial.segments[std::size_t(s)].samples.row(std::size_t(c));
                const std::size_t base = std::size_t(s) * seg_len;
                for (std::size_t i = 0; i < seg_len; ++i) row[i] = series[base + i];
            }
        }
    }
    return rec;
}

std::vector<Recording> generate_cohort(const SynthProfile& profile) {
    profile.validate();
    std::vector<Recording> cohort(std::size_t(profile.n_subjects));
    parallel_for(cohort.size(), 0, [&](std::size_t s) {
        cohort[s] = generate_recording(profile, int(s));
    });
    return cohort;
}

}  // namespace inpredict
