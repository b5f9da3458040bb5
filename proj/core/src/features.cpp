#include "inpredict/features.hpp"

#include <cmath>
#include <stdexcept>

#include "inpredict/thread_pool.hpp"

namespace inpredict {

namespace {

constexpr double kMomentEpsilon = 1e-15;

void require_length(std::span<const double> x, std::size_t min_len, const char* what) {
    if (x.size() < min_len) {
        throw std::invalid_argument(std::string(what) + " needs at least " +
                                    std::to_string(min_len) + " samples, got " +
                                    std::to_string(x.size()));
    }
}

// Central moments m2..m4 in one pass over the deviations.
struct Moments {
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

Moments central_moments(std::span<const double> x) {
    const double mean = feat_mean(x);
    Moments m;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
    }
    const double n = double(x.size());
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    return m;
}

}  // namespace

double feat_mean(std::span<const double> x) {
    require_length(x, 1, "mean");
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / double(x.size());
}

double feat_std(std::span<const double> x) {
    require_length(x, 1, "standard deviation");
    return std::sqrt(central_moments(x).m2);
}

double feat_skewness(std::span<const double> x) {
    require_length(x, 2, "skewness");
    const Moments m = central_moments(x);
    if (m.m2 < kMomentEpsilon) return 0.0;
    return m.m3 / std::pow(m.m2, 1.5);
}

double feat_kurtosis(std::span<const double> x) {
    require_length(x, 2, "kurtosis");
    const Moments m = central_moments(x);
    if (m.m2 < kMomentEpsilon) return 0.0;
    return m.m4 / (m.m2 * m.m2) - 3.0;
}

double feat_curve_length(std::span<const double> x) {
    require_length(x, 2, "curve length");
    double total = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) total += std::abs(x[i] - x[i - 1]);
    return total;
}

double feat_num_peaks(std::span<const double> x) {
    require_length(x, 3, "number of peaks");
    // Strict on both sides: plateaus are not peaks.
    double count = 0.0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (x[i - 1] < x[i] && x[i] > x[i + 1]) count += 1.0;
    }
    return count;
}

double feat_avg_nonlinear_energy(std::span<const double> x) {
    require_length(x, 3, "average nonlinear energy");
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        sum += x[i] * x[i] - x[i - 1] * x[i + 1];
    }
    return sum / double(x.size() - 2);
}

namespace {

double curve_length_arc(std::span<const double> x) {
    require_length(x, 2, "curve length");
    double total = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double d = x[i] - x[i - 1];
        total += std::sqrt(1.0 + d * d);
    }
    return total;
}

}  // namespace

double compute_feature(FeatureKind kind, std::span<const double> x,
                       CurveLengthMode curve_mode) {
    switch (kind) {
        case FeatureKind::Mean: return feat_mean(x);
        case FeatureKind::StdDev: return feat_std(x);
        case FeatureKind::Skewness: return feat_skewness(x);
        case FeatureKind::Kurtosis: return feat_kurtosis(x);
        case FeatureKind::CurveLength:
            return curve_mode == CurveLengthMode::Arc ? curve_length_arc(x)
                                                      : feat_curve_length(x);
        case FeatureKind::NumPeaks: return feat_num_peaks(x);
        case FeatureKind::AvgNonlinearEnergy: return feat_avg_nonlinear_energy(x);
    }
    throw std::invalid_argument("unknown feature kind");
}

FeatureExtractor::FeatureExtractor(double rate_hz, FeatureOptions opts)
    : rate_hz_(rate_hz), opts_(std::move(opts)) {
    if (opts_.bands.empty()) opts_.bands = canonical_bands();
    filters_.reserve(opts_.bands.size());
    for (const BandSpec& band : opts_.bands) {
        filters_.push_back(design_butterworth_bandpass(band.low_hz, band.high_hz,
                                                       opts_.band_filter_order, rate_hz_));
    }
}

std::vector<double> FeatureExtractor::band_decompose(std::span<const double> signal,
                                                     std::size_t band_index) const {
    return apply_zero_phase(filters_.at(band_index), signal);
}

SegmentFeatures FeatureExtractor::extract(const Segment& segment) const {
    const std::size_t channels = segment.samples.rows();
    SegmentFeatures out(channels, opts_.bands.size());
    for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t b = 0; b < opts_.bands.size(); ++b) {
            const auto series = band_decompose(segment.samples.row(c), b);
            for (int f = 0; f < kNumFeatureKinds; ++f) {
                out.at(c, b, std::size_t(f)) =
                    compute_feature(all_feature_kinds()[std::size_t(f)], series,
                                    opts_.curve_mode);
            }
        }
    }
    return out;
}

FeaturizedRecording featurize_recording(const Recording& rec, const FeatureExtractor& fx,
                                        int jobs) {
    FeaturizedRecording out;
    out.subject_id = rec.subject_id;
    out.channels = rec.channel_count();
    for (const BandSpec& band : fx.bands()) out.band_names.push_back(band.name);
    out.trials.resize(rec.trials.size());
    parallel_for(rec.trials.size(), jobs, [&](std::size_t i) {
        const Trial& trial = rec.trials[i];
        TrialFeatures tf;
        tf.trial_id = trial.trial_id;
        tf.question_id = trial.question_id;
        tf.label = trial.label;
        tf.segments.reserve(trial.segments.size());
        for (const Segment& seg : trial.segments) tf.segments.push_back(fx.extract(seg));
        out.trials[i] = std::move(tf);
    });
    return out;
}

}  // namespace inpredict
