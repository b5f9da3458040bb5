#pragma once

// Per-segment feature extraction: band decomposition (zero-phase
// Butterworth per canonical band) and the seven per-channel, per-band
// feature kernels.

#include <memory>
#include <span>
#include <vector>

#include "inpredict/filter.hpp"
#include "inpredict/types.hpp"

namespace inpredict {

// Feature kernels. Moments are population (biased); skewness/kurtosis of
// a (near-)constant signal are defined as 0 so feature matrices stay
// finite. All throw std::invalid_argument when the input is shorter than
// the kernel's minimum length.
double feat_mean(std::span<const double> x);                  // |x| >= 1
double feat_std(std::span<const double> x);                   // |x| >= 1
double feat_skewness(std::span<const double> x);              // |x| >= 2
double feat_kurtosis(std::span<const double> x);              // |x| >= 2, excess
double feat_curve_length(std::span<const double> x);          // |x| >= 2, sum |dx|
double feat_num_peaks(std::span<const double> x);             // |x| >= 3, strict maxima
double feat_avg_nonlinear_energy(std::span<const double> x);  // |x| >= 3, Teager-Kaiser

enum class CurveLengthMode {
    AmplitudeDelta,  // sum |x[i] - x[i-1]|  (line length; the default)
    Arc,             // sum sqrt(1 + dx^2)   (literal arc-length reading)
};

double compute_feature(FeatureKind kind, std::span<const double> x,
                       CurveLengthMode curve_mode = CurveLengthMode::AmplitudeDelta);

// channel-major x band (Delta..Gamma) x feature-kind tensor.
struct SegmentFeatures {
    std::size_t channels = 0;
    std::size_t bands = 0;
    std::vector<double> values;  // channels * bands * kNumFeatureKinds

    SegmentFeatures() = default;
    SegmentFeatures(std::size_t n_channels, std::size_t n_bands)
        : channels(n_channels),
          bands(n_bands),
          values(n_channels * n_bands * kNumFeatureKinds, 0.0) {}

    double& at(std::size_t c, std::size_t b, std::size_t f) {
        return values[(c * bands + b) * kNumFeatureKinds + f];
    }
    double at(std::size_t c, std::size_t b, std::size_t f) const {
        return values[(c * bands + b) * kNumFeatureKinds + f];
    }
};

struct FeatureOptions {
    std::vector<BandSpec> bands;  // empty -> canonical five
    int band_filter_order = 4;
    CurveLengthMode curve_mode = CurveLengthMode::AmplitudeDelta;
};

// Owns the per-band filter designs for one sampling rate.
class FeatureExtractor {
public:
    explicit FeatureExtractor(double rate_hz, FeatureOptions opts = {});

    // Zero-phase band filter applied to one channel series; same length.
    std::vector<double> band_decompose(std::span<const double> signal,
                                       std::size_t band_index) const;

    SegmentFeatures extract(const Segment& segment) const;

    double rate_hz() const { return rate_hz_; }
    const std::vector<BandSpec>& bands() const { return opts_.bands; }
    const FeatureOptions& options() const { return opts_; }
    const FilterCoefficients& band_filter(std::size_t band_index) const {
        return filters_[band_index];
    }

private:
    double rate_hz_;
    FeatureOptions opts_;
    std::vector<FilterCoefficients> filters_;
};

// Featurized forms consumed by dataset assembly and persisted by the
// feature store.
struct TrialFeatures {
    int trial_id = 0;
    int question_id = 0;
    Label label = Label::NoNeedToSearch;
    std::vector<SegmentFeatures> segments;
};

struct FeaturizedRecording {
    std::string subject_id;
    std::size_t channels = 0;
    std::vector<std::string> band_names;
    std::vector<TrialFeatures> trials;
};

// Extracts every segment of every trial; the recording is expected to be
// preprocessed already.
FeaturizedRecording featurize_recording(const Recording& rec, const FeatureExtractor& fx,
                                        int jobs = 0);

}  // namespace inpredict
