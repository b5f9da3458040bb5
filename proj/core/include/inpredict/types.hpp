#pragma once

// Core domain types shared by the whole pipeline: recordings, trials,
// 800 ms segments, frequency bands and the canonical feature-kind set.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace inpredict {

enum class Label { NeedToSearch, NoNeedToSearch };

// NeedToSearch is the positive class everywhere.
inline constexpr Label kPositiveLabel = Label::NeedToSearch;

std::string to_string(Label label);
Label label_from_string(const std::string& s);

enum class SegmentKind { Word, Response };

std::string to_string(SegmentKind kind);
SegmentKind segment_kind_from_string(const std::string& s);

// Row-major channels x time matrix of microvolt amplitudes.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Segment {
    SegmentKind kind = SegmentKind::Word;
    Matrix samples;  // channels x time
};

// One question: word segments in presentation order, then the response
// segment, plus the search/no-search outcome.
struct Trial {
    int trial_id = 0;
    int question_id = 0;
    std::vector<Segment> segments;
    Label label = Label::NoNeedToSearch;
};

inline constexpr int kMinSegmentsPerTrial = 4;
inline constexpr int kMaxSegmentsPerTrial = 16;
inline constexpr double kSegmentSeconds = 0.8;
inline constexpr double kCanonicalRateHz = 500.0;

// Segment length is always derived from the rate, never hardcoded.
inline std::size_t samples_per_segment(double rate_hz) {
    return static_cast<std::size_t>(std::llround(kSegmentSeconds * rate_hz));
}

struct Recording {
    std::string subject_id;
    double sampling_rate_hz = kCanonicalRateHz;
    std::vector<std::string> channel_names;
    std::vector<Trial> trials;

    std::size_t channel_count() const { return channel_names.size(); }
    std::size_t segment_samples() const { return samples_per_segment(sampling_rate_hz); }
};

struct BandSpec {
    std::string name;
    double low_hz = 0.0;
    double high_hz = 0.0;
};

// Delta 1-4, Theta 4-8, Alpha 8-12, Beta 12-30, Gamma 30-40.
const std::vector<BandSpec>& canonical_bands();
inline constexpr std::size_t kNumCanonicalBands = 5;

enum class FeatureKind {
    Mean,
    StdDev,
    Skewness,
    Kurtosis,
    CurveLength,
    NumPeaks,
    AvgNonlinearEnergy,
};

inline constexpr int kNumFeatureKinds = 7;

const std::array<FeatureKind, kNumFeatureKinds>& all_feature_kinds();
std::string feature_kind_name(FeatureKind kind);
// Short names used in mask strings and report tables: Mean, SD, Skew, Kur,
// Curve, Peaks, AvEn.
std::string feature_kind_short_name(FeatureKind kind);
FeatureKind feature_kind_from_short_name(const std::string& s);

struct Violation {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string location;
    std::string message;
};

// Reports every invariant violation with its location; empty, or
// warnings-only, means the recording is usable. Violations are data, not
// faults: nothing throws here.
std::vector<Violation> validate_recording(const Recording& rec);

inline bool is_valid(const std::vector<Violation>& violations) {
    for (const auto& v : violations) {
        if (v.severity == Violation::Severity::Error) return false;
    }
    return true;
}

}  // namespace inpredict
