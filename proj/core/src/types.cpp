#include "inpredict/types.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace inpredict {

std::string to_string(Label label) {
    return label == Label::NeedToSearch ? "NeedToSearch" : "NoNeedToSearch";
}

Label label_from_string(const std::string& s) {
    if (s == "NeedToSearch") return Label::NeedToSearch;
    if (s == "NoNeedToSearch") return Label::NoNeedToSearch;
    throw std::invalid_argument("unknown label: '" + s + "'");
}

std::string to_string(SegmentKind kind) {
    return kind == SegmentKind::Word ? "Word" : "Response";
}

SegmentKind segment_kind_from_string(const std::string& s) {
    if (s == "Word") return SegmentKind::Word;
    if (s == "Response") return SegmentKind::Response;
    throw std::invalid_argument("unknown segment kind: '" + s + "'");
}

const std::vector<BandSpec>& canonical_bands() {
    static const std::vector<BandSpec> bands = {
        {"Delta", 1.0, 4.0},  {"Theta", 4.0, 8.0},  {"Alpha", 8.0, 12.0},
        {"Beta", 12.0, 30.0}, {"Gamma", 30.0, 40.0},
    };
    return bands;
}

const std::array<FeatureKind, kNumFeatureKinds>& all_feature_kinds() {
    static const std::array<FeatureKind, kNumFeatureKinds> kinds = {
        FeatureKind::Mean,        FeatureKind::StdDev,   FeatureKind::Skewness,
        FeatureKind::Kurtosis,    FeatureKind::CurveLength,
        FeatureKind::NumPeaks,    FeatureKind::AvgNonlinearEnergy,
    };
    return kinds;
}

std::string feature_kind_name(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Mean: return "Mean";
        case FeatureKind::StdDev: return "StandardDeviation";
        case FeatureKind::Skewness: return "Skewness";
        case FeatureKind::Kurtosis: return "Kurtosis";
        case FeatureKind::CurveLength: return "CurveLength";
        case FeatureKind::NumPeaks: return "NumberOfPeaks";
        case FeatureKind::AvgNonlinearEnergy: return "AverageNonlinearEnergy";
    }
    return "?";
}

std::string feature_kind_short_name(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Mean: return "Mean";
        case FeatureKind::StdDev: return "SD";
        case FeatureKind::Skewness: return "Skew";
        case FeatureKind::Kurtosis: return "Kur";
        case FeatureKind::CurveLength: return "Curve";
        case FeatureKind::NumPeaks: return "Peaks";
        case FeatureKind::AvgNonlinearEnergy: return "AvEn";
    }
    return "?";
}

FeatureKind feature_kind_from_short_name(const std::string& s) {
    for (FeatureKind k : all_feature_kinds()) {
        if (feature_kind_short_name(k) == s) return k;
    }
    throw std::invalid_argument("unknown feature short name: '" + s + "'");
}

namespace {

void check_trial(const Recording& rec, const Trial& trial, std::size_t trial_index,
                 std::vector<Violation>& out) {
    const std::string loc = "trial[" + std::to_string(trial_index) + "] (trial_id " +
                            std::to_string(trial.trial_id) + ")";
    const auto n = trial.segments.size();
    if (n < kMinSegmentsPerTrial || n > kMaxSegmentsPerTrial) {
        out.push_back({Violation::Severity::Error, loc,
                       "segment count " + std::to_string(n) + " outside [" +
                           std::to_string(kMinSegmentsPerTrial) + ", " +
                           std::to_string(kMaxSegmentsPerTrial) + "]"});
    }
    std::size_t responses = 0;
    for (const auto& seg : trial.segments) {
        if (seg.kind == SegmentKind::Response) ++responses;
    }
    if (responses != 1) {
        out.push_back({Violation::Severity::Error, loc,
                       "expected exactly one Response segment, found " +
                           std::to_string(responses)});
    } else if (trial.segments.back().kind != SegmentKind::Response) {
        out.push_back({Violation::Severity::Error, loc,
                       "last segment must be the Response"});
    }

    const std::size_t want_len = rec.segment_samples();
    const std::size_t want_ch = rec.channel_count();
    for (std::size_t s = 0; s < trial.segments.size(); ++s) {
        const auto& seg = trial.segments[s];
        const std::string seg_loc = loc + ".segment[" + std::to_string(s) + "]";
        if (seg.samples.rows() != want_ch) {
            out.push_back({Violation::Severity::Error, seg_loc,
                           "channel count " + std::to_string(seg.samples.rows()) +
                               " != recording channel count " + std::to_string(want_ch)});
        }
        if (seg.samples.cols() != want_len) {
            out.push_back({Violation::Severity::Error, seg_loc,
                           "segment length " + std::to_string(seg.samples.cols()) +
                               " != " + std::to_string(want_len) + " samples (800 ms at " +
                               std::to_string(rec.sampling_rate_hz) + " Hz)"});
        }
        for (double v : seg.samples.data()) {
            if (!std::isfinite(v)) {
                out.push_back({Violation::Severity::Error, seg_loc,
                               "non-finite sample value"});
                break;
            }
        }
    }
}

}  // namespace

std::vector<Violation> validate_recording(const Recording& rec) {
    std::vector<Violation> out;
    if (!(rec.sampling_rate_hz > 0.0)) {
        out.push_back({Violation::Severity::Error, "recording",
                       "sampling_rate_hz must be positive"});
        return out;
    }
    if (rec.sampling_rate_hz != kCanonicalRateHz) {
        out.push_back({Violation::Severity::Warning, "recording",
                       "sampling rate " + std::to_string(rec.sampling_rate_hz) +
                           " Hz is not the canonical 500 Hz"});
    }
    if (rec.channel_names.empty()) {
        out.push_back({Violation::Severity::Error, "recording", "no channels"});
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : rec.channel_names) {
        if (!seen.insert(name).second) {
            out.push_back({Violation::Severity::Error, "recording",
                           "duplicate channel name '" + name + "'"});
        }
    }
    for (std::size_t t = 0; t < rec.trials.size(); ++t) {
        check_trial(rec, rec.trials[t], t, out);
    }
    return out;
}

}  // namespace inpredict
