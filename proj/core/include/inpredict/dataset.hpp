#pragma once

// Classifier-ready matrices: expanding windows anchored at the response
// segment, feature-subset masking, seeded class balancing, and the
// Generalised / Personalised assembly conditions.

#include <cstdint>
#include <string>
#include <vector>

#include "inpredict/features.hpp"
#include "inpredict/types.hpp"

namespace inpredict {

inline const std::vector<int>& canonical_windows() {
    static const std::vector<int> w = {2, 4, 8, 16};
    return w;
}

// Non-empty subset of the 7 feature kinds. Bit i corresponds to
// all_feature_kinds()[i]; the canonical string joins short names with
// hyphens in canonical order, e.g. "Mean-SD-Curve".
class FeatureMask {
public:
    FeatureMask() = default;
    explicit FeatureMask(std::uint8_t bits);

    static FeatureMask all();
    static FeatureMask of(std::initializer_list<FeatureKind> kinds);
    static FeatureMask from_string(const std::string& s);

    bool has(FeatureKind kind) const {
        return bits_ & (1u << static_cast<unsigned>(kind));
    }
    int count() const;
    std::uint8_t bits() const { return bits_; }
    std::vector<FeatureKind> kinds() const;
    std::string to_string() const;

    bool operator==(const FeatureMask&) const = default;

private:
    std::uint8_t bits_ = 0;
};

// All 127 non-empty subsets, in binary-counting order (bits 1..127).
std::vector<FeatureMask> enumerate_feature_masks();
// Test hook: subsets drawn from the first n_features kinds only.
std::vector<FeatureMask> enumerate_feature_masks(int n_features);

struct Sample {
    std::vector<double> vector;
    Label label = Label::NoNeedToSearch;
    std::string subject_id;
    int trial_id = 0;
};

enum class Condition { Generalised, Personalised };

std::string to_string(Condition c);
Condition condition_from_string(const std::string& s);

struct DatasetProvenance {
    Condition condition = Condition::Generalised;
    int window = 2;
    FeatureMask mask = FeatureMask::all();
    std::uint64_t seed = 0;
    std::string subject_id;  // set for Personalised datasets
};

struct Dataset {
    std::vector<Sample> samples;
    DatasetProvenance provenance;

    std::size_t dimension() const {
        return samples.empty() ? 0 : samples.front().vector.size();
    }
};

// The last min(W, n) segments of the trial (response last), front-padded
// with zero tensors to exactly W slots.
std::vector<SegmentFeatures> build_window(const TrialFeatures& trial, int window);

// Flattened sample vector for one trial: window slot (oldest -> response),
// then channel, band, masked feature kinds in canonical order. Length is
// window * channels * bands * mask.count().
std::vector<double> build_window_vector(const TrialFeatures& trial, int window,
                                        FeatureMask mask);

// Randomly undersamples the majority class (seeded, without replacement)
// to the minority count and shuffles deterministically. Throws if either
// class is absent.
std::vector<Sample> balance_classes(std::vector<Sample> samples, std::uint64_t seed);

enum class BalanceScope { Pooled, PerSubject };

struct AssembleResult {
    std::vector<Dataset> datasets;  // one for Generalised, one per subject otherwise
    std::vector<std::string> warnings;
};

// Generalised: all subjects pooled, then balanced (BalanceScope::Pooled)
// or balanced per subject before pooling (PerSubject). Personalised: one
// dataset per subject, each balanced independently; subjects missing a
// class are skipped with a warning.
AssembleResult assemble(const std::vector<FeaturizedRecording>& recordings,
                        Condition condition, int window, FeatureMask mask,
                        std::uint64_t seed, BalanceScope scope = BalanceScope::Pooled);

}  // namespace inpredict
