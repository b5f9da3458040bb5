#include "inpredict/dataset.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "inpredict/rng.hpp"

namespace inpredict {

FeatureMask::FeatureMask(std::uint8_t bits) : bits_(bits) {
    if (bits_ == 0 || bits_ >= (1u << kNumFeatureKinds)) {
        throw std::invalid_argument("feature mask must be a non-empty subset of the 7 kinds");
    }
}

FeatureMask FeatureMask::all() {
    return FeatureMask(std::uint8_t((1u << kNumFeatureKinds) - 1));
}

FeatureMask FeatureMask::of(std::initializer_list<FeatureKind> kinds) {
    std::uint8_t bits = 0;
    for (FeatureKind k : kinds) bits |= std::uint8_t(1u << static_cast<unsigned>(k));
    return FeatureMask(bits);
}

FeatureMask FeatureMask::from_string(const std::string& s) {
    std::uint8_t bits = 0;
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, '-')) {
        if (part.empty()) continue;
        bits |= std::uint8_t(1u << static_cast<unsigned>(feature_kind_from_short_name(part)));
    }
    return FeatureMask(bits);
}

int FeatureMask::count() const {
    int n = 0;
    for (int f = 0; f < kNumFeatureKinds; ++f) {
        if (bits_ & (1u << f)) ++n;
    }
    return n;
}

std::vector<FeatureKind> FeatureMask::kinds() const {
    std::vector<FeatureKind> out;
    for (FeatureKind k : all_feature_kinds()) {
        if (has(k)) out.push_back(k);
    }
    return out;
}

std::string FeatureMask::to_string() const {
    std::string out;
    for (FeatureKind k : kinds()) {
        if (!out.empty()) out += '-';
        out += feature_kind_short_name(k);
    }
    return out;
}

std::vector<FeatureMask> enumerate_feature_masks() {
    return enumerate_feature_masks(kNumFeatureKinds);
}

std::vector<FeatureMask> enumerate_feature_masks(int n_features) {
    if (n_features < 1 || n_features > kNumFeatureKinds) {
        throw std::invalid_argument("n_features must be in [1, 7]");
    }
    std::vector<FeatureMask> out;
    out.reserve((std::size_t(1) << n_features) - 1);
    for (unsigned bits = 1; bits < (1u << n_features); ++bits) {
        out.push_back(FeatureMask(std::uint8_t(bits)));
    }
    return out;
}

std::string to_string(Condition c) {
    return c == Condition::Generalised ? "Generalised" : "Personalised";
}

Condition condition_from_string(const std::string& s) {
    if (s == "Generalised") return Condition::Generalised;
    if (s == "Personalised") return Condition::Personalised;
    throw std::invalid_argument("unknown condition: '" + s + "'");
}

std::vector<SegmentFeatures> build_window(const TrialFeatures& trial, int window) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (trial.segments.empty()) throw std::invalid_argument("trial has no segments");
    const std::size_t channels = trial.segments.front().channels;
    const std::size_t bands = trial.segments.front().bands;

    std::vector<SegmentFeatures> slots;
    slots.reserve(std::size_t(window));
    const int n = int(trial.segments.size());
    for (int slot = 0; slot < window; ++slot) {
        const int seg_index = n - window + slot;
        if (seg_index < 0) {
            slots.emplace_back(channels, bands);  // zero padding
        } else {
            slots.push_back(trial.segments[std::size_t(seg_index)]);
        }
    }
    return slots;
}

std::vector<double> build_window_vector(const TrialFeatures& trial, int window,
                                        FeatureMask mask) {
    const auto slots = build_window(trial, window);
    const std::size_t channels = slots.front().channels;
    const std::size_t bands = slots.front().bands;
    const auto kinds = mask.kinds();

    std::vector<double> out;
    out.reserve(std::size_t(window) * channels * bands * kinds.size());
    for (const SegmentFeatures& slot : slots) {
        for (std::size_t c = 0; c < channels; ++c) {
            for (std::size_t b = 0; b < bands; ++b) {
                for (FeatureKind k : kinds) {
                    out.push_back(slot.at(c, b, std::size_t(static_cast<unsigned>(k))));
                }
            }
        }
    }
    return out;
}

std::vector<Sample> balance_classes(std::vector<Sample> samples, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (samples[i].label == kPositiveLabel ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty()) {
        throw std::invalid_argument("balance_classes requires both classes present (" +
                                    std::to_string(pos.size()) + " positive, " +
                                    std::to_string(neg.size()) + " negative)");
    }

    Rng rng(derive_seed(seed, "balance"));
    auto& majority = pos.size() > neg.size() ? pos : neg;
    const std::size_t keep = std::min(pos.size(), neg.size());
    rng.shuffle(majority);
    majority.resize(keep);

    std::vector<std::size_t> chosen;
    chosen.reserve(2 * keep);
    chosen.insert(chosen.end(), pos.begin(), pos.end());
    chosen.insert(chosen.end(), neg.begin(), neg.end());
    std::sort(chosen.begin(), chosen.end());
    rng.shuffle(chosen);

    std::vector<Sample> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) out.push_back(std::move(samples[i]));
    return out;
}

namespace {

std::vector<Sample> subject_samples(const FeaturizedRecording& rec, int window,
                                    FeatureMask mask) {
    std::vector<Sample> out;
    out.reserve(rec.trials.size());
    for (const TrialFeatures& trial : rec.trials) {
        Sample s;
        s.vector = build_window_vector(trial, window, mask);
        s.label = trial.label;
        s.subject_id = rec.subject_id;
        s.trial_id = trial.trial_id;
        out.push_back(std::move(s));
    }
    return out;
}

bool has_both_classes(const std::vector<Sample>& samples) {
    bool pos = false, neg = false;
    for (const Sample& s : samples) {
        (s.label == kPositiveLabel ? pos : neg) = true;
    }
    return pos && neg;
}

}  // namespace

AssembleResult assemble(const std::vector<FeaturizedRecording>& recordings,
                        Condition condition, int window, FeatureMask mask,
                        std::uint64_t seed, BalanceScope scope) {
    if (recordings.empty()) throw std::invalid_argument("no recordings to assemble");
    AssembleResult result;

    if (condition == Condition::Generalised) {
        std::vector<Sample> pooled;
        for (std::size_t r = 0; r < recordings.size(); ++r) {
            auto samples = subject_samples(recordings[r], window, mask);
            if (scope == BalanceScope::PerSubject) {
                if (!has_both_classes(samples)) {
                    result.warnings.push_back("subject " + recordings[r].subject_id +
                                              " lacks a class; contributing unbalanced");
                } else {
                    samples = balance_classes(std::move(samples), derive_seed(seed, r));
                }
            }
            pooled.insert(pooled.end(), std::make_move_iterator(samples.begin()),
                          std::make_move_iterator(samples.end()));
        }
        if (scope == BalanceScope::Pooled) {
            // Seed stream matches Personalised subject 0 so a one-subject
            // cohort yields identical contents under both conditions.
            pooled = balance_classes(std::move(pooled), derive_seed(seed, 0));
        }
        Dataset ds;
        ds.samples = std::move(pooled);
        ds.provenance = {condition, window, mask, seed, ""};
        result.datasets.push_back(std::move(ds));
        return result;
    }

    for (std::size_t r = 0; r < recordings.size(); ++r) {
        auto samples = subject_samples(recordings[r], window, mask);
        if (!has_both_classes(samples)) {
            result.warnings.push_back("subject " + recordings[r].subject_id +
                                      " skipped: missing a class");
            continue;
        }
        Dataset ds;
        ds.samples = balance_classes(std::move(samples), derive_seed(seed, r));
        ds.provenance = {condition, window, mask, seed, recordings[r].subject_id};
        result.datasets.push_back(std::move(ds));
    }
    return result;
}

}  // namespace inpredict
