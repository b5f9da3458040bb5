#pragma once

// Experiment configuration: a single JSON document whose keys map
// one-for-one onto CLI flags (flags win). All pipeline randomness flows
// from `seed` via inpredict::derive_seed.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "inpredict/dataset.hpp"
#include "inpredict/eval.hpp"
#include "inpredict/models.hpp"
#include "inpredict/preprocess.hpp"
#include "inpredict/synth.hpp"

namespace inpredict::cli {

struct ExperimentConfig {
    std::uint64_t seed = 42;
    std::filesystem::path out_dir = "out";
    std::filesystem::path bundles_dir;   // default <out>/bundles
    std::filesystem::path features_dir;  // default <out>/features
    std::filesystem::path results_dir;   // default <out>/results

    std::vector<Condition> conditions = {Condition::Generalised, Condition::Personalised};
    std::vector<int> windows = canonical_windows();
    std::vector<std::string> masks;  // mask strings; empty or {"all"} = all 127
    std::vector<ModelFamily> models = {ModelFamily::RandomForest, ModelFamily::Svm,
                                       ModelFamily::AdaBoost};
    int k = 5;
    int jobs = 0;
    int significance_repeats = 5;
    BalanceScope balance_scope = BalanceScope::Pooled;
    PairingMode pairing = PairingMode::FoldAccuracy;

    PreprocessOptions preprocess;
    int band_filter_order = 4;
    CurveLengthMode curve_mode = CurveLengthMode::AmplitudeDelta;
    ModelSpec model_params;
    SynthProfile synth;

    void load_json_file(const std::filesystem::path& path);
    // Fills in dependent defaults (bundle/feature/result dirs under out_dir).
    void finalize();

    std::vector<FeatureMask> resolve_masks() const;
    AblationOptions ablation_options() const;
    // Canonical string describing every parameter that affects extracted
    // features; feeds the extract-stage content hash.
    std::string feature_params_string() const;
};

}  // namespace inpredict::cli
