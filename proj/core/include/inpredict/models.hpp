#pragma once

// The classifier families used by the study: random forest, linear
// soft-margin SVM, AdaBoost over stumps, and the seeded random baseline.
// Continuous features are z-scored inside the model with training-fold
// statistics; constant dimensions get std := 1.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "inpredict/boosting.hpp"
#include "inpredict/dataset.hpp"
#include "inpredict/tree.hpp"

namespace inpredict {

enum class ModelFamily { RandomForest, Svm, AdaBoost, RandomBaseline };

std::string to_string(ModelFamily family);
ModelFamily model_family_from_string(const std::string& s);

struct ModelSpec {
    ModelFamily family = ModelFamily::RandomForest;
    std::uint64_t seed = 0;

    // forest
    int n_trees = 100;
    int max_depth = 10;
    int min_samples_leaf = 1;
    int mtry = 0;  // 0 = ceil(sqrt(d)) per split; -1 = all features
    bool bootstrap = true;

    // adaboost
    int boost_rounds = 50;

    // svm (Pegasos-style subgradient descent, step 1/(lambda*t))
    double svm_lambda = 1e-3;
    int svm_epochs = 100;
};

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    void fit(const DataView& X);
    void apply(std::span<const double> in, std::span<double> out) const;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
};

struct SvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    // Best-so-far objective after each epoch (non-increasing); the stored
    // weights are the objective-minimizing epoch snapshot.
    std::vector<double> epoch_objectives;
};

struct BoostModel {
    std::vector<Stump> stumps;
    std::vector<double> alphas;
    std::vector<double> round_errors;        // weighted stump error per round
    std::vector<double> staged_train_error;  // ensemble 0/1 training error per round
    // Normalized exponential training loss (1/n) sum exp(-y F(x)) after
    // each round; equals the product of 2*sqrt(eps(1-eps)) and is
    // non-increasing whenever every stump beats chance.
    std::vector<double> staged_exp_loss;
};

struct BaselineModel {
    std::uint64_t seed = 0;
    mutable std::uint64_t counter = 0;  // draw index; advances per prediction
};

class TrainedModel {
public:
    ModelFamily family() const { return family_; }
    std::size_t dimension() const { return dim_; }
    const Standardizer& standardizer() const { return standardizer_; }

    // Baseline predictions advance the model's own seeded stream; the
    // other families are pure functions of (model, vector). Throws on
    // dimension mismatch.
    Label predict(std::span<const double> x) const;
    std::vector<Label> predict_batch(const std::vector<std::vector<double>>& xs) const;

    const ForestModel& forest() const { return std::get<ForestModel>(impl_); }
    const SvmModel& svm() const { return std::get<SvmModel>(impl_); }
    const BoostModel& boost() const { return std::get<BoostModel>(impl_); }
    const BaselineModel& baseline() const { return std::get<BaselineModel>(impl_); }

    void save(const std::filesystem::path& path) const;
    static TrainedModel load(const std::filesystem::path& path);

    friend TrainedModel train(const ModelSpec& spec, const std::vector<Sample>& samples);

private:
    ModelFamily family_ = ModelFamily::RandomForest;
    std::size_t dim_ = 0;
    ModelSpec spec_;
    Standardizer standardizer_;
    std::variant<ForestModel, SvmModel, BoostModel, BaselineModel> impl_;
};

// Deterministic given spec.seed. Requires >= 2 samples with both classes
// present and dimension >= 1 (the random baseline skips those checks).
TrainedModel train(const ModelSpec& spec, const std::vector<Sample>& samples);

}  // namespace inpredict
