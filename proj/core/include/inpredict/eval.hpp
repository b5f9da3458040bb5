#pragma once

// Stratified k-fold cross-validation, metrics, Wilcoxon significance
// against the random baseline, and the exhaustive
// feature x window x model ablation grid.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "inpredict/dataset.hpp"
#include "inpredict/models.hpp"
#include "inpredict/wilcoxon.hpp"

namespace inpredict {

struct FoldMetrics {
    double accuracy = 0.0;
    double precision_macro = 0.0;
    double recall_macro = 0.0;
};

// Accuracy plus macro-averaged precision/recall over the two classes; a
// class never predicted contributes precision 0 (same convention for an
// absent class's recall). Throws on empty or mismatched inputs.
FoldMetrics compute_metrics(std::span<const Label> predictions,
                            std::span<const Label> labels);

// Deterministic stratified partition: per-fold class counts differ from
// an even split by at most one, and the remainders are staggered across
// folds so fold sizes stay as equal as possible. Throws when either
// class has fewer than k members.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const Label> labels,
                                                       int k, std::uint64_t seed);

struct CvResult {
    std::vector<FoldMetrics> folds;  // per fold; per subject for Personalised rows
    FoldMetrics mean;
    FoldMetrics sd;  // population SD across folds
};

CvResult aggregate_metrics(std::vector<FoldMetrics> folds);

// Per fold: fit on the other k-1 folds (per-fold model seed derived from
// seed), evaluate on the held-out fold.
CvResult cross_validate(const ModelSpec& spec, const Dataset& dataset, int k,
                        std::uint64_t seed);

enum class PairingMode {
    FoldAccuracy,  // pair per-fold accuracies across repeated seeded runs
    PerSample,     // pair per-sample correctness indicators
};

// Pairs the model against a seeded RandomBaseline on identical folds,
// pooled over the given seeds (default use: 5 repeats x 5 folds = 25
// pairs), and returns the two-sided Wilcoxon p.
double significance_vs_baseline(const ModelSpec& spec, const Dataset& dataset, int k,
                                std::span<const std::uint64_t> seeds,
                                PairingMode pairing = PairingMode::FoldAccuracy);

struct SubjectCv {
    std::string subject_id;
    CvResult cv;
};

struct AblationCell {
    Condition condition = Condition::Generalised;
    ModelFamily model = ModelFamily::RandomForest;
    int window = 2;
    FeatureMask mask = FeatureMask::all();
    CvResult cv;  // per-fold rows (Generalised) or per-subject means (Personalised)
    double p_value = 1.0;
    std::vector<SubjectCv> per_subject;  // Personalised detail
    std::string error;                   // non-empty = failed cell, recorded not fatal

    bool failed() const { return !error.empty(); }
};

struct AblationOptions {
    std::vector<int> windows = canonical_windows();
    std::vector<ModelFamily> models = {ModelFamily::RandomForest, ModelFamily::Svm,
                                       ModelFamily::AdaBoost};
    std::vector<FeatureMask> masks = enumerate_feature_masks();
    int k = 5;
    // Repeated seeded runs pooled into the per-cell Wilcoxon test
    // (3 x 5 folds = 15 pairs); standalone significance_vs_baseline calls
    // default to 5 repeats, grid cells trade two repeats for tractability.
    int significance_repeats = 3;
    int jobs = 0;
    BalanceScope balance_scope = BalanceScope::Pooled;
    PairingMode pairing = PairingMode::FoldAccuracy;
    ModelSpec base_spec;  // hyperparameter template; family/seed set per cell
};

struct AblationRun {
    Condition condition = Condition::Generalised;
    std::vector<AblationCell> cells;  // canonical order: model, window, mask
};

// Evaluates every (model, window, mask) cell. Personalised cells average
// per-subject CV means and report the across-subject SD. Cells are
// independent jobs; seeds derive from (seed, model, window, mask) so the
// result is schedule-independent.
AblationRun run_ablation(const std::vector<FeaturizedRecording>& recordings,
                         Condition condition, const AblationOptions& opts,
                         std::uint64_t seed);

struct SummaryRow {
    ModelFamily model = ModelFamily::RandomForest;
    int window = 2;
    FeatureMask mask = FeatureMask::all();
    FoldMetrics mean;
    FoldMetrics sd;
    double p_value = 1.0;
};

// Best mask per (model, window) by mean accuracy; ties broken by
// precision, then canonical mask order.
std::vector<SummaryRow> best_rows(const AblationRun& run);

// Plain-text table in the Model / W-Size / Features / Accuracy (SD) /
// Precision (SD) / Recall (SD) layout, percentages with one decimal.
std::string render_summary_table(const std::vector<SummaryRow>& rows);
std::string render_summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace inpredict
