#include "inpredict/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "inpredict/rng.hpp"
#include "inpredict/thread_pool.hpp"

namespace inpredict {

FoldMetrics compute_metrics(std::span<const Label> predictions,
                            std::span<const Label> labels) {
    if (predictions.empty() || predictions.size() != labels.size()) {
        throw std::invalid_argument("compute_metrics: need equal non-zero lengths");
    }
    double tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool actual_pos = labels[i] == kPositiveLabel;
        const bool pred_pos = predictions[i] == kPositiveLabel;
        if (actual_pos && pred_pos) ++tp;
        else if (!actual_pos && !pred_pos) ++tn;
        else if (!actual_pos && pred_pos) ++fp;
        else ++fn;
    }
    const double n = double(labels.size());

    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
    const double prec_pos = ratio(tp, tp + fp);
    const double prec_neg = ratio(tn, tn + fn);
    const double rec_pos = ratio(tp, tp + fn);
    const double rec_neg = ratio(tn, tn + fp);

    FoldMetrics m;
    m.accuracy = (tp + tn) / n;
    m.precision_macro = 0.5 * (prec_pos + prec_neg);
    m.recall_macro = 0.5 * (rec_pos + rec_neg);
    return m;
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const Label> labels,
                                                       int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == kPositiveLabel ? pos : neg).push_back(i);
    }
    for (const auto* cls : {&pos, &neg}) {
        if (cls->size() < std::size_t(k)) {
            throw std::invalid_argument("stratified_kfold: class count " +
                                        std::to_string(cls->size()) + " < k = " +
                                        std::to_string(k));
        }
    }

    Rng rng(derive_seed(seed, "kfold"));
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));

    // Remainder samples rotate across folds so total fold sizes stay as
    // even as the stratification allows.
    std::size_t extra_start = 0;
    for (auto* cls : {&pos, &neg}) {
        rng.shuffle(*cls);
        const std::size_t base = cls->size() / std::size_t(k);
        const std::size_t rem = cls->size() % std::size_t(k);
        std::size_t offset = 0;
        for (std::size_t f = 0; f < std::size_t(k); ++f) {
            std::size_t take = base;
            const std::size_t ring = (f + std::size_t(k) - extra_start) % std::size_t(k);
            if (ring < rem) ++take;
            for (std::size_t j = 0; j < take; ++j) folds[f].push_back((*cls)[offset + j]);
            offset += take;
        }
        extra_start = (extra_start + rem) % std::size_t(k);
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

CvResult aggregate_metrics(std::vector<FoldMetrics> folds) {
    CvResult result;
    result.folds = std::move(folds);
    const double n = double(result.folds.size());
    if (result.folds.empty()) return result;

    for (const FoldMetrics& f : result.folds) {
        result.mean.accuracy += f.accuracy;
        result.mean.precision_macro += f.precision_macro;
        result.mean.recall_macro += f.recall_macro;
    }
    result.mean.accuracy /= n;
    result.mean.precision_macro /= n;
    result.mean.recall_macro /= n;

    for (const FoldMetrics& f : result.folds) {
        const double da = f.accuracy - result.mean.accuracy;
        const double dp = f.precision_macro - result.mean.precision_macro;
        const double dr = f.recall_macro - result.mean.recall_macro;
        result.sd.accuracy += da * da;
        result.sd.precision_macro += dp * dp;
        result.sd.recall_macro += dr * dr;
    }
    result.sd.accuracy = std::sqrt(result.sd.accuracy / n);
    result.sd.precision_macro = std::sqrt(result.sd.precision_macro / n);
    result.sd.recall_macro = std::sqrt(result.sd.recall_macro / n);
    return result;
}

namespace {

std::vector<Label> dataset_labels(const Dataset& dataset) {
    std::vector<Label> labels;
    labels.reserve(dataset.samples.size());
    for (const Sample& s : dataset.samples) labels.push_back(s.label);
    return labels;
}

struct FoldEval {
    FoldMetrics metrics;
    std::vector<Label> predictions;
    std::vector<Label> truths;
};

FoldEval evaluate_fold(const ModelSpec& spec, const Dataset& dataset,
                       const std::vector<std::vector<std::size_t>>& folds,
                       std::size_t fold_index, std::uint64_t fit_seed) {
    std::vector<char> in_test(dataset.samples.size(), 0);
    for (std::size_t i : folds[fold_index]) in_test[i] = 1;

    std::vector<Sample> train_samples;
    train_samples.reserve(dataset.samples.size() - folds[fold_index].size());
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        if (!in_test[i]) train_samples.push_back(dataset.samples[i]);
    }

    ModelSpec fold_spec = spec;
    fold_spec.seed = fit_seed;
    const TrainedModel model = train(fold_spec, train_samples);

    FoldEval eval;
    for (std::size_t i : folds[fold_index]) {
        eval.predictions.push_back(model.predict(dataset.samples[i].vector));
        eval.truths.push_back(dataset.samples[i].label);
    }
    eval.metrics = compute_metrics(eval.predictions, eval.truths);
    return eval;
}

}  // namespace

CvResult cross_validate(const ModelSpec& spec, const Dataset& dataset, int k,
                        std::uint64_t seed) {
    const auto labels = dataset_labels(dataset);
    const auto folds = stratified_kfold(labels, k, seed);
    std::vector<FoldMetrics> metrics;
    metrics.reserve(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        metrics.push_back(
            evaluate_fold(spec, dataset, folds, f, derive_seed(seed, "fit", f)).metrics);
    }
    return aggregate_metrics(std::move(metrics));
}

double significance_vs_baseline(const ModelSpec& spec, const Dataset& dataset, int k,
                                std::span<const std::uint64_t> seeds, PairingMode pairing) {
    const auto labels = dataset_labels(dataset);
    std::vector<double> model_obs, baseline_obs;

    for (std::uint64_t run_seed : seeds) {
        const auto folds = stratified_kfold(labels, k, run_seed);
        for (std::size_t f = 0; f < folds.size(); ++f) {
            const FoldEval model_eval =
                evaluate_fold(spec, dataset, folds, f, derive_seed(run_seed, "fit", f));

            ModelSpec baseline_spec;
            baseline_spec.family = ModelFamily::RandomBaseline;
            baseline_spec.seed = derive_seed(run_seed, "baseline", f);
            const TrainedModel baseline = train(baseline_spec, dataset.samples);
            std::vector<Label> baseline_preds;
            baseline_preds.reserve(folds[f].size());
            for (std::size_t i : folds[f]) {
                baseline_preds.push_back(baseline.predict(dataset.samples[i].vector));
            }

            if (pairing == PairingMode::FoldAccuracy) {
                model_obs.push_back(model_eval.metrics.accuracy);
                baseline_obs.push_back(
                    compute_metrics(baseline_preds, model_eval.truths).accuracy);
            } else {
                for (std::size_t j = 0; j < folds[f].size(); ++j) {
                    model_obs.push_back(model_eval.predictions[j] == model_eval.truths[j]);
                    baseline_obs.push_back(baseline_preds[j] == model_eval.truths[j]);
                }
            }
        }
    }

    if (model_obs.size() < 10) {
        throw std::invalid_argument("significance_vs_baseline: need >= 10 paired observations");
    }
    return wilcoxon_signed_rank(model_obs, baseline_obs).p_value;
}

namespace {

std::uint64_t cell_seed(std::uint64_t run_seed, Condition condition, ModelFamily model,
                        int window, FeatureMask mask) {
    std::uint64_t s = derive_seed(run_seed, "cell", std::uint64_t(condition));
    s = derive_seed(s, "model", std::uint64_t(model));
    s = derive_seed(s, "window", std::uint64_t(window));
    return derive_seed(s, "mask", mask.bits());
}

void run_cell(const std::vector<FeaturizedRecording>& recordings,
              const AblationOptions& opts, std::uint64_t seed, AblationCell& cell) {
    const std::uint64_t cseed =
        cell_seed(seed, cell.condition, cell.model, cell.window, cell.mask);

    ModelSpec spec = opts.base_spec;
    spec.family = cell.model;
    spec.seed = derive_seed(cseed, "spec");

    std::vector<std::uint64_t> sig_seeds;
    for (int r = 0; r < opts.significance_repeats; ++r) {
        sig_seeds.push_back(derive_seed(cseed, "significance", std::uint64_t(r)));
    }

    const auto assembled = assemble(recordings, cell.condition, cell.window, cell.mask,
                                    cseed, opts.balance_scope);

    if (cell.condition == Condition::Generalised) {
        const Dataset& ds = assembled.datasets.front();
        cell.cv = cross_validate(spec, ds, opts.k, derive_seed(cseed, "cv"));
        cell.p_value = significance_vs_baseline(spec, ds, opts.k, sig_seeds, opts.pairing);
        return;
    }

    // Personalised: per-subject CV; the cell aggregates subject means and
    // pools (subject, fold/sample) pairs for the Wilcoxon test.
    if (assembled.datasets.empty()) {
        throw std::runtime_error("no subject had both classes present");
    }
    std::vector<FoldMetrics> subject_means;
    std::vector<double> model_obs, baseline_obs;
    for (std::size_t s = 0; s < assembled.datasets.size(); ++s) {
        const Dataset& ds = assembled.datasets[s];
        const auto cv = cross_validate(spec, ds, opts.k, derive_seed(cseed, "cv", s));
        cell.per_subject.push_back({ds.provenance.subject_id, cv});
        subject_means.push_back(cv.mean);

        const auto labels = dataset_labels(ds);
        for (std::uint64_t run_seed : sig_seeds) {
            const std::uint64_t subj_seed = derive_seed(run_seed, "subject", s);
            const auto folds = stratified_kfold(labels, opts.k, subj_seed);
            for (std::size_t f = 0; f < folds.size(); ++f) {
                const FoldEval ev =
                    evaluate_fold(spec, ds, folds, f, derive_seed(subj_seed, "fit", f));
                ModelSpec baseline_spec;
                baseline_spec.family = ModelFamily::RandomBaseline;
                baseline_spec.seed = derive_seed(subj_seed, "baseline", f);
                const TrainedModel baseline = train(baseline_spec, ds.samples);
                std::vector<Label> baseline_preds;
                for (std::size_t i : folds[f]) {
                    baseline_preds.push_back(baseline.predict(ds.samples[i].vector));
                }
                if (opts.pairing == PairingMode::FoldAccuracy) {
                    model_obs.push_back(ev.metrics.accuracy);
                    baseline_obs.push_back(compute_metrics(baseline_preds, ev.truths).accuracy);
                } else {
                    for (std::size_t j = 0; j < folds[f].size(); ++j) {
                        model_obs.push_back(ev.predictions[j] == ev.truths[j]);
                        baseline_obs.push_back(baseline_preds[j] == ev.truths[j]);
                    }
                }
            }
        }
    }
    cell.cv = aggregate_metrics(std::move(subject_means));
    cell.p_value = wilcoxon_signed_rank(model_obs, baseline_obs).p_value;
}

}  // namespace

AblationRun run_ablation(const std::vector<FeaturizedRecording>& recordings,
                         Condition condition, const AblationOptions& opts,
                         std::uint64_t seed) {
    AblationRun run;
    run.condition = condition;
    for (ModelFamily model : opts.models) {
        for (int window : opts.windows) {
            for (const FeatureMask& mask : opts.masks) {
                AblationCell cell;
                cell.condition = condition;
                cell.model = model;
                cell.window = window;
                cell.mask = mask;
                run.cells.push_back(std::move(cell));
            }
        }
    }

    parallel_for(run.cells.size(), opts.jobs, [&](std::size_t i) {
        try {
            run_cell(recordings, opts, seed, run.cells[i]);
        } catch (const std::exception& e) {
            run.cells[i].error = e.what();
        }
    });
    return run;
}

std::vector<SummaryRow> best_rows(const AblationRun& run) {
    std::vector<SummaryRow> rows;
    for (const AblationCell& cell : run.cells) {
        if (cell.failed()) continue;
        auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& r) {
            return r.model == cell.model && r.window == cell.window;
        });
        if (it == rows.end()) {
            rows.push_back({cell.model, cell.window, cell.mask, cell.cv.mean, cell.cv.sd,
                            cell.p_value});
            continue;
        }
        const bool better =
            cell.cv.mean.accuracy > it->mean.accuracy ||
            (cell.cv.mean.accuracy == it->mean.accuracy &&
             (cell.cv.mean.precision_macro > it->mean.precision_macro ||
              (cell.cv.mean.precision_macro == it->mean.precision_macro &&
               cell.mask.bits() < it->mask.bits())));
        if (better) {
            *it = {cell.model, cell.window, cell.mask, cell.cv.mean, cell.cv.sd,
                   cell.p_value};
        }
    }
    std::sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
        if (a.model != b.model) return int(a.model) < int(b.model);
        return a.window < b.window;
    });
    return rows;
}

namespace {

std::string pct_pair(double mean, double sd) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f%% (%.1f%%)", 100.0 * mean, 100.0 * sd);
    return buf;
}

}  // namespace

std::string render_summary_table(const std::vector<SummaryRow>& rows) {
    std::vector<std::array<std::string, 6>> table;
    table.push_back({"Model", "W-Size", "Features", "Accuracy (SD)", "Precision (SD)",
                     "Recall (SD)"});
    table.push_back({"Baseline (Random)", "-", "-", "50%", "50%", "50%"});
    for (const SummaryRow& r : rows) {
        table.push_back({to_string(r.model), std::to_string(r.window), r.mask.to_string(),
                         pct_pair(r.mean.accuracy, r.sd.accuracy),
                         pct_pair(r.mean.precision_macro, r.sd.precision_macro),
                         pct_pair(r.mean.recall_macro, r.sd.recall_macro)});
    }

    std::array<std::size_t, 6> width{};
    for (const auto& row : table) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    std::ostringstream os;
    for (std::size_t r = 0; r < table.size(); ++r) {
        for (std::size_t c = 0; c < table[r].size(); ++c) {
            os << table[r][c];
            if (c + 1 < table[r].size()) {
                os << std::string(width[c] - table[r][c].size() + 2, ' ');
            }
        }
        os << '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + 2;
            os << std::string(total, '-') << '\n';
        }
    }
    return os.str();
}

std::string render_summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream os;
    os << "model,window,features,accuracy,accuracy_sd,precision,precision_sd,"
          "recall,recall_sd,p_value\n";
    os.precision(10);
    for (const SummaryRow& r : rows) {
        os << to_string(r.model) << ',' << r.window << ',' << r.mask.to_string() << ','
           << r.mean.accuracy << ',' << r.sd.accuracy << ',' << r.mean.precision_macro << ','
           << r.sd.precision_macro << ',' << r.mean.recall_macro << ',' << r.sd.recall_macro
           << ',' << r.p_value << '\n';
    }
    return os.str();
}

}  // namespace inpredict
