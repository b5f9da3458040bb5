// Command-line front end for the EEG information-need prediction
// pipeline: synth -> extract -> ablate -> report.
//
// Exit codes: 0 success, 1 usage/config error, 2 partial grid failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "config.hpp"
#include "inpredict/io.hpp"
#include "inpredict/results_io.hpp"
#include "inpredict/store.hpp"

namespace fs = std::filesystem;
using namespace inpredict;
using cli::ExperimentConfig;

namespace {

int cmd_synth(const ExperimentConfig& config) {
    const auto cohort = generate_cohort(config.synth);
    fs::create_directories(config.bundles_dir);
    for (const Recording& rec : cohort) {
        save_recording(rec, config.bundles_dir / rec.subject_id);
        std::size_t need = 0;
        for (const Trial& t : rec.trials) {
            if (t.label == Label::NeedToSearch) ++need;
        }
        std::cout << rec.subject_id << ": " << rec.trials.size() << " trials, " << need
                  << " NeedToSearch, " << rec.trials.size() - need << " NoNeedToSearch\n";
    }
    std::cout << "wrote " << cohort.size() << " recording bundles to "
              << config.bundles_dir.string() << "\n";
    return 0;
}

std::vector<fs::path> bundle_dirs(const fs::path& root) {
    std::vector<fs::path> dirs;
    if (!fs::exists(root)) {
        throw std::runtime_error("bundle directory " + root.string() +
                                 " does not exist (run `inpredict synth` first?)");
    }
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
            dirs.push_back(entry.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) {
        throw std::runtime_error("no recording bundles under " + root.string());
    }
    return dirs;
}

int cmd_extract(const ExperimentConfig& config, const std::string& dump_csv_dir) {
    const auto dirs = bundle_dirs(config.bundles_dir);

    std::string source_acc;
    for (const fs::path& dir : dirs) {
        source_acc += hash_file(dir / "manifest.json");
        source_acc += hash_file(dir / "trials.jsonl");
    }
    const std::string source_hash = hash_string(source_acc);
    const std::string params_hash =
        hash_string(config.feature_params_string() + ";version:" + kCodeVersion);

    if (auto existing = peek_store_provenance(config.features_dir)) {
        if (existing->source_hash == source_hash && existing->params_hash == params_hash) {
            std::cout << "feature store up to date (cache hit " << source_hash << "), nothing to do\n";
            return 0;
        }
    }

    std::vector<FeaturizedRecording> featurized;
    StoreProvenance prov;
    prov.preprocess_low_hz = config.preprocess.low_hz;
    prov.preprocess_high_hz = config.preprocess.high_hz;
    prov.preprocess_order = config.preprocess.order;
    prov.band_filter_order = config.band_filter_order;
    prov.curve_mode = config.curve_mode == CurveLengthMode::Arc ? "arc" : "amplitude";
    prov.source_hash = source_hash;
    prov.params_hash = params_hash;
    for (const BandSpec& b : canonical_bands()) prov.band_names.push_back(b.name);

    std::size_t total_segments = 0;
    for (const fs::path& dir : dirs) {
        const Recording rec = load_recording(dir);
        const auto violations = validate_recording(rec);
        bool fatal = false;
        for (const Violation& v : violations) {
            const bool error = v.severity == Violation::Severity::Error;
            fatal = fatal || error;
            std::cerr << dir.string() << ": " << (error ? "error" : "warning") << " at "
                      << v.location << ": " << v.message << "\n";
        }
        if (fatal) {
            std::cerr << "validation failed for " << dir.string() << "; aborting\n";
            return 1;
        }
        prov.rate_hz = rec.sampling_rate_hz;

        PreprocessOptions popts = config.preprocess;
        popts.jobs = config.jobs;
        const Recording clean = preprocess_recording(rec, popts);

        FeatureOptions fopts;
        fopts.band_filter_order = config.band_filter_order;
        fopts.curve_mode = config.curve_mode;
        const FeatureExtractor fx(clean.sampling_rate_hz, fopts);
        FeaturizedRecording features = featurize_recording(clean, fx, config.jobs);
        for (const TrialFeatures& t : features.trials) total_segments += t.segments.size();

        if (!dump_csv_dir.empty()) {
            fs::create_directories(dump_csv_dir);
            write_features_csv(features,
                               fs::path(dump_csv_dir) / (features.subject_id + ".csv"));
        }
        featurized.push_back(std::move(features));
        std::cout << "extracted " << featurized.back().subject_id << " ("
                  << featurized.back().trials.size() << " trials)\n";
    }

    save_feature_store(featurized, prov, config.features_dir);
    std::cout << "feature store: " << featurized.size() << " subjects, " << total_segments
              << " segments -> " << config.features_dir.string() << "\n";
    return 0;
}

int cmd_ablate(const ExperimentConfig& config) {
    if (!fs::exists(config.features_dir / "manifest.json")) {
        std::cerr << "no feature store at " << config.features_dir.string()
                  << "; run `inpredict extract` first\n";
        return 1;
    }
    const FeatureStore store = load_feature_store(config.features_dir);
    const AblationOptions opts = config.ablation_options();

    fs::create_directories(config.results_dir);
    const fs::path results_path = config.results_dir / "results.jsonl";
    std::ofstream(results_path, std::ios::trunc).close();  // fresh run

    std::size_t failed = 0;
    for (Condition condition : config.conditions) {
        const AblationRun run =
            run_ablation(store.recordings, condition, opts, config.seed);
        append_results_jsonl(run, results_path);

        for (const AblationCell& cell : run.cells) {
            if (cell.failed()) {
                ++failed;
                std::cerr << "cell failed: " << to_string(condition) << " "
                          << to_string(cell.model) << " W=" << cell.window << " "
                          << cell.mask.to_string() << ": " << cell.error << "\n";
            }
        }

        const auto rows = best_rows(run);
        const std::string table = render_summary_table(rows);
        const std::string tag =
            condition == Condition::Generalised ? "generalised" : "personalised";
        {
            std::ofstream out(config.results_dir / ("summary_" + tag + ".txt"));
            out << table;
        }
        {
            std::ofstream out(config.results_dir / ("summary_" + tag + ".csv"));
            out << render_summary_csv(rows);
        }
        std::cout << to_string(condition) << " (" << run.cells.size() << " cells):\n"
                  << table << "\n";
    }

    std::cout << "results: " << results_path.string() << "\n";
    if (failed > 0) {
        std::cerr << failed << " grid cells failed\n";
        return 2;
    }
    return 0;
}

int cmd_report(const fs::path& results_path) {
    const auto cells = load_results_jsonl(results_path);
    if (cells.empty()) {
        std::cerr << "results file " << results_path.string() << " has no rows\n";
        return 1;
    }
    std::map<Condition, AblationRun> by_condition;
    for (const AblationCell& cell : cells) {
        auto& run = by_condition[cell.condition];
        run.condition = cell.condition;
        run.cells.push_back(cell);
    }
    for (const auto& [condition, run] : by_condition) {
        std::cout << to_string(condition) << "\n"
                  << render_summary_table(best_rows(run)) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EEG information-need prediction pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = -1;
    std::vector<std::string> conditions, masks, model_names;
    std::vector<int> windows;
    std::string dump_csv_dir;
    std::string results_path;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory root");
    app.add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--jobs", jobs, "worker thread count (0 = all cores)");
    app.add_option("--condition", conditions, "conditions (Generalised, Personalised)");
    app.add_option("--windows", windows, "window sizes");
    app.add_option("--masks", masks, "feature masks, e.g. Mean-SD-Curve, or 'all'");
    app.add_option("--models", model_names, "model families");

    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic recording bundles");
    auto* extract_cmd = app.add_subcommand("extract", "preprocess and featurize bundles");
    extract_cmd->add_option("--dump-csv", dump_csv_dir, "also dump per-subject feature CSVs");
    auto* ablate_cmd = app.add_subcommand("ablate", "run the ablation grid");
    auto* report_cmd = app.add_subcommand("report", "render summary tables from results");
    report_cmd->add_option("--results", results_path, "results.jsonl path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig config;
        if (!config_path.empty()) config.load_json_file(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (seed_set) config.seed = seed;
        if (jobs >= 0) config.jobs = jobs;
        if (!conditions.empty()) {
            config.conditions.clear();
            for (const auto& c : conditions) {
                config.conditions.push_back(condition_from_string(c));
            }
        }
        if (!windows.empty()) config.windows = windows;
        if (!masks.empty()) config.masks = masks;
        if (!model_names.empty()) {
            config.models.clear();
            for (const auto& m : model_names) {
                config.models.push_back(model_family_from_string(m));
            }
        }
        config.finalize();

        if (synth_cmd->parsed()) return cmd_synth(config);
        if (extract_cmd->parsed()) return cmd_extract(config, dump_csv_dir);
        if (ablate_cmd->parsed()) return cmd_ablate(config);
        if (report_cmd->parsed()) return cmd_report(results_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
