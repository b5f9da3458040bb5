#include "config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace inpredict::cli {

namespace {

using nlohmann::json;

std::size_t band_index_by_name(const std::string& name) {
    const auto& bands = canonical_bands();
    for (std::size_t b = 0; b < bands.size(); ++b) {
        if (bands[b].name == name) return b;
    }
    throw std::invalid_argument("unknown band name: '" + name + "'");
}

void load_synth(const json& j, SynthProfile& p) {
    p.n_subjects = j.value("n_subjects", p.n_subjects);
    p.n_trials = j.value("n_trials", p.n_trials);
    p.channels = j.value("channels", p.channels);
    p.rate_hz = j.value("rate_hz", p.rate_hz);
    p.min_words = j.value("min_words", p.min_words);
    p.max_words = j.value("max_words", p.max_words);
    p.need_fraction = j.value("need_fraction", p.need_fraction);
    p.affect_last_word = j.value("affect_last_word", p.affect_last_word);
    p.subject_jitter = j.value("subject_jitter", p.subject_jitter);
    p.noise_sigma_uv = j.value("noise_sigma_uv", p.noise_sigma_uv);
    p.noise_exponent = j.value("noise_exponent", p.noise_exponent);
    p.osc_amplitude_jitter = j.value("osc_amplitude_jitter", p.osc_amplitude_jitter);
    if (j.contains("osc_amplitudes_uv")) {
        const auto arr = j.at("osc_amplitudes_uv").get<std::vector<double>>();
        if (arr.size() != kNumCanonicalBands) {
            throw std::invalid_argument("osc_amplitudes_uv needs 5 values (Delta..Gamma)");
        }
        for (std::size_t b = 0; b < arr.size(); ++b) p.osc_amplitudes_uv[b] = arr[b];
    }
    if (j.contains("effect_multipliers")) {
        const json& em = j.at("effect_multipliers");
        if (em.is_array()) {
            const auto arr = em.get<std::vector<double>>();
            if (arr.size() != kNumCanonicalBands) {
                throw std::invalid_argument("effect_multipliers array needs 5 values");
            }
            for (std::size_t b = 0; b < arr.size(); ++b) p.effect_multipliers[b] = arr[b];
        } else {
            for (const auto& [name, value] : em.items()) {
                p.effect_multipliers[band_index_by_name(name)] = value.get<double>();
            }
        }
    }
}

}  // namespace

void ExperimentConfig::load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error("config " + path.string() + ": " + e.what());
    }

    seed = j.value("seed", seed);
    if (j.contains("out_dir")) out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("bundles_dir")) bundles_dir = j.at("bundles_dir").get<std::string>();
    if (j.contains("features_dir")) features_dir = j.at("features_dir").get<std::string>();
    if (j.contains("results_dir")) results_dir = j.at("results_dir").get<std::string>();

    if (j.contains("conditions")) {
        conditions.clear();
        for (const auto& c : j.at("conditions")) {
            conditions.push_back(condition_from_string(c.get<std::string>()));
        }
    }
    if (j.contains("windows")) windows = j.at("windows").get<std::vector<int>>();
    if (j.contains("masks")) {
        masks.clear();
        const json& m = j.at("masks");
        if (m.is_string()) {
            masks.push_back(m.get<std::string>());
        } else {
            for (const auto& s : m) masks.push_back(s.get<std::string>());
        }
    }
    if (j.contains("models")) {
        models.clear();
        for (const auto& m : j.at("models")) {
            models.push_back(model_family_from_string(m.get<std::string>()));
        }
    }
    k = j.value("k", k);
    jobs = j.value("jobs", jobs);
    significance_repeats = j.value("significance_repeats", significance_repeats);
    if (j.contains("balance_scope")) {
        const auto s = j.at("balance_scope").get<std::string>();
        if (s == "pooled") balance_scope = BalanceScope::Pooled;
        else if (s == "per_subject") balance_scope = BalanceScope::PerSubject;
        else throw std::invalid_argument("balance_scope must be pooled or per_subject");
    }
    if (j.contains("pairing")) {
        const auto s = j.at("pairing").get<std::string>();
        if (s == "fold_accuracy") pairing = PairingMode::FoldAccuracy;
        else if (s == "per_sample") pairing = PairingMode::PerSample;
        else throw std::invalid_argument("pairing must be fold_accuracy or per_sample");
    }

    if (j.contains("preprocess")) {
        const json& p = j.at("preprocess");
        preprocess.low_hz = p.value("low_hz", preprocess.low_hz);
        preprocess.high_hz = p.value("high_hz", preprocess.high_hz);
        preprocess.order = p.value("order", preprocess.order);
    }
    if (j.contains("features")) {
        const json& f = j.at("features");
        band_filter_order = f.value("band_filter_order", band_filter_order);
        if (f.contains("curve_length_mode")) {
            const auto s = f.at("curve_length_mode").get<std::string>();
            if (s == "amplitude") curve_mode = CurveLengthMode::AmplitudeDelta;
            else if (s == "arc") curve_mode = CurveLengthMode::Arc;
            else throw std::invalid_argument("curve_length_mode must be amplitude or arc");
        }
    }
    if (j.contains("model_params")) {
        const json& m = j.at("model_params");
        model_params.n_trees = m.value("n_trees", model_params.n_trees);
        model_params.max_depth = m.value("max_depth", model_params.max_depth);
        model_params.min_samples_leaf =
            m.value("min_samples_leaf", model_params.min_samples_leaf);
        model_params.mtry = m.value("mtry", model_params.mtry);
        model_params.bootstrap = m.value("bootstrap", model_params.bootstrap);
        model_params.boost_rounds = m.value("boost_rounds", model_params.boost_rounds);
        model_params.svm_lambda = m.value("svm_lambda", model_params.svm_lambda);
        model_params.svm_epochs = m.value("svm_epochs", model_params.svm_epochs);
    }
    if (j.contains("synth")) load_synth(j.at("synth"), synth);
}

void ExperimentConfig::finalize() {
    if (bundles_dir.empty()) bundles_dir = out_dir / "bundles";
    if (features_dir.empty()) features_dir = out_dir / "features";
    if (results_dir.empty()) results_dir = out_dir / "results";
    synth.seed = derive_seed(seed, "synth");
}

std::vector<FeatureMask> ExperimentConfig::resolve_masks() const {
    if (masks.empty() || (masks.size() == 1 && masks.front() == "all")) {
        return enumerate_feature_masks();
    }
    std::vector<FeatureMask> out;
    out.reserve(masks.size());
    for (const std::string& m : masks) out.push_back(FeatureMask::from_string(m));
    return out;
}

AblationOptions ExperimentConfig::ablation_options() const {
    AblationOptions opts;
    opts.windows = windows;
    opts.models = models;
    opts.masks = resolve_masks();
    opts.k = k;
    opts.significance_repeats = significance_repeats;
    opts.jobs = jobs;
    opts.balance_scope = balance_scope;
    opts.pairing = pairing;
    opts.base_spec = model_params;
    return opts;
}

std::string ExperimentConfig::feature_params_string() const {
    std::ostringstream os;
    os.precision(12);
    os << "preprocess:" << preprocess.low_hz << '-' << preprocess.high_hz << ":order"
       << preprocess.order << ";band_order:" << band_filter_order << ";curve:"
       << (curve_mode == CurveLengthMode::Arc ? "arc" : "amplitude") << ";bands:";
    for (const BandSpec& b : canonical_bands()) {
        os << b.name << '=' << b.low_hz << '-' << b.high_hz << ',';
    }
    return os.str();
}

}  // namespace inpredict::cli
