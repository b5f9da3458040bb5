#include "inpredict/store.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace inpredict {

namespace {

using nlohmann::json;

json provenance_to_json(const StoreProvenance& p) {
    return json{{"rate_hz", p.rate_hz},
                {"preprocess_low_hz", p.preprocess_low_hz},
                {"preprocess_high_hz", p.preprocess_high_hz},
                {"preprocess_order", p.preprocess_order},
                {"band_filter_order", p.band_filter_order},
                {"curve_mode", p.curve_mode},
                {"band_names", p.band_names},
                {"source_hash", p.source_hash},
                {"params_hash", p.params_hash},
                {"version", p.version}};
}

StoreProvenance provenance_from_json(const json& j) {
    StoreProvenance p;
    p.rate_hz = j.at("rate_hz").get<double>();
    p.preprocess_low_hz = j.at("preprocess_low_hz").get<double>();
    p.preprocess_high_hz = j.at("preprocess_high_hz").get<double>();
    p.preprocess_order = j.at("preprocess_order").get<int>();
    p.band_filter_order = j.at("band_filter_order").get<int>();
    p.curve_mode = j.at("curve_mode").get<std::string>();
    p.band_names = j.at("band_names").get<std::vector<std::string>>();
    p.source_hash = j.at("source_hash").get<std::string>();
    p.params_hash = j.at("params_hash").get<std::string>();
    p.version = j.at("version").get<std::string>();
    return p;
}

std::string subject_file_name(const std::string& subject_id) {
    return "subject_" + subject_id + ".jsonl";
}

}  // namespace

void save_feature_store(const std::vector<FeaturizedRecording>& recordings,
                        const StoreProvenance& provenance,
                        const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    json manifest = provenance_to_json(provenance);
    json subjects = json::array();
    for (const FeaturizedRecording& rec : recordings) {
        subjects.push_back({{"subject_id", rec.subject_id},
                            {"file", subject_file_name(rec.subject_id)},
                            {"channels", rec.channels}});
    }
    manifest["subjects"] = std::move(subjects);

    std::ofstream mf(dir / "manifest.json");
    if (!mf) throw std::runtime_error("cannot write feature store manifest");
    mf << manifest.dump(2) << "\n";

    for (const FeaturizedRecording& rec : recordings) {
        std::ofstream out(dir / subject_file_name(rec.subject_id));
        if (!out) throw std::runtime_error("cannot write feature store for " + rec.subject_id);
        for (const TrialFeatures& trial : rec.trials) {
            json segs = json::array();
            for (const SegmentFeatures& seg : trial.segments) segs.push_back(seg.values);
            json row{{"trial_id", trial.trial_id},
                     {"question_id", trial.question_id},
                     {"label", to_string(trial.label)},
                     {"segments", std::move(segs)}};
            out << row.dump() << "\n";
        }
    }
}

FeatureStore load_feature_store(const std::filesystem::path& dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw std::runtime_error("cannot open feature store manifest in " + dir.string());
    json manifest = json::parse(mf);

    FeatureStore store;
    store.provenance = provenance_from_json(manifest);
    const std::size_t n_bands = store.provenance.band_names.size();

    for (const auto& subject : manifest.at("subjects")) {
        FeaturizedRecording rec;
        rec.subject_id = subject.at("subject_id").get<std::string>();
        rec.channels = subject.at("channels").get<std::size_t>();
        rec.band_names = store.provenance.band_names;

        const auto path = dir / subject.at("file").get<std::string>();
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path.string());
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                json j = json::parse(line);
                TrialFeatures trial;
                trial.trial_id = j.at("trial_id").get<int>();
                trial.question_id = j.value("question_id", 0);
                trial.label = label_from_string(j.at("label").get<std::string>());
                for (const auto& seg : j.at("segments")) {
                    SegmentFeatures sf(rec.channels, n_bands);
                    const auto values = seg.get<std::vector<double>>();
                    if (values.size() != sf.values.size()) {
                        throw std::runtime_error("segment tensor has " +
                                                 std::to_string(values.size()) +
                                                 " values, expected " +
                                                 std::to_string(sf.values.size()));
                    }
                    sf.values = values;
                    trial.segments.push_back(std::move(sf));
                }
                rec.trials.push_back(std::move(trial));
            } catch (const std::exception& e) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " +
                                         e.what());
            }
        }
        store.recordings.push_back(std::move(rec));
    }
    return store;
}

std::optional<StoreProvenance> peek_store_provenance(const std::filesystem::path& dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) return std::nullopt;
    try {
        return provenance_from_json(json::parse(mf));
    } catch (...) {
        return std::nullopt;
    }
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot hash missing file " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        h = fnv1a(h, buf, std::size_t(in.gcount()));
    }
    return to_hex(h);
}

std::string hash_string(const std::string& s) {
    return to_hex(fnv1a(0xcbf29ce484222325ULL, s.data(), s.size()));
}

void write_features_csv(const FeaturizedRecording& rec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "trial_id,segment_index,channel,band,feature,value\n";
    out.precision(12);
    for (const TrialFeatures& trial : rec.trials) {
        for (std::size_t s = 0; s < trial.segments.size(); ++s) {
            const SegmentFeatures& seg = trial.segments[s];
            for (std::size_t c = 0; c < seg.channels; ++c) {
                for (std::size_t b = 0; b < seg.bands; ++b) {
                    for (int f = 0; f < kNumFeatureKinds; ++f) {
                        out << trial.trial_id << ',' << s << ',' << c << ','
                            << rec.band_names[b] << ','
                            << feature_kind_short_name(all_feature_kinds()[std::size_t(f)])
                            << ',' << seg.at(c, b, std::size_t(f)) << '\n';
                    }
                }
            }
        }
    }
}

void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << "subject_id,trial_id,label";
    for (std::size_t i = 0; i < dataset.dimension(); ++i) out << ",v" << i;
    out << "\n";
    out.precision(12);
    for (const Sample& s : dataset.samples) {
        out << s.subject_id << ',' << s.trial_id << ',' << to_string(s.label);
        for (double v : s.vector) out << ',' << v;
        out << "\n";
    }

    json manifest{{"condition", to_string(dataset.provenance.condition)},
                  {"window", dataset.provenance.window},
                  {"mask", dataset.provenance.mask.to_string()},
                  {"seed", dataset.provenance.seed}};
    if (!dataset.provenance.subject_id.empty()) {
        manifest["subject_id"] = dataset.provenance.subject_id;
    }
    auto manifest_path = csv_path;
    manifest_path.replace_extension(".manifest.json");
    std::ofstream mf(manifest_path);
    if (!mf) throw std::runtime_error("cannot write " + manifest_path.string());
    mf << manifest.dump(2) << "\n";
}

}  // namespace inpredict
