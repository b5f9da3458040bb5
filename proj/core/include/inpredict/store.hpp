#pragma once

// Feature store on disk: one JSONL file per subject (one trial per line,
// segment tensors as flat arrays) plus a manifest carrying layout and
// provenance (filter spec, band set, code version, content hashes).
// Also the CSV export surfaces: per-cell feature dumps and assembled
// dataset exports.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "inpredict/dataset.hpp"
#include "inpredict/features.hpp"

namespace inpredict {

inline constexpr const char* kCodeVersion = "0.1.0";

struct StoreProvenance {
    double rate_hz = 0.0;
    double preprocess_low_hz = 0.0;
    double preprocess_high_hz = 0.0;
    int preprocess_order = 0;
    int band_filter_order = 0;
    std::string curve_mode;
    std::vector<std::string> band_names;
    std::string source_hash;  // content hash of the input bundles
    std::string params_hash;  // hash of the parameters + code version
    std::string version = kCodeVersion;
};

void save_feature_store(const std::vector<FeaturizedRecording>& recordings,
                        const StoreProvenance& provenance,
                        const std::filesystem::path& dir);

struct FeatureStore {
    std::vector<FeaturizedRecording> recordings;
    StoreProvenance provenance;
};

FeatureStore load_feature_store(const std::filesystem::path& dir);

// Reads just the provenance hashes (empty optional when absent/corrupt);
// used for the extract stage's content-hash cache.
std::optional<StoreProvenance> peek_store_provenance(const std::filesystem::path& dir);

// FNV-1a over the file bytes, hex-encoded.
std::string hash_file(const std::filesystem::path& path);
std::string hash_string(const std::string& s);

// CSV dump with header trial_id,segment_index,channel,band,feature,value.
void write_features_csv(const FeaturizedRecording& rec, const std::filesystem::path& path);

// CSV with header subject_id,trial_id,label,v0..vN plus a JSON manifest
// (condition, window, mask, seed) alongside.
void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& csv_path);

}  // namespace inpredict
