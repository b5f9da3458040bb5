#pragma once

// On-disk recording bundle: a directory with manifest.json (subject_id,
// sampling_rate_hz, channel_names) and trials.jsonl, one trial per line
// with segments as nested channel-major arrays. Doubles are written with
// shortest round-trip precision, so save -> load is bit-exact.

#include <filesystem>

#include "inpredict/types.hpp"

namespace inpredict {

void save_recording(const Recording& rec, const std::filesystem::path& dir);

// Throws std::runtime_error on malformed manifests, schema mismatches
// (e.g. a segment whose row count disagrees with the manifest channel
// list) and unparseable trial lines; messages name the offending line.
Recording load_recording(const std::filesystem::path& dir);

}  // namespace inpredict
