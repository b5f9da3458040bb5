#pragma once

// Ablation results persistence: one JSONL object per grid cell with keys
// {condition, model, window, mask, fold_metrics[], mean, sd, p_value}
// (failed cells carry an "error" key instead of metrics). No timestamps:
// rows are byte-reproducible across runs with the same config and seed.

#include <filesystem>
#include <vector>

#include "inpredict/eval.hpp"

namespace inpredict {

void append_results_jsonl(const AblationRun& run, const std::filesystem::path& path);

std::vector<AblationCell> load_results_jsonl(const std::filesystem::path& path);

}  // namespace inpredict
