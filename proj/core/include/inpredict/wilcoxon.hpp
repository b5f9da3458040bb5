#pragma once

// Paired Wilcoxon signed-rank test. Zero differences are dropped; ties
// among |differences| get average ranks. Exact two-sided p by full
// null-distribution computation for n <= 25, normal approximation with
// tie and continuity corrections beyond.

#include <span>

namespace inpredict {

struct WilcoxonResult {
    double statistic = 0.0;  // min(W+, W-)
    double p_value = 1.0;    // two-sided
    int n_used = 0;          // pairs remaining after dropping zero differences
    bool exact = false;
};

// Throws std::invalid_argument on length mismatch or fewer than 5
// non-zero differences.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

}  // namespace inpredict
