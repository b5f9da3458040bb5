#pragma once

// Discrete AdaBoost over depth-1 stumps (two-class SAMME). The stump
// fitter and the round-weight formula are exposed so the training loop
// and the tests share one implementation.

#include <cstdint>
#include <span>
#include <vector>

#include "inpredict/tree.hpp"

namespace inpredict {

struct Stump {
    int feature = 0;
    double threshold = 0.0;
    // +1: predict +1 when x[feature] <= threshold; -1: the flip.
    std::int8_t polarity = 1;

    std::int8_t predict(std::span<const double> x) const {
        const bool left = x[std::size_t(feature)] <= threshold;
        return std::int8_t(left ? polarity : -polarity);
    }
};

struct StumpFit {
    Stump stump;
    double weighted_error = 0.5;
};

// Exhaustive weighted scan over all features and midpoint thresholds;
// sorted_columns[f] must hold the row indices sorted by feature f (the
// AdaBoost loop presorts once and reuses them every round).
StumpFit fit_stump(const ColumnMatrix& X, std::span<const std::int8_t> y,
                   std::span<const double> weights,
                   const std::vector<std::vector<std::size_t>>& sorted_columns);

// alpha = 0.5 * ln((1 - eps) / eps), with eps clamped to
// [1e-10, 1 - 1e-10].
double stump_alpha(double weighted_error);

std::vector<std::vector<std::size_t>> presort_columns(const ColumnMatrix& X);

}  // namespace inpredict
