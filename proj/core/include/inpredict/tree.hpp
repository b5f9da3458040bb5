#pragma once

// CART decision tree for binary labels (+1 / -1): Gini impurity,
// exhaustive scan over midpoints of sorted unique values, deterministic
// tie-breaking (lowest feature index, then lowest threshold).

#include <cstdint>
#include <span>
#include <vector>

#include "inpredict/rng.hpp"

namespace inpredict {

// Row-major n x d matrix view over training vectors.
struct DataView {
    const double* data = nullptr;
    std::size_t n = 0;
    std::size_t d = 0;

    std::span<const double> row(std::size_t i) const { return {data + i * d, d}; }
    double at(std::size_t i, std::size_t f) const { return data[i * d + f]; }
};

// Column-major copy used by the split scanners: a node visits one feature
// across many samples, so columns must be contiguous.
struct ColumnMatrix {
    std::vector<double> data;  // d columns of n values
    std::size_t n = 0;
    std::size_t d = 0;

    explicit ColumnMatrix(const DataView& view) : n(view.n), d(view.d) {
        data.resize(n * d);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t f = 0; f < d; ++f) data[f * n + i] = view.at(i, f);
        }
    }

    double at(std::size_t i, std::size_t f) const { return data[f * n + i]; }
    std::span<const double> column(std::size_t f) const { return {data.data() + f * n, n}; }
};

struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::int8_t leaf = 0;  // 0 internal; +1/-1 leaf class
};

struct TreeParams {
    int max_depth = 10;
    int min_samples_leaf = 1;
    int mtry = 0;  // features scanned per split: 0 = all
};

class DecisionTree {
public:
    // index selects the training rows (bootstrap sampling passes
    // duplicates). rng is only consulted when mtry < d.
    void fit(const ColumnMatrix& X, std::span<const std::int8_t> y,
             std::vector<std::size_t> index, const TreeParams& params, Rng& rng);

    // Variant taking columns presorted over all rows (one argsort per
    // feature, shared across the trees of a forest).
    void fit(const ColumnMatrix& X, std::span<const std::int8_t> y,
             std::vector<std::size_t> index, const TreeParams& params, Rng& rng,
             const std::vector<std::vector<std::size_t>>& sorted_columns);

    std::int8_t predict(std::span<const double> x) const;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::vector<TreeNode>& nodes() { return nodes_; }

private:
    std::vector<TreeNode> nodes_;
};

}  // namespace inpredict
