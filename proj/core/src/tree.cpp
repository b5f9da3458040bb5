#include "inpredict/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "inpredict/boosting.hpp"

namespace inpredict {

namespace {

struct Split {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

double gini_pair(double n_pos, double n_neg) {
    const double n = n_pos + n_neg;
    if (n <= 0.0) return 0.0;
    const double pp = n_pos / n;
    const double pn = n_neg / n;
    return 1.0 - pp * pp - pn * pn;
}

// Sweeps one presorted column, visiting only rows present in the node
// (counts carry bootstrap multiplicity). Thresholds sit at midpoints
// between distinct consecutive member values; ties break toward the
// lowest feature index, then the lowest threshold.
void scan_feature(const ColumnMatrix& X, std::span<const std::int8_t> y,
                  std::span<const std::size_t> order, std::span<const std::uint16_t> count,
                  double total_pos, double total_neg, int feature, int min_leaf,
                  Split& best) {
    const double n = total_pos + total_neg;
    double left_pos = 0.0, left_neg = 0.0;
    double prev_value = 0.0;
    bool have_prev = false;

    for (std::size_t i : order) {
        const std::uint16_t c = count[i];
        if (c == 0) continue;
        const double v = X.at(i, std::size_t(feature));
        if (have_prev && v != prev_value) {
            const double left_n = left_pos + left_neg;
            const double right_n = n - left_n;
            if (left_n >= min_leaf && right_n >= min_leaf) {
                const double impurity =
                    (left_n * gini_pair(left_pos, left_neg) +
                     right_n * gini_pair(total_pos - left_pos, total_neg - left_neg)) /
                    n;
                const double threshold = prev_value + 0.5 * (v - prev_value);
                const bool better =
                    impurity < best.impurity ||
                    (impurity == best.impurity &&
                     (feature < best.feature ||
                      (feature == best.feature && threshold < best.threshold)));
                if (better) {
                    best.found = true;
                    best.feature = feature;
                    best.threshold = threshold;
                    best.impurity = impurity;
                }
            }
        }
        if (y[i] > 0) {
            left_pos += c;
        } else {
            left_neg += c;
        }
        prev_value = v;
        have_prev = true;
    }
}

}  // namespace

void DecisionTree::fit(const ColumnMatrix& X, std::span<const std::int8_t> y,
                       std::vector<std::size_t> index, const TreeParams& params, Rng& rng,
                       const std::vector<std::vector<std::size_t>>& sorted_columns) {
    nodes_.clear();

    struct Job {
        std::vector<std::uint16_t> count;  // multiplicity per training row
        double n_pos;                      // weighted by multiplicity
        double n_neg;
        int node;
        int depth;
    };

    Job root;
    root.count.assign(X.n, 0);
    root.n_pos = root.n_neg = 0.0;
    for (std::size_t i : index) {
        ++root.count[i];
        (y[i] > 0 ? root.n_pos : root.n_neg) += 1.0;
    }
    root.node = 0;
    root.depth = 0;

    nodes_.push_back(TreeNode{});
    std::vector<Job> stack;
    stack.push_back(std::move(root));

    std::vector<int> candidates;
    const int d = int(X.d);

    while (!stack.empty()) {
        Job job = std::move(stack.back());
        stack.pop_back();

        const double m = job.n_pos + job.n_neg;
        const bool stop = job.depth >= params.max_depth ||
                          m < 2.0 * params.min_samples_leaf || m < 2.0 ||
                          job.n_pos == 0.0 || job.n_neg == 0.0;

        Split best;
        if (!stop) {
            candidates.clear();
            const int mtry = params.mtry > 0 ? std::min(params.mtry, d) : d;
            if (mtry == d) {
                candidates.resize(std::size_t(d));
                std::iota(candidates.begin(), candidates.end(), 0);
            } else {
                // Sample mtry distinct features; scan order is ascending so
                // tie-breaking stays canonical.
                std::vector<int> pool(static_cast<std::size_t>(d), 0);
                std::iota(pool.begin(), pool.end(), 0);
                for (int j = 0; j < mtry; ++j) {
                    const std::size_t pick = std::size_t(j) + rng.below(std::uint64_t(d - j));
                    std::swap(pool[std::size_t(j)], pool[pick]);
                }
                candidates.assign(pool.begin(), pool.begin() + mtry);
                std::sort(candidates.begin(), candidates.end());
            }
            for (int f : candidates) {
                scan_feature(X, y, sorted_columns[std::size_t(f)], job.count, job.n_pos,
                             job.n_neg, f, params.min_samples_leaf, best);
            }
        }

        TreeNode& node = nodes_[std::size_t(job.node)];
        if (!best.found) {
            node.leaf = job.n_pos >= job.n_neg ? 1 : -1;  // tie -> positive class
            continue;
        }

        Job left, right;
        left.count.assign(X.n, 0);
        right.count.assign(X.n, 0);
        left.n_pos = left.n_neg = right.n_pos = right.n_neg = 0.0;
        for (std::size_t i = 0; i < X.n; ++i) {
            const std::uint16_t c = job.count[i];
            if (c == 0) continue;
            Job& side = X.at(i, std::size_t(best.feature)) <= best.threshold ? left : right;
            side.count[i] = c;
            (y[i] > 0 ? side.n_pos : side.n_neg) += c;
        }

        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = int(nodes_.size());
        node.right = int(nodes_.size()) + 1;
        left.node = node.left;
        right.node = node.right;
        left.depth = right.depth = job.depth + 1;
        nodes_.push_back(TreeNode{});
        nodes_.push_back(TreeNode{});
        stack.push_back(std::move(left));
        stack.push_back(std::move(right));
    }
}

void DecisionTree::fit(const ColumnMatrix& X, std::span<const std::int8_t> y,
                       std::vector<std::size_t> index, const TreeParams& params, Rng& rng) {
    fit(X, y, std::move(index), params, rng, presort_columns(X));
}

std::int8_t DecisionTree::predict(std::span<const double> x) const {
    int node = 0;
    while (nodes_[std::size_t(node)].leaf == 0) {
        const TreeNode& n = nodes_[std::size_t(node)];
        node = x[std::size_t(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[std::size_t(node)].leaf;
}

}  // namespace inpredict
