#include "inpredict/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace inpredict {

std::vector<std::vector<std::size_t>> presort_columns(const ColumnMatrix& X) {
    std::vector<std::vector<std::size_t>> sorted(X.d);
    for (std::size_t f = 0; f < X.d; ++f) {
        auto& idx = sorted[f];
        idx.resize(X.n);
        std::iota(idx.begin(), idx.end(), std::size_t(0));
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return X.at(a, f) < X.at(b, f);
        });
    }
    return sorted;
}

StumpFit fit_stump(const ColumnMatrix& X, std::span<const std::int8_t> y,
                   std::span<const double> weights,
                   const std::vector<std::vector<std::size_t>>& sorted_columns) {
    double total_pos = 0.0, total_neg = 0.0;
    std::vector<double> signed_weight(X.n);
    for (std::size_t i = 0; i < X.n; ++i) {
        (y[i] > 0 ? total_pos : total_neg) += weights[i];
        signed_weight[i] = y[i] > 0 ? weights[i] : -weights[i];
    }
    const double total = total_pos + total_neg;

    StumpFit best;
    best.weighted_error = total;  // sentinel: any real stump beats it
    bool found = false;

    for (std::size_t f = 0; f < X.d; ++f) {
        const auto& idx = sorted_columns[f];
        const auto column = X.column(f);
        // err(+1 polarity) = left_neg + (total_pos - left_pos)
        //                  = total_pos - sum_left w*y
        double left_signed = 0.0;
        for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
            const std::size_t i = idx[j];
            left_signed += signed_weight[i];
            const double v = column[i];
            const double v_next = column[idx[j + 1]];
            if (v == v_next) continue;

            const double err_plus = total_pos - left_signed;
            const double err_minus = total - err_plus;
            const double err = std::min(err_plus, err_minus);
            if (err > best.weighted_error) continue;

            const double threshold = v + 0.5 * (v_next - v);
            for (int pol = 1; pol >= -1; pol -= 2) {
                const double pol_err = pol > 0 ? err_plus : err_minus;
                const bool better =
                    pol_err < best.weighted_error ||
                    (pol_err == best.weighted_error && found &&
                     (int(f) < best.stump.feature ||
                      (int(f) == best.stump.feature && threshold < best.stump.threshold)));
                if (better) {
                    found = true;
                    best.stump = {int(f), threshold, std::int8_t(pol)};
                    best.weighted_error = pol_err;
                }
            }
        }
    }

    if (!found) {
        // All feature values identical: fall back to a constant +1 stump.
        best.stump = {0, std::numeric_limits<double>::infinity(), 1};
        best.weighted_error = total_neg;
    }
    if (total > 0.0) best.weighted_error /= total;
    return best;
}

double stump_alpha(double weighted_error) {
    const double eps = std::clamp(weighted_error, 1e-10, 1.0 - 1e-10);
    return 0.5 * std::log((1.0 - eps) / eps);
}

}  // namespace inpredict
