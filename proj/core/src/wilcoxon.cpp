#include "inpredict/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace inpredict {

namespace {

constexpr int kExactLimit = 25;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Average ranks of |d|, doubled so ties (.5 ranks) stay integral.
std::vector<std::int64_t> doubled_ranks(const std::vector<double>& abs_d) {
    const std::size_t n = abs_d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return abs_d[i] < abs_d[j]; });

    std::vector<std::int64_t> r2(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
        // ranks i+1 .. j+1 shared: doubled average = (i+1) + (j+1)
        const std::int64_t shared = std::int64_t(i + 1) + std::int64_t(j + 1);
        for (std::size_t k = i; k <= j; ++k) r2[order[k]] = shared;
        i = j + 1;
    }
    return r2;
}

// Exact distribution of the doubled W+ over all 2^n sign assignments:
// counts[s] = number of subsets of the doubled ranks summing to s.
double exact_two_sided_p(const std::vector<std::int64_t>& r2, std::int64_t w_plus_2) {
    std::int64_t total = 0;
    for (std::int64_t r : r2) total += r;
    std::vector<std::uint64_t> counts(std::size_t(total) + 1, 0);
    counts[0] = 1;
    std::int64_t reach = 0;
    for (std::int64_t r : r2) {
        reach += r;
        for (std::int64_t s = reach; s >= r; --s) {
            counts[std::size_t(s)] += counts[std::size_t(s - r)];
        }
    }
    std::uint64_t low = 0, high = 0, all = 0;
    for (std::int64_t s = 0; s <= total; ++s) {
        const std::uint64_t c = counts[std::size_t(s)];
        all += c;
        if (s <= w_plus_2) low += c;
        if (s >= w_plus_2) high += c;
    }
    const double p = 2.0 * double(std::min(low, high)) / double(all);
    return std::min(1.0, p);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("wilcoxon_signed_rank: paired inputs differ in length");
    }
    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.size() < 5) {
        throw std::invalid_argument("wilcoxon_signed_rank: fewer than 5 non-zero differences (" +
                                    std::to_string(diffs.size()) + ")");
    }

    const std::size_t n = diffs.size();
    std::vector<double> abs_d(n);
    for (std::size_t i = 0; i < n; ++i) abs_d[i] = std::abs(diffs[i]);
    const auto r2 = doubled_ranks(abs_d);

    std::int64_t w_plus_2 = 0, total_2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total_2 += r2[i];
        if (diffs[i] > 0.0) w_plus_2 += r2[i];
    }
    const double w_plus = double(w_plus_2) / 2.0;
    const double w_minus = double(total_2 - w_plus_2) / 2.0;

    WilcoxonResult result;
    result.statistic = std::min(w_plus, w_minus);
    result.n_used = int(n);

    if (n <= kExactLimit) {
        result.exact = true;
        result.p_value = exact_two_sided_p(r2, w_plus_2);
        return result;
    }

    // Normal approximation with tie correction and continuity correction.
    const double nn = double(n);
    const double mu = nn * (nn + 1.0) / 4.0;
    double sigma_sq = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    {
        std::vector<std::int64_t> sorted(r2.begin(), r2.end());
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = double(j - i + 1);
            sigma_sq -= (t * t * t - t) / 48.0;
            i = j + 1;
        }
    }
    const double sigma = std::sqrt(sigma_sq);
    const double z = (result.statistic - mu + 0.5) / sigma;
    result.p_value = std::min(1.0, 2.0 * normal_cdf(z));
    return result;
}

}  // namespace inpredict
