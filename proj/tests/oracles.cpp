#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace oracles {

namespace {
constexpr double kPi = std::numbers::pi;
}

double dft_amplitude(std::span<const double> x, double freq_hz, double rate_hz) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double angle = 2.0 * kPi * freq_hz * double(t) / rate_hz;
        re += x[t] * std::cos(angle);
        im += x[t] * std::sin(angle);
    }
    return 2.0 * std::sqrt(re * re + im * im) / double(x.size());
}

double band_power(std::span<const double> x, double low_hz, double high_hz,
                  double rate_hz) {
    const std::size_t n = x.size();
    double power = 0.0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double f = double(k) * rate_hz / double(n);
        if (f < low_hz || f >= high_hz) continue;
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double angle = 2.0 * kPi * double(k) * double(t) / double(n);
            re += x[t] * std::cos(angle);
            im += x[t] * std::sin(angle);
        }
        power += re * re + im * im;
    }
    return power;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    const double ma = naive_mean(a), mb = naive_mean(b);
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::sqrt(da * db);
}

std::vector<double> make_sine(std::size_t n, double freq_hz, double rate_hz,
                              double amplitude, double phase) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = amplitude * std::sin(2.0 * kPi * freq_hz * double(t) / rate_hz + phase);
    }
    return x;
}

double naive_mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
}

double naive_std(std::span<const double> x) {
    const double m = naive_mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return std::sqrt(acc / double(x.size()));
}

double naive_skewness(std::span<const double> x) {
    const double m = naive_mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        m2 += std::pow(v - m, 2.0);
        m3 += std::pow(v - m, 3.0);
    }
    m2 /= double(x.size());
    m3 /= double(x.size());
    if (m2 < 1e-15) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

double naive_kurtosis(std::span<const double> x) {
    const double m = naive_mean(x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        m2 += std::pow(v - m, 2.0);
        m4 += std::pow(v - m, 4.0);
    }
    m2 /= double(x.size());
    m4 /= double(x.size());
    if (m2 < 1e-15) return 0.0;
    return m4 / (m2 * m2) - 3.0;
}

double naive_curve_length(std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) acc += std::fabs(x[i + 1] - x[i]);
    return acc;
}

double naive_num_peaks(std::span<const double> x) {
    int count = 0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (x[i] > x[i - 1] && x[i] > x[i + 1]) ++count;
    }
    return count;
}

double naive_avg_nonlinear_energy(std::span<const double> x) {
    double acc = 0.0;
    int terms = 0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        acc += x[i] * x[i] - x[i - 1] * x[i + 1];
        ++terms;
    }
    return acc / double(terms);
}

namespace {

struct RankedDiffs {
    std::vector<double> ranks;  // average ranks of |d|
    double w_plus = 0.0;
};

RankedDiffs rank_differences(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) d.push_back(a[i] - b[i]);
    }
    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::fabs(d[i]) < std::fabs(d[j]);
    });

    RankedDiffs out;
    out.ranks.assign(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(d[order[j + 1]]) == std::fabs(d[order[i]])) ++j;
        const double avg_rank = (double(i + 1) + double(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = avg_rank;
        i = j + 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (d[k] > 0.0) out.w_plus += out.ranks[k];
    }
    return out;
}

}  // namespace

double wilcoxon_enum_two_sided_p(std::span<const double> a, std::span<const double> b) {
    const RankedDiffs rd = rank_differences(a, b);
    const std::size_t n = rd.ranks.size();
    if (n < 5) throw std::invalid_argument("too few non-zero differences");
    if (n > 20) throw std::invalid_argument("enumeration oracle limited to n <= 20");

    const std::uint64_t total = std::uint64_t(1) << n;
    std::uint64_t low = 0, high = 0;
    const double eps = 1e-9;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t(1) << i)) w += rd.ranks[i];
        }
        if (w <= rd.w_plus + eps) ++low;
        if (w >= rd.w_plus - eps) ++high;
    }
    const double p = 2.0 * double(std::min(low, high)) / double(total);
    return std::min(1.0, p);
}

double wilcoxon_normal_approx_p(std::span<const double> a, std::span<const double> b) {
    const RankedDiffs rd = rank_differences(a, b);
    const double n = double(rd.ranks.size());
    double total = 0.0;
    for (double r : rd.ranks) total += r;
    const double w_minus = total - rd.w_plus;
    const double w_stat = std::min(rd.w_plus, w_minus);

    const double mu = n * (n + 1.0) / 4.0;
    double sigma_sq = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    std::vector<double> sorted = rd.ranks;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = double(j - i + 1);
        sigma_sq -= (t * t * t - t) / 48.0;
        i = j + 1;
    }
    const double z = (w_stat - mu + 0.5) / std::sqrt(sigma_sq);
    const double p = 2.0 * 0.5 * std::erfc(-z / std::sqrt(2.0));
    return std::min(1.0, p);
}

}  // namespace oracles
