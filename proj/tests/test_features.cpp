#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "inpredict/features.hpp"
#include "inpredict/rng.hpp"
#include "inpredict/store.hpp"
#include "oracles.hpp"

using namespace inpredict;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal() * 7.0 + rng.uniform(-1.0, 1.0);
    return x;
}

}  // namespace

TEST_CASE("feature kernels reproduce hand-computed values") {
    SUBCASE("mean") {
        CHECK(feat_mean(std::vector<double>{1, 2, 3}) == doctest::Approx(2.0));
        CHECK(feat_mean(std::vector<double>{0, 0, 0, 0}) == doctest::Approx(0.0));
    }
    SUBCASE("std is the population standard deviation") {
        CHECK(feat_std(std::vector<double>{1, 1, 1}) == doctest::Approx(0.0));
        CHECK(feat_std(std::vector<double>{2, 4}) == doctest::Approx(1.0));
        CHECK(feat_std(std::vector<double>{1, 2, 3}) ==
              doctest::Approx(0.816496581).epsilon(1e-9));
    }
    SUBCASE("skewness") {
        CHECK(feat_skewness(std::vector<double>{1, 2, 3}) == doctest::Approx(0.0));
        CHECK(feat_skewness(std::vector<double>{5, 5, 5, 5}) == doctest::Approx(0.0));
        CHECK(feat_skewness(std::vector<double>{0, 0, 0, 1}) ==
              doctest::Approx(1.154700538).epsilon(1e-9));
    }
    SUBCASE("excess kurtosis") {
        CHECK(feat_kurtosis(std::vector<double>{-1, 1, -1, 1}) == doctest::Approx(-2.0));
        CHECK(feat_kurtosis(std::vector<double>{3, 3, 3}) == doctest::Approx(0.0));
    }
    SUBCASE("curve length") {
        CHECK(feat_curve_length(std::vector<double>{1, 3, 2}) == doctest::Approx(3.0));
        CHECK(feat_curve_length(std::vector<double>{7, 7, 7}) == doctest::Approx(0.0));
        CHECK(feat_curve_length(std::vector<double>{0, 1, 0, 1}) == doctest::Approx(3.0));
    }
    SUBCASE("peaks are strict") {
        CHECK(feat_num_peaks(std::vector<double>{0, 1, 0, 1, 0}) == doctest::Approx(2.0));
        CHECK(feat_num_peaks(std::vector<double>{1, 2, 3, 4}) == doctest::Approx(0.0));
        CHECK(feat_num_peaks(std::vector<double>{0, 1, 1, 0}) == doctest::Approx(0.0));
    }
    SUBCASE("average nonlinear energy") {
        CHECK(feat_avg_nonlinear_energy(std::vector<double>{1, 2, 3}) == doctest::Approx(1.0));
        CHECK(feat_avg_nonlinear_energy(std::vector<double>{4, 4, 4, 4}) ==
              doctest::Approx(0.0));
        CHECK(feat_avg_nonlinear_energy(std::vector<double>{0, 1, 0, -1, 0, 1, 0}) ==
              doctest::Approx(1.0));
    }
}

TEST_CASE("kurtosis of a large normal sample is near zero") {
    const auto x = [] {
        Rng rng(13);
        std::vector<double> out(100000);
        for (double& v : out) v = rng.normal();
        return out;
    }();
    CHECK(std::abs(feat_kurtosis(x)) < 0.1);
}

TEST_CASE("kernels reject inputs below their minimum length") {
    const std::vector<double> empty;
    const std::vector<double> one{1.0};
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(feat_mean(empty), std::invalid_argument);
    CHECK_THROWS_AS(feat_std(empty), std::invalid_argument);
    CHECK_THROWS_AS(feat_skewness(one), std::invalid_argument);
    CHECK_THROWS_AS(feat_kurtosis(one), std::invalid_argument);
    CHECK_THROWS_AS(feat_curve_length(one), std::invalid_argument);
    CHECK_THROWS_AS(feat_num_peaks(two), std::invalid_argument);
    CHECK_THROWS_AS(feat_avg_nonlinear_energy(two), std::invalid_argument);
}

TEST_CASE("every kernel matches its naive oracle on random signals") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto x = random_signal(400, seed);
        const double checks[7][2] = {
            {feat_mean(x), oracles::naive_mean(x)},
            {feat_std(x), oracles::naive_std(x)},
            {feat_skewness(x), oracles::naive_skewness(x)},
            {feat_kurtosis(x), oracles::naive_kurtosis(x)},
            {feat_curve_length(x), oracles::naive_curve_length(x)},
            {feat_num_peaks(x), oracles::naive_num_peaks(x)},
            {feat_avg_nonlinear_energy(x), oracles::naive_avg_nonlinear_energy(x)},
        };
        for (const auto& [got, want] : checks) {
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("moment features are permutation invariant, shape features are not") {
    auto x = random_signal(64, 77);
    auto shuffled = x;
    Rng rng(78);
    rng.shuffle(shuffled);

    CHECK(feat_mean(shuffled) == doctest::Approx(feat_mean(x)).epsilon(1e-12));
    CHECK(feat_std(shuffled) == doctest::Approx(feat_std(x)).epsilon(1e-12));
    CHECK(feat_skewness(shuffled) == doctest::Approx(feat_skewness(x)).epsilon(1e-9));
    CHECK(feat_kurtosis(shuffled) == doctest::Approx(feat_kurtosis(x)).epsilon(1e-9));

    // order-sensitive kernels: a sorted copy collapses them
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    CHECK(feat_num_peaks(sorted) == 0.0);
    CHECK(feat_curve_length(sorted) < feat_curve_length(x));
    CHECK(feat_avg_nonlinear_energy(sorted) !=
          doctest::Approx(feat_avg_nonlinear_energy(x)).epsilon(1e-6));
}

TEST_CASE("scaling behaviour of the kernels") {
    const auto x = random_signal(128, 42);
    const double a = 3.5;
    std::vector<double> ax(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ax[i] = a * x[i];

    CHECK(feat_mean(ax) == doctest::Approx(a * feat_mean(x)).epsilon(1e-9));
    CHECK(feat_std(ax) == doctest::Approx(a * feat_std(x)).epsilon(1e-9));
    CHECK(feat_curve_length(ax) == doctest::Approx(a * feat_curve_length(x)).epsilon(1e-9));
    CHECK(feat_skewness(ax) == doctest::Approx(feat_skewness(x)).epsilon(1e-9));
    CHECK(feat_kurtosis(ax) == doctest::Approx(feat_kurtosis(x)).epsilon(1e-9));
    CHECK(feat_num_peaks(ax) == doctest::Approx(feat_num_peaks(x)));
    CHECK(feat_avg_nonlinear_energy(ax) ==
          doctest::Approx(a * a * feat_avg_nonlinear_energy(x)).epsilon(1e-9));
}

TEST_CASE("band decomposition isolates the band") {
    const FeatureExtractor fx(500.0);
    // 4 s probe: the 4 Hz-wide alpha filter needs a few settling times of
    // headroom before the FFT ratio reflects the true passband gain
    const auto sine10 = oracles::make_sine(2000, 10.0, 500.0);

    const auto alpha = fx.band_decompose(sine10, 2);  // Alpha 8-12
    CHECK(oracles::dft_amplitude(alpha, 10.0, 500.0) /
              oracles::dft_amplitude(sine10, 10.0, 500.0) >=
          0.9);

    const auto gamma = fx.band_decompose(sine10, 4);  // Gamma 30-40
    CHECK(oracles::dft_amplitude(gamma, 10.0, 500.0) /
              oracles::dft_amplitude(sine10, 10.0, 500.0) <=
          0.1);

    const std::vector<double> zeros(400, 0.0);
    for (double v : fx.band_decompose(zeros, 0)) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("extract composes band decomposition with the kernels") {
    const FeatureExtractor fx(500.0);
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        Segment seg;
        seg.kind = SegmentKind::Word;
        seg.samples = Matrix(3, 400);
        for (double& v : seg.samples.data()) v = rng.normal() * 9.0;

        const SegmentFeatures tensor = fx.extract(seg);
        REQUIRE(tensor.channels == 3);
        REQUIRE(tensor.bands == 5);
        for (std::size_t c = 0; c < 3; ++c) {
            for (std::size_t b = 0; b < 5; ++b) {
                const auto series = fx.band_decompose(seg.samples.row(c), b);
                for (int f = 0; f < kNumFeatureKinds; ++f) {
                    const double direct =
                        compute_feature(all_feature_kinds()[std::size_t(f)], series);
                    CHECK(tensor.at(c, b, std::size_t(f)) ==
                          doctest::Approx(direct).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("zero segments produce all-zero tensors") {
    const FeatureExtractor fx(500.0);
    Segment seg;
    seg.samples = Matrix(2, 400, 0.0);
    const SegmentFeatures tensor = fx.extract(seg);
    for (double v : tensor.values) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("a 40-channel segment yields 1400 values") {
    const FeatureExtractor fx(500.0);
    Segment seg;
    seg.samples = Matrix(40, 400, 0.0);
    CHECK(fx.extract(seg).values.size() == 40 * 5 * 7);
}

TEST_CASE("arc curve-length mode is available behind the option") {
    FeatureOptions opts;
    opts.curve_mode = CurveLengthMode::Arc;
    const std::vector<double> x{0, 1, 0};
    CHECK(compute_feature(FeatureKind::CurveLength, x, CurveLengthMode::Arc) ==
          doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(compute_feature(FeatureKind::CurveLength, x) == doctest::Approx(2.0));
}

TEST_CASE("feature dump CSV has the documented header and row count") {
    namespace fs = std::filesystem;
    FeaturizedRecording rec;
    rec.subject_id = "D01";
    rec.channels = 2;
    rec.band_names = {"Alpha", "Beta"};
    TrialFeatures trial;
    trial.trial_id = 7;
    trial.label = Label::NeedToSearch;
    trial.segments.emplace_back(2, 2);
    trial.segments.emplace_back(2, 2);
    rec.trials.push_back(trial);

    const fs::path path = fs::temp_directory_path() / "inpredict_features_dump.csv";
    write_features_csv(rec, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "trial_id,segment_index,channel,band,feature,value");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) rows += !line.empty();
    CHECK(rows == 2 * 2 * 2 * 7);  // segments x channels x bands x features
    fs::remove(path);
}

TEST_CASE("featurize_recording walks every trial and segment") {
    Recording rec;
    rec.subject_id = "F01";
    rec.sampling_rate_hz = 500.0;
    rec.channel_names = {"c1", "c2"};
    Rng rng(3);
    for (int t = 0; t < 3; ++t) {
        Trial trial;
        trial.trial_id = t;
        trial.label = Label::NoNeedToSearch;
        for (int s = 0; s < 4 + t; ++s) {
            Segment seg;
            seg.kind = s == 3 + t ? SegmentKind::Response : SegmentKind::Word;
            seg.samples = Matrix(2, 400);
            for (double& v : seg.samples.data()) v = rng.normal();
            trial.segments.push_back(std::move(seg));
        }
        rec.trials.push_back(std::move(trial));
    }
    const FeatureExtractor fx(500.0);
    const FeaturizedRecording out = featurize_recording(rec, fx);
    CHECK(out.subject_id == "F01");
    CHECK(out.channels == 2);
    REQUIRE(out.trials.size() == 3);
    CHECK(out.trials[2].segments.size() == 6);
    CHECK(out.band_names.size() == 5);
}
