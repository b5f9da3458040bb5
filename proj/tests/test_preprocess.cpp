#include <doctest.h>

#include <cmath>

#include "inpredict/preprocess.hpp"
#include "inpredict/rng.hpp"
#include "oracles.hpp"

using namespace inpredict;

namespace {

Matrix random_matrix(std::size_t channels, std::size_t len, std::uint64_t seed) {
    Matrix m(channels, len);
    Rng rng(seed);
    for (double& v : m.data()) v = rng.normal() * 10.0;
    return m;
}

Trial make_trial(std::size_t channels, int n_segments, double rate, std::uint64_t seed) {
    Trial trial;
    trial.trial_id = 1;
    trial.label = Label::NeedToSearch;
    Rng rng(seed);
    const std::size_t len = samples_per_segment(rate);
    for (int s = 0; s < n_segments; ++s) {
        Segment seg;
        seg.kind = s == n_segments - 1 ? SegmentKind::Response : SegmentKind::Word;
        seg.samples = Matrix(channels, len);
        for (double& v : seg.samples.data()) v = rng.normal() * 10.0 + 3.0;
        trial.segments.push_back(std::move(seg));
    }
    return trial;
}

}  // namespace

TEST_CASE("average re-reference subtracts the per-sample channel mean") {
    Matrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    m.at(1, 0) = 3;
    m.at(1, 1) = 3;
    const Matrix out = average_rereference(m);
    CHECK(out.at(0, 0) == doctest::Approx(-1.0));
    CHECK(out.at(0, 1) == doctest::Approx(-1.0));
    CHECK(out.at(1, 0) == doctest::Approx(1.0));
    CHECK(out.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("re-referencing is a projection") {
    const Matrix m = random_matrix(40, 400, 5);
    const Matrix once = average_rereference(m);
    const Matrix twice = average_rereference(once);
    for (std::size_t t = 0; t < once.cols(); ++t) {
        double mean = 0.0;
        for (std::size_t c = 0; c < once.rows(); ++c) mean += once.at(c, t);
        CHECK(std::abs(mean / double(once.rows())) < 1e-9);
    }
    for (std::size_t i = 0; i < once.data().size(); ++i) {
        CHECK(twice.data()[i] == doctest::Approx(once.data()[i]).epsilon(1e-12));
    }
}

TEST_CASE("re-reference of 100 random matrices zeroes every column mean") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Matrix out = average_rereference(random_matrix(40, 400, seed));
        for (std::size_t t = 0; t < out.cols(); ++t) {
            double mean = 0.0;
            for (std::size_t c = 0; c < out.rows(); ++c) mean += out.at(c, t);
            CHECK(std::abs(mean / 40.0) < 1e-9);
        }
    }
}

TEST_CASE("single-channel re-referencing is rejected") {
    CHECK_THROWS_AS(average_rereference(Matrix(1, 100, 1.0)), std::invalid_argument);
}

TEST_CASE("preprocess_trial maps zero signals to zero signals") {
    Trial trial = make_trial(4, 5, 500.0, 2);
    for (Segment& seg : trial.segments) {
        for (double& v : seg.samples.data()) v = 0.0;
    }
    const auto filter = design_butterworth_bandpass(0.5, 50.0, 6, 500.0);
    const Trial out = preprocess_trial(trial, filter);
    for (const Segment& seg : out.segments) {
        for (double v : seg.samples.data()) CHECK(v == doctest::Approx(0.0));
    }
}

TEST_CASE("preprocessed trials satisfy both chain properties at once") {
    const Trial trial = make_trial(8, 6, 500.0, 3);
    const auto filter = design_butterworth_bandpass(0.5, 50.0, 6, 500.0);
    const Trial out = preprocess_trial(trial, filter);

    REQUIRE(out.segments.size() == trial.segments.size());
    // property 1: cross-channel mean is zero at every sample
    for (const Segment& seg : out.segments) {
        for (std::size_t t = 0; t < seg.samples.cols(); ++t) {
            double mean = 0.0;
            for (std::size_t c = 0; c < seg.samples.rows(); ++c) mean += seg.samples.at(c, t);
            CHECK(std::abs(mean / double(seg.samples.rows())) < 1e-9);
        }
    }
    // property 2: out-of-band content went away (DC was injected above).
    // Residual low-frequency noise power limits how small the sample mean
    // of a finite-length filtered stretch can get, so compare to before.
    std::vector<double> before, after;
    for (const Segment& seg : trial.segments) {
        auto row = seg.samples.row(0);
        before.insert(before.end(), row.begin(), row.end());
    }
    for (const Segment& seg : out.segments) {
        auto row = seg.samples.row(0);
        after.insert(after.end(), row.begin(), row.end());
    }
    const double dc_before = std::abs(oracles::naive_mean(before));
    const double dc_after = std::abs(oracles::naive_mean(after));
    CHECK(dc_before > 1.0);  // the +3 uV offset
    CHECK(dc_after < 0.3 * dc_before);
    CHECK(oracles::dft_amplitude(after, 60.0, 500.0) <
          0.5 * oracles::dft_amplitude(before, 60.0, 500.0) + 1e-9);
}

TEST_CASE("filter and re-reference commute") {
    const Trial trial = make_trial(6, 5, 500.0, 7);
    const auto filter = design_butterworth_bandpass(0.5, 50.0, 6, 500.0);

    const Trial standard = preprocess_trial(trial, filter);

    // swap: re-reference the concatenated signal first, then filter
    const std::size_t channels = 6;
    const std::size_t len = trial.segments[0].samples.cols();
    Matrix continuous(channels, len * trial.segments.size());
    for (std::size_t s = 0; s < trial.segments.size(); ++s) {
        for (std::size_t c = 0; c < channels; ++c) {
            auto row = trial.segments[s].samples.row(c);
            std::copy(row.begin(), row.end(), continuous.row(c).begin() + long(s * len));
        }
    }
    Matrix swapped = average_rereference(continuous);
    for (std::size_t c = 0; c < channels; ++c) {
        const auto filtered = apply_zero_phase(filter, swapped.row(c));
        std::copy(filtered.begin(), filtered.end(), swapped.row(c).begin());
    }

    double scale = 0.0;
    for (double v : swapped.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t s = 0; s < standard.segments.size(); ++s) {
        for (std::size_t c = 0; c < channels; ++c) {
            for (std::size_t t = 0; t < len; ++t) {
                const double a = standard.segments[s].samples.at(c, t);
                const double b = swapped.at(c, s * len + t);
                CHECK(std::abs(a - b) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("preprocess_recording filters every trial") {
    Recording rec;
    rec.subject_id = "P";
    rec.sampling_rate_hz = 500.0;
    rec.channel_names = {"a", "b", "c"};
    rec.trials = {make_trial(3, 4, 500.0, 11), make_trial(3, 7, 500.0, 12)};
    const Recording out = preprocess_recording(rec, {});
    REQUIRE(out.trials.size() == 2);
    CHECK(out.trials[1].segments.size() == 7);
    // the +3 uV offset is mostly gone (finite-window noise floor remains)
    std::vector<double> series;
    for (const Segment& seg : out.trials[0].segments) {
        auto row = seg.samples.row(1);
        series.insert(series.end(), row.begin(), row.end());
    }
    CHECK(std::abs(oracles::naive_mean(series)) < 1.0);
}
