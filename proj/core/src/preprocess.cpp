#include "inpredict/preprocess.hpp"

#include <stdexcept>

#include "inpredict/thread_pool.hpp"

namespace inpredict {

Matrix average_rereference(const Matrix& samples) {
    if (samples.rows() < 2) {
        throw std::invalid_argument(
            "average re-referencing needs at least 2 channels (would zero the data)");
    }
    Matrix out(samples.rows(), samples.cols());
    for (std::size_t t = 0; t < samples.cols(); ++t) {
        double mean = 0.0;
        for (std::size_t c = 0; c < samples.rows(); ++c) mean += samples.at(c, t);
        mean /= double(samples.rows());
        for (std::size_t c = 0; c < samples.rows(); ++c) {
            out.at(c, t) = samples.at(c, t) - mean;
        }
    }
    return out;
}

Trial preprocess_trial(const Trial& trial, const FilterCoefficients& filter) {
    if (trial.segments.empty()) return trial;

    const std::size_t channels = trial.segments.front().samples.rows();
    std::size_t total = 0;
    for (const auto& seg : trial.segments) total += seg.samples.cols();

    Matrix continuous(channels, total);
    std::size_t offset = 0;
    for (const auto& seg : trial.segments) {
        for (std::size_t c = 0; c < channels; ++c) {
            auto src = seg.samples.row(c);
            std::copy(src.begin(), src.end(), continuous.row(c).begin() + offset);
        }
        offset += seg.samples.cols();
    }

    for (std::size_t c = 0; c < channels; ++c) {
        auto filtered = apply_zero_phase(filter, continuous.row(c));
        std::copy(filtered.begin(), filtered.end(), continuous.row(c).begin());
    }
    continuous = average_rereference(continuous);

    Trial out = trial;
    offset = 0;
    for (auto& seg : out.segments) {
        const std::size_t len = seg.samples.cols();
        for (std::size_t c = 0; c < channels; ++c) {
            auto dst = seg.samples.row(c);
            auto src = continuous.row(c);
            std::copy(src.begin() + offset, src.begin() + offset + len, dst.begin());
        }
        offset += len;
    }
    return out;
}

Recording preprocess_recording(const Recording& rec, const PreprocessOptions& opts) {
    const auto filter =
        design_butterworth_bandpass(opts.low_hz, opts.high_hz, opts.order, rec.sampling_rate_hz);
    Recording out = rec;
    parallel_for(rec.trials.size(), opts.jobs, [&](std::size_t i) {
        out.trials[i] = preprocess_trial(rec.trials[i], filter);
    });
    return out;
}

}  // namespace inpredict
