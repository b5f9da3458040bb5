// Microbenchmarks for the pipeline hot spots: band filtering, feature
// extraction, classifier training and the Wilcoxon test.

#include <benchmark/benchmark.h>

#include "inpredict/dataset.hpp"
#include "inpredict/eval.hpp"
#include "inpredict/features.hpp"
#include "inpredict/filter.hpp"
#include "inpredict/models.hpp"
#include "inpredict/rng.hpp"
#include "inpredict/synth.hpp"

using namespace inpredict;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal() * 10.0;
    return x;
}

std::vector<Sample> random_samples(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Sample> out;
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        s.label = i % 2 ? Label::NeedToSearch : Label::NoNeedToSearch;
        s.trial_id = int(i);
        s.vector.resize(d);
        for (double& v : s.vector) {
            v = rng.normal() + (s.label == Label::NeedToSearch ? 0.3 : 0.0);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

static void BM_DesignBandpass(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(design_butterworth_bandpass(0.5, 50.0, 6, 500.0));
    }
}
BENCHMARK(BM_DesignBandpass);

static void BM_ZeroPhaseSegment(benchmark::State& state) {
    const auto filter = design_butterworth_bandpass(8.0, 12.0, 4, 500.0);
    const auto x = noise(std::size_t(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_zero_phase(filter, x));
    }
}
BENCHMARK(BM_ZeroPhaseSegment)->Arg(400)->Arg(4000);

static void BM_ExtractSegment(benchmark::State& state) {
    const FeatureExtractor fx(500.0);
    Segment seg;
    seg.samples = Matrix(std::size_t(state.range(0)), 400);
    Rng rng(2);
    for (double& v : seg.samples.data()) v = rng.normal() * 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fx.extract(seg));
    }
}
BENCHMARK(BM_ExtractSegment)->Arg(8)->Arg(40);

static void BM_ForestFit(benchmark::State& state) {
    const auto samples = random_samples(96, std::size_t(state.range(0)), 3);
    ModelSpec spec;
    spec.family = ModelFamily::RandomForest;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(spec, samples));
    }
}
BENCHMARK(BM_ForestFit)->Arg(80)->Arg(1200)->Unit(benchmark::kMillisecond);

static void BM_AdaBoostFit(benchmark::State& state) {
    const auto samples = random_samples(96, std::size_t(state.range(0)), 4);
    ModelSpec spec;
    spec.family = ModelFamily::AdaBoost;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(spec, samples));
    }
}
BENCHMARK(BM_AdaBoostFit)->Arg(80)->Arg(1200)->Unit(benchmark::kMillisecond);

static void BM_SvmFit(benchmark::State& state) {
    const auto samples = random_samples(96, std::size_t(state.range(0)), 5);
    ModelSpec spec;
    spec.family = ModelFamily::Svm;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(spec, samples));
    }
}
BENCHMARK(BM_SvmFit)->Arg(80)->Arg(1200)->Unit(benchmark::kMillisecond);

static void BM_WilcoxonExact25(benchmark::State& state) {
    Rng rng(6);
    std::vector<double> a(25), b(25);
    for (std::size_t i = 0; i < 25; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(wilcoxon_signed_rank(a, b));
    }
}
BENCHMARK(BM_WilcoxonExact25);

static void BM_GenerateRecording(benchmark::State& state) {
    SynthProfile profile;
    profile.n_trials = 10;
    profile.channels = 8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_recording(profile, 0));
    }
}
BENCHMARK(BM_GenerateRecording)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
