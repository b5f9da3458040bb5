#include <doctest.h>

#include <cmath>

#include "inpredict/dataset.hpp"
#include "inpredict/eval.hpp"
#include "inpredict/features.hpp"
#include "inpredict/preprocess.hpp"
#include "inpredict/synth.hpp"
#include "oracles.hpp"

using namespace inpredict;

namespace {

SynthProfile small_profile() {
    SynthProfile p;
    p.n_subjects = 2;
    p.n_trials = 20;
    p.channels = 4;
    p.need_fraction = 0.25;
    p.seed = 42;
    return p;
}

}  // namespace

TEST_CASE("profile validation") {
    SynthProfile p = small_profile();
    CHECK_NOTHROW(p.validate());

    SUBCASE("need_fraction bounds") {
        p.need_fraction = 0.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p.need_fraction = 1.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p.need_fraction = 0.001;  // rounds to zero positives over 20 trials
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("word range keeps segments within [4, 16]") {
        p.min_words = 2;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p.min_words = 3;
        p.max_words = 16;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("multipliers must stay positive") {
        p.effect_multipliers[2] = 0.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
}

TEST_CASE("generation is deterministic per (profile, subject)") {
    const SynthProfile p = small_profile();
    const Recording a = generate_recording(p, 1);
    const Recording b = generate_recording(p, 1);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t t = 0; t < a.trials.size(); ++t) {
        CHECK(a.trials[t].label == b.trials[t].label);
        REQUIRE(a.trials[t].segments.size() == b.trials[t].segments.size());
        for (std::size_t s = 0; s < a.trials[t].segments.size(); ++s) {
            CHECK(a.trials[t].segments[s].samples == b.trials[t].segments[s].samples);
        }
    }
    // different subject index -> different data
    const Recording c = generate_recording(p, 0);
    CHECK(c.trials[0].segments[0].samples != a.trials[0].segments[0].samples);
}

TEST_CASE("generated recordings pass validation with exact label counts") {
    SynthProfile p = small_profile();
    p.n_subjects = 3;
    const auto cohort = generate_cohort(p);
    REQUIRE(cohort.size() == 3);
    for (const Recording& rec : cohort) {
        CHECK(is_valid(validate_recording(rec)));
        CHECK(rec.channel_count() == 4);
        std::size_t need = 0;
        for (const Trial& t : rec.trials) need += t.label == Label::NeedToSearch;
        CHECK(need == 5);  // round(20 * 0.25)
        for (const Trial& t : rec.trials) {
            CHECK(t.segments.size() >= 4);
            CHECK(t.segments.size() <= 16);
            CHECK(t.segments.back().kind == SegmentKind::Response);
        }
    }
}

TEST_CASE("background noise band power decreases Delta to Gamma") {
    SynthProfile p = small_profile();
    p.osc_amplitudes_uv = {0, 0, 0, 0, 0};  // pure 1/f background
    p.n_trials = 4;
    p.min_words = 15;
    p.max_words = 15;  // long trials for spectral resolution
    const Recording rec = generate_recording(p, 0);

    std::vector<double> series;
    for (const Segment& seg : rec.trials[0].segments) {
        auto row = seg.samples.row(0);
        series.insert(series.end(), row.begin(), row.end());
    }
    const auto& bands = canonical_bands();
    std::vector<double> power;
    for (const BandSpec& band : bands) {
        // normalize by bandwidth so the 1/f trend is visible per-Hz
        power.push_back(oracles::band_power(series, band.low_hz, band.high_hz, p.rate_hz) /
                        (band.high_hz - band.low_hz));
    }
    for (std::size_t b = 1; b < power.size(); ++b) {
        CHECK(power[b] < power[b - 1]);
    }
}

TEST_CASE("planted alpha effect raises response-segment alpha energy") {
    SynthProfile p = small_profile();
    p.n_trials = 30;
    p.effect_multipliers[2] = 3.0;  // alpha, exaggerated for a direct check
    p.subject_jitter = false;
    p.osc_amplitude_jitter = 0.0;
    const Recording rec = generate_recording(p, 0);

    const FeatureExtractor fx(p.rate_hz);
    double need_energy = 0.0, noneed_energy = 0.0;
    std::size_t need_n = 0, noneed_n = 0;
    for (const Trial& trial : rec.trials) {
        const Segment& response = trial.segments.back();
        const auto alpha = fx.band_decompose(response.samples.row(0), 2);
        const double sd = feat_std(alpha);
        if (trial.label == Label::NeedToSearch) {
            need_energy += sd;
            ++need_n;
        } else {
            noneed_energy += sd;
            ++noneed_n;
        }
    }
    CHECK(need_energy / double(need_n) > 2.0 * noneed_energy / double(noneed_n));
}

TEST_CASE("affect_last_word extends the effect to the penultimate segment") {
    SynthProfile p = small_profile();
    p.n_trials = 30;
    p.effect_multipliers[2] = 3.0;
    p.affect_last_word = true;
    p.subject_jitter = false;
    p.osc_amplitude_jitter = 0.0;
    const Recording rec = generate_recording(p, 0);

    const FeatureExtractor fx(p.rate_hz);
    double need_sd = 0.0, noneed_sd = 0.0;
    std::size_t need_n = 0, noneed_n = 0;
    for (const Trial& trial : rec.trials) {
        const Segment& last_word = trial.segments[trial.segments.size() - 2];
        const double sd = feat_std(fx.band_decompose(last_word.samples.row(1), 2));
        if (trial.label == Label::NeedToSearch) {
            need_sd += sd;
            ++need_n;
        } else {
            noneed_sd += sd;
            ++noneed_n;
        }
    }
    CHECK(need_sd / double(need_n) > 2.0 * noneed_sd / double(noneed_n));
}

TEST_CASE("single-subject cohort degenerates cleanly") {
    SynthProfile p = small_profile();
    p.n_subjects = 1;
    const auto cohort = generate_cohort(p);
    REQUIRE(cohort.size() == 1);
    CHECK(cohort.front().subject_id == "S01");
}

TEST_CASE("a planted effect is learnable through the full pipeline") {
    SynthProfile p;
    p.n_subjects = 2;
    p.n_trials = 40;
    p.channels = 6;
    p.need_fraction = 0.3;
    p.effect_multipliers[2] = 1.8;  // alpha
    p.subject_jitter = false;
    p.seed = 11;

    std::vector<FeaturizedRecording> featurized;
    for (const Recording& rec : generate_cohort(p)) {
        const Recording clean = preprocess_recording(rec, {});
        const FeatureExtractor fx(clean.sampling_rate_hz);
        featurized.push_back(featurize_recording(clean, fx));
    }

    const auto assembled =
        assemble(featurized, Condition::Generalised, 2,
                 FeatureMask::from_string("Mean-SD-Curve"), 17);
    ModelSpec spec;
    spec.family = ModelFamily::RandomForest;
    spec.n_trees = 50;
    spec.seed = 23;
    const CvResult cv = cross_validate(spec, assembled.datasets.front(), 5, 29);
    CHECK(cv.mean.accuracy > 0.6);
}
