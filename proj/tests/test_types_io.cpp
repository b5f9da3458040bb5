#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "inpredict/io.hpp"
#include "inpredict/rng.hpp"
#include "inpredict/types.hpp"

using namespace inpredict;
namespace fs = std::filesystem;

namespace {

Recording make_recording(std::size_t channels, double rate, int n_trials,
                         int segments_per_trial, std::uint64_t seed = 1) {
    Recording rec;
    rec.subject_id = "T01";
    rec.sampling_rate_hz = rate;
    for (std::size_t c = 0; c < channels; ++c) {
        rec.channel_names.push_back("ch" + std::to_string(c + 1));
    }
    Rng rng(seed);
    const std::size_t len = samples_per_segment(rate);
    for (int t = 0; t < n_trials; ++t) {
        Trial trial;
        trial.trial_id = t + 1;
        trial.question_id = 100 + t;
        trial.label = t % 3 == 0 ? Label::NeedToSearch : Label::NoNeedToSearch;
        for (int s = 0; s < segments_per_trial; ++s) {
            Segment seg;
            seg.kind = s == segments_per_trial - 1 ? SegmentKind::Response : SegmentKind::Word;
            seg.samples = Matrix(channels, len);
            for (double& v : seg.samples.data()) v = rng.normal() * 12.5;
            trial.segments.push_back(std::move(seg));
        }
        rec.trials.push_back(std::move(trial));
    }
    return rec;
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("inpredict_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("canonical bands and feature kinds") {
    const auto& bands = canonical_bands();
    REQUIRE(bands.size() == 5);
    CHECK(bands[0].name == "Delta");
    CHECK(bands[0].low_hz == 1.0);
    CHECK(bands[0].high_hz == 4.0);
    CHECK(bands[2].name == "Alpha");
    CHECK(bands[2].low_hz == 8.0);
    CHECK(bands[2].high_hz == 12.0);
    CHECK(bands[4].name == "Gamma");
    CHECK(bands[4].high_hz == 40.0);

    REQUIRE(all_feature_kinds().size() == 7);
    CHECK(feature_kind_short_name(FeatureKind::Mean) == "Mean");
    CHECK(feature_kind_short_name(FeatureKind::StdDev) == "SD");
    CHECK(feature_kind_short_name(FeatureKind::AvgNonlinearEnergy) == "AvEn");
    CHECK(feature_kind_from_short_name("Curve") == FeatureKind::CurveLength);
    CHECK_THROWS_AS(feature_kind_from_short_name("Bogus"), std::invalid_argument);
    CHECK_THROWS_AS(label_from_string("maybe"), std::invalid_argument);
}

TEST_CASE("validate_recording accepts a well-formed recording") {
    const Recording rec = make_recording(40, 500.0, 3, 5);
    const auto violations = validate_recording(rec);
    CHECK(violations.empty());
    CHECK(is_valid(violations));
    CHECK(rec.segment_samples() == 400);
}

TEST_CASE("validate_recording reports segment length violations") {
    Recording rec = make_recording(4, 500.0, 1, 5);
    rec.trials[0].segments[2].samples = Matrix(4, 399);
    const auto violations = validate_recording(rec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].message.find("segment length") != std::string::npos);
    CHECK_FALSE(is_valid(violations));
}

TEST_CASE("validate_recording reports trial segment-count violations") {
    Recording rec = make_recording(2, 500.0, 1, 4);
    // grow to 17 word segments + response
    Trial& trial = rec.trials[0];
    Segment word = trial.segments[0];
    while (trial.segments.size() < 17) {
        trial.segments.insert(trial.segments.begin(), word);
    }
    auto violations = validate_recording(rec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].message.find("segment count") != std::string::npos);

    Recording rec3 = make_recording(2, 500.0, 1, 3);
    CHECK_FALSE(is_valid(validate_recording(rec3)));
}

TEST_CASE("validate_recording flags structure and data errors") {
    SUBCASE("non-finite samples") {
        Recording rec = make_recording(2, 500.0, 1, 4);
        rec.trials[0].segments[1].samples.at(0, 7) = std::nan("");
        CHECK_FALSE(is_valid(validate_recording(rec)));
    }
    SUBCASE("response not last") {
        Recording rec = make_recording(2, 500.0, 1, 4);
        rec.trials[0].segments[0].kind = SegmentKind::Response;
        rec.trials[0].segments[3].kind = SegmentKind::Word;
        CHECK_FALSE(is_valid(validate_recording(rec)));
    }
    SUBCASE("two responses") {
        Recording rec = make_recording(2, 500.0, 1, 4);
        rec.trials[0].segments[2].kind = SegmentKind::Response;
        CHECK_FALSE(is_valid(validate_recording(rec)));
    }
    SUBCASE("duplicate channel names") {
        Recording rec = make_recording(2, 500.0, 1, 4);
        rec.channel_names[1] = rec.channel_names[0];
        CHECK_FALSE(is_valid(validate_recording(rec)));
    }
    SUBCASE("channel mismatch") {
        Recording rec = make_recording(3, 500.0, 1, 4);
        rec.trials[0].segments[0].samples = Matrix(2, 400);
        CHECK_FALSE(is_valid(validate_recording(rec)));
    }
}

TEST_CASE("non-canonical rate is a warning, not an error") {
    const Recording rec = make_recording(2, 250.0, 1, 4);
    const auto violations = validate_recording(rec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].severity == Violation::Severity::Warning);
    CHECK(is_valid(violations));
    CHECK(rec.segment_samples() == 200);  // derived from rate, not hardcoded
}

TEST_CASE("recording bundle round-trip is exact") {
    const fs::path dir = temp_dir("roundtrip");
    const Recording rec = make_recording(3, 250.0, 4, 6, 99);
    save_recording(rec, dir / "a");
    const Recording loaded = load_recording(dir / "a");

    CHECK(loaded.subject_id == rec.subject_id);
    CHECK(loaded.sampling_rate_hz == rec.sampling_rate_hz);
    CHECK(loaded.channel_names == rec.channel_names);
    REQUIRE(loaded.trials.size() == rec.trials.size());
    for (std::size_t t = 0; t < rec.trials.size(); ++t) {
        CHECK(loaded.trials[t].trial_id == rec.trials[t].trial_id);
        CHECK(loaded.trials[t].label == rec.trials[t].label);
        REQUIRE(loaded.trials[t].segments.size() == rec.trials[t].segments.size());
        for (std::size_t s = 0; s < rec.trials[t].segments.size(); ++s) {
            CHECK(loaded.trials[t].segments[s].kind == rec.trials[t].segments[s].kind);
            CHECK(loaded.trials[t].segments[s].samples == rec.trials[t].segments[s].samples);
        }
    }

    // save(load(x)) == load(save(x)): a second hop changes nothing
    save_recording(loaded, dir / "b");
    const Recording twice = load_recording(dir / "b");
    REQUIRE(twice.trials.size() == loaded.trials.size());
    for (std::size_t t = 0; t < twice.trials.size(); ++t) {
        CHECK(twice.trials[t].segments[0].samples == loaded.trials[t].segments[0].samples);
    }
    fs::remove_all(dir);
}

TEST_CASE("load_recording rejects schema violations") {
    const fs::path dir = temp_dir("badload");
    Recording rec = make_recording(3, 500.0, 1, 4);
    save_recording(rec, dir / "bundle");

    SUBCASE("segment with wrong channel count") {
        // manifest declares 3 channels; rewrite a trial whose segment has 2 rows
        Recording bad = make_recording(2, 500.0, 1, 4);
        std::ifstream in(dir / "bundle" / "trials.jsonl");
        std::string line;
        std::getline(in, line);
        in.close();
        // hand-craft: drop one channel row by saving the 2-channel recording's
        // trials under the 3-channel manifest
        save_recording(bad, dir / "mixed");
        fs::copy_file(dir / "bundle" / "manifest.json", dir / "mixed" / "manifest.json",
                      fs::copy_options::overwrite_existing);
        CHECK_THROWS_WITH_AS(load_recording(dir / "mixed"),
                             doctest::Contains("manifest declares"), std::runtime_error);
    }
    SUBCASE("unknown label names the line") {
        std::ifstream in(dir / "bundle" / "trials.jsonl");
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        in.close();
        auto pos = content.find("NeedToSearch");
        content.replace(pos, 12, "WontTellYou1");
        std::ofstream out(dir / "bundle" / "trials.jsonl");
        out << content;
        out.close();
        CHECK_THROWS_WITH_AS(load_recording(dir / "bundle"), doctest::Contains(":1:"),
                             std::runtime_error);
    }
    SUBCASE("missing manifest") {
        CHECK_THROWS_AS(load_recording(dir / "nowhere"), std::runtime_error);
    }
    fs::remove_all(dir);
}
