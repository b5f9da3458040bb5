#include "inpredict/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace inpredict {

namespace {

using nlohmann::json;

json segment_to_json(const Segment& seg) {
    json rows = json::array();
    for (std::size_t c = 0; c < seg.samples.rows(); ++c) {
        json row = json::array();
        for (double v : seg.samples.row(c)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    return json{{"kind", to_string(seg.kind)}, {"samples", std::move(rows)}};
}

Segment segment_from_json(const json& j, std::size_t want_channels) {
    Segment seg;
    seg.kind = segment_kind_from_string(j.at("kind").get<std::string>());
    const auto& rows = j.at("samples");
    if (!rows.is_array() || rows.empty()) {
        throw std::runtime_error("segment samples must be a non-empty array");
    }
    if (rows.size() != want_channels) {
        throw std::runtime_error("segment has " + std::to_string(rows.size()) +
                                 " channel rows but manifest declares " +
                                 std::to_string(want_channels));
    }
    const std::size_t cols = rows[0].size();
    seg.samples = Matrix(rows.size(), cols);
    for (std::size_t c = 0; c < rows.size(); ++c) {
        if (rows[c].size() != cols) {
            throw std::runtime_error("ragged segment rows");
        }
        for (std::size_t t = 0; t < cols; ++t) {
            const double v = rows[c][t].get<double>();
            if (!std::isfinite(v)) {
                throw std::runtime_error("non-finite sample value");
            }
            seg.samples.at(c, t) = v;
        }
    }
    return seg;
}

}  // namespace

void save_recording(const Recording& rec, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    json manifest{{"subject_id", rec.subject_id},
                  {"sampling_rate_hz", rec.sampling_rate_hz},
                  {"channel_names", rec.channel_names}};
    std::ofstream mf(dir / "manifest.json");
    if (!mf) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    mf << manifest.dump(2) << "\n";

    std::ofstream tf(dir / "trials.jsonl");
    if (!tf) throw std::runtime_error("cannot write " + (dir / "trials.jsonl").string());
    for (const auto& trial : rec.trials) {
        json j{{"trial_id", trial.trial_id},
               {"question_id", trial.question_id},
               {"label", to_string(trial.label)}};
        json segs = json::array();
        for (const auto& seg : trial.segments) segs.push_back(segment_to_json(seg));
        j["segments"] = std::move(segs);
        tf << j.dump() << "\n";
    }
}

Recording load_recording(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream mf(manifest_path);
    if (!mf) throw std::runtime_error("cannot open " + manifest_path.string());

    Recording rec;
    try {
        json manifest = json::parse(mf);
        rec.subject_id = manifest.at("subject_id").get<std::string>();
        rec.sampling_rate_hz = manifest.at("sampling_rate_hz").get<double>();
        rec.channel_names = manifest.at("channel_names").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed manifest " + manifest_path.string() + ": " +
                                 e.what());
    }
    if (rec.channel_names.empty() || !(rec.sampling_rate_hz > 0.0)) {
        throw std::runtime_error("malformed manifest " + manifest_path.string() +
                                 ": needs positive rate and at least one channel");
    }

    const auto trials_path = dir / "trials.jsonl";
    std::ifstream tf(trials_path);
    if (!tf) throw std::runtime_error("cannot open " + trials_path.string());

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(tf, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            Trial trial;
            trial.trial_id = j.at("trial_id").get<int>();
            trial.question_id = j.value("question_id", 0);
            trial.label = label_from_string(j.at("label").get<std::string>());
            for (const auto& js : j.at("segments")) {
                trial.segments.push_back(segment_from_json(js, rec.channel_names.size()));
            }
            rec.trials.push_back(std::move(trial));
        } catch (const std::exception& e) {
            throw std::runtime_error(trials_path.string() + ":" + std::to_string(line_no) +
                                     ": " + e.what());
        }
    }
    return rec;
}

}  // namespace inpredict
