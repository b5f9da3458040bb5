#include "inpredict/results_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace inpredict {

namespace {

using nlohmann::json;

json metrics_to_json(const FoldMetrics& m) {
    return json{{"accuracy", m.accuracy},
                {"precision_macro", m.precision_macro},
                {"recall_macro", m.recall_macro}};
}

FoldMetrics metrics_from_json(const json& j) {
    FoldMetrics m;
    m.accuracy = j.at("accuracy").get<double>();
    m.precision_macro = j.at("precision_macro").get<double>();
    m.recall_macro = j.at("recall_macro").get<double>();
    return m;
}

}  // namespace

void append_results_jsonl(const AblationRun& run, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot write results to " + path.string());
    for (const AblationCell& cell : run.cells) {
        json j{{"condition", to_string(cell.condition)},
               {"model", to_string(cell.model)},
               {"window", cell.window},
               {"mask", cell.mask.to_string()}};
        if (cell.failed()) {
            j["error"] = cell.error;
        } else {
            json folds = json::array();
            for (const FoldMetrics& f : cell.cv.folds) folds.push_back(metrics_to_json(f));
            j["fold_metrics"] = std::move(folds);
            j["mean"] = metrics_to_json(cell.cv.mean);
            j["sd"] = metrics_to_json(cell.cv.sd);
            j["p_value"] = cell.p_value;
            if (!cell.per_subject.empty()) {
                json subjects = json::array();
                for (const SubjectCv& s : cell.per_subject) {
                    subjects.push_back({{"subject_id", s.subject_id},
                                        {"mean", metrics_to_json(s.cv.mean)},
                                        {"sd", metrics_to_json(s.cv.sd)}});
                }
                j["per_subject"] = std::move(subjects);
            }
        }
        out << j.dump() << "\n";
    }
}

std::vector<AblationCell> load_results_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file " + path.string());

    std::vector<AblationCell> cells;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            AblationCell cell;
            cell.condition = condition_from_string(j.at("condition").get<std::string>());
            cell.model = model_family_from_string(j.at("model").get<std::string>());
            cell.window = j.at("window").get<int>();
            cell.mask = FeatureMask::from_string(j.at("mask").get<std::string>());
            if (j.contains("error")) {
                cell.error = j.at("error").get<std::string>();
            } else {
                std::vector<FoldMetrics> folds;
                for (const auto& f : j.at("fold_metrics")) folds.push_back(metrics_from_json(f));
                cell.cv.folds = std::move(folds);
                cell.cv.mean = metrics_from_json(j.at("mean"));
                cell.cv.sd = metrics_from_json(j.at("sd"));
                cell.p_value = j.at("p_value").get<double>();
            }
            cells.push_back(std::move(cell));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return cells;
}

}  // namespace inpredict
