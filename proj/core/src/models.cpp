#include "inpredict/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "inpredict/rng.hpp"

namespace inpredict {

std::string to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::RandomForest: return "RandomForest";
        case ModelFamily::Svm: return "SVM";
        case ModelFamily::AdaBoost: return "AdaBoost";
        case ModelFamily::RandomBaseline: return "RandomBaseline";
    }
    return "?";
}

ModelFamily model_family_from_string(const std::string& s) {
    if (s == "RandomForest") return ModelFamily::RandomForest;
    if (s == "SVM" || s == "Svm") return ModelFamily::Svm;
    if (s == "AdaBoost") return ModelFamily::AdaBoost;
    if (s == "RandomBaseline" || s == "Baseline") return ModelFamily::RandomBaseline;
    throw std::invalid_argument("unknown model family: '" + s + "'");
}

void Standardizer::fit(const DataView& X) {
    mean.assign(X.d, 0.0);
    stddev.assign(X.d, 1.0);
    if (X.n == 0) return;
    for (std::size_t i = 0; i < X.n; ++i) {
        for (std::size_t f = 0; f < X.d; ++f) mean[f] += X.at(i, f);
    }
    for (double& m : mean) m /= double(X.n);
    std::vector<double> var(X.d, 0.0);
    for (std::size_t i = 0; i < X.n; ++i) {
        for (std::size_t f = 0; f < X.d; ++f) {
            const double d = X.at(i, f) - mean[f];
            var[f] += d * d;
        }
    }
    for (std::size_t f = 0; f < X.d; ++f) {
        const double sd = std::sqrt(var[f] / double(X.n));
        stddev[f] = sd > 1e-12 ? sd : 1.0;  // constant dimensions pass through
    }
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
    for (std::size_t f = 0; f < in.size(); ++f) {
        out[f] = (in[f] - mean[f]) / stddev[f];
    }
}

namespace {

std::int8_t to_sign(Label label) { return label == kPositiveLabel ? 1 : -1; }
Label from_sign(double s) { return s >= 0.0 ? kPositiveLabel : Label::NoNeedToSearch; }

ForestModel train_forest(const ModelSpec& spec, const ColumnMatrix& X,
                         std::span<const std::int8_t> y) {
    ForestModel model;
    model.trees.resize(std::size_t(spec.n_trees));
    TreeParams params;
    params.max_depth = spec.max_depth;
    params.min_samples_leaf = spec.min_samples_leaf;
    params.mtry = spec.mtry == 0 ? int(std::ceil(std::sqrt(double(X.d))))
                                 : (spec.mtry < 0 ? int(X.d) : spec.mtry);

    const auto sorted_columns = presort_columns(X);
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        Rng rng(derive_seed(spec.seed, "tree", t));
        std::vector<std::size_t> index(X.n);
        if (spec.bootstrap) {
            for (auto& i : index) i = rng.below(X.n);
        } else {
            std::iota(index.begin(), index.end(), std::size_t(0));
        }
        model.trees[t].fit(X, y, std::move(index), params, rng, sorted_columns);
    }
    return model;
}

BoostModel train_boost(const ModelSpec& spec, const ColumnMatrix& X,
                       std::span<const std::int8_t> y) {
    BoostModel model;
    const auto sorted_columns = presort_columns(X);
    std::vector<double> weights(X.n, 1.0 / double(X.n));
    std::vector<double> margin(X.n, 0.0);

    for (int round = 0; round < spec.boost_rounds; ++round) {
        const StumpFit fit = fit_stump(X, y, weights, sorted_columns);
        if (fit.weighted_error >= 0.5 - 1e-12) break;  // no stump beats chance
        const double alpha = stump_alpha(fit.weighted_error);

        model.stumps.push_back(fit.stump);
        model.alphas.push_back(alpha);
        model.round_errors.push_back(fit.weighted_error);

        double weight_sum = 0.0;
        std::size_t mistakes = 0;
        double exp_loss = 0.0;
        for (std::size_t i = 0; i < X.n; ++i) {
            const bool left = X.at(i, std::size_t(fit.stump.feature)) <= fit.stump.threshold;
            const std::int8_t h =
                std::int8_t(left ? fit.stump.polarity : -fit.stump.polarity);
            weights[i] *= std::exp(-alpha * double(y[i]) * double(h));
            weight_sum += weights[i];
            margin[i] += alpha * double(h);
            if (from_sign(margin[i]) != from_sign(double(y[i]))) ++mistakes;
            exp_loss += std::exp(-double(y[i]) * margin[i]);
        }
        for (double& w : weights) w /= weight_sum;
        model.staged_train_error.push_back(double(mistakes) / double(X.n));
        model.staged_exp_loss.push_back(exp_loss / double(X.n));
    }
    return model;
}

SvmModel train_svm(const ModelSpec& spec, const DataView& X,
                   std::span<const std::int8_t> y) {
    const double lambda = spec.svm_lambda;
    SvmModel model;
    // w is kept as scale * v so the per-step decay and the ball projection
    // are O(1); v only changes on margin violations.
    std::vector<double> v(X.d, 0.0);
    double scale = 1.0;
    double v_norm_sq = 0.0;
    double b = 0.0;
    const double radius_sq = 1.0 / lambda;

    std::vector<double> row_norm_sq(X.n, 0.0);
    for (std::size_t i = 0; i < X.n; ++i) {
        const auto row = X.row(i);
        for (double x : row) row_norm_sq[i] += x * x;
    }

    std::vector<double> best_w(X.d, 0.0);
    double best_b = 0.0;
    double best_obj = std::numeric_limits<double>::infinity();

    Rng rng(derive_seed(spec.seed, "svm"));
    std::vector<std::size_t> order(X.n);
    std::iota(order.begin(), order.end(), std::size_t(0));

    auto objective = [&](const std::vector<double>& wv, double bv) {
        double norm_sq = 0.0;
        for (double w : wv) norm_sq += w * w;
        double hinge = 0.0;
        for (std::size_t i = 0; i < X.n; ++i) {
            const auto row = X.row(i);
            double dot = bv;
            for (std::size_t f = 0; f < X.d; ++f) dot += wv[f] * row[f];
            hinge += std::max(0.0, 1.0 - double(y[i]) * dot);
        }
        return 0.5 * lambda * norm_sq + hinge / double(X.n);
    };

    std::uint64_t t = 0;
    for (int epoch = 0; epoch < spec.svm_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (lambda * double(t));
            const double decay = 1.0 - eta * lambda;  // == 1 - 1/t
            const auto row = X.row(i);
            const double* rp = row.data();

            double dot_v = 0.0;
            for (std::size_t f = 0; f < X.d; ++f) dot_v += v[f] * rp[f];
            const double yi = double(y[i]);
            const double margin = yi * (scale * dot_v + b);

            if (decay == 0.0) {  // t == 1 zeroes w
                std::fill(v.begin(), v.end(), 0.0);
                scale = 1.0;
                v_norm_sq = 0.0;
                dot_v = 0.0;
            } else {
                scale *= decay;
            }

            if (margin < 1.0) {
                const double step = eta * yi / scale;
                for (std::size_t f = 0; f < X.d; ++f) v[f] += step * rp[f];
                v_norm_sq += 2.0 * step * dot_v + step * step * row_norm_sq[i];
                b += eta * yi;
            }
            const double w_norm_sq = scale * scale * v_norm_sq;
            if (w_norm_sq > radius_sq) {
                scale *= std::sqrt(radius_sq / w_norm_sq);
            }
        }
        // fold the scale back in once per epoch to keep v well conditioned
        for (double& x : v) x *= scale;
        v_norm_sq *= scale * scale;
        scale = 1.0;

        const double obj = objective(v, b);
        if (obj < best_obj) {
            best_obj = obj;
            best_w = v;
            best_b = b;
        }
        model.epoch_objectives.push_back(best_obj);
    }

    model.weights = std::move(best_w);
    model.bias = best_b;
    return model;
}

}  // namespace

TrainedModel train(const ModelSpec& spec, const std::vector<Sample>& samples) {
    TrainedModel model;
    model.family_ = spec.family;
    model.spec_ = spec;

    if (samples.empty()) throw std::invalid_argument("cannot train on an empty sample set");
    model.dim_ = samples.front().vector.size();
    for (const Sample& s : samples) {
        if (s.vector.size() != model.dim_) {
            throw std::invalid_argument("inconsistent sample dimensionality");
        }
    }

    if (spec.family == ModelFamily::RandomBaseline) {
        model.standardizer_.mean.assign(model.dim_, 0.0);
        model.standardizer_.stddev.assign(model.dim_, 1.0);
        model.impl_ = BaselineModel{spec.seed, 0};
        return model;
    }

    if (model.dim_ == 0) throw std::invalid_argument("zero-dimensional feature vectors");
    if (samples.size() < 2) throw std::invalid_argument("need at least 2 training samples");

    std::vector<std::int8_t> y(samples.size());
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        y[i] = to_sign(samples[i].label);
        (y[i] > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("training set must contain both classes");
    }

    std::vector<double> raw(samples.size() * model.dim_);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::copy(samples[i].vector.begin(), samples[i].vector.end(),
                  raw.begin() + long(i * model.dim_));
    }
    DataView raw_view{raw.data(), samples.size(), model.dim_};
    model.standardizer_.fit(raw_view);

    std::vector<double> standardized(raw.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        model.standardizer_.apply(raw_view.row(i),
                                  {standardized.data() + i * model.dim_, model.dim_});
    }
    DataView X{standardized.data(), samples.size(), model.dim_};

    switch (spec.family) {
        case ModelFamily::RandomForest:
            model.impl_ = train_forest(spec, ColumnMatrix(X), y);
            break;
        case ModelFamily::AdaBoost:
            model.impl_ = train_boost(spec, ColumnMatrix(X), y);
            break;
        case ModelFamily::Svm: model.impl_ = train_svm(spec, X, y); break;
        case ModelFamily::RandomBaseline: break;  // handled above
    }
    return model;
}

Label TrainedModel::predict(std::span<const double> x) const {
    if (family_ == ModelFamily::RandomBaseline) {
        const BaselineModel& m = std::get<BaselineModel>(impl_);
        std::uint64_t state = m.seed + 0x9e3779b97f4a7c15ULL * (m.counter + 1);
        ++m.counter;
        return (splitmix64(state) & 1u) ? kPositiveLabel : Label::NoNeedToSearch;
    }
    if (x.size() != dim_) {
        throw std::invalid_argument("prediction vector has dimension " +
                                    std::to_string(x.size()) + ", model expects " +
                                    std::to_string(dim_));
    }
    std::vector<double> z(dim_);
    standardizer_.apply(x, z);

    if (const auto* forest = std::get_if<ForestModel>(&impl_)) {
        long votes = 0;
        for (const DecisionTree& tree : forest->trees) votes += tree.predict(z);
        return from_sign(double(votes));  // tie -> positive class
    }
    if (const auto* svm = std::get_if<SvmModel>(&impl_)) {
        double dot = svm->bias;
        for (std::size_t f = 0; f < dim_; ++f) dot += svm->weights[f] * z[f];
        return from_sign(dot);
    }
    const auto& boost = std::get<BoostModel>(impl_);
    double margin = 0.0;
    for (std::size_t t = 0; t < boost.stumps.size(); ++t) {
        margin += boost.alphas[t] * double(boost.stumps[t].predict(z));
    }
    return from_sign(margin);
}

std::vector<Label> TrainedModel::predict_batch(
    const std::vector<std::vector<double>>& xs) const {
    std::vector<Label> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(predict(x));
    return out;
}

namespace {

using nlohmann::json;

json nodes_to_json(const std::vector<TreeNode>& nodes) {
    json arr = json::array();
    for (const TreeNode& n : nodes) {
        arr.push_back({{"f", n.feature},
                       {"t", n.threshold},
                       {"l", n.left},
                       {"r", n.right},
                       {"leaf", int(n.leaf)}});
    }
    return arr;
}

std::vector<TreeNode> nodes_from_json(const json& arr) {
    std::vector<TreeNode> nodes;
    for (const auto& j : arr) {
        TreeNode n;
        n.feature = j.at("f").get<int>();
        n.threshold = j.at("t").get<double>();
        n.left = j.at("l").get<int>();
        n.right = j.at("r").get<int>();
        n.leaf = std::int8_t(j.at("leaf").get<int>());
        nodes.push_back(n);
    }
    return nodes;
}

}  // namespace

void TrainedModel::save(const std::filesystem::path& path) const {
    json j{{"family", to_string(family_)},
           {"dimension", dim_},
           {"seed", spec_.seed},
           {"hyperparameters",
            {{"n_trees", spec_.n_trees},
             {"max_depth", spec_.max_depth},
             {"min_samples_leaf", spec_.min_samples_leaf},
             {"mtry", spec_.mtry},
             {"bootstrap", spec_.bootstrap},
             {"boost_rounds", spec_.boost_rounds},
             {"svm_lambda", spec_.svm_lambda},
             {"svm_epochs", spec_.svm_epochs}}},
           {"standardizer", {{"mean", standardizer_.mean}, {"std", standardizer_.stddev}}}};

    if (const auto* forest = std::get_if<ForestModel>(&impl_)) {
        json trees = json::array();
        for (const DecisionTree& t : forest->trees) trees.push_back(nodes_to_json(t.nodes()));
        j["model"] = {{"trees", std::move(trees)}};
    } else if (const auto* svm = std::get_if<SvmModel>(&impl_)) {
        j["model"] = {{"weights", svm->weights},
                      {"bias", svm->bias},
                      {"epoch_objectives", svm->epoch_objectives}};
    } else if (const auto* boost = std::get_if<BoostModel>(&impl_)) {
        json stumps = json::array();
        for (const Stump& s : boost->stumps) {
            stumps.push_back({{"f", s.feature}, {"t", s.threshold}, {"p", int(s.polarity)}});
        }
        j["model"] = {{"stumps", std::move(stumps)},
                      {"alphas", boost->alphas},
                      {"round_errors", boost->round_errors},
                      {"staged_train_error", boost->staged_train_error},
                      {"staged_exp_loss", boost->staged_exp_loss}};
    } else {
        j["model"] = {{"baseline_seed", std::get<BaselineModel>(impl_).seed}};
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file " + path.string());
    out << j.dump(2) << "\n";
}

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path.string());
    json j = json::parse(in);

    TrainedModel model;
    model.family_ = model_family_from_string(j.at("family").get<std::string>());
    model.dim_ = j.at("dimension").get<std::size_t>();
    model.spec_.family = model.family_;
    model.spec_.seed = j.at("seed").get<std::uint64_t>();
    const json& hp = j.at("hyperparameters");
    model.spec_.n_trees = hp.at("n_trees").get<int>();
    model.spec_.max_depth = hp.at("max_depth").get<int>();
    model.spec_.min_samples_leaf = hp.at("min_samples_leaf").get<int>();
    model.spec_.mtry = hp.at("mtry").get<int>();
    model.spec_.bootstrap = hp.at("bootstrap").get<bool>();
    model.spec_.boost_rounds = hp.at("boost_rounds").get<int>();
    model.spec_.svm_lambda = hp.at("svm_lambda").get<double>();
    model.spec_.svm_epochs = hp.at("svm_epochs").get<int>();
    model.standardizer_.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
    model.standardizer_.stddev = j.at("standardizer").at("std").get<std::vector<double>>();

    const json& m = j.at("model");
    switch (model.family_) {
        case ModelFamily::RandomForest: {
            ForestModel forest;
            for (const auto& t : m.at("trees")) {
                DecisionTree tree;
                tree.nodes() = nodes_from_json(t);
                forest.trees.push_back(std::move(tree));
            }
            model.impl_ = std::move(forest);
            break;
        }
        case ModelFamily::Svm: {
            SvmModel svm;
            svm.weights = m.at("weights").get<std::vector<double>>();
            svm.bias = m.at("bias").get<double>();
            svm.epoch_objectives = m.at("epoch_objectives").get<std::vector<double>>();
            model.impl_ = std::move(svm);
            break;
        }
        case ModelFamily::AdaBoost: {
            BoostModel boost;
            for (const auto& s : m.at("stumps")) {
                boost.stumps.push_back({s.at("f").get<int>(), s.at("t").get<double>(),
                                        std::int8_t(s.at("p").get<int>())});
            }
            boost.alphas = m.at("alphas").get<std::vector<double>>();
            boost.round_errors = m.at("round_errors").get<std::vector<double>>();
            boost.staged_train_error = m.at("staged_train_error").get<std::vector<double>>();
            boost.staged_exp_loss = m.value("staged_exp_loss", std::vector<double>{});
            model.impl_ = std::move(boost);
            break;
        }
        case ModelFamily::RandomBaseline:
            model.impl_ = BaselineModel{m.at("baseline_seed").get<std::uint64_t>(), 0};
            break;
    }
    return model;
}

}  // namespace inpredict
