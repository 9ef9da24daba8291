#include "ids/classifiers.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>

#include "ids/error.hpp"
#include "ids/rng.hpp"
#include "model_impl.hpp"

namespace ids::clf {

namespace {

struct KindInfo {
    Kind kind;
    const char* name;
};

constexpr KindInfo kKinds[kKindCount] = {
    {Kind::naive_bayes, "naive_bayes"},
    {Kind::lda, "lda"},
    {Kind::linear_svm, "linear_svm"},
    {Kind::mlp, "mlp"},
    {Kind::elm, "elm"},
    {Kind::knn, "knn"},
    {Kind::decision_tree, "decision_tree"},
    {Kind::random_forest, "random_forest"},
    {Kind::adaboost, "adaboost"},
    {Kind::rusboost, "rusboost"},
    {Kind::logitboost, "logitboost"},
    {Kind::bagging_trees, "bagging_trees"},
};

HyperMap make_defaults(Kind kind) {
    switch (kind) {
        case Kind::naive_bayes: return {{"var_floor_scale", 1e-9}};
        case Kind::lda: return {{"shrinkage", 1e-4}};
        case Kind::linear_svm: return {{"lambda", 1e-4}, {"epochs", 20}};
        case Kind::mlp:
            return {{"hidden", 30}, {"batch", 128}, {"learning_rate", 0.01}, {"epochs", 30}};
        case Kind::elm: return {{"hidden", 100}, {"ridge", 1e-6}};
        case Kind::knn: return {{"k", 5}};
        case Kind::decision_tree: return {{"max_depth", 30}, {"min_leaf", 1}};
        case Kind::random_forest:
        case Kind::bagging_trees:
            return {{"trees", 100}, {"max_depth", 30}, {"min_leaf", 1}};
        case Kind::adaboost:
        case Kind::rusboost:
        case Kind::logitboost: return {{"rounds", 100}};
    }
    return {};
}

class DegenerateImpl final : public ModelImpl {
public:
    std::uint8_t cls = 0;
    double score = 0.0;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.assign(x.rows(), score);
    }

    json params() const override {
        return json{{"degenerate", true}, {"class", cls}, {"score", score}};
    }
};

}  // namespace

const char* to_string(Kind kind) { return kKinds[static_cast<std::size_t>(kind)].name; }

Kind parse_kind(const std::string& name) {
    for (const auto& info : kKinds)
        if (name == info.name) return info.kind;
    throw ConfigError("unknown classifier kind '" + name + "'");
}

const std::vector<Kind>& all_kinds() {
    static const std::vector<Kind> kinds = [] {
        std::vector<Kind> v;
        for (const auto& info : kKinds) v.push_back(info.kind);
        return v;
    }();
    return kinds;
}

const HyperMap& default_hyperparameters(Kind kind) {
    static const std::array<HyperMap, kKindCount> defaults = [] {
        std::array<HyperMap, kKindCount> out;
        for (std::size_t i = 0; i < kKindCount; ++i)
            out[i] = make_defaults(static_cast<Kind>(i));
        return out;
    }();
    return defaults[static_cast<std::size_t>(kind)];
}

void validate_spec(const ClassifierSpec& spec) {
    const HyperMap& known = default_hyperparameters(spec.kind);
    for (const auto& [key, value] : spec.hyper)
        if (!known.contains(key))
            throw ConfigError(std::string("classifier '") + to_string(spec.kind) +
                              "' has no hyperparameter '" + key + "'");
}

double hyper_value(const ClassifierSpec& spec, const std::string& key) {
    if (const auto it = spec.hyper.find(key); it != spec.hyper.end()) return it->second;
    const HyperMap& defaults = default_hyperparameters(spec.kind);
    const auto it = defaults.find(key);
    if (it == defaults.end())
        throw ConfigError(std::string("classifier '") + to_string(spec.kind) +
                          "' has no hyperparameter '" + key + "'");
    return it->second;
}

bool is_margin_kind(Kind kind) {
    return kind == Kind::linear_svm || kind == Kind::elm || kind == Kind::adaboost ||
           kind == Kind::rusboost;
}

ImplPtr make_degenerate(Kind kind, std::uint8_t cls) {
    auto impl = std::make_shared<DegenerateImpl>();
    impl->cls = cls;
    if (is_margin_kind(kind))
        impl->score = cls ? 1.0 : -1.0;
    else
        impl->score = cls ? 1.0 : 0.0;
    return impl;
}

ImplPtr degenerate_from_json(Kind kind, const json& params) {
    auto impl = std::make_shared<DegenerateImpl>();
    impl->cls = params.at("class").get<std::uint8_t>();
    impl->score = params.at("score").get<double>();
    (void)kind;
    return impl;
}

double TrainedModel::score_threshold() const { return is_margin_kind(kind) ? 0.0 : 0.5; }

std::vector<double> TrainedModel::predict_scores(const Matrix& x) const {
    if (x.cols() != input_dimension)
        throw ComputeError(std::string("predict: input has ") + std::to_string(x.cols()) +
                           " columns, model expects " + std::to_string(input_dimension));
    std::vector<double> scores;
    impl->predict_scores(x, scores);
    return scores;
}

std::vector<std::uint8_t> TrainedModel::predict_labels(const Matrix& x) const {
    const std::vector<double> scores = predict_scores(x);
    const double threshold = score_threshold();
    std::vector<std::uint8_t> labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] > threshold ? 1 : 0;
    return labels;
}

TrainedModel fit_model(const ClassifierSpec& spec, const Matrix& x,
                       const std::vector<std::uint8_t>& labels) {
    validate_spec(spec);
    if (x.rows() == 0) throw ComputeError("fit_model: empty training data");
    if (labels.size() != x.rows()) throw ComputeError("fit_model: labels/rows mismatch");
    const double* data = x.data();
    for (std::size_t i = 0, total = x.rows() * x.cols(); i < total; ++i)
        if (!std::isfinite(data[i]))
            throw ComputeError("fit_model: non-finite value in training data");

    TrainedModel model;
    model.kind = spec.kind;
    model.spec = spec;
    model.input_dimension = x.cols();

    bool has[2] = {false, false};
    for (const auto l : labels) has[l ? 1 : 0] = true;

    const auto start = std::chrono::steady_clock::now();
    if (!has[0] || !has[1]) {
        model.impl = make_degenerate(spec.kind, has[1] ? 1 : 0);
    } else {
        const FitInputs in{spec, x, labels};
        switch (spec.kind) {
            case Kind::naive_bayes: model.impl = fit_naive_bayes(in); break;
            case Kind::lda: model.impl = fit_lda(in); break;
            case Kind::linear_svm: model.impl = fit_linear_svm(in); break;
            case Kind::mlp: model.impl = fit_mlp(in); break;
            case Kind::elm: model.impl = fit_elm(in); break;
            case Kind::knn: model.impl = fit_knn(in); break;
            case Kind::decision_tree: model.impl = fit_decision_tree(in); break;
            case Kind::random_forest: model.impl = fit_random_forest(in); break;
            case Kind::adaboost: model.impl = fit_adaboost(in); break;
            case Kind::rusboost: model.impl = fit_rusboost(in); break;
            case Kind::logitboost: model.impl = fit_logitboost(in); break;
            case Kind::bagging_trees: model.impl = fit_bagging(in); break;
        }
    }
    model.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return model;
}

TrainedModel fit_model(const ClassifierSpec& spec, const data::EncodedDataset& train) {
    return fit_model(spec, train.matrix, train.labels);
}

std::string model_to_json(const TrainedModel& model) {
    json j;
    j["format_version"] = 1;
    j["kind"] = to_string(model.kind);
    j["input_dimension"] = model.input_dimension;
    j["seed"] = model.spec.seed;
    j["hyper"] = model.spec.hyper;
    j["params"] = model.impl->params();
    return j.dump();
}

TrainedModel model_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("format_version").get<int>() != 1)
        throw ParseError("unsupported model format version");
    TrainedModel model;
    model.kind = parse_kind(j.at("kind").get<std::string>());
    model.input_dimension = j.at("input_dimension").get<std::size_t>();
    model.spec.kind = model.kind;
    model.spec.seed = j.at("seed").get<std::uint64_t>();
    model.spec.hyper = j.at("hyper").get<HyperMap>();
    const json& params = j.at("params");
    if (params.contains("degenerate")) {
        model.impl = degenerate_from_json(model.kind, params);
        return model;
    }
    switch (model.kind) {
        case Kind::naive_bayes: model.impl = naive_bayes_from_json(params); break;
        case Kind::lda: model.impl = lda_from_json(params); break;
        case Kind::linear_svm: model.impl = linear_svm_from_json(params); break;
        case Kind::mlp: model.impl = mlp_from_json(params); break;
        case Kind::elm: model.impl = elm_from_json(params); break;
        case Kind::knn: model.impl = knn_from_json(params); break;
        case Kind::decision_tree: model.impl = decision_tree_from_json(params); break;
        case Kind::random_forest:
        case Kind::bagging_trees: model.impl = forest_from_json(params); break;
        case Kind::adaboost:
        case Kind::rusboost: model.impl = boost_from_json(params); break;
        case Kind::logitboost: model.impl = logitboost_from_json(params); break;
    }
    return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << model_to_json(model);
    if (!out) throw ParseError("short write to '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

std::vector<std::uint32_t> weighted_resample(std::size_t row_count,
                                             const std::vector<double>& weights,
                                             std::size_t draw_count, std::uint64_t seed) {
    if (weights.size() != row_count)
        throw ComputeError("weighted_resample: weights/rows mismatch");
    std::vector<double> cumulative(row_count);
    double total = 0.0;
    for (std::size_t i = 0; i < row_count; ++i) {
        if (weights[i] < 0.0) throw ComputeError("weighted_resample: negative weight");
        total += weights[i];
        cumulative[i] = total;
    }
    if (total <= 0.0) throw ComputeError("weighted_resample: weights sum to zero");
    Rng rng(seed);
    std::vector<std::uint32_t> draws(draw_count);
    for (std::size_t i = 0; i < draw_count; ++i) {
        const double u = rng.next_double() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        draws[i] = static_cast<std::uint32_t>(
            std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                     static_cast<std::ptrdiff_t>(row_count) - 1));
    }
    return draws;
}

}  // namespace ids::clf
