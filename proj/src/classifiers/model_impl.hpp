#pragma once

// Internal contract between the fit dispatcher (model.cpp) and the
// per-kind learner translation units.

#include <memory>
#include <vector>

#include <json.hpp>

#include "ids/classifiers.hpp"
#include "ids/matrix.hpp"

namespace ids::clf {

using nlohmann::json;

class ModelImpl {
public:
    virtual ~ModelImpl() = default;
    virtual void predict_scores(const Matrix& x, std::vector<double>& out) const = 0;
    virtual json params() const = 0;
};

using ImplPtr = std::shared_ptr<const ModelImpl>;

struct FitInputs {
    const ClassifierSpec& spec;
    const Matrix& x;
    const std::vector<std::uint8_t>& labels;
};

// score > 0 kinds; the rest threshold at 0.5
bool is_margin_kind(Kind kind);

ImplPtr make_degenerate(Kind kind, std::uint8_t cls);
ImplPtr degenerate_from_json(Kind kind, const json& params);

ImplPtr fit_naive_bayes(const FitInputs& in);
ImplPtr naive_bayes_from_json(const json& params);
ImplPtr fit_lda(const FitInputs& in);
ImplPtr lda_from_json(const json& params);

ImplPtr fit_linear_svm(const FitInputs& in);
ImplPtr linear_svm_from_json(const json& params);

ImplPtr fit_mlp(const FitInputs& in);
ImplPtr mlp_from_json(const json& params);
ImplPtr fit_elm(const FitInputs& in);
ImplPtr elm_from_json(const json& params);

ImplPtr fit_knn(const FitInputs& in);
ImplPtr knn_from_json(const json& params);

ImplPtr fit_decision_tree(const FitInputs& in);
ImplPtr decision_tree_from_json(const json& params);
ImplPtr fit_random_forest(const FitInputs& in);
ImplPtr fit_bagging(const FitInputs& in);
ImplPtr forest_from_json(const json& params);

ImplPtr fit_adaboost(const FitInputs& in);
ImplPtr fit_rusboost(const FitInputs& in);
ImplPtr boost_from_json(const json& params);
ImplPtr fit_logitboost(const FitInputs& in);
ImplPtr logitboost_from_json(const json& params);

}  // namespace ids::clf
