#pragma once

// Twelve supervised classifiers behind one fit/predict/score contract.
// Scores are attack-affinity: probability-like kinds threshold at 0.5,
// margin kinds (linear_svm, elm, adaboost, rusboost) at 0.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ids/dataset.hpp"
#include "ids/matrix.hpp"

namespace ids::clf {

enum class Kind : std::uint8_t {
    naive_bayes,
    lda,
    linear_svm,
    mlp,
    elm,
    knn,
    decision_tree,
    random_forest,
    adaboost,
    rusboost,
    logitboost,
    bagging_trees,
};

inline constexpr std::size_t kKindCount = 12;

const char* to_string(Kind kind);
Kind parse_kind(const std::string& name);
const std::vector<Kind>& all_kinds();

// Ordered map so hyperparameter iteration (and report output) is
// deterministic.
using HyperMap = std::map<std::string, double>;

const HyperMap& default_hyperparameters(Kind kind);

struct ClassifierSpec {
    Kind kind = Kind::decision_tree;
    HyperMap hyper;  // overrides only
    std::uint64_t seed = 0;
};

// Throws ConfigError on hyperparameter keys the kind does not define.
void validate_spec(const ClassifierSpec& spec);

// Default-merged lookup.
double hyper_value(const ClassifierSpec& spec, const std::string& key);

class ModelImpl;

struct TrainedModel {
    Kind kind = Kind::decision_tree;
    std::size_t input_dimension = 0;
    ClassifierSpec spec;
    double train_seconds = 0.0;
    std::shared_ptr<const ModelImpl> impl;

    // attack = score > threshold
    double score_threshold() const;

    std::vector<double> predict_scores(const Matrix& x) const;
    std::vector<std::uint8_t> predict_labels(const Matrix& x) const;
};

// Fits per the kind's algorithm and hyperparameter defaults. Training
// data holding a single class yields a degenerate model that predicts
// that class with a constant score. Throws ComputeError on NaN input
// or a diverging optimizer.
TrainedModel fit_model(const ClassifierSpec& spec, const Matrix& x,
                       const std::vector<std::uint8_t>& labels);
TrainedModel fit_model(const ClassifierSpec& spec, const data::EncodedDataset& train);

// Versioned JSON container; round-trips reproduce predictions
// bit-exactly.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

// draw_count i.i.d. draws proportional to weights, deterministic under
// seed. Throws ComputeError when weights are all zero (or negative).
std::vector<std::uint32_t> weighted_resample(std::size_t row_count,
                                             const std::vector<double>& weights,
                                             std::size_t draw_count, std::uint64_t seed);

}  // namespace ids::clf
