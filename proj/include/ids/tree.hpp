#pragma once

// CART-style binary classification trees and weighted stumps shared by
// decision_tree, the bagged/boosted ensembles and the selection grid.

#include <cstdint>
#include <optional>
#include <vector>

#include "ids/matrix.hpp"
#include "ids/rng.hpp"

namespace ids::clf {

// 1 - sum_c p_c^2 over weight fractions. Unweighted when weights is
// empty. Throws ComputeError on empty input or all-zero weights.
double gini_impurity(const std::vector<std::uint8_t>& labels,
                     const std::vector<double>& weights = {});

struct SplitCandidate {
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

// Thresholds are midpoints between consecutive distinct sorted values.
// Returns the split with maximal weighted Gini gain; ties resolve to
// the lowest feature index, then the lowest threshold. Empty optional
// when no split has positive gain.
std::optional<SplitCandidate> best_split(const Matrix& x,
                                         const std::vector<std::uint8_t>& labels,
                                         const std::vector<double>& weights,
                                         const std::vector<std::size_t>& candidate_features);

struct TreeParams {
    std::size_t max_depth = 30;
    std::size_t min_leaf = 1;
    std::size_t features_per_split = 0;  // 0 = use every feature
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double leaf_value = 0.0;  // weighted attack fraction
};

class DecisionTree {
public:
    // weights may be empty (all rows weight 1). feature_rng drives the
    // per-node feature subsampling and may be null when
    // features_per_split == 0.
    static DecisionTree fit(const Matrix& x, const std::vector<std::uint8_t>& labels,
                            const std::vector<double>& weights, const TreeParams& params,
                            Rng* feature_rng = nullptr);

    // attack fraction of the reached leaf
    double predict_row(const double* row) const;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    static DecisionTree from_nodes(std::vector<TreeNode> nodes);

private:
    std::vector<TreeNode> nodes_;
};

// Depth-1 learner; feature < 0 encodes the constant stump.
struct Stump {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double left_value = 0.0;
    double right_value = 0.0;

    double predict_row(const double* row) const {
        if (feature < 0) return left_value;
        return row[static_cast<std::size_t>(feature)] <= threshold ? left_value : right_value;
    }
};

// Presorts each feature once so the boosting loops can refit weighted
// stumps by a linear scan per round.
class StumpContext {
public:
    explicit StumpContext(const Matrix& x);

    // Weighted-Gini stump; leaf values are weighted attack fractions.
    // Rows with zero weight are ignored.
    Stump fit_gini(const std::vector<std::uint8_t>& labels,
                   const std::vector<double>& weights) const;

    // Weighted least-squares regression stump on targets z; leaf
    // values are weighted means.
    Stump fit_sse(const std::vector<double>& z, const std::vector<double>& weights) const;

    const Matrix& data() const { return x_; }

private:
    const Matrix& x_;
    std::vector<std::vector<std::uint32_t>> order_;  // per feature, ascending value
};

}  // namespace ids::clf
