#include <cmath>

#include "ids/tree.hpp"
#include "model_impl.hpp"

// decision_tree plus the two bootstrap ensembles over the shared tree
// core.

namespace ids::clf {

namespace {

json nodes_to_json(const std::vector<TreeNode>& nodes) {
    json out = json::array();
    for (const TreeNode& n : nodes)
        out.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.leaf_value}));
    return out;
}

std::vector<TreeNode> nodes_from_json(const json& j) {
    std::vector<TreeNode> nodes;
    nodes.reserve(j.size());
    for (const auto& e : j) {
        TreeNode n;
        n.feature = e.at(0).get<std::int32_t>();
        n.threshold = e.at(1).get<double>();
        n.left = e.at(2).get<std::uint32_t>();
        n.right = e.at(3).get<std::uint32_t>();
        n.leaf_value = e.at(4).get<double>();
        nodes.push_back(n);
    }
    return nodes;
}

class TreeImpl final : public ModelImpl {
public:
    DecisionTree tree;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.resize(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) out[r] = tree.predict_row(x.row(r));
    }

    json params() const override { return json{{"nodes", nodes_to_json(tree.nodes())}}; }
};

class ForestImpl final : public ModelImpl {
public:
    std::vector<DecisionTree> trees;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.assign(x.rows(), 0.0);
        for (std::size_t r = 0; r < x.rows(); ++r) {
            std::size_t votes = 0;
            for (const auto& tree : trees)
                if (tree.predict_row(x.row(r)) > 0.5) ++votes;
            out[r] = static_cast<double>(votes) / static_cast<double>(trees.size());
        }
    }

    json params() const override {
        json arr = json::array();
        for (const auto& tree : trees) arr.push_back(nodes_to_json(tree.nodes()));
        return json{{"trees", arr}};
    }
};

// bootstrap draw collapsed to per-row multiplicities, used as weights
std::vector<double> bootstrap_weights(std::size_t n, std::uint64_t seed) {
    const std::vector<double> uniform(n, 1.0);
    const auto draws = weighted_resample(n, uniform, n, seed);
    std::vector<double> weights(n, 0.0);
    for (const auto r : draws) weights[r] += 1.0;
    return weights;
}

ImplPtr fit_forest(const FitInputs& in, bool subsample_features) {
    const auto tree_count = static_cast<std::size_t>(hyper_value(in.spec, "trees"));
    TreeParams params;
    params.max_depth = static_cast<std::size_t>(hyper_value(in.spec, "max_depth"));
    params.min_leaf = static_cast<std::size_t>(hyper_value(in.spec, "min_leaf"));
    if (subsample_features)
        params.features_per_split = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(in.x.cols()))));
    auto impl = std::make_shared<ForestImpl>();
    impl->trees.reserve(tree_count);
    for (std::size_t t = 0; t < tree_count; ++t) {
        const std::uint64_t tree_seed = seed_mix(in.spec.seed, t);
        const auto weights = bootstrap_weights(in.x.rows(), tree_seed);
        Rng feature_rng(seed_mix(tree_seed, 0xf));
        impl->trees.push_back(
            DecisionTree::fit(in.x, in.labels, weights, params, &feature_rng));
    }
    return impl;
}

}  // namespace

ImplPtr fit_decision_tree(const FitInputs& in) {
    TreeParams params;
    params.max_depth = static_cast<std::size_t>(hyper_value(in.spec, "max_depth"));
    params.min_leaf = static_cast<std::size_t>(hyper_value(in.spec, "min_leaf"));
    auto impl = std::make_shared<TreeImpl>();
    impl->tree = DecisionTree::fit(in.x, in.labels, {}, params);
    return impl;
}

ImplPtr decision_tree_from_json(const json& params) {
    auto impl = std::make_shared<TreeImpl>();
    impl->tree = DecisionTree::from_nodes(nodes_from_json(params.at("nodes")));
    return impl;
}

ImplPtr fit_random_forest(const FitInputs& in) { return fit_forest(in, true); }

ImplPtr fit_bagging(const FitInputs& in) { return fit_forest(in, false); }

ImplPtr forest_from_json(const json& params) {
    auto impl = std::make_shared<ForestImpl>();
    for (const auto& t : params.at("trees"))
        impl->trees.push_back(DecisionTree::from_nodes(nodes_from_json(t)));
    return impl;
}

}  // namespace ids::clf
