#include "ids/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ids/error.hpp"

namespace ids::clf {

namespace {

inline double gini_binary(double w_pos, double w_total) {
    if (w_total <= 0.0) return 0.0;
    const double p1 = w_pos / w_total;
    const double p0 = 1.0 - p1;
    return 1.0 - p0 * p0 - p1 * p1;
}

// Midpoint between two consecutive distinct values; the upper value
// must stay strictly on the right of a "value <= threshold" test even
// when the midpoint rounds up.
inline double split_threshold(double lo, double hi) {
    double thr = lo + 0.5 * (hi - lo);
    if (!(thr >= lo)) thr = lo;
    if (thr >= hi) thr = lo;
    return thr;
}

struct BestSplit {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;

    // The public best_split contract demands strictly positive gain.
    // Tree growth instead accepts zero-gain splits of impure nodes
    // (XOR-style parity needs them to reach purity); recursion still
    // terminates because every accepted boundary is a proper partition.
    static BestSplit seeded(bool accept_zero_gain) {
        BestSplit b;
        b.gain = accept_zero_gain ? -1e-12 : 0.0;
        return b;
    }
};

struct SortedValue {
    double value;
    std::uint32_t row;
};

// Scans one feature's sorted rows and offers each distinct-value
// boundary to `best`.
template <typename WeightFn>
void scan_feature_gini(const SortedValue* sorted, std::size_t n, std::size_t feature,
                       const std::vector<std::uint8_t>& labels, WeightFn weight_of,
                       double w_total, double w_pos, std::size_t min_leaf,
                       double parent_gini, BestSplit& best) {
    double wl = 0.0, wl_pos = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::uint32_t row = sorted[i].row;
        const double w = weight_of(row);
        wl += w;
        if (labels[row]) wl_pos += w;
        if (sorted[i].value == sorted[i + 1].value) continue;
        if (i + 1 < min_leaf || n - (i + 1) < min_leaf) continue;
        const double wr = w_total - wl;
        if (wl <= 0.0 || wr <= 0.0) continue;
        const double child =
            (wl * gini_binary(wl_pos, wl) + wr * gini_binary(w_pos - wl_pos, wr)) / w_total;
        const double gain = parent_gini - child;
        if (gain > best.gain) {
            best.found = true;
            best.feature = feature;
            best.threshold = split_threshold(sorted[i].value, sorted[i + 1].value);
            best.gain = gain;
        }
    }
}

}  // namespace

double gini_impurity(const std::vector<std::uint8_t>& labels, const std::vector<double>& weights) {
    if (labels.empty()) throw ComputeError("gini_impurity: empty input");
    if (!weights.empty() && weights.size() != labels.size())
        throw ComputeError("gini_impurity: weights/labels length mismatch");
    double w_total = 0.0, w_pos = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (w < 0.0) throw ComputeError("gini_impurity: negative weight");
        w_total += w;
        if (labels[i]) w_pos += w;
    }
    if (w_total <= 0.0) throw ComputeError("gini_impurity: weights sum to zero");
    return gini_binary(w_pos, w_total);
}

std::optional<SplitCandidate> best_split(const Matrix& x,
                                         const std::vector<std::uint8_t>& labels,
                                         const std::vector<double>& weights,
                                         const std::vector<std::size_t>& candidate_features) {
    if (x.rows() < 2) throw ComputeError("best_split: need at least 2 rows");
    const auto weight_of = [&](std::uint32_t r) { return weights.empty() ? 1.0 : weights[r]; };
    double w_total = 0.0, w_pos = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        w_total += weight_of(static_cast<std::uint32_t>(r));
        if (labels[r]) w_pos += weight_of(static_cast<std::uint32_t>(r));
    }
    const double parent = gini_binary(w_pos, w_total);
    std::vector<std::size_t> features = candidate_features;
    std::sort(features.begin(), features.end());
    BestSplit best = BestSplit::seeded(false);
    std::vector<SortedValue> sorted(x.rows());
    for (const std::size_t f : features) {
        for (std::size_t r = 0; r < x.rows(); ++r)
            sorted[r] = {x(r, f), static_cast<std::uint32_t>(r)};
        std::sort(sorted.begin(), sorted.end(),
                  [](const SortedValue& a, const SortedValue& b) { return a.value < b.value; });
        scan_feature_gini(sorted.data(), sorted.size(), f, labels, weight_of, w_total, w_pos, 1,
                          parent, best);
    }
    if (!best.found) return std::nullopt;
    return SplitCandidate{best.feature, best.threshold, best.gain};
}

namespace {

struct TreeBuilder {
    const Matrix& x;
    const std::vector<std::uint8_t>& labels;
    const std::vector<double>& weights;
    const TreeParams& params;
    Rng* rng;

    std::vector<TreeNode> nodes;
    std::vector<std::uint32_t> rows;       // partitioned in place per node
    std::vector<SortedValue> sort_scratch;
    std::vector<std::uint32_t> part_scratch;
    std::vector<std::size_t> feature_pool;

    struct WorkItem {
        std::uint32_t node;
        std::uint32_t begin;
        std::uint32_t end;
        std::uint32_t depth;
    };

    double weight_of(std::uint32_t r) const { return weights.empty() ? 1.0 : weights[r]; }

    void pick_features(std::vector<std::size_t>& out) {
        const std::size_t d = x.cols();
        out.clear();
        if (params.features_per_split == 0 || params.features_per_split >= d) {
            for (std::size_t f = 0; f < d; ++f) out.push_back(f);
            return;
        }
        // partial Fisher-Yates over a persistent pool, then ascending
        // order so tie-breaking stays by feature index
        for (std::size_t i = 0; i < params.features_per_split; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng->next_below(d - i));
            std::swap(feature_pool[i], feature_pool[j]);
            out.push_back(feature_pool[i]);
        }
        std::sort(out.begin(), out.end());
    }

    void build() {
        const std::size_t n = x.rows();
        rows.resize(n);
        std::iota(rows.begin(), rows.end(), 0u);
        sort_scratch.resize(n);
        part_scratch.resize(n);
        feature_pool.resize(x.cols());
        std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});

        nodes.emplace_back();
        std::vector<WorkItem> stack;
        stack.push_back({0, 0, static_cast<std::uint32_t>(n), 0});
        std::vector<std::size_t> features;

        while (!stack.empty()) {
            const WorkItem item = stack.back();
            stack.pop_back();
            TreeNode& node = nodes[item.node];

            double w_total = 0.0, w_pos = 0.0;
            for (std::uint32_t i = item.begin; i < item.end; ++i) {
                const double w = weight_of(rows[i]);
                w_total += w;
                if (labels[rows[i]]) w_pos += w;
            }
            node.leaf_value = w_total > 0.0 ? w_pos / w_total : 0.0;

            const std::size_t count = item.end - item.begin;
            const double parent = gini_binary(w_pos, w_total);
            if (item.depth >= params.max_depth || count < 2 * params.min_leaf ||
                parent <= 0.0 || w_total <= 0.0)
                continue;

            pick_features(features);
            BestSplit best = BestSplit::seeded(true);
            for (const std::size_t f : features) {
                auto* sorted = sort_scratch.data();
                std::size_t m = 0;
                for (std::uint32_t i = item.begin; i < item.end; ++i)
                    sorted[m++] = {x(rows[i], f), rows[i]};
                std::sort(sorted, sorted + m, [](const SortedValue& a, const SortedValue& b) {
                    return a.value < b.value;
                });
                scan_feature_gini(sorted, m, f, labels,
                                  [&](std::uint32_t r) { return weight_of(r); }, w_total, w_pos,
                                  params.min_leaf, parent, best);
            }
            if (!best.found) continue;

            // stable partition by the chosen split
            std::uint32_t left_count = 0;
            std::uint32_t right_pos = 0;
            for (std::uint32_t i = item.begin; i < item.end; ++i) {
                if (x(rows[i], best.feature) <= best.threshold)
                    rows[item.begin + left_count++] = rows[i];
                else
                    part_scratch[right_pos++] = rows[i];
            }
            std::copy(part_scratch.begin(), part_scratch.begin() + right_pos,
                      rows.begin() + item.begin + left_count);

            const auto left_index = static_cast<std::uint32_t>(nodes.size());
            nodes.emplace_back();
            nodes.emplace_back();
            TreeNode& parent_node = nodes[item.node];  // re-fetch, vector grew
            parent_node.feature = static_cast<std::int32_t>(best.feature);
            parent_node.threshold = best.threshold;
            parent_node.left = left_index;
            parent_node.right = left_index + 1;
            stack.push_back({left_index + 1, item.begin + left_count, item.end, item.depth + 1});
            stack.push_back({left_index, item.begin, item.begin + left_count, item.depth + 1});
        }
    }
};

}  // namespace

DecisionTree DecisionTree::fit(const Matrix& x, const std::vector<std::uint8_t>& labels,
                               const std::vector<double>& weights, const TreeParams& params,
                               Rng* feature_rng) {
    if (x.rows() == 0) throw ComputeError("DecisionTree::fit: empty input");
    if (labels.size() != x.rows())
        throw ComputeError("DecisionTree::fit: labels/rows mismatch");
    if (!weights.empty() && weights.size() != x.rows())
        throw ComputeError("DecisionTree::fit: weights/rows mismatch");
    if (params.features_per_split > 0 && params.features_per_split < x.cols() && !feature_rng)
        throw ComputeError("DecisionTree::fit: feature subsampling needs an rng");
    TreeBuilder builder{x, labels, weights, params, feature_rng, {}, {}, {}, {}, {}};
    builder.build();
    DecisionTree tree;
    tree.nodes_ = std::move(builder.nodes);
    return tree;
}

double DecisionTree::predict_row(const double* row) const {
    std::uint32_t at = 0;
    while (nodes_[at].feature >= 0) {
        const TreeNode& node = nodes_[at];
        at = row[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes_[at].leaf_value;
}

DecisionTree DecisionTree::from_nodes(std::vector<TreeNode> nodes) {
    DecisionTree tree;
    tree.nodes_ = std::move(nodes);
    return tree;
}

StumpContext::StumpContext(const Matrix& x) : x_(x) {
    order_.resize(x.cols());
    for (std::size_t f = 0; f < x.cols(); ++f) {
        auto& ord = order_[f];
        ord.resize(x.rows());
        std::iota(ord.begin(), ord.end(), 0u);
        std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
            const double va = x(a, f), vb = x(b, f);
            return va < vb || (va == vb && a < b);
        });
    }
}

Stump StumpContext::fit_gini(const std::vector<std::uint8_t>& labels,
                             const std::vector<double>& weights) const {
    double w_total = 0.0, w_pos = 0.0;
    for (std::size_t r = 0; r < weights.size(); ++r) {
        w_total += weights[r];
        if (labels[r]) w_pos += weights[r];
    }
    const double parent = gini_binary(w_pos, w_total);

    Stump best;
    best.left_value = w_total > 0.0 ? w_pos / w_total : 0.0;
    best.right_value = best.left_value;
    double best_gain = 0.0;
    double best_wl = 0.0, best_wl_pos = 0.0;

    for (std::size_t f = 0; f < x_.cols(); ++f) {
        const auto& ord = order_[f];
        double wl = 0.0, wl_pos = 0.0;
        for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
            const std::uint32_t row = ord[i];
            wl += weights[row];
            if (labels[row]) wl_pos += weights[row];
            const double v = x_(row, f), v_next = x_(ord[i + 1], f);
            if (v == v_next) continue;
            const double wr = w_total - wl;
            if (wl <= 0.0 || wr <= 0.0) continue;
            const double child =
                (wl * gini_binary(wl_pos, wl) + wr * gini_binary(w_pos - wl_pos, wr)) / w_total;
            const double gain = parent - child;
            if (gain > best_gain && gain > 0.0) {
                best_gain = gain;
                best.feature = static_cast<std::int32_t>(f);
                best.threshold = split_threshold(v, v_next);
                best_wl = wl;
                best_wl_pos = wl_pos;
            }
        }
    }
    if (best.feature >= 0) {
        best.left_value = best_wl_pos / best_wl;
        best.right_value = (w_pos - best_wl_pos) / (w_total - best_wl);
    }
    return best;
}

Stump StumpContext::fit_sse(const std::vector<double>& z,
                            const std::vector<double>& weights) const {
    double w_total = 0.0, s_total = 0.0;
    for (std::size_t r = 0; r < weights.size(); ++r) {
        w_total += weights[r];
        s_total += weights[r] * z[r];
    }
    const double parent_score = w_total > 0.0 ? s_total * s_total / w_total : 0.0;

    Stump best;
    best.left_value = w_total > 0.0 ? s_total / w_total : 0.0;
    best.right_value = best.left_value;
    double best_improvement = 0.0;
    double best_wl = 0.0, best_sl = 0.0;

    for (std::size_t f = 0; f < x_.cols(); ++f) {
        const auto& ord = order_[f];
        double wl = 0.0, sl = 0.0;
        for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
            const std::uint32_t row = ord[i];
            wl += weights[row];
            sl += weights[row] * z[row];
            const double v = x_(row, f), v_next = x_(ord[i + 1], f);
            if (v == v_next) continue;
            const double wr = w_total - wl;
            if (wl <= 0.0 || wr <= 0.0) continue;
            const double sr = s_total - sl;
            const double improvement = sl * sl / wl + sr * sr / wr - parent_score;
            if (improvement > best_improvement) {
                best_improvement = improvement;
                best.feature = static_cast<std::int32_t>(f);
                best.threshold = split_threshold(v, v_next);
                best_wl = wl;
                best_sl = sl;
            }
        }
    }
    if (best.feature >= 0) {
        best.left_value = best_sl / best_wl;
        best.right_value = (s_total - best_sl) / (w_total - best_wl);
    }
    return best;
}

}  // namespace ids::clf
