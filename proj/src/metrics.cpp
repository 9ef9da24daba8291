#include "ids/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ids::metrics {

ConfusionCounts confusion(const std::vector<std::uint8_t>& truth,
                          const std::vector<std::uint8_t>& predicted) {
    if (truth.size() != predicted.size())
        throw ComputeError("confusion: label vectors differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) {
            predicted[i] ? ++c.tp : ++c.fn;
        } else {
            predicted[i] ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

MetricBundle binary_metrics(const ConfusionCounts& c) {
    const double total = static_cast<double>(c.total());
    if (c.total() == 0) throw ComputeError("binary_metrics: empty confusion counts");
    MetricBundle m;
    m.accuracy = (static_cast<double>(c.tp) + static_cast<double>(c.tn)) / total;
    m.far = (c.tn + c.fp) == 0 ? 0.0
                               : static_cast<double>(c.fp) / static_cast<double>(c.tn + c.fp);
    m.precision = (c.tp + c.fp) == 0 ? 0.0
                                     : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.recall = (c.tp + c.fn) == 0 ? 0.0
                                  : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

RocResult roc_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    if (scores.size() != labels.size())
        throw ComputeError("roc_auc: scores and labels differ in length");
    std::uint64_t positives = 0;
    for (const auto l : labels) positives += l ? 1 : 0;
    const std::uint64_t negatives = labels.size() - positives;
    if (positives == 0 || negatives == 0)
        throw ComputeError("roc_auc: need at least one positive and one negative label");

    std::vector<std::uint32_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return scores[a] > scores[b]; });

    RocResult r;
    r.curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::uint64_t tp = 0, fp = 0;
    double auc = 0.0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        // consume the whole tie group so ties form one diagonal segment
        while (i < order.size() && scores[order[i]] == threshold) {
            labels[order[i]] ? ++tp : ++fp;
            ++i;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(negatives);
        const double tpr = static_cast<double>(tp) / static_cast<double>(positives);
        auc += 0.5 * (fpr - prev_fpr) * (tpr + prev_tpr);
        r.curve.points.push_back({threshold, fpr, tpr});
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    r.auc = auc;
    return r;
}

McNemarResult mcnemar(const std::vector<std::uint8_t>& correct_a,
                      const std::vector<std::uint8_t>& correct_b) {
    if (correct_a.size() != correct_b.size())
        throw ComputeError("mcnemar: correctness vectors differ in length");
    McNemarResult r;
    for (std::size_t i = 0; i < correct_a.size(); ++i) {
        if (correct_a[i] && !correct_b[i]) ++r.n12;
        if (correct_b[i] && !correct_a[i]) ++r.n21;
    }
    const std::uint64_t disagreements = r.n12 + r.n21;
    if (disagreements == 0) {
        r.z = 0.0;
    } else {
        const double diff = std::abs(static_cast<double>(r.n12) - static_cast<double>(r.n21));
        r.z = (diff - 1.0) / std::sqrt(static_cast<double>(disagreements));
    }
    r.significant = r.z > 1.96;
    r.direction = r.n12 > r.n21   ? McNemarDirection::a
                  : r.n21 > r.n12 ? McNemarDirection::b
                                  : McNemarDirection::tie;
    return r;
}

}  // namespace ids::metrics
