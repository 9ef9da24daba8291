#pragma once

// Binary evaluation: confusion-derived metrics with attack as the
// positive class, ROC/AUC by threshold sweep, and the paired
// continuity-corrected McNemar z-test.

#include <cstdint>
#include <vector>

#include "ids/error.hpp"

namespace ids::metrics {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
};

ConfusionCounts confusion(const std::vector<std::uint8_t>& truth,
                          const std::vector<std::uint8_t>& predicted);

struct MetricBundle {
    double accuracy = 0.0;
    double far = 0.0;        // fp / (tn + fp)
    double precision = 0.0;  // tp / (tp + fp)
    double recall = 0.0;     // tp / (tp + fn)
    double f1 = 0.0;
};

// Zero-denominator conventions: precision, recall, f1 and far fall
// back to 0 when their denominator is empty. Throws ComputeError on an
// empty confusion.
MetricBundle binary_metrics(const ConfusionCounts& c);

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

struct RocCurve {
    // (0,0) first, (1,1) last; thresholds descending, tied scores
    // grouped at one threshold.
    std::vector<RocPoint> points;
};

struct RocResult {
    RocCurve curve;
    double auc = 0.0;
};

// Requires at least one positive and one negative label.
RocResult roc_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

enum class McNemarDirection : std::uint8_t { a, b, tie };

struct McNemarResult {
    std::uint64_t n12 = 0;  // a correct, b wrong
    std::uint64_t n21 = 0;  // b correct, a wrong
    double z = 0.0;
    bool significant = false;  // z > 1.96
    McNemarDirection direction = McNemarDirection::tie;
};

// z = (|n12 - n21| - 1) / sqrt(n12 + n21); defined as 0 when both
// disagreement counts are 0. z can be negative when |n12 - n21| < 1;
// it is reported as-is and is never significant.
McNemarResult mcnemar(const std::vector<std::uint8_t>& correct_a,
                      const std::vector<std::uint8_t>& correct_b);

struct TimingRecord {
    double train_seconds = 0.0;
    double test_seconds = 0.0;
};

}  // namespace ids::metrics
