#pragma once

// End-to-end experiment orchestration: config loading/validation,
// the ingest -> policy -> standardize -> select/project -> fit ->
// evaluate pipeline, and canonical report emission.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ids/classifiers.hpp"
#include "ids/dataset.hpp"
#include "ids/metrics.hpp"
#include "ids/pca.hpp"

namespace ids::bench {

using nlohmann::json;

struct SelectionConfig {
    bool enabled = true;
    std::size_t top_m = 9;
    pca::Weighting weighting = pca::Weighting::eigenvalue_weighted;
    std::size_t top_components = 10;
    // selection grid ranges for the `select` command
    std::vector<std::size_t> grid_m;  // default 3..29 clamped to dimension
    std::vector<std::size_t> grid_k;  // default 1..10
};

struct OutputConfig {
    std::string directory = ".";
    std::vector<std::string> formats = {"json", "csv", "md"};  // subset of those three
};

struct ExperimentConfig {
    std::string train_path;
    std::string test_path;
    data::FeaturePolicy feature_policy = data::FeaturePolicy::drop_content();
    SelectionConfig selection;
    std::size_t pca_k = 10;  // clamped to the available dimension with a warning
    std::vector<clf::ClassifierSpec> classifiers;  // default: all twelve
    std::uint64_t seed = 0;
    OutputConfig output;
    std::size_t workers = 0;  // 0 = hardware concurrency

    static ExperimentConfig defaults();
    json to_json() const;
};

// Strict parse: unknown keys raise ConfigError naming the key path.
// Paths are checked for existence unless check_paths is false.
ExperimentConfig load_config(const json& document, bool check_paths = true);
ExperimentConfig load_config_file(const std::string& path, bool check_paths = true);

struct ClassifierResult {
    clf::Kind kind = clf::Kind::decision_tree;
    bool failed = false;
    std::string error;

    metrics::ConfusionCounts train_confusion, test_confusion;
    metrics::MetricBundle train_metrics, test_metrics;
    double train_auc = 0.0, test_auc = 0.0;
    metrics::RocCurve train_roc, test_roc;
    metrics::TimingRecord timing;

    std::vector<double> test_scores;
    std::vector<std::uint8_t> test_predicted;
    std::vector<std::uint8_t> test_correct;
};

struct BenchReport {
    ExperimentConfig config;
    std::string environment;
    std::string artifact_version;
    std::size_t pca_k_used = 0;
    std::vector<data::FeatureId> selected_features;
    std::vector<std::uint8_t> test_labels;
    std::vector<ClassifierResult> results;
    // full matrix over the classifier list; diagonal (and failed rows) empty
    std::vector<std::vector<std::optional<metrics::McNemarResult>>> mcnemar;
};

struct LoadedData {
    data::EncodedDataset train;
    data::EncodedDataset test;
};

// Accepts NSL-KDD text files or .idsd containers; text test files are
// encoded with vocabularies built from the training file.
LoadedData load_experiment_data(const ExperimentConfig& config);

BenchReport run_benchmark(const ExperimentConfig& config);
BenchReport run_benchmark(const ExperimentConfig& config, const LoadedData& data);

// Canonical form: keys sorted, doubles printed with 6 fixed decimals.
std::string canonical_dump(const json& document);
json report_to_json(const BenchReport& report);
// Zeroes every train_seconds/test_seconds field (recursive).
void normalize_timing_fields(json& document);

std::string render_markdown(const json& report);
std::string render_csv(const json& report);

// Writes report.{json,md,csv} per config formats, plus roc/ and
// predictions/ CSV series. Returns the paths written.
std::vector<std::string> emit_report(const BenchReport& report, const OutputConfig& output);

// machine note for the report header
std::string environment_descriptor();

}  // namespace ids::bench
