#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ids/bench.hpp"
#include "ids/synth.hpp"

using namespace ids;
using namespace ids::bench;
namespace fs = std::filesystem;

namespace {

struct SampleFiles {
    fs::path dir;
    std::string train;
    std::string test;

    SampleFiles() {
        dir = fs::temp_directory_path() / "ids_bench_test";
        fs::create_directories(dir);
        train = (dir / "train.txt").string();
        test = (dir / "test.txt").string();
        if (!fs::exists(train))
            synth::write_sample(train, test, {11, 0.004});  // ~600 rows total
    }
};

const SampleFiles& sample() {
    static SampleFiles files;
    return files;
}

json base_document() {
    json j;
    j["train"] = sample().train;
    j["test"] = sample().test;
    return j;
}

}  // namespace

TEST_CASE("defaults: empty config plus required paths") {
    const auto config = load_config(base_document());
    CHECK(config.selection.top_m == 9);
    CHECK(config.selection.top_components == 10);
    CHECK(config.pca_k == 10);
    CHECK(config.classifiers.size() == 12);
    CHECK(config.seed == 0);
    CHECK(config.feature_policy.kind == data::FeaturePolicy::Kind::drop_content);
}

TEST_CASE("strict config validation names the offending key path") {
    auto doc = base_document();
    doc["topM"] = 9;
    CHECK_THROWS_WITH_AS(load_config(doc), doctest::Contains("topM"), ConfigError);

    auto doc2 = base_document();
    doc2["selection"]["grid_q"] = json::array({1});
    CHECK_THROWS_WITH_AS(load_config(doc2), doctest::Contains("selection.grid_q"), ConfigError);

    auto doc3 = base_document();
    doc3["classifiers"] = json::array({json{{"kind", "knn"}, {"hyper", {{"neighbors", 3}}}}});
    CHECK_THROWS_WITH_AS(load_config(doc3), doctest::Contains("classifiers[0]"), ConfigError);

    auto doc4 = base_document();
    doc4["classifiers"] = json::array({"knn", "knn"});
    CHECK_THROWS_WITH_AS(load_config(doc4), doctest::Contains("duplicate"), ConfigError);

    auto doc5 = base_document();
    doc5["train"] = "/no/such/file";
    CHECK_THROWS_AS(load_config(doc5), ConfigError);

    CHECK_THROWS_AS(load_config(json::object()), ConfigError);  // missing paths
}

TEST_CASE("config echo survives a to_json/load_config round trip") {
    auto doc = base_document();
    doc["seed"] = 99;
    doc["features"] = "basic6";
    doc["pca_k"] = 4;
    doc["classifiers"] = json::array({"decision_tree", "elm"});
    const auto config = load_config(doc);
    const auto config2 = load_config(config.to_json());
    CHECK(config2.seed == 99);
    CHECK(config2.pca_k == 4);
    CHECK(config2.feature_policy.kind == data::FeaturePolicy::Kind::basic6);
    CHECK(config2.classifiers.size() == 2);
    CHECK(canonical_dump(config.to_json()) == canonical_dump(config2.to_json()));
}

TEST_CASE("canonical dump fixes float formatting and sorts keys") {
    json j;
    j["zeta"] = 0.887400001;
    j["alpha"] = 3;
    j["nested"] = json{{"b", true}, {"a", json::array({1.5, 2.0})}};
    CHECK(canonical_dump(j) ==
          "{\"alpha\":3,\"nested\":{\"a\":[1.500000,2.000000],\"b\":true},"
          "\"zeta\":0.887400}\n");
}

TEST_CASE("benchmark run on sample data, determinism and report emission") {
    auto doc = base_document();
    doc["classifiers"] = json::array({"decision_tree", "naive_bayes", "lda"});
    doc["seed"] = 5;
    doc["output"]["directory"] = (sample().dir / "out").string();
    const auto config = load_config(doc);

    const auto report = run_benchmark(config);
    REQUIRE(report.results.size() == 3);
    for (const auto& r : report.results) CHECK_FALSE(r.failed);
    CHECK(report.pca_k_used == 9);  // clamped from 10 after top-9 selection
    CHECK(report.selected_features.size() == 9);

    // single-classifier run has an empty mcnemar list
    auto solo = doc;
    solo["classifiers"] = json::array({"decision_tree"});
    const auto solo_report = run_benchmark(load_config(solo));
    CHECK(report_to_json(solo_report).at("mcnemar").empty());

    // determinism: identical canonical JSON after timing normalization
    const auto report2 = run_benchmark(config);
    json a = report_to_json(report);
    json b = report_to_json(report2);
    normalize_timing_fields(a);
    normalize_timing_fields(b);
    CHECK(canonical_dump(a) == canonical_dump(b));

    // emission writes the advertised files
    const auto written = emit_report(report, config.output);
    const fs::path out(config.output.directory);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "report.md"));
    CHECK(fs::exists(out / "report.csv"));
    CHECK(fs::exists(out / "roc" / "decision_tree_test.csv"));
    CHECK(fs::exists(out / "predictions" / "naive_bayes.csv"));
    CHECK(written.size() >= 3);

    // markdown renders the square mcnemar matrix with direction marks
    const std::string md = render_markdown(report_to_json(report));
    CHECK(md.find("McNemar z matrix") != std::string::npos);
    CHECK(md.find("| decision_tree |") != std::string::npos);
}

TEST_CASE("pipeline fits on training statistics only") {
    auto doc = base_document();
    doc["classifiers"] = json::array({"decision_tree"});
    doc["seed"] = 3;
    const auto config = load_config(doc);
    const auto data1 = load_experiment_data(config);

    // same pipeline with a shifted test set: fitted state (selection,
    // train metrics) must not move, test metrics must
    LoadedData data2 = data1;
    for (std::size_t r = 0; r < data2.test.n(); ++r)
        for (std::size_t c = 0; c < data2.test.dim(); ++c)
            data2.test.matrix(r, c) += 2.5;

    const auto report1 = run_benchmark(config, data1);
    const auto report2 = run_benchmark(config, data2);
    CHECK(report1.selected_features == report2.selected_features);
    CHECK(report1.results[0].train_confusion.tp == report2.results[0].train_confusion.tp);
    CHECK(report1.results[0].train_confusion.fp == report2.results[0].train_confusion.fp);
    CHECK(report1.results[0].test_metrics.accuracy != report2.results[0].test_metrics.accuracy);
}

TEST_CASE("failure isolation keeps the other rows alive") {
    auto doc = base_document();
    // lambda 0 makes the pegasos step size non-finite at once
    doc["classifiers"] = json::array(
        {json{{"kind", "linear_svm"}, {"hyper", {{"lambda", 0.0}}}}, "decision_tree"});
    const auto report = run_benchmark(load_config(doc));
    REQUIRE(report.results.size() == 2);
    CHECK(report.results[0].failed);
    CHECK_FALSE(report.results[0].error.empty());
    CHECK_FALSE(report.results[1].failed);
    // failed rows leave no mcnemar entry
    CHECK_FALSE(report.mcnemar[0][1].has_value());
    const std::string csv = render_csv(report_to_json(report));
    CHECK(csv.find("linear_svm,1") != std::string::npos);
}

TEST_CASE("selection grid exists exactly for k <= m and repeats byte-identically") {
    const auto config = load_config(base_document());
    auto data = load_experiment_data(config);
    auto train = data::apply_feature_policy(data.train, config.feature_policy);
    train = data::apply_standardizer(data::fit_standardizer(train), train);
    const auto model = pca::fit_pca(train.matrix, train.column_ids);
    const auto ranking = pca::rank_features(model, pca::Weighting::eigenvalue_weighted, 10);

    const std::vector<std::size_t> m_range = {3, 5, 8};
    const std::vector<std::size_t> k_range = {2, 4, 6, 9};
    const auto grid = pca::validate_selection(train, ranking, m_range, k_range, 21);
    for (std::size_t mi = 0; mi < m_range.size(); ++mi)
        for (std::size_t ki = 0; ki < k_range.size(); ++ki) {
            CHECK(grid.accuracy[mi][ki].has_value() == (k_range[ki] <= m_range[mi]));
            if (grid.accuracy[mi][ki]) {
                CHECK(*grid.accuracy[mi][ki] >= 0.0);
                CHECK(*grid.accuracy[mi][ki] <= 1.0);
            }
        }

    const auto grid2 = pca::validate_selection(train, ranking, m_range, k_range, 21);
    for (std::size_t mi = 0; mi < m_range.size(); ++mi)
        for (std::size_t ki = 0; ki < k_range.size(); ++ki)
            CHECK(grid.accuracy[mi][ki] == grid2.accuracy[mi][ki]);
}

TEST_CASE("worker count does not change results") {
    auto doc = base_document();
    doc["classifiers"] = json::array({"decision_tree", "naive_bayes", "lda", "elm"});
    doc["seed"] = 8;
    auto config = load_config(doc);
    config.workers = 1;
    const auto serial = run_benchmark(config);
    config.workers = 4;
    const auto parallel = run_benchmark(config);
    json a = report_to_json(serial);
    json b = report_to_json(parallel);
    normalize_timing_fields(a);
    normalize_timing_fields(b);
    a["config"].erase("workers");  // the echo records the differing cap
    b["config"].erase("workers");
    CHECK(canonical_dump(a) == canonical_dump(b));
}
