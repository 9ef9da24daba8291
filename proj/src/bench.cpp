#include "ids/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "ids/kernels.hpp"
#include "ids/rng.hpp"

namespace ids::bench {

namespace fs = std::filesystem;

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

[[noreturn]] void config_fail(const std::string& path, const std::string& message) {
    throw ConfigError(path.empty() ? message : path + ": " + message);
}

void expect_keys(const json& object, const std::string& path,
                 const std::set<std::string>& allowed) {
    for (const auto& [key, value] : object.items())
        if (!allowed.contains(key))
            config_fail(path.empty() ? key : path + "." + key, "unknown key");
}

std::vector<std::size_t> parse_index_list(const json& j, const std::string& path) {
    if (!j.is_array()) config_fail(path, "expected an array of integers");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            config_fail(path, "expected an array of integers");
        const auto n = v.get<std::int64_t>();
        if (n < 1) config_fail(path, "values must be >= 1");
        out.push_back(static_cast<std::size_t>(n));
    }
    return out;
}

clf::ClassifierSpec parse_classifier_entry(const json& entry, const std::string& path) {
    clf::ClassifierSpec spec;
    if (entry.is_string()) {
        spec.kind = clf::parse_kind(entry.get<std::string>());
        return spec;
    }
    if (!entry.is_object()) config_fail(path, "expected a kind name or an object");
    expect_keys(entry, path, {"kind", "hyper"});
    if (!entry.contains("kind")) config_fail(path, "missing 'kind'");
    spec.kind = clf::parse_kind(entry.at("kind").get<std::string>());
    if (entry.contains("hyper")) {
        for (const auto& [key, value] : entry.at("hyper").items()) {
            if (!value.is_number()) config_fail(path + ".hyper." + key, "expected a number");
            spec.hyper[key] = value.get<double>();
        }
    }
    try {
        clf::validate_spec(spec);
    } catch (const ConfigError& e) {
        config_fail(path, e.what());
    }
    return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig config;
    for (const clf::Kind kind : clf::all_kinds()) {
        clf::ClassifierSpec spec;
        spec.kind = kind;
        config.classifiers.push_back(spec);
    }
    return config;
}

json ExperimentConfig::to_json() const {
    json j;
    j["train"] = train_path;
    j["test"] = test_path;
    j["features"] = feature_policy.describe();
    json sel;
    sel["enabled"] = selection.enabled;
    sel["top_m"] = selection.top_m;
    sel["weighting"] = pca::to_string(selection.weighting);
    sel["top_components"] = selection.top_components;
    if (!selection.grid_m.empty()) sel["grid_m"] = selection.grid_m;
    if (!selection.grid_k.empty()) sel["grid_k"] = selection.grid_k;
    j["selection"] = sel;
    j["pca_k"] = pca_k;
    json clfs = json::array();
    for (const auto& spec : classifiers) {
        json entry;
        entry["kind"] = clf::to_string(spec.kind);
        if (!spec.hyper.empty()) entry["hyper"] = spec.hyper;
        clfs.push_back(entry);
    }
    j["classifiers"] = clfs;
    j["seed"] = seed;
    json out;
    out["directory"] = output.directory;
    out["formats"] = output.formats;
    j["output"] = out;
    j["workers"] = workers;
    return j;
}

ExperimentConfig load_config(const json& document, bool check_paths) {
    if (!document.is_object()) throw ConfigError("config root must be an object");
    expect_keys(document, "", {"train", "test", "features", "selection", "pca_k",
                               "classifiers", "seed", "output", "workers"});
    ExperimentConfig config = ExperimentConfig::defaults();
    if (document.contains("train")) config.train_path = document.at("train").get<std::string>();
    if (document.contains("test")) config.test_path = document.at("test").get<std::string>();
    if (document.contains("features"))
        config.feature_policy = data::FeaturePolicy::parse(document.at("features").get<std::string>());
    if (document.contains("selection")) {
        const json& sel = document.at("selection");
        if (!sel.is_object()) config_fail("selection", "expected an object");
        expect_keys(sel, "selection",
                    {"enabled", "top_m", "weighting", "top_components", "grid_m", "grid_k"});
        if (sel.contains("enabled")) config.selection.enabled = sel.at("enabled").get<bool>();
        if (sel.contains("top_m"))
            config.selection.top_m = sel.at("top_m").get<std::size_t>();
        if (sel.contains("weighting"))
            config.selection.weighting =
                pca::parse_weighting(sel.at("weighting").get<std::string>());
        if (sel.contains("top_components"))
            config.selection.top_components = sel.at("top_components").get<std::size_t>();
        if (sel.contains("grid_m"))
            config.selection.grid_m = parse_index_list(sel.at("grid_m"), "selection.grid_m");
        if (sel.contains("grid_k"))
            config.selection.grid_k = parse_index_list(sel.at("grid_k"), "selection.grid_k");
    }
    if (document.contains("pca_k")) config.pca_k = document.at("pca_k").get<std::size_t>();
    if (document.contains("classifiers")) {
        const json& list = document.at("classifiers");
        if (!list.is_array() || list.empty())
            config_fail("classifiers", "expected a non-empty array");
        config.classifiers.clear();
        for (std::size_t i = 0; i < list.size(); ++i)
            config.classifiers.push_back(
                parse_classifier_entry(list[i], "classifiers[" + std::to_string(i) + "]"));
        std::set<clf::Kind> seen;
        for (const auto& spec : config.classifiers)
            if (!seen.insert(spec.kind).second)
                config_fail("classifiers",
                            std::string("duplicate classifier '") + clf::to_string(spec.kind) + "'");
    }
    if (document.contains("seed")) config.seed = document.at("seed").get<std::uint64_t>();
    if (document.contains("output")) {
        const json& out = document.at("output");
        if (!out.is_object()) config_fail("output", "expected an object");
        expect_keys(out, "output", {"directory", "formats"});
        if (out.contains("directory"))
            config.output.directory = out.at("directory").get<std::string>();
        if (out.contains("formats")) {
            config.output.formats.clear();
            for (const auto& f : out.at("formats")) {
                const auto name = f.get<std::string>();
                if (name != "json" && name != "csv" && name != "md")
                    config_fail("output.formats", "unknown format '" + name + "'");
                config.output.formats.push_back(name);
            }
        }
    }
    if (document.contains("workers"))
        config.workers = document.at("workers").get<std::size_t>();

    if (config.train_path.empty()) config_fail("train", "missing required path");
    if (config.test_path.empty()) config_fail("test", "missing required path");
    if (check_paths) {
        if (!fs::exists(config.train_path)) config_fail("train", "no such file: " + config.train_path);
        if (!fs::exists(config.test_path)) config_fail("test", "no such file: " + config.test_path);
    }
    return config;
}

ExperimentConfig load_config_file(const std::string& path, bool check_paths) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json document;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        document = json::object();
    } else {
        try {
            document = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
        }
    }
    return load_config(document, check_paths);
}

namespace {

bool has_container_magic(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[8] = {};
    in.read(magic, sizeof(magic));
    return in && std::string_view(magic, 8) == "IDSDATA1";
}

}  // namespace

LoadedData load_experiment_data(const ExperimentConfig& config) {
    LoadedData data;
    const bool train_is_container = has_container_magic(config.train_path);
    const bool test_is_container = has_container_magic(config.test_path);
    if (train_is_container) {
        data.train = data::load_dataset(config.train_path);
    }
    if (test_is_container) {
        data.test = data::load_dataset(config.test_path);
    }
    if (!train_is_container || !test_is_container) {
        std::vector<data::RawRecord> train_records;
        if (!train_is_container) train_records = data::parse_nslkdd_file(config.train_path);
        // vocabularies must come from the training split
        if (!test_is_container && train_is_container)
            throw ConfigError("text test file requires a text train file for vocabularies");
        if (!train_is_container) {
            const auto vocab = data::CategoryVocabulary::build(train_records);
            data.train = data::encode(train_records, vocab, data::Origin::train);
            if (!test_is_container) {
                const auto test_records = data::parse_nslkdd_file(config.test_path);
                data.test = data::encode(test_records, vocab, data::Origin::test);
            }
        }
    }
    if (data.train.origin != data::Origin::train)
        throw ConfigError("train dataset does not carry training origin");
    data.test.origin = data::Origin::test;
    if (data.train.column_ids != data.test.column_ids)
        throw ConfigError("train/test column sets differ");
    return data;
}

namespace {

struct PipelineData {
    Matrix train_x;
    Matrix test_x;
    std::size_t pca_k_used = 0;
    std::vector<data::FeatureId> selected;
};

PipelineData prepare_pipeline(const ExperimentConfig& config, const LoadedData& data) {
    PipelineData out;
    data::EncodedDataset train = data::apply_feature_policy(data.train, config.feature_policy);
    data::EncodedDataset test = data::apply_feature_policy(data.test, config.feature_policy);
    const auto standardizer = data::fit_standardizer(train);
    train = data::apply_standardizer(standardizer, train);
    test = data::apply_standardizer(standardizer, test);

    if (config.selection.enabled) {
        if (config.selection.top_m > train.dim())
            config_fail("selection.top_m",
                        "exceeds the post-policy dimension " + std::to_string(train.dim()));
        std::size_t top_components = config.selection.top_components;
        if (top_components > train.dim()) {
            std::cerr << "warning: top_components clamped to " << train.dim() << "\n";
            top_components = train.dim();
        }
        const pca::PcaModel full_model = pca::fit_pca(train.matrix, train.column_ids);
        const auto ranking =
            pca::rank_features(full_model, config.selection.weighting, top_components);
        out.selected = ranking.top(config.selection.top_m);
        const auto policy = data::FeaturePolicy::explicit_list(out.selected);
        train = data::apply_feature_policy(train, policy);
        test = data::apply_feature_policy(test, policy);
    } else {
        out.selected = train.column_ids;
    }

    if (config.pca_k == 0) {
        out.pca_k_used = 0;  // projection disabled
        out.train_x = std::move(train.matrix);
        out.test_x = std::move(test.matrix);
        return out;
    }
    std::size_t k = config.pca_k;
    if (k > train.dim()) {
        std::cerr << "warning: pca_k clamped from " << k << " to " << train.dim() << "\n";
        k = train.dim();
    }
    out.pca_k_used = k;
    const pca::PcaModel model = pca::fit_pca(train.matrix, train.column_ids);
    out.train_x = pca::transform(model, train.matrix, train.column_ids, k);
    out.test_x = pca::transform(model, test.matrix, test.column_ids, k);
    return out;
}

void evaluate_classifier(const ExperimentConfig& config, const PipelineData& pipe,
                         const std::vector<std::uint8_t>& train_labels,
                         const std::vector<std::uint8_t>& test_labels,
                         ClassifierResult& result) {
    clf::ClassifierSpec spec = config.classifiers[0];  // overwritten below
    for (const auto& candidate : config.classifiers)
        if (candidate.kind == result.kind) spec = candidate;
    spec.seed = seed_mix(config.seed, static_cast<std::uint64_t>(spec.kind));
    try {
        const clf::TrainedModel model = clf::fit_model(spec, pipe.train_x, train_labels);
        result.timing.train_seconds = model.train_seconds;

        const auto train_scores = model.predict_scores(pipe.train_x);
        const double threshold = model.score_threshold();
        std::vector<std::uint8_t> train_predicted(train_scores.size());
        for (std::size_t i = 0; i < train_scores.size(); ++i)
            train_predicted[i] = train_scores[i] > threshold ? 1 : 0;
        result.train_confusion = metrics::confusion(train_labels, train_predicted);
        result.train_metrics = metrics::binary_metrics(result.train_confusion);
        const auto train_roc = metrics::roc_auc(train_scores, train_labels);
        result.train_auc = train_roc.auc;
        result.train_roc = train_roc.curve;

        const auto start = std::chrono::steady_clock::now();
        result.test_scores = model.predict_scores(pipe.test_x);
        result.test_predicted.resize(result.test_scores.size());
        for (std::size_t i = 0; i < result.test_scores.size(); ++i)
            result.test_predicted[i] = result.test_scores[i] > threshold ? 1 : 0;
        result.timing.test_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        result.test_confusion = metrics::confusion(test_labels, result.test_predicted);
        result.test_metrics = metrics::binary_metrics(result.test_confusion);
        const auto test_roc = metrics::roc_auc(result.test_scores, test_labels);
        result.test_auc = test_roc.auc;
        result.test_roc = test_roc.curve;

        result.test_correct.resize(test_labels.size());
        for (std::size_t i = 0; i < test_labels.size(); ++i)
            result.test_correct[i] = result.test_predicted[i] == test_labels[i] ? 1 : 0;
    } catch (const std::exception& e) {
        result.failed = true;
        result.error = e.what();
    }
}

}  // namespace

BenchReport run_benchmark(const ExperimentConfig& config) {
    return run_benchmark(config, load_experiment_data(config));
}

BenchReport run_benchmark(const ExperimentConfig& config, const LoadedData& data) {
    if (config.classifiers.empty()) throw ConfigError("no classifiers requested");
    BenchReport report;
    report.config = config;
    report.environment = environment_descriptor();
    report.artifact_version = kArtifactVersion;
    report.test_labels = data.test.labels;

    const PipelineData pipe = prepare_pipeline(config, data);
    report.pca_k_used = pipe.pca_k_used;
    report.selected_features = pipe.selected;

    report.results.resize(config.classifiers.size());
    for (std::size_t i = 0; i < config.classifiers.size(); ++i)
        report.results[i].kind = config.classifiers[i].kind;

    const std::size_t worker_cap =
        config.workers ? config.workers
                       : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    const auto run_tasks = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= report.results.size()) break;
            evaluate_classifier(config, pipe, data.train.labels, data.test.labels,
                                report.results[i]);
        }
    };
    if (worker_cap <= 1 || report.results.size() <= 1) {
        run_tasks();
    } else {
        std::vector<std::thread> pool;
        const std::size_t extra = std::min(worker_cap, report.results.size()) - 1;
        pool.reserve(extra);
        for (std::size_t w = 0; w < extra; ++w) pool.emplace_back(run_tasks);
        run_tasks();
        for (auto& t : pool) t.join();
    }

    const std::size_t count = report.results.size();
    report.mcnemar.assign(count, std::vector<std::optional<metrics::McNemarResult>>(count));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            const auto& a = report.results[i];
            const auto& b = report.results[j];
            if (a.failed || b.failed) continue;
            const auto result = metrics::mcnemar(a.test_correct, b.test_correct);
            report.mcnemar[i][j] = result;
            metrics::McNemarResult mirrored = result;
            std::swap(mirrored.n12, mirrored.n21);
            if (result.direction == metrics::McNemarDirection::a)
                mirrored.direction = metrics::McNemarDirection::b;
            else if (result.direction == metrics::McNemarDirection::b)
                mirrored.direction = metrics::McNemarDirection::a;
            report.mcnemar[j][i] = mirrored;
        }
    }
    return report;
}

namespace {

void dump_canonical(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out.push_back('{');
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out.push_back(',');
                first = false;
                out += json(key).dump();
                out.push_back(':');
                dump_canonical(value, out);
            }
            out.push_back('}');
            break;
        }
        case json::value_t::array: {
            out.push_back('[');
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out.push_back(',');
                dump_canonical(j[i], out);
            }
            out.push_back(']');
            break;
        }
        case json::value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", j.get<double>());
            out += buf;
            break;
        }
        default:
            out += j.dump();
    }
}

json confusion_json(const metrics::ConfusionCounts& c) {
    return json{{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
}

json metrics_json(const metrics::MetricBundle& m) {
    return json{{"accuracy", m.accuracy},
                {"far", m.far},
                {"precision", m.precision},
                {"recall", m.recall},
                {"f1", m.f1}};
}

const char* direction_name(metrics::McNemarDirection d) {
    switch (d) {
        case metrics::McNemarDirection::a: return "a";
        case metrics::McNemarDirection::b: return "b";
        case metrics::McNemarDirection::tie: return "tie";
    }
    return "?";
}

}  // namespace

std::string canonical_dump(const json& document) {
    std::string out;
    dump_canonical(document, out);
    out.push_back('\n');
    return out;
}

json report_to_json(const BenchReport& report) {
    json j;
    j["artifact_version"] = report.artifact_version;
    j["environment"] = report.environment;
    j["config"] = report.config.to_json();
    j["pca_k_used"] = report.pca_k_used;
    json selected = json::array();
    for (const auto id : report.selected_features) selected.push_back(data::to_string(id));
    j["selected_features"] = selected;

    json rows = json::array();
    for (const auto& r : report.results) {
        json row;
        row["kind"] = clf::to_string(r.kind);
        row["failed"] = r.failed;
        if (r.failed) {
            row["error"] = r.error;
        } else {
            row["train"] = json{{"confusion", confusion_json(r.train_confusion)},
                                {"metrics", metrics_json(r.train_metrics)},
                                {"auc", r.train_auc}};
            row["test"] = json{{"confusion", confusion_json(r.test_confusion)},
                               {"metrics", metrics_json(r.test_metrics)},
                               {"auc", r.test_auc}};
            row["timing"] = json{{"train_seconds", r.timing.train_seconds},
                                 {"test_seconds", r.timing.test_seconds}};
        }
        rows.push_back(row);
    }
    j["classifiers"] = rows;

    json pairs = json::array();
    for (std::size_t i = 0; i < report.results.size(); ++i) {
        for (std::size_t k = i + 1; k < report.results.size(); ++k) {
            if (!report.mcnemar[i][k]) continue;
            const auto& m = *report.mcnemar[i][k];
            pairs.push_back(json{{"a", clf::to_string(report.results[i].kind)},
                                 {"b", clf::to_string(report.results[k].kind)},
                                 {"n12", m.n12},
                                 {"n21", m.n21},
                                 {"z", m.z},
                                 {"significant", m.significant},
                                 {"direction", direction_name(m.direction)}});
        }
    }
    j["mcnemar"] = pairs;
    return j;
}

void normalize_timing_fields(json& document) {
    if (document.is_object()) {
        for (auto& [key, value] : document.items()) {
            if ((key == "train_seconds" || key == "test_seconds") && value.is_number()) {
                value = 0.0;
            } else {
                normalize_timing_fields(value);
            }
        }
    } else if (document.is_array()) {
        for (auto& value : document) normalize_timing_fields(value);
    }
}

namespace {

std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string render_markdown(const json& report) {
    std::ostringstream md;
    md << "# Intrusion-detection benchmark report\n\n";
    md << "- artifact version: " << report.at("artifact_version").get<std::string>() << "\n";
    md << "- environment: " << report.at("environment").get<std::string>() << "\n";
    md << "- seed: " << report.at("config").at("seed") << "\n";
    md << "- features: " << report.at("config").at("features").get<std::string>() << "\n";
    md << "- pca_k_used: " << report.at("pca_k_used") << "\n";
    md << "- selected features:";
    for (const auto& f : report.at("selected_features"))
        md << " " << f.get<std::string>();
    md << "\n\n";

    const json& rows = report.at("classifiers");

    md << "## Accuracy and false alarm rate\n\n";
    md << "| Method | Train Acc (%) | Test Acc (%) | Train FAR (%) | Test FAR (%) |\n";
    md << "|---|---|---|---|---|\n";
    for (const auto& row : rows) {
        md << "| " << row.at("kind").get<std::string>() << " | ";
        if (row.at("failed").get<bool>()) {
            md << "failed | failed | failed | failed |\n";
            continue;
        }
        md << pct(row.at("train").at("metrics").at("accuracy").get<double>()) << " | "
           << pct(row.at("test").at("metrics").at("accuracy").get<double>()) << " | "
           << pct(row.at("train").at("metrics").at("far").get<double>()) << " | "
           << pct(row.at("test").at("metrics").at("far").get<double>()) << " |\n";
    }

    md << "\n## Precision, recall and F1 on the test split\n\n";
    md << "| Method | Precision (%) | Recall (%) | F1 (%) |\n|---|---|---|---|\n";
    for (const auto& row : rows) {
        md << "| " << row.at("kind").get<std::string>() << " | ";
        if (row.at("failed").get<bool>()) {
            md << "failed | failed | failed |\n";
            continue;
        }
        const json& m = row.at("test").at("metrics");
        md << pct(m.at("precision").get<double>()) << " | " << pct(m.at("recall").get<double>())
           << " | " << pct(m.at("f1").get<double>()) << " |\n";
    }

    md << "\n## Area under the ROC curve\n\n";
    md << "| Method | Train AUC | Test AUC |\n|---|---|---|\n";
    for (const auto& row : rows) {
        md << "| " << row.at("kind").get<std::string>() << " | ";
        if (row.at("failed").get<bool>()) {
            md << "failed | failed |\n";
            continue;
        }
        md << fixed(row.at("train").at("auc").get<double>(), 4) << " | "
           << fixed(row.at("test").at("auc").get<double>(), 4) << " |\n";
    }

    md << "\n## Execution time (seconds)\n\n";
    md << "| Method | Train | Test |\n|---|---|---|\n";
    for (const auto& row : rows) {
        md << "| " << row.at("kind").get<std::string>() << " | ";
        if (row.at("failed").get<bool>()) {
            md << "failed | failed |\n";
            continue;
        }
        md << fixed(row.at("timing").at("train_seconds").get<double>(), 3) << " | "
           << fixed(row.at("timing").at("test_seconds").get<double>(), 3) << " |\n";
    }

    // square z matrix; the arrow points at the better classifier: "<-"
    // toward the row label, "^" toward the column label
    md << "\n## McNemar z matrix\n\n";
    std::vector<std::string> kinds;
    for (const auto& row : rows) kinds.push_back(row.at("kind").get<std::string>());
    std::map<std::pair<std::string, std::string>, json> cell;
    for (const auto& pair : report.at("mcnemar"))
        cell[{pair.at("a").get<std::string>(), pair.at("b").get<std::string>()}] = pair;
    md << "| |";
    for (const auto& k : kinds) md << " " << k << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < kinds.size(); ++i) md << "---|";
    md << "\n";
    for (std::size_t r = 0; r < kinds.size(); ++r) {
        md << "| " << kinds[r] << " |";
        for (std::size_t c = 0; c < kinds.size(); ++c) {
            if (c >= r) {
                md << " - |";
                continue;
            }
            const auto it = cell.find({kinds[c], kinds[r]});
            if (it == cell.end()) {
                md << " n/a |";
                continue;
            }
            const json& pair = it->second;
            const std::string dir = pair.at("direction").get<std::string>();
            const char* mark = dir == "b" ? "<-" : dir == "a" ? "^" : "=";
            md << " " << fixed(pair.at("z").get<double>(), 2) << " " << mark << " |";
        }
        md << "\n";
    }
    return md.str();
}

std::string render_csv(const json& report) {
    std::ostringstream csv;
    csv << "kind,failed,train_accuracy,test_accuracy,train_far,test_far,"
           "test_precision,test_recall,test_f1,train_auc,test_auc,"
           "train_seconds,test_seconds,error\n";
    for (const auto& row : report.at("classifiers")) {
        csv << row.at("kind").get<std::string>() << ",";
        if (row.at("failed").get<bool>()) {
            csv << "1,,,,,,,,,,,," << row.value("error", "") << "\n";
            continue;
        }
        csv << "0," << fixed(row.at("train").at("metrics").at("accuracy").get<double>(), 6) << ","
            << fixed(row.at("test").at("metrics").at("accuracy").get<double>(), 6) << ","
            << fixed(row.at("train").at("metrics").at("far").get<double>(), 6) << ","
            << fixed(row.at("test").at("metrics").at("far").get<double>(), 6) << ","
            << fixed(row.at("test").at("metrics").at("precision").get<double>(), 6) << ","
            << fixed(row.at("test").at("metrics").at("recall").get<double>(), 6) << ","
            << fixed(row.at("test").at("metrics").at("f1").get<double>(), 6) << ","
            << fixed(row.at("train").at("auc").get<double>(), 6) << ","
            << fixed(row.at("test").at("auc").get<double>(), 6) << ","
            << fixed(row.at("timing").at("train_seconds").get<double>(), 6) << ","
            << fixed(row.at("timing").at("test_seconds").get<double>(), 6) << ",\n";
    }
    return csv.str();
}

std::vector<std::string> emit_report(const BenchReport& report, const OutputConfig& output) {
    std::error_code ec;
    fs::create_directories(output.directory, ec);
    if (!fs::is_directory(output.directory))
        throw ConfigError("cannot create output directory '" + output.directory + "'");
    std::vector<std::string> written;
    const json j = report_to_json(report);

    const auto write_file = [&](const fs::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + path.string() + "'");
        out << content;
        written.push_back(path.string());
    };

    const fs::path dir(output.directory);
    for (const auto& format : output.formats) {
        if (format == "json") write_file(dir / "report.json", canonical_dump(j));
        if (format == "md") write_file(dir / "report.md", render_markdown(j));
        if (format == "csv") write_file(dir / "report.csv", render_csv(j));
    }

    fs::create_directories(dir / "roc", ec);
    fs::create_directories(dir / "predictions", ec);
    for (const auto& r : report.results) {
        if (r.failed) continue;
        const auto roc_csv = [&](const metrics::RocCurve& curve) {
            std::ostringstream out;
            out << "threshold,fpr,tpr\n";
            for (const auto& p : curve.points) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", p.threshold, p.fpr, p.tpr);
                out << buf;
            }
            return out.str();
        };
        write_file(dir / "roc" / (std::string(clf::to_string(r.kind)) + "_train.csv"),
                   roc_csv(r.train_roc));
        write_file(dir / "roc" / (std::string(clf::to_string(r.kind)) + "_test.csv"),
                   roc_csv(r.test_roc));
        std::ostringstream pred;
        pred << "row,label,score,predicted\n";
        for (std::size_t i = 0; i < r.test_scores.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%zu,%u,%.9g,%u\n", i,
                          static_cast<unsigned>(report.test_labels[i]), r.test_scores[i],
                          static_cast<unsigned>(r.test_predicted[i]));
            pred << buf;
        }
        write_file(dir / "predictions" / (std::string(clf::to_string(r.kind)) + ".csv"),
                   pred.str());
    }
    return written;
}

std::string environment_descriptor() {
    std::string cpu = "unknown cpu";
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                cpu = line.substr(colon + 1);
                const auto first = cpu.find_first_not_of(' ');
                if (first != std::string::npos) cpu = cpu.substr(first);
            }
            break;
        }
    }
    std::uint64_t mem_kb = 0;
    std::ifstream meminfo("/proc/meminfo");
    while (std::getline(meminfo, line)) {
        if (line.rfind("MemTotal:", 0) == 0) {
            std::sscanf(line.c_str(), "MemTotal: %" SCNu64, &mem_kb);
            break;
        }
    }
    std::ostringstream out;
    out << cpu << ", " << std::thread::hardware_concurrency() << " hardware threads";
    if (mem_kb > 0) out << ", " << (mem_kb + (1u << 20) - 1) / (1u << 20) << " GB RAM";
    out << ", kernels: " << kern::backend_name(kern::active());
    return out.str();
}

}  // namespace ids::bench
