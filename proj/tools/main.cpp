#include <CLI11.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ids/bench.hpp"
#include "ids/synth.hpp"

// Exit codes: 0 success, 2 input/parse error, 3 config error,
// 4 every requested classifier failed.

namespace {

namespace fs = std::filesystem;
using ids::bench::json;

struct CommonFlags {
    std::string config_path;
    std::string train, test, features, classifiers, out_dir, formats;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t top_m = 0, components = 0, workers = 0;
    bool top_m_set = false, components_set = false, workers_set = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_test) {
    cmd->add_option("--config", flags.config_path, "JSON config file; flags override it");
    cmd->add_option("--train", flags.train, "training file (NSL-KDD text or .idsd container)");
    if (with_test) cmd->add_option("--test", flags.test, "test file");
    cmd->add_option("--features", flags.features,
                    "feature policy: all | drop_content | basic6 | F1,F5,...");
    cmd->add_option("--top-m", flags.top_m, "features kept by PCA selection")
        ->each([&](const std::string&) { flags.top_m_set = true; });
    cmd->add_option("--components", flags.components, "PCA components to project onto")
        ->each([&](const std::string&) { flags.components_set = true; });
    cmd->add_option("--classifiers", flags.classifiers, "comma-separated classifier kinds");
    cmd->add_option("--seed", flags.seed, "global seed")
        ->each([&](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--format", flags.formats, "comma-separated subset of json,csv,md");
    cmd->add_option("--workers", flags.workers, "max concurrent classifier fits")
        ->each([&](const std::string&) { flags.workers_set = true; });
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

json document_from_flags(const CommonFlags& flags) {
    json document = json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw ids::ConfigError("cannot open config '" + flags.config_path + "'");
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
            try {
                document = json::parse(text);
            } catch (const json::parse_error& e) {
                throw ids::ConfigError("config '" + flags.config_path +
                                       "' is not valid JSON: " + e.what());
            }
        }
    }
    if (!flags.train.empty()) document["train"] = flags.train;
    if (!flags.test.empty()) document["test"] = flags.test;
    if (!flags.features.empty()) document["features"] = flags.features;
    if (flags.top_m_set) document["selection"]["top_m"] = flags.top_m;
    if (flags.components_set) document["pca_k"] = flags.components;
    if (!flags.classifiers.empty()) document["classifiers"] = split_list(flags.classifiers);
    if (flags.seed_set) document["seed"] = flags.seed;
    if (!flags.out_dir.empty()) document["output"]["directory"] = flags.out_dir;
    if (!flags.formats.empty()) document["output"]["formats"] = split_list(flags.formats);
    if (flags.workers_set) document["workers"] = flags.workers;
    return document;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ids::ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

int cmd_ingest(const CommonFlags& flags) {
    const auto config = ids::bench::load_config(document_from_flags(flags));
    const auto data = ids::bench::load_experiment_data(config);
    fs::create_directories(config.output.directory);
    const fs::path dir(config.output.directory);
    ids::data::save_dataset(data.train, (dir / "train.idsd").string());
    ids::data::save_dataset(data.test, (dir / "test.idsd").string());
    const auto summarize = [](const ids::data::EncodedDataset& ds, const char* name) {
        std::array<std::size_t, 5> per_category{};
        for (const auto c : ds.categories) ++per_category[static_cast<std::size_t>(c)];
        std::cout << name << ": " << ds.n() << " rows, " << ds.dim() << " columns"
                  << " (normal " << per_category[0] << ", dos " << per_category[1] << ", r2l "
                  << per_category[2] << ", u2r " << per_category[3] << ", probe "
                  << per_category[4] << ")\n";
    };
    summarize(data.train, "train");
    summarize(data.test, "test");
    std::cout << "wrote " << (dir / "train.idsd").string() << " and "
              << (dir / "test.idsd").string() << "\n";
    return 0;
}

int cmd_select(const CommonFlags& flags) {
    json document = document_from_flags(flags);
    if (!document.contains("test") && document.contains("train"))
        document["test"] = document["train"];  // ranking/grid only need training data
    const auto config = ids::bench::load_config(document);
    auto data = ids::bench::load_experiment_data(config);

    auto train = ids::data::apply_feature_policy(data.train, config.feature_policy);
    const auto standardizer = ids::data::fit_standardizer(train);
    train = ids::data::apply_standardizer(standardizer, train);

    std::size_t top_components = std::min(config.selection.top_components, train.dim());
    const auto model = ids::pca::fit_pca(train.matrix, train.column_ids);
    const auto ranking =
        ids::pca::rank_features(model, config.selection.weighting, top_components);

    std::vector<std::size_t> m_range = config.selection.grid_m;
    if (m_range.empty())
        for (std::size_t m = 3; m <= std::min<std::size_t>(29, train.dim()); ++m)
            m_range.push_back(m);
    std::vector<std::size_t> k_range = config.selection.grid_k;
    if (k_range.empty())
        for (std::size_t k = 1; k <= std::min<std::size_t>(10, train.dim()); ++k)
            k_range.push_back(k);
    const auto grid =
        ids::pca::validate_selection(train, ranking, m_range, k_range, config.seed);

    fs::create_directories(config.output.directory);
    const fs::path dir(config.output.directory);

    std::ostringstream ranking_csv;
    ranking_csv << "feature_id,score\n";
    json ranking_json = json::array();
    for (const auto& entry : ranking.entries) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s,%.9g\n", ids::data::to_string(entry.id).c_str(),
                      entry.score);
        ranking_csv << buf;
        ranking_json.push_back(
            json{{"feature_id", ids::data::to_string(entry.id)}, {"score", entry.score}});
    }
    std::ostringstream grid_csv;
    grid_csv << "m,k,accuracy\n";
    json grid_json = json::array();
    for (std::size_t mi = 0; mi < grid.m_values.size(); ++mi)
        for (std::size_t ki = 0; ki < grid.k_values.size(); ++ki) {
            if (!grid.accuracy[mi][ki]) continue;
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.6f\n", grid.m_values[mi],
                          grid.k_values[ki], *grid.accuracy[mi][ki]);
            grid_csv << buf;
            grid_json.push_back(json{{"m", grid.m_values[mi]},
                                     {"k", grid.k_values[ki]},
                                     {"accuracy", *grid.accuracy[mi][ki]}});
        }
    write_text(dir / "ranking.csv", ranking_csv.str());
    write_text(dir / "ranking.json", ids::bench::canonical_dump(ranking_json));
    write_text(dir / "grid.csv", grid_csv.str());
    write_text(dir / "grid.json", ids::bench::canonical_dump(grid_json));
    std::cout << "ranking and selection grid written to " << dir.string() << "\n";
    return 0;
}

int cmd_run(const CommonFlags& flags) {
    const auto config = ids::bench::load_config(document_from_flags(flags));
    const auto report = ids::bench::run_benchmark(config);
    ids::bench::emit_report(report, config.output);
    bool any_ok = false;
    for (const auto& r : report.results) {
        if (r.failed) {
            std::cout << ids::clf::to_string(r.kind) << ": FAILED (" << r.error << ")\n";
            continue;
        }
        any_ok = true;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%s: test acc %.2f%%, FAR %.2f%%, auc %.4f (train %.3fs, test %.3fs)",
                      ids::clf::to_string(r.kind), 100.0 * r.test_metrics.accuracy,
                      100.0 * r.test_metrics.far, r.test_auc, r.timing.train_seconds,
                      r.timing.test_seconds);
        std::cout << buf << "\n";
    }
    std::cout << "report written to " << config.output.directory << "\n";
    return any_ok ? 0 : 4;
}

struct PredictionFile {
    std::string name;
    std::vector<std::uint8_t> correct;
};

PredictionFile read_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ids::ParseError("cannot open '" + path + "'");
    PredictionFile out;
    out.name = fs::path(path).stem().string();
    std::string line;
    if (!std::getline(in, line) || line.rfind("row,label,score,predicted", 0) != 0)
        throw ids::ParseError("'" + path + "': expected header row,label,score,predicted");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        unsigned long row = 0;
        unsigned label = 0, predicted = 0;
        double score = 0.0;
        if (std::sscanf(line.c_str(), "%lu,%u,%lf,%u", &row, &label, &score, &predicted) != 4)
            throw ids::ParseError("'" + path + "' line " + std::to_string(line_no) +
                                  ": malformed prediction row");
        out.correct.push_back(label == predicted ? 1 : 0);
    }
    return out;
}

int cmd_mcnemar(const std::vector<std::string>& files, const std::string& out_path) {
    std::vector<PredictionFile> predictions;
    for (const auto& f : files) predictions.push_back(read_predictions(f));
    for (std::size_t i = 1; i < predictions.size(); ++i)
        if (predictions[i].correct.size() != predictions[0].correct.size())
            throw ids::ParseError("prediction files cover different row counts");
    json pairs = json::array();
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        for (std::size_t j = i + 1; j < predictions.size(); ++j) {
            const auto r = ids::metrics::mcnemar(predictions[i].correct, predictions[j].correct);
            const char* direction = r.direction == ids::metrics::McNemarDirection::a
                                        ? predictions[i].name.c_str()
                                        : r.direction == ids::metrics::McNemarDirection::b
                                              ? predictions[j].name.c_str()
                                              : "tie";
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s vs %s: n12=%llu n21=%llu z=%.4f %s (better: %s)",
                          predictions[i].name.c_str(), predictions[j].name.c_str(),
                          static_cast<unsigned long long>(r.n12),
                          static_cast<unsigned long long>(r.n21), r.z,
                          r.significant ? "significant" : "not significant", direction);
            std::cout << buf << "\n";
            pairs.push_back(json{{"a", predictions[i].name},
                                 {"b", predictions[j].name},
                                 {"n12", r.n12},
                                 {"n21", r.n21},
                                 {"z", r.z},
                                 {"significant", r.significant},
                                 {"direction", direction}});
        }
    }
    if (!out_path.empty()) write_text(out_path, ids::bench::canonical_dump(pairs));
    return 0;
}

int cmd_report(const std::string& in_path, const std::string& out_dir,
               const std::string& formats, bool strip_timing) {
    std::ifstream in(in_path);
    if (!in) throw ids::ParseError("cannot open '" + in_path + "'");
    json report;
    try {
        report = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ids::ParseError("'" + in_path + "' is not valid JSON: " + e.what());
    }
    if (strip_timing) ids::bench::normalize_timing_fields(report);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    for (const auto& format : split_list(formats.empty() ? "md,csv" : formats)) {
        if (format == "json")
            write_text(dir / "report.json", ids::bench::canonical_dump(report));
        else if (format == "md")
            write_text(dir / "report.md", ids::bench::render_markdown(report));
        else if (format == "csv")
            write_text(dir / "report.csv", ids::bench::render_csv(report));
        else
            throw ids::ConfigError("unknown format '" + format + "'");
    }
    std::cout << "rendered report into " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anomaly-based intrusion-detection benchmark on NSL-KDD-format data"};
    app.require_subcommand(1);

    CommonFlags ingest_flags, select_flags, run_flags;
    auto* ingest = app.add_subcommand("ingest", "parse NSL-KDD text files into .idsd containers");
    add_common_flags(ingest, ingest_flags, true);
    auto* select = app.add_subcommand("select", "PCA feature ranking and the (m, k) accuracy grid");
    add_common_flags(select, select_flags, true);
    auto* run = app.add_subcommand("run", "full benchmark: fit, evaluate and report");
    add_common_flags(run, run_flags, true);

    std::vector<std::string> mcnemar_files;
    std::string mcnemar_out;
    auto* mcnemar = app.add_subcommand("mcnemar", "pairwise McNemar z from saved prediction files");
    mcnemar->add_option("files", mcnemar_files, "prediction CSV files")->expected(-2);
    mcnemar->add_option("--out", mcnemar_out, "write results as canonical JSON");

    std::string report_in, report_out = ".", report_formats;
    bool strip_timing = false;
    auto* report = app.add_subcommand("report", "re-render tables from a saved report.json");
    report->add_option("--in", report_in, "report.json path")->required();
    report->add_option("--out", report_out, "output directory");
    report->add_option("--format", report_formats, "comma-separated subset of json,csv,md");
    report->add_flag("--strip-timing", strip_timing, "zero timing fields before rendering");

    std::string synth_out = ".";
    std::uint64_t synth_seed = 7;
    double synth_scale = 1.0;
    auto* synth = app.add_subcommand("synth", "generate NSL-KDD-layout sample data");
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--scale", synth_scale, "row-count scale (1.0 = published sizes)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_flags);
        if (select->parsed()) return cmd_select(select_flags);
        if (run->parsed()) return cmd_run(run_flags);
        if (mcnemar->parsed()) return cmd_mcnemar(mcnemar_files, mcnemar_out);
        if (report->parsed())
            return cmd_report(report_in, report_out, report_formats, strip_timing);
        if (synth->parsed()) {
            fs::create_directories(synth_out);
            const fs::path dir(synth_out);
            ids::synth::write_sample((dir / "KDDTrain_sample.txt").string(),
                                     (dir / "KDDTest_sample.txt").string(),
                                     {synth_seed, synth_scale});
            std::cout << "sample data written to " << synth_out << "\n";
            return 0;
        }
    } catch (const ids::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const ids::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
